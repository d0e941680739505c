//! Witness objects: line/point pairs over a finite plane, strings sharing a prefix, the
//! half-cube mixture on a prefix, and reference strings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{gamma_len, BitString, Extension};
use crate::codebook::engine::{c, complexity_in};
use crate::codebook::system::{DescriptionSystem, Object, Scheme};
use crate::codebook::famdist::FamilyDist;
use crate::codebook::MAX_N;
use crate::error::{Error, Result};
use crate::field::{Gf, GfElement};
use crate::models::{DistKind, FiniteModel, ModelParams, RationalDistribution, Word};

/// Longest strings the materialized mixture is built for (`2^16` outcomes).
pub const EXAMPLE3_MATERIALIZE_MAX: u32 = 16;

/// The non-vertical line `v = a*u + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaneLine {
    pub slope: GfElement,
    pub intercept: GfElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanePoint {
    pub u: GfElement,
    pub v: GfElement,
}

fn pair_encoding(hi: GfElement, lo: GfElement) -> BitString {
    let k = hi.field().k();
    BitString::new(2 * k, hi.value() << k | lo.value()).expect("2k <= 32")
}

fn pair_decoding(gf: Gf, s: &BitString) -> Result<(GfElement, GfElement)> {
    let k = gf.k();
    if s.len() != 2 * k {
        return Err(Error::BadLength(format!("expected {} bits, got {}", 2 * k, s.len())));
    }
    let mask = (1u32 << k) - 1;
    Ok((gf.elem(s.value() >> k), gf.elem(s.value() & mask)))
}

impl PlaneLine {
    /// `slope || intercept`, 2k bits.
    pub fn encode(&self) -> BitString {
        pair_encoding(self.slope, self.intercept)
    }

    pub fn decode(gf: Gf, s: &BitString) -> Result<Self> {
        let (slope, intercept) = pair_decoding(gf, s)?;
        Ok(Self { slope, intercept })
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        p.v == self.slope * p.u + self.intercept
    }

    pub fn point_at(&self, u: GfElement) -> PlanePoint {
        PlanePoint { u, v: self.slope * u + self.intercept }
    }

    /// The line's point set as a model over `B^(2k)`.
    pub fn model(&self) -> FiniteModel {
        FiniteModel::from_params(ModelParams::PlaneLine {
            k: self.slope.field().k(),
            slope: self.slope.value(),
            intercept: self.intercept.value(),
        })
    }
}

impl PlanePoint {
    /// `u || v`, 2k bits.
    pub fn encode(&self) -> BitString {
        pair_encoding(self.u, self.v)
    }

    pub fn decode(gf: Gf, s: &BitString) -> Result<Self> {
        let (u, v) = pair_decoding(gf, s)?;
        Ok(Self { u, v })
    }
}

/// A uniformly random non-vertical line over GF(2^k) and a uniformly random point on it.
pub fn plane_pair(k: u32, seed: u64) -> Result<(PlaneLine, PlanePoint)> {
    let gf = Gf::new(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = gf.order();
    let line = PlaneLine { slope: gf.elem(rng.gen_range(0..q)), intercept: gf.elem(rng.gen_range(0..q)) };
    let point = line.point_at(gf.elem(rng.gen_range(0..q)));
    Ok((line, point))
}

fn check_half_length(n: u32) -> Result<()> {
    if n == 0 || 2 * n > MAX_N {
        return Err(Error::BadLength(format!("2n = {} outside 2..={MAX_N}", 2 * n)));
    }
    Ok(())
}

/// `(x* || x1*, x* || x2*)` for independent uniform `x*, x1*, x2*` in `B^n`.
pub fn shared_prefix_pair(n: u32, seed: u64) -> Result<(BitString, BitString)> {
    check_half_length(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || BitString::new(n, rng.gen_range(0..1u32 << n)).expect("n <= 12");
    let (x, x1, x2) = (draw(), draw(), draw());
    Ok((x.concat(&x1)?, x.concat(&x2)?))
}

/// Half the mass uniform on `B^(2n)`, half uniform on `prefix || B^n`, in family form.
pub fn example3_family(n: u32, prefix: &BitString) -> Result<FamilyDist> {
    check_half_length(n)?;
    if prefix.len() != n {
        return Err(Error::BadLength(format!("prefix has {} bits, expected {n}", prefix.len())));
    }
    let set = ModelParams::PrefixSet { n: 2 * n, prefix: Word::of(prefix) }.extension();
    Ok(FamilyDist::new(DistKind::HalfCube, set))
}

/// The same mixture with every probability listed; `2n` is limited to
/// [`EXAMPLE3_MATERIALIZE_MAX`].
pub fn example3_distribution(n: u32, prefix: &BitString) -> Result<RationalDistribution> {
    let fd = example3_family(n, prefix)?;
    if 2 * n > EXAMPLE3_MATERIALIZE_MAX {
        return Err(Error::BadLength(format!("listing 2^{} outcomes", 2 * n)));
    }
    Ok(fd.materialize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceStrings {
    pub zeros: BitString,
    /// Lexicographically first `x` whose every non-literal code is strictly longer than
    /// its literal code.
    pub literal_optimal: BitString,
    pub literal_optimal_complexity: u32,
}

/// Length of the literal code of an `n`-bit string.
pub fn literal_len(n: u32) -> u32 {
    2 + gamma_len(n as u64) + n
}

/// `0^n` and the first string that only the literal scheme describes optimally. Every
/// string has `C(x) >= n` here (codes carry headers), so the plain threshold would return
/// `0^n` itself.
pub fn reference_strings(n: u32) -> Result<ReferenceStrings> {
    let others: Vec<Scheme> = Scheme::ALL.into_iter().filter(|s| *s != Scheme::Literal).collect();
    let sys = DescriptionSystem::with_schemes(&others);
    let lit = literal_len(n);
    for x in BitString::all(n) {
        if complexity_in(&sys, &Object::from(x))?.value > lit {
            return Ok(ReferenceStrings { zeros: BitString::zeros(n)?, literal_optimal: x, literal_optimal_complexity: c(x)? });
        }
    }
    unreachable!("fewer than 2^n strings have non-literal codes of length <= n + 2 + EG(n)")
}

/// Every point set of a line over GF(2^k) that passes through `p`.
pub fn lines_through(p: &PlanePoint) -> Vec<PlaneLine> {
    let gf = p.u.field();
    gf.elements().map(|a| PlaneLine { slope: a, intercept: p.v + a * p.u }).collect()
}

/// Membership set of the plane's points lying on `line`, as an extension.
pub fn line_extension(line: &PlaneLine) -> Extension {
    line.model().extension().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    #[test]
    fn incidence_and_lengths() {
        for seed in 0..200 {
            for k in [2, 4, 7, 16] {
                let (l, p) = plane_pair(k, seed).unwrap();
                assert!(l.contains(&p));
                assert_eq!(l.encode().len(), 2 * k);
                assert_eq!(p.encode().len(), 2 * k);
                let gf = Gf::new(k).unwrap();
                assert_eq!(PlaneLine::decode(gf, &l.encode()).unwrap(), l);
                assert_eq!(PlanePoint::decode(gf, &p.encode()).unwrap(), p);
            }
        }
        assert!(matches!(plane_pair(1, 0), Err(Error::BadFieldSize(1))));
        assert!(matches!(plane_pair(17, 0), Err(Error::BadFieldSize(17))));
    }

    #[test]
    fn point_marginal_is_uniform_at_k4() {
        // every (slope, intercept, u) outcome is equally likely; count the points hit
        let gf = Gf::new(4).unwrap();
        let mut hits = vec![0u32; 256];
        for a in gf.elements() {
            for b in gf.elements() {
                let line = PlaneLine { slope: a, intercept: b };
                let mut on_line = 0;
                for u in gf.elements() {
                    let p = line.point_at(u);
                    assert!(line.contains(&p));
                    hits[p.encode().value() as usize] += 1;
                    on_line += 1;
                }
                assert_eq!(on_line, 16);
                assert_eq!(line.model().cardinality(), 16);
            }
        }
        assert!(hits.iter().all(|h| *h == 16));
        let p = PlanePoint { u: gf.elem(3), v: gf.elem(9) };
        let ls = lines_through(&p);
        assert_eq!(ls.len(), 16);
        assert!(ls.iter().all(|l| l.contains(&p) && line_extension(l).contains(&p.encode())));
    }

    #[test]
    fn prefix_pairs_share_the_first_half() {
        for seed in 0..50 {
            let (a, b) = shared_prefix_pair(4, seed).unwrap();
            assert_eq!((a.len(), b.len()), (8, 8));
            assert_eq!(a.value() >> 4, b.value() >> 4);
        }
        assert!(shared_prefix_pair(13, 0).is_err());
        assert_eq!(shared_prefix_pair(4, 9).unwrap(), shared_prefix_pair(4, 9).unwrap());
    }

    #[test]
    fn mixture_probabilities() {
        let prefix: BitString = "0000".parse().unwrap();
        let p = example3_distribution(4, &prefix).unwrap();
        assert_eq!(p.support().len(), 256);
        let total: BigRational = p.probabilities().iter().sum();
        assert_eq!(total, BigRational::one());
        let on: BitString = "00001011".parse().unwrap();
        let off: BitString = "10001011".parse().unwrap();
        assert_eq!(p.prob(&on), rational(17, 512));
        assert_eq!(p.prob(&off), rational(1, 512));
        assert!(!p.prob(&off).is_zero());
        assert!(example3_distribution(9, &"000000000".parse().unwrap()).is_err());
        assert!(example3_family(12, &BitString::zeros(12).unwrap()).is_ok());
    }

    #[test]
    fn reference_strings_are_certified() {
        for n in [4, 6] {
            let r = reference_strings(n).unwrap();
            assert_eq!(r.zeros, BitString::zeros(n).unwrap());
            assert_eq!(c(r.literal_optimal).unwrap(), r.literal_optimal_complexity);
            assert_eq!(r.literal_optimal_complexity, literal_len(n));
            assert_ne!(r.literal_optimal, r.zeros);
        }
    }
}
