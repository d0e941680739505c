use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::{BitString, StringTuple};
use crate::error::{Error, Result};
use crate::models::family::{FamilyId, ModelParams};
use crate::models::model::FiniteModel;

/// A probability distribution on `B^n` with exact positive rational probabilities.
///
/// The support is sorted and the probabilities sum to exactly one, so derived
/// equality and hashing coincide with equality of the canonical serialization
/// (the sorted list of pairs `<y, P(y)>`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalDistribution {
    n: u32,
    support: Vec<BitString>,
    probs: Vec<BigRational>,
}

impl RationalDistribution {
    pub fn new(mut pairs: Vec<(BitString, BigRational)>) -> Result<Self> {
        let n = pairs.first().ok_or_else(|| Error::Invalid("empty distribution".into()))?.0.len();
        pairs.sort_by_key(|a| a.0);
        let mut sum = BigRational::zero();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("duplicate outcome {}", w[0].0)));
            }
        }
        for (y, p) in &pairs {
            if y.len() != n {
                return Err(Error::MixedUniverse);
            }
            if !p.is_positive() {
                return Err(Error::Invalid(format!("non-positive probability for {y}")));
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(Error::WeightSumNotOne(sum.to_string()));
        }
        let (support, probs) = pairs.into_iter().unzip();
        Ok(Self { n, support, probs })
    }

    pub(crate) fn from_sorted_unchecked(n: u32, support: Vec<BitString>, probs: Vec<BigRational>) -> Self {
        Self { n, support, probs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn support(&self) -> &[BitString] {
        &self.support
    }

    pub fn probabilities(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&BitString, &BigRational)> {
        self.support.iter().zip(&self.probs)
    }

    pub fn prob(&self, x: &BitString) -> BigRational {
        match self.support.binary_search(x) {
            Ok(i) => self.probs[i].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// `P(x_1) ... P(x_l)`.
    pub fn likelihood(&self, xs: &StringTuple) -> BigRational {
        xs.iter().fold(BigRational::one(), |acc, x| acc * self.prob(x))
    }

    /// Uniform distribution over `A`.
    pub fn uniform_over(a: &FiniteModel) -> Result<Self> {
        if a.cardinality() == 0 {
            return Err(Error::EmptyModel);
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(a.cardinality()));
        let support: Vec<BitString> = a.members().collect();
        let probs = vec![p; support.len()];
        Ok(Self { n: a.n(), support, probs })
    }

    /// `P(y) = sum_i w_i / |A_i|` over the components containing `y`.
    pub fn mixture(components: &[(BigRational, FiniteModel)]) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Invalid("no components".into()))?;
        let n = first.1.n();
        let mut total = BigRational::zero();
        for (w, a) in components {
            if a.n() != n {
                return Err(Error::MixedUniverse);
            }
            if !w.is_positive() {
                return Err(Error::Invalid("mixture weights must be positive".into()));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::WeightSumNotOne(total.to_string()));
        }
        let mut acc: std::collections::BTreeMap<BitString, BigRational> = Default::default();
        for (w, a) in components {
            let share = w / BigRational::from_integer(BigInt::from(a.cardinality()));
            for y in a.members() {
                *acc.entry(y).or_insert_with(BigRational::zero) += &share;
            }
        }
        let (support, probs) = acc.into_iter().unzip();
        Ok(Self { n, support, probs })
    }

    /// Point mass on `x`.
    pub fn point(x: BitString) -> Self {
        Self { n: x.len(), support: vec![x], probs: vec![BigRational::one()] }
    }

    /// Canonical serialization `{y:p, ...}` in support order.
    pub fn serialize(&self) -> String {
        let items: Vec<String> = self.pairs().map(|(y, p)| format!("{y}:{p}")).collect();
        format!("{{{}}}", items.join(", "))
    }
}

impl fmt::Display for RationalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dist {}", self.serialize())
    }
}

impl fmt::Debug for RationalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shape of a family-coded distribution built on one model `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistKind {
    /// Uniform over `A`.
    Uniform,
    /// Half the mass uniform over `B^n`, half uniform over `A`.
    HalfCube,
    /// Half the mass uniform over `A`, half on the single outcome `s`.
    Perturbed(u32),
}

impl DistKind {
    pub fn code(&self) -> u32 {
        match self {
            DistKind::Uniform => 0,
            DistKind::HalfCube => 1,
            DistKind::Perturbed(_) => 2,
        }
    }
}

/// Probability of `y` under `kind` built on a model with the given membership and size.
pub(crate) fn kind_prob(kind: DistKind, n: u32, in_a: bool, card: u64, y: u32) -> BigRational {
    let half_a = || BigRational::new(BigInt::one(), BigInt::from(2 * card));
    match kind {
        DistKind::Uniform => {
            if in_a {
                BigRational::new(BigInt::one(), BigInt::from(card))
            } else {
                BigRational::zero()
            }
        }
        DistKind::HalfCube => {
            let base = BigRational::new(BigInt::one(), BigInt::one() << (n as usize + 1));
            if in_a {
                base + half_a()
            } else {
                base
            }
        }
        DistKind::Perturbed(s) => {
            let mut p = if in_a { half_a() } else { BigRational::zero() };
            if y == s {
                p += BigRational::new(BigInt::one(), BigInt::from(2));
            }
            p
        }
    }
}

/// Explicit distribution of `kind` over model `a`.
pub fn family_distribution(kind: DistKind, a: &FiniteModel) -> RationalDistribution {
    let n = a.n();
    let card = a.cardinality();
    let mut support = Vec::new();
    let mut probs = Vec::new();
    for y in BitString::all(n) {
        let p = kind_prob(kind, n, a.contains(&y), card, y.value());
        if !p.is_zero() {
            support.push(y);
            probs.push(p);
        }
    }
    RationalDistribution::from_sorted_unchecked(n, support, probs)
}

/// A declared, enumerable class of distributions. Profiles and games quantify over these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistributionFamily {
    /// Uniform distributions over the sets of a model family.
    Uniform(FamilyId),
    /// Half-cube mixtures built on the sets of a model family.
    HalfCube(FamilyId),
    /// Perturbed uniforms (`A`, `s`) for every set of the family and every `s`.
    Perturbed(FamilyId),
    /// Perturbed uniforms over one fixed set `A`: the clone family.
    Clones(ModelParams),
    /// Point masses on every string.
    PointMasses,
    /// Every family-coded distribution of the description system.
    Registry,
    /// A fixed list.
    List(Vec<RationalDistribution>),
    Union(Vec<DistributionFamily>),
}

impl DistributionFamily {
    /// `uniform:<family>`, `halfcube:<family>`, `perturbed:<family>`, `points`,
    /// `registry`, `mixtures` (uniform and half-cube over every tabulated family).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "points" => return Ok(Self::PointMasses),
            "registry" => return Ok(Self::Registry),
            "mixtures" => return Ok(Self::mixtures()),
            _ => {}
        }
        let (kind, fam) = s
            .split_once(':')
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))?;
        let fam = FamilyId::parse(fam)?;
        match kind {
            "uniform" => Ok(Self::Uniform(fam)),
            "halfcube" | "mixture" => Ok(Self::HalfCube(fam)),
            "perturbed" | "clones" => Ok(Self::Perturbed(fam)),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }

    pub fn mixtures() -> Self {
        let mut parts = Vec::new();
        for f in FamilyId::TABULATED {
            parts.push(Self::Uniform(f));
            parts.push(Self::HalfCube(f));
        }
        Self::Union(parts)
    }

    pub fn name(&self) -> String {
        match self {
            Self::Uniform(f) => format!("uniform:{f}"),
            Self::HalfCube(f) => format!("halfcube:{f}"),
            Self::Perturbed(f) => format!("perturbed:{f}"),
            Self::Clones(p) => format!("clones[{p}]"),
            Self::PointMasses => "points".into(),
            Self::Registry => "registry".into(),
            Self::List(v) => format!("list[{}]", v.len()),
            Self::Union(v) => v.iter().map(|d| d.name()).collect::<Vec<_>>().join("+"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn cyl0(n: u32) -> FiniteModel {
        FiniteModel::from_params(ModelParams::Cylinder { n, mask: 1 << (n - 1), pattern: 0 })
    }

    #[test]
    fn uniform_cases() {
        let x: BitString = "0110".parse().unwrap();
        let p = RationalDistribution::uniform_over(&FiniteModel::explicit(&[x]).unwrap()).unwrap();
        assert_eq!(p.prob(&x), rational(1, 1));
        let q = RationalDistribution::uniform_over(&cyl0(4)).unwrap();
        assert_eq!(q.support().len(), 8);
        assert!(q.probabilities().iter().all(|v| *v == rational(1, 8)));
    }

    #[test]
    fn mixture_matches_example_three_arithmetic() {
        // half on B^8, half on 0000 || B^4
        let full = FiniteModel::full(8);
        let pre = FiniteModel::from_params(ModelParams::PrefixSet {
            n: 8,
            prefix: crate::models::family::Word::new(4, 0),
        });
        let p = RationalDistribution::mixture(&[(rational(1, 2), full), (rational(1, 2), pre)]).unwrap();
        assert_eq!(p.prob(&"00001011".parse().unwrap()), rational(17, 512));
        assert_eq!(p.prob(&"10001011".parse().unwrap()), rational(1, 512));
        let total: BigRational = p.probabilities().iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn mixture_errors_and_trivial_cases() {
        let a = cyl0(2);
        let single = RationalDistribution::mixture(&[(rational(1, 1), a.clone())]).unwrap();
        assert_eq!(single, RationalDistribution::uniform_over(&a).unwrap());
        assert!(matches!(
            RationalDistribution::mixture(&[(rational(1, 3), a.clone())]),
            Err(Error::WeightSumNotOne(_))
        ));
        let other = cyl0(3);
        assert_eq!(
            RationalDistribution::mixture(&[(rational(1, 2), a.clone()), (rational(1, 2), other)]).unwrap_err(),
            Error::MixedUniverse
        );
        let b = FiniteModel::from_params(ModelParams::Cylinder { n: 2, mask: 0b10, pattern: 1 });
        let halves = RationalDistribution::mixture(&[(rational(1, 2), a), (rational(1, 2), b)]).unwrap();
        assert_eq!(halves, RationalDistribution::uniform_over(&FiniteModel::full(2)).unwrap());
    }

    #[test]
    fn family_distributions_sum_to_one() {
        let a = cyl0(3);
        for kind in [DistKind::Uniform, DistKind::HalfCube, DistKind::Perturbed(5), DistKind::Perturbed(1)] {
            let p = family_distribution(kind, &a);
            let total: BigRational = p.probabilities().iter().sum();
            assert!(total.is_one(), "{kind:?}");
        }
    }
}
