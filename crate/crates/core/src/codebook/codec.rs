//! Bit layouts of model and distribution bodies.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::{ceil_log2, gamma_len, BitReader, BitString, Bits, Extension};
use crate::codebook::atoms;
use crate::models::family::{ModelParams, Word, ALL_SUBSETS_MAX_N};
use crate::models::{DistKind, FamilyId, RationalDistribution};

/// Scheme headers. Together they form a complete prefix code except for `1111`.
pub mod header {
    pub const LITERAL: &str = "00";
    pub const MODEL: &str = "010";
    pub const TWO_PART: &str = "011";
    pub const DISTRIBUTION: &str = "100";
    pub const VIA_DISTRIBUTION: &str = "1010";
    pub const PERIODIC: &str = "1011";
    pub const TUPLE_LITERAL: &str = "1100";
    pub const TUPLE_MODEL: &str = "1101";
    pub const TUPLE_DISTRIBUTION: &str = "1110";

    pub const COND_PLAIN: &str = "0";
    pub const COND_DATA: &str = "10";
    pub const COND_RANK: &str = "11";
}

pub const FAMILY_ID_BITS: u32 = 3;
pub const KIND_BITS: u32 = 2;
pub const KIND_EXPLICIT: u32 = 3;

fn radius_bits(n: u32) -> u32 {
    ceil_log2(n as u64 + 1)
}

fn body_prefix(f: FamilyId, n: u32) -> Bits {
    let mut b = Bits::new();
    b.push_uint(f.code() as u64, FAMILY_ID_BITS);
    b.push_gamma(n as u64);
    b
}

fn product(prefix: Bits, parts: Vec<Vec<Bits>>) -> Vec<Bits> {
    let mut acc = vec![prefix];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            for p in &part {
                let mut c = a.clone();
                c.extend(p);
                next.push(c);
            }
        }
        acc = next;
    }
    acc
}

fn fixed(value: u64, width: u32) -> Vec<Bits> {
    let mut b = Bits::new();
    b.push_uint(value, width);
    vec![b]
}

/// Every body code (family id, EG(n), parameters) of the given parameters.
pub fn model_body_codes(p: &ModelParams) -> Vec<Bits> {
    let n = p.n();
    let pre = body_prefix(p.family(), n);
    match p {
        ModelParams::Singleton(x) => product(pre, vec![atoms::codes(Word::of(x))]),
        ModelParams::Cylinder { mask, pattern, .. } => product(
            pre,
            vec![atoms::codes(Word::new(n, *mask)), atoms::codes(Word::new(mask.count_ones(), *pattern))],
        ),
        ModelParams::HammingBall { center, radius } => {
            product(pre, vec![atoms::codes(Word::of(center)), fixed(*radius as u64, radius_bits(n))])
        }
        ModelParams::LexInterval { lo, hi } => {
            product(pre, vec![atoms::codes(Word::of(lo)), atoms::codes(Word::of(hi))])
        }
        ModelParams::PrefixSet { prefix, .. } => {
            let mut len = Bits::new();
            len.push_gamma(prefix.len as u64 + 1);
            product(pre, vec![vec![len], atoms::codes(*prefix)])
        }
        ModelParams::PlaneLine { k, slope, intercept } => product(
            pre,
            vec![atoms::codes(Word::new(*k, *slope)), atoms::codes(Word::new(*k, *intercept))],
        ),
        ModelParams::AllSubsets(e) => vec![all_subsets_body(e)],
        ModelParams::Explicit(e) => vec![explicit_body(e)],
    }
}

pub fn all_subsets_body_len(n: u32) -> u32 {
    FAMILY_ID_BITS + gamma_len(n as u64) + (1 << n)
}

/// Membership mask, bit `v` of the mask (counted from the left) for string value `v`.
pub fn all_subsets_body(e: &Extension) -> Bits {
    let n = e.n();
    let mut b = body_prefix(FamilyId::AllSubsets, n);
    for v in 0..(1u32 << n) {
        b.push(e.contains_value(v));
    }
    b
}

pub fn explicit_body_len(n: u32, m: u64) -> u32 {
    FAMILY_ID_BITS + gamma_len(n as u64) + gamma_len(m) + (m as u32) * n
}

pub fn explicit_body(e: &Extension) -> Bits {
    let n = e.n();
    let mut b = body_prefix(FamilyId::Explicit, n);
    b.push_gamma(e.count());
    for v in e.values() {
        b.push_uint(v as u64, n);
    }
    b
}

/// Reads a model body. `max_n` bounds the universe; `allowed` filters families.
pub fn read_model_body(r: &mut BitReader<'_>, max_n: u32, allowed: &dyn Fn(FamilyId) -> bool) -> Option<ModelParams> {
    let fam = FamilyId::from_code(r.uint(FAMILY_ID_BITS)? as u32)?;
    if !allowed(fam) {
        return None;
    }
    let n = r.gamma_at_most(max_n as u64)?;
    if !fam.available(n as u32) {
        return None;
    }
    let n = n as u32;
    let p = match fam {
        FamilyId::Singletons => ModelParams::Singleton(word_string(atoms::read(r, n)?)),
        FamilyId::Cylinders => {
            let mask = atoms::read(r, n)?.value;
            let pattern = atoms::read(r, mask.count_ones())?.value;
            ModelParams::Cylinder { n, mask, pattern }
        }
        FamilyId::HammingBalls => {
            let center = word_string(atoms::read(r, n)?);
            let radius = r.uint(radius_bits(n))? as u32;
            if radius > n {
                return None;
            }
            ModelParams::HammingBall { center, radius }
        }
        FamilyId::LexIntervals => {
            let lo = word_string(atoms::read(r, n)?);
            let hi = word_string(atoms::read(r, n)?);
            if lo > hi {
                return None;
            }
            ModelParams::LexInterval { lo, hi }
        }
        FamilyId::PrefixSets => {
            let len = r.gamma_at_most(n as u64 + 1)? - 1;
            ModelParams::PrefixSet { n, prefix: atoms::read(r, len as u32)? }
        }
        FamilyId::PlaneLines => {
            let k = n / 2;
            let slope = atoms::read(r, k)?.value;
            let intercept = atoms::read(r, k)?.value;
            ModelParams::PlaneLine { k, slope, intercept }
        }
        FamilyId::AllSubsets => {
            debug_assert!(n <= ALL_SUBSETS_MAX_N);
            let mut e = Extension::empty(n);
            for v in 0..(1u32 << n) {
                if r.bit()? {
                    e.insert(v);
                }
            }
            if e.count() == 0 {
                return None;
            }
            ModelParams::AllSubsets(e)
        }
        FamilyId::Explicit => {
            let m = r.gamma_at_most(1u64 << n)?;
            let mut e = Extension::empty(n);
            let mut prev: Option<u64> = None;
            for _ in 0..m {
                let v = r.uint(n)?;
                if prev.is_some_and(|p| v <= p) {
                    return None;
                }
                prev = Some(v);
                e.insert(v as u32);
            }
            ModelParams::Explicit(e)
        }
    };
    Some(p)
}

fn word_string(w: Word) -> BitString {
    BitString::from_raw(w.len, w.value)
}

fn push_big_gamma(b: &mut Bits, v: &BigUint) {
    let width = v.bits();
    for _ in 1..width {
        b.push(false);
    }
    for i in (0..width).rev() {
        b.push(v.bit(i));
    }
}

fn big_gamma_len(v: &BigUint) -> u32 {
    2 * v.bits() as u32 - 1
}

fn read_big_gamma(r: &mut BitReader<'_>) -> Option<BigUint> {
    let mut zeros = 0u32;
    while !r.bit()? {
        zeros += 1;
    }
    let mut v = BigUint::one();
    for _ in 0..zeros {
        v = (v << 1u32) | BigUint::from(r.bit()? as u8);
    }
    Some(v)
}

/// Stick-breaking fractions `p_i / (1 - p_1 - ... - p_(i-1))` for all but the last outcome.
/// Each lies strictly between 0 and 1 and is reduced.
fn stick_fractions(p: &RationalDistribution) -> Vec<(BigUint, BigUint)> {
    let mut rest = BigRational::one();
    let probs = p.probabilities();
    let mut out = Vec::with_capacity(probs.len().saturating_sub(1));
    for q in &probs[..probs.len() - 1] {
        let f = q / &rest;
        rest -= q;
        out.push((f.numer().to_biguint().unwrap(), f.denom().to_biguint().unwrap()));
    }
    out
}

/// Body of the explicit distribution code, after the 2-bit kind.
pub fn explicit_dist_payload(p: &RationalDistribution) -> Bits {
    let n = p.n();
    let mut b = Bits::new();
    b.push_gamma(n as u64);
    b.push_gamma(p.support().len() as u64);
    for y in p.support() {
        b.push_string(y);
    }
    for (a, d) in stick_fractions(p) {
        push_big_gamma(&mut b, &a);
        push_big_gamma(&mut b, &(d - &a));
    }
    b
}

/// Length of kind + explicit payload.
pub fn explicit_dist_len(p: &RationalDistribution) -> u32 {
    let n = p.n();
    let m = p.support().len() as u64;
    let mut len = KIND_BITS + gamma_len(n as u64) + gamma_len(m) + m as u32 * n;
    for (a, d) in stick_fractions(p) {
        len += big_gamma_len(&a) + big_gamma_len(&(d - &a));
    }
    len
}

/// Lower bound on [`explicit_dist_len`] for any distribution with support size `m`.
pub fn explicit_dist_len_bound(n: u32, m: u64) -> u32 {
    KIND_BITS + gamma_len(n as u64) + gamma_len(m) + (m as u32).saturating_mul(n) + 2 * (m as u32 - 1)
}

pub fn read_explicit_dist_payload(r: &mut BitReader<'_>, max_n: u32) -> Option<RationalDistribution> {
    let n = r.gamma_at_most(max_n as u64)? as u32;
    let m = r.gamma_at_most(1u64 << n)?;
    let mut support = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let y = r.string(n)?;
        if support.last().is_some_and(|p: &BitString| y <= *p) {
            return None;
        }
        support.push(y);
    }
    let mut rest = BigRational::one();
    let mut probs = Vec::with_capacity(m as usize);
    for _ in 1..m {
        let a = read_big_gamma(r)?;
        let c = read_big_gamma(r)?;
        let d = &a + &c;
        if !a.gcd(&d).is_one() {
            return None;
        }
        let f = BigRational::new(BigInt::from(a), BigInt::from(d));
        let q = &rest * f;
        rest -= &q;
        probs.push(q);
    }
    debug_assert!(!rest.is_zero());
    probs.push(rest);
    Some(RationalDistribution::from_sorted_unchecked(n, support, probs))
}

/// A decoded distribution body.
pub enum DistBody {
    Family { kind: DistKind, model: ModelParams },
    Explicit(RationalDistribution),
}

/// Family model bodies allowed inside distribution codes.
pub fn dist_model_family(f: FamilyId) -> bool {
    FamilyId::TABULATED.contains(&f)
}

pub fn read_dist_body(r: &mut BitReader<'_>, max_n: u32, allow_explicit: bool) -> Option<DistBody> {
    let kind = r.uint(KIND_BITS)? as u32;
    if kind == KIND_EXPLICIT {
        if !allow_explicit {
            return None;
        }
        return read_explicit_dist_payload(r, max_n).map(DistBody::Explicit);
    }
    let model = read_model_body(r, max_n, &dist_model_family)?;
    let kind = match kind {
        0 => DistKind::Uniform,
        1 => DistKind::HalfCube,
        _ => DistKind::Perturbed(atoms::read(r, model.n())?.value),
    };
    Some(DistBody::Family { kind, model })
}
