//! Optimality and randomness deficiencies, and the profiles built from them.
//!
//! Every value is in millibits (1/1024 bit). Complexities are whole bits scaled by 1024;
//! `log2 |A|` and `-log2 P(xs)` are rounded towards a larger deficiency.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::bits::{BitString, StringTuple};
use crate::codebook::conditional::{conditional_complexity_in, data_given_distribution_len};
use crate::codebook::engine::complexity_in;
use crate::codebook::system::{DescriptionSystem, Object};
use crate::codebook::table::table;
use crate::error::{Error, Result};
use crate::models::{enumerate_distributions, DistEntry, DistHandle, DistributionFamily, FiniteModel, RationalDistribution};
use crate::scalar::{ceil_neg_log2, log2_millibits, log2_millibits_int, MILLIBITS_PER_BIT};

/// Three summands of a deficiency; `value` is their exact sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Breakdown {
    /// `C(A)` or `C(P)`; zero for randomness deficiencies.
    pub complexity_part: i64,
    /// `l log2 |A|` or `-log2 P(xs)`.
    pub log_part: i64,
    /// `-C(xs)` or `-C(xs | model)`.
    pub data_part: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficiencyValue {
    pub value: i64,
    pub breakdown: Breakdown,
    pub witness: String,
}

impl DeficiencyValue {
    fn new(complexity_part: i64, log_part: i64, data_part: i64, witness: String) -> Self {
        Self {
            value: complexity_part + log_part + data_part,
            breakdown: Breakdown { complexity_part, log_part, data_part },
            witness,
        }
    }
}

fn bits(c: u32) -> i64 {
    c as i64 * MILLIBITS_PER_BIT
}

/// `-log2 q` in millibits, rounded up.
pub fn neg_log2_millibits(q: &BigRational) -> i64 {
    -log2_millibits(q)
}

fn c(obj: Object) -> Result<u32> {
    Ok(complexity_in(&DescriptionSystem::standard(), &obj)?.value)
}

fn members_check(xs: &StringTuple, a: &FiniteModel) -> Result<()> {
    match xs.iter().find(|x| !a.contains(x)) {
        Some(x) => Err(Error::NotAMember(x.to_string())),
        None => Ok(()),
    }
}

fn likelihood_check(xs: &StringTuple, p: &RationalDistribution) -> Result<BigRational> {
    if let Some(x) = xs.iter().find(|x| !p.prob(x).is_positive()) {
        return Err(Error::ZeroLikelihood(x.to_string()));
    }
    Ok(p.likelihood(xs))
}

/// `C(A) + log2 |A| - C(x)`.
pub fn optimality_deficiency(x: &BitString, a: &FiniteModel) -> Result<DeficiencyValue> {
    tuple_optimality_deficiency(&StringTuple::single(*x), a)
}

/// `C(A) + l log2 |A| - C(xs)`.
pub fn tuple_optimality_deficiency(xs: &StringTuple, a: &FiniteModel) -> Result<DeficiencyValue> {
    members_check(xs, a)?;
    let ca = c(Object::Model(a.clone()))?;
    let cx = c(xs.into())?;
    Ok(DeficiencyValue::new(
        bits(ca),
        xs.l() as i64 * log2_millibits_int(a.cardinality()),
        -bits(cx),
        a.label(),
    ))
}

/// `C(P) - log2 (P(x1)...P(xl)) - C(xs)`.
pub fn dist_optimality_deficiency(xs: &StringTuple, p: &RationalDistribution) -> Result<DeficiencyValue> {
    let lik = likelihood_check(xs, p)?;
    let cp = c(Object::Distribution(p.clone()))?;
    let cx = c(xs.into())?;
    Ok(DeficiencyValue::new(bits(cp), neg_log2_millibits(&lik), -bits(cx), p.to_string()))
}

/// `log2 |A| - C(x | A)`.
pub fn randomness_deficiency(x: &BitString, a: &FiniteModel) -> Result<DeficiencyValue> {
    members_check(&StringTuple::single(*x), a)?;
    let sys = DescriptionSystem::standard();
    let cond = conditional_complexity_in(&sys, &Object::String(*x), &Object::Model(a.clone()))?.value;
    Ok(DeficiencyValue::new(0, log2_millibits_int(a.cardinality()), -bits(cond), a.label()))
}

/// `-log2 (P(x1)...P(xl)) - C(xs | P)`.
pub fn dist_randomness_deficiency(xs: &StringTuple, p: &RationalDistribution) -> Result<DeficiencyValue> {
    let lik = likelihood_check(xs, p)?;
    let sys = DescriptionSystem::standard();
    let cond = conditional_complexity_in(&sys, &xs.into(), &Object::Distribution(p.clone()))?.value;
    Ok(DeficiencyValue::new(0, neg_log2_millibits(&lik), -bits(cond), p.to_string()))
}

/// The set `{y : P(y) >= 2^-i}` for the `i` with `2^-i <= P(x) < 2^(-i+1)`, or `B^n`
/// when `i > n`. Its log-size is at most `-log2 P(x) + 1`.
pub fn set_from_distribution(p: &RationalDistribution, x: &BitString) -> Result<FiniteModel> {
    let px = p.prob(x);
    if !px.is_positive() {
        return Err(Error::ZeroLikelihood(x.to_string()));
    }
    let n = p.n();
    let i = ceil_neg_log2(&px);
    if i > n {
        return Ok(FiniteModel::full(n));
    }
    let threshold = BigRational::new(One::one(), num_bigint::BigInt::one() << i as usize);
    let members: Vec<BitString> = p.pairs().filter(|(_, q)| **q >= threshold).map(|(y, _)| *y).collect();
    let a = FiniteModel::explicit(&members)?;
    // prefer the tabulated copy, which remembers its parameters
    Ok(table(n).ok().and_then(|t| t.entry_of(a.extension())).map(|e| e.model.clone()).unwrap_or(a))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfilePoint {
    pub a_bits: u32,
    pub b_millibits: i64,
    pub witness: String,
}

/// `a -> min b` over the distributions of a family with `C(P) <= a`, for `a <= a_max`.
/// Budgets below the simplest distribution have no point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub a_max: u32,
    pub points: Vec<ProfilePoint>,
}

impl Profile {
    /// Builds the staircase from `(C, b, witness)` triples already in enumeration order.
    pub fn from_values(a_max: u32, values: impl IntoIterator<Item = (u32, i64, String)>) -> Self {
        let mut best: Vec<Option<(i64, String)>> = vec![None; a_max as usize + 1];
        for (c, b, w) in values {
            if c > a_max {
                continue;
            }
            let slot = &mut best[c as usize];
            if slot.as_ref().is_none_or(|(v, _)| b < *v) {
                *slot = Some((b, w));
            }
        }
        let mut points = Vec::new();
        let mut run: Option<(i64, String)> = None;
        for (a, slot) in best.into_iter().enumerate() {
            if let Some((b, w)) = slot {
                if run.as_ref().is_none_or(|(v, _)| b < *v) {
                    run = Some((b, w));
                }
            }
            if let Some((b, w)) = &run {
                points.push(ProfilePoint { a_bits: a as u32, b_millibits: *b, witness: w.clone() });
            }
        }
        Self { a_max, points }
    }

    /// `b_min(a)`, or `None` below the first point. Budgets past `a_max` reuse the last value.
    pub fn b_at(&self, a: i64) -> Option<i64> {
        let a = a.min(self.a_max as i64);
        self.points.iter().take_while(|p| p.a_bits as i64 <= a).last().map(|p| p.b_millibits)
    }

    /// Whether `b` never increases with `a`.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].a_bits < w[1].a_bits && w[1].b_millibits <= w[0].b_millibits)
    }
}

/// Deficiency of the data under one enumerated distribution, for both profiles.
struct Evaluator {
    xs: StringTuple,
    c_xs: u32,
}

impl Evaluator {
    fn new(xs: &StringTuple) -> Result<Self> {
        Ok(Self { xs: xs.clone(), c_xs: c(xs.into())? })
    }

    fn neg_log(&self, d: &DistHandle) -> Option<i64> {
        let lik = d.likelihood(&self.xs);
        lik.is_positive().then(|| neg_log2_millibits(&lik))
    }

    fn optimality(&self, e: &DistEntry) -> Option<i64> {
        Some(bits(e.complexity) + self.neg_log(&e.dist)? - bits(self.c_xs))
    }

    fn randomness(&self, e: &DistEntry) -> Result<Option<i64>> {
        let Some(nl) = self.neg_log(&e.dist) else { return Ok(None) };
        let cond = match &e.dist {
            DistHandle::Family(f) => {
                let probs: Vec<BigRational> = self.xs.iter().map(|x| f.prob(x)).collect();
                data_given_distribution_len(self.c_xs, &probs)
            }
            DistHandle::Explicit(p) => {
                let sys = DescriptionSystem::standard();
                conditional_complexity_in(&sys, &(&self.xs).into(), &Object::Distribution(p.clone()))?.value
            }
        };
        Ok(Some(nl - bits(cond)))
    }
}

/// The optimality profile of `xs` relative to `dfam`: `b_min(a) = min δ(xs, P)` over
/// `C(P) <= a`.
pub fn optimality_profile(xs: &StringTuple, dfam: &DistributionFamily, a_max: u32) -> Result<Profile> {
    let dists = enumerate_distributions(dfam, xs.n(), a_max)?;
    let ev = Evaluator::new(xs)?;
    let values = dists.iter().filter_map(|e| Some((e.complexity, ev.optimality(e)?, e.dist.label())));
    Ok(Profile::from_values(a_max, values))
}

/// The stochasticity profile: `b_min(a) = min d(xs | P)` over `C(P) <= a`.
pub fn stochasticity_profile(xs: &StringTuple, dfam: &DistributionFamily, a_max: u32) -> Result<Profile> {
    let dists = enumerate_distributions(dfam, xs.n(), a_max)?;
    let ev = Evaluator::new(xs)?;
    let mut values = Vec::new();
    for e in &dists {
        if let Some(b) = ev.randomness(e)? {
            values.push((e.complexity, b, e.dist.label()));
        }
    }
    Ok(Profile::from_values(a_max, values))
}

/// Whether every point of `r` is within `eps` millibits (L-infinity) of the region above
/// `q`'s staircase. The `a` axis is in whole bits, so the shift is `floor(eps / 1024)`.
fn within(r: &Profile, q: &Profile, eps: i64) -> bool {
    let shift = eps / MILLIBITS_PER_BIT;
    r.points.iter().all(|p| q.b_at(p.a_bits as i64 + shift).is_some_and(|b| b <= p.b_millibits + eps))
}

/// Smallest `eps` (millibits) such that each staircase lies in the `eps`-neighborhood of
/// the other's region; `None` when one has a point the other cannot reach at any distance.
pub fn profile_distance(r: &Profile, q: &Profile) -> Option<i64> {
    const HI: i64 = 1 << 40;
    if !within(r, q, HI) || !within(q, r, HI) {
        return None;
    }
    let ok = |e: i64| within(r, q, e) && within(q, r, e);
    let (mut lo, mut hi) = (-1i64, HI);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
