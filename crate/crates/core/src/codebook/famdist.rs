//! Distributions with a family code: uniform, half-cube and perturbed over one set.
//!
//! Several `(kind, set)` pairs can describe the same distribution; [`FamilyDist::equivalents`]
//! closes over the coincidences and [`FamilyDist::representations`] recovers every pair
//! from an explicit distribution.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::{BitString, Extension, StringTuple};
use crate::models::distribution::kind_prob;
use crate::models::{family_distribution, DistKind, FiniteModel, RationalDistribution};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyDist {
    pub kind: DistKind,
    pub ext: Extension,
}

fn singleton(n: u32, v: u32) -> Extension {
    let mut e = Extension::empty(n);
    e.insert(v);
    e
}

impl FamilyDist {
    pub fn new(kind: DistKind, ext: Extension) -> Self {
        Self { kind, ext }
    }

    pub fn n(&self) -> u32 {
        self.ext.n()
    }

    pub fn prob_value(&self, y: u32) -> BigRational {
        kind_prob(self.kind, self.n(), self.ext.contains_value(y), self.ext.count(), y)
    }

    pub fn prob(&self, y: &BitString) -> BigRational {
        if y.len() != self.n() {
            return BigRational::zero();
        }
        self.prob_value(y.value())
    }

    /// Parseable literal such as `perturbed s=0101 cyl n=4 mask=1000 pat=0`.
    pub fn label(&self) -> String {
        let model = crate::codebook::table::table(self.n())
            .ok()
            .and_then(|t| t.entry_of(&self.ext))
            .map(|e| e.model.label())
            .unwrap_or_else(|| FiniteModel::from_extension(self.ext.clone()).map(|m| m.label()).unwrap_or_default());
        match self.kind {
            DistKind::Uniform => format!("uniform {model}"),
            DistKind::HalfCube => format!("halfcube {model}"),
            DistKind::Perturbed(s) => {
                let s = BitString::new(self.n(), s).expect("point inside the cube");
                format!("perturbed s={s} {model}")
            }
        }
    }

    pub fn likelihood(&self, xs: &StringTuple) -> BigRational {
        xs.iter().fold(BigRational::one(), |acc, x| acc * self.prob(x))
    }

    pub fn support_size(&self) -> u64 {
        match self.kind {
            DistKind::Uniform => self.ext.count(),
            DistKind::HalfCube => 1u64 << self.n(),
            DistKind::Perturbed(s) => self.ext.count() + u64::from(!self.ext.contains_value(s)),
        }
    }

    pub fn materialize(&self) -> RationalDistribution {
        let a = FiniteModel::from_extension(self.ext.clone()).expect("family sets are nonempty");
        family_distribution(self.kind, &a)
    }

    fn one_step(&self) -> Vec<FamilyDist> {
        let n = self.n();
        let card = self.ext.count();
        let full = card == 1u64 << n;
        let mut out = Vec::new();
        match self.kind {
            DistKind::Uniform => {
                let vals: Vec<u32> = self.ext.values().collect();
                if card == 1 {
                    out.push(Self::new(DistKind::Perturbed(vals[0]), self.ext.clone()));
                }
                if card == 2 {
                    out.push(Self::new(DistKind::Perturbed(vals[0]), singleton(n, vals[1])));
                    out.push(Self::new(DistKind::Perturbed(vals[1]), singleton(n, vals[0])));
                }
                if full {
                    out.push(Self::new(DistKind::HalfCube, self.ext.clone()));
                }
            }
            DistKind::HalfCube => {
                if full {
                    out.push(Self::new(DistKind::Uniform, self.ext.clone()));
                }
                if card == 1 {
                    let s = self.ext.values().next().unwrap();
                    out.push(Self::new(DistKind::Perturbed(s), Extension::full(n)));
                }
            }
            DistKind::Perturbed(s) => {
                if card == 1 {
                    let mut e = self.ext.clone();
                    e.insert(s);
                    out.push(Self::new(DistKind::Uniform, e));
                }
                if full {
                    out.push(Self::new(DistKind::HalfCube, singleton(n, s)));
                }
            }
        }
        out
    }

    /// Every `(kind, set)` pair describing the same distribution, including `self`, sorted.
    pub fn equivalents(&self) -> Vec<FamilyDist> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(d.clone()) {
                stack.extend(d.one_step());
            }
        }
        seen.into_iter().collect()
    }

    /// Canonical member of the equivalence class.
    pub fn canonical(&self) -> FamilyDist {
        self.equivalents().swap_remove(0)
    }

    /// Every `(kind, set)` pair whose distribution equals `p`.
    pub fn representations(p: &RationalDistribution) -> Vec<FamilyDist> {
        let n = p.n();
        let probs = p.probabilities();
        let mut support = Extension::empty(n);
        for y in p.support() {
            support.insert(y.value());
        }
        let mut out = Vec::new();
        if probs.iter().all(|q| *q == probs[0]) {
            out.push(Self::new(DistKind::Uniform, support.clone()));
        }
        if p.support().len() as u64 == 1u64 << n {
            let low = BigRational::new(BigInt::one(), BigInt::one() << (n as usize + 1));
            let mut a = Extension::empty(n);
            for (y, q) in p.pairs() {
                if *q > low {
                    a.insert(y.value());
                }
            }
            let card = a.count();
            if card > 0 {
                let high = &low + BigRational::new(BigInt::one(), BigInt::from(2 * card));
                let ok = p.pairs().all(|(y, q)| if a.contains_value(y.value()) { *q == high } else { *q == low });
                if ok {
                    out.push(Self::new(DistKind::HalfCube, a));
                }
            }
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for (s, ps) in p.pairs() {
            if *ps < half {
                continue;
            }
            let mut a = Extension::empty(n);
            let mut q_vals = Vec::new();
            for (y, q) in p.pairs() {
                let mut v = q * BigInt::from(2);
                if y == s {
                    v -= BigRational::one();
                }
                if !v.is_zero() {
                    a.insert(y.value());
                    q_vals.push(v);
                }
            }
            let card = a.count();
            let uniform = BigRational::new(BigInt::one(), BigInt::from(card.max(1)));
            if card > 0 && q_vals.iter().all(|v| *v == uniform) {
                out.push(Self::new(DistKind::Perturbed(s.value()), a));
            }
        }
        out.sort();
        out
    }
}
