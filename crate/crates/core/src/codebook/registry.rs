//! Every distribution with a family code (uniform, half-cube or perturbed over a tabulated
//! set) of bounded complexity, in a fixed order.
//!
//! Order is `(C(Q), canonical (kind, set))`. The rank of a distribution among those that
//! also give the data high likelihood is the payload of the conditional rank code.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;

use crate::bits::StringTuple;
use crate::codebook::codec::explicit_dist_len_bound;
use crate::codebook::engine::{atom_table, family_dist_body_len, family_dist_complexity};
use crate::codebook::famdist::FamilyDist;
use crate::codebook::table::table;
use crate::error::{Error, Result};
use crate::models::DistKind;
use crate::scalar::ceil_neg_log2;

/// Most candidate (kind, set, point) triples one enumeration may visit.
pub const REGISTRY_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub complexity: u32,
    pub dist: FamilyDist,
}

/// All canonical family distributions over `B^n` with `C(Q) <= cap`, sorted.
pub fn registry(n: u32, cap: u32) -> Result<Arc<Vec<RegistryEntry>>> {
    type Cache = Mutex<HashMap<(u32, u32), Arc<Vec<RegistryEntry>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(n, cap)) {
        return Ok(r.clone());
    }
    let r = Arc::new(build(n, cap)?);
    cache.lock().unwrap().insert((n, cap), r.clone());
    Ok(r)
}

fn build(n: u32, cap: u32) -> Result<Vec<RegistryEntry>> {
    let t = table(n)?;
    let at = atom_table(n);
    let size = 1u64 << n;
    let mut visited = 0usize;
    let mut seen: BTreeSet<FamilyDist> = BTreeSet::new();
    let mut out = Vec::new();
    let mut offer = |fd: FamilyDist| -> Result<()> {
        visited += 1;
        if visited > REGISTRY_BUDGET {
            return Err(Error::BudgetExceeded(REGISTRY_BUDGET));
        }
        let canon = fd.canonical();
        if seen.insert(canon.clone()) {
            let c = family_dist_complexity(&canon)?;
            if c <= cap {
                out.push(RegistryEntry { complexity: c, dist: canon });
            }
        }
        Ok(())
    };
    let mut atoms_by_len: Vec<u32> = (0..size as u32).collect();
    atoms_by_len.sort_by_key(|v| at.min_len(*v));

    // reached through a family code
    for e in t.entries() {
        let base = 3 + family_dist_body_len(DistKind::Uniform, e, at);
        if base > cap {
            continue;
        }
        offer(FamilyDist::new(DistKind::Uniform, e.ext().clone()))?;
        offer(FamilyDist::new(DistKind::HalfCube, e.ext().clone()))?;
        for &s in &atoms_by_len {
            if base + at.min_len(s) > cap {
                break;
            }
            offer(FamilyDist::new(DistKind::Perturbed(s), e.ext().clone()))?;
        }
    }

    // reached only through the explicit code: small supports
    let m_max = (1..=size).take_while(|m| 3 + explicit_dist_len_bound(n, *m) <= cap).last().unwrap_or(0);
    if m_max > 0 {
        for e in t.entries().iter().filter(|e| e.card() <= m_max) {
            offer(FamilyDist::new(DistKind::Uniform, e.ext().clone()))?;
            for s in 0..size as u32 {
                if e.ext().contains_value(s) || e.card() < m_max {
                    offer(FamilyDist::new(DistKind::Perturbed(s), e.ext().clone()))?;
                }
            }
            if size <= m_max {
                offer(FamilyDist::new(DistKind::HalfCube, e.ext().clone()))?;
            }
        }
    }
    out.sort_by(|a, b| a.complexity.cmp(&b.complexity).then_with(|| a.dist.cmp(&b.dist)));
    Ok(out)
}

/// `ceil(-log2 Q(xs))`, or `None` when some element has probability zero.
pub fn neg_log_ceil(fd: &FamilyDist, xs: &StringTuple) -> Option<u32> {
    let p: BigRational = fd.likelihood(xs);
    (p > BigRational::from_integer(0.into())).then(|| ceil_neg_log2(&p))
}

/// Registry members with `C(Q) <= a` and `ceil(-log2 Q(xs)) <= b`, in registry order.
pub fn admissible(xs: &StringTuple, a: u32, b: u32) -> Result<Vec<RegistryEntry>> {
    let reg = registry(xs.n(), a)?;
    Ok(reg.iter().filter(|e| neg_log_ceil(&e.dist, xs).is_some_and(|v| v <= b)).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::codebook::engine::c;

    #[test]
    fn registry_is_exhaustive_at_two_bits() {
        // brute force: every (kind, set, point) over B^2
        for cap in [10, 13, 16, 22] {
            check_exhaustive(cap);
        }
    }

    fn check_exhaustive(cap: u32) {
        let reg = registry(2, cap).unwrap();
        let mut expected = BTreeSet::new();
        for mask in 1u32..16 {
            let mut e = crate::bits::Extension::empty(2);
            for v in 0..4 {
                if mask >> v & 1 == 1 {
                    e.insert(v);
                }
            }
            let mut kinds = vec![DistKind::Uniform, DistKind::HalfCube];
            kinds.extend((0..4).map(DistKind::Perturbed));
            for k in kinds {
                let fd = FamilyDist::new(k, e.clone());
                if fd.equivalents().iter().all(|q| table(2).unwrap().entry_of(&q.ext).is_none()) {
                    continue;
                }
                if c(fd.materialize()).unwrap() <= cap {
                    expected.insert(fd.canonical());
                }
            }
        }
        let got: BTreeSet<FamilyDist> = reg.iter().map(|e| e.dist.clone()).collect();
        assert_eq!(got, expected);
        for e in reg.iter() {
            assert_eq!(e.complexity, c(e.dist.materialize()).unwrap());
        }
        assert!(reg.windows(2).all(|w| (w[0].complexity, &w[0].dist) < (w[1].complexity, &w[1].dist)));
    }

    #[test]
    fn admissible_filters_by_likelihood() {
        let x: BitString = "01".parse().unwrap();
        let xs = StringTuple::single(x);
        for e in admissible(&xs, 20, 1).unwrap() {
            assert!(e.dist.prob(&x) >= BigRational::new(1.into(), 2.into()));
        }
    }
}
