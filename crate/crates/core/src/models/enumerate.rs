//! Enumeration of a family's members over `B^n` up to a complexity cap.
//!
//! Tabulated families read the shared model table; `AllSubsets` walks every subset.
//! Output is in canonical order: models by serialization, distributions by
//! `(C(P), canonical (kind, set))`.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::bits::{BitString, Extension, StringTuple};
use crate::codebook::engine::{
    apriori_in, complexity_in, family_dist_complexity, model_apriori_cached, model_complexity_cached,
};
use crate::codebook::famdist::FamilyDist;
use crate::codebook::kraft::MAX_CODE_LEN;
use crate::codebook::registry::registry;
use crate::codebook::system::{DescriptionSystem, Object};
use crate::codebook::table::{table, TABLE_MAX_N};
use crate::error::{Error, Result};
use crate::models::{DistKind, DistributionFamily, FamilyId, FiniteModel, RationalDistribution};
use crate::scalar::Dyadic;

/// An enumerated model with its complexity and a-priori mass.
#[derive(Clone, Debug)]
pub struct ModelEntry {
    pub model: FiniteModel,
    pub complexity: u32,
    pub apriori: Dyadic,
}

fn check_cap(cap: u32) -> Result<()> {
    if cap > MAX_CODE_LEN {
        return Err(Error::CapTooLarge { cap, max: MAX_CODE_LEN });
    }
    Ok(())
}

fn check_family(family: FamilyId, n: u32) -> Result<()> {
    if family == FamilyId::Explicit {
        return Err(Error::UnknownFamily("explicit (codec only, not enumerable)".into()));
    }
    if !family.available(n) || n == 0 || n > TABLE_MAX_N {
        return Err(Error::ObjectOutOfBounds(format!("family {family} over B^{n}")));
    }
    Ok(())
}

fn subset(n: u32, mask: u64) -> Extension {
    let mut e = Extension::empty(n);
    for v in 0..1u32 << n {
        if mask >> v & 1 == 1 {
            e.insert(v);
        }
    }
    e
}

/// Every member of `family` over `B^n` with `C(A) <= cap`, with complexities and masses.
pub fn enumerate_model_entries(family: FamilyId, n: u32, cap: u32) -> Result<Vec<ModelEntry>> {
    check_cap(cap)?;
    check_family(family, n)?;
    let t = table(n)?;
    let mut out = Vec::new();
    if family == FamilyId::AllSubsets {
        let sys = DescriptionSystem::standard();
        for mask in 1u64..1u64 << (1u32 << n) {
            let ext = subset(n, mask);
            let model = match t.lookup(&ext) {
                Some(i) => t.get(i).model.clone(),
                None => FiniteModel::from_extension(ext)?,
            };
            let obj = Object::Model(model);
            let c = complexity_in(&sys, &obj)?.value;
            if c <= cap {
                let apriori = apriori_in(&sys, &obj)?.value;
                let Object::Model(model) = obj else { unreachable!() };
                out.push(ModelEntry { model, complexity: c, apriori });
            }
        }
        out.sort_by(|a, b| a.model.cmp(&b.model));
    } else {
        // table entries are already in canonical order
        for (i, e) in t.entries().iter().enumerate() {
            if !e.in_family(family) {
                continue;
            }
            let c = model_complexity_cached(n, i)?;
            if c <= cap {
                out.push(ModelEntry { model: e.model.clone(), complexity: c, apriori: model_apriori_cached(n, i)? });
            }
        }
    }
    Ok(out)
}

/// Every member of `family` over `B^n` with `C(A) <= cap`, each once, in canonical order.
pub fn enumerate_models(family: FamilyId, n: u32, cap: u32) -> Result<Vec<FiniteModel>> {
    Ok(enumerate_model_entries(family, n, cap)?.into_iter().map(|e| e.model).collect())
}

/// A distribution produced by an enumeration: family-coded when possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistHandle {
    Family(FamilyDist),
    Explicit(RationalDistribution),
}

impl DistHandle {
    pub fn n(&self) -> u32 {
        match self {
            Self::Family(f) => f.n(),
            Self::Explicit(p) => p.n(),
        }
    }

    pub fn prob(&self, y: &BitString) -> BigRational {
        match self {
            Self::Family(f) => f.prob(y),
            Self::Explicit(p) => p.prob(y),
        }
    }

    pub fn likelihood(&self, xs: &StringTuple) -> BigRational {
        match self {
            Self::Family(f) => f.likelihood(xs),
            Self::Explicit(p) => p.likelihood(xs),
        }
    }

    pub fn materialize(&self) -> RationalDistribution {
        match self {
            Self::Family(f) => f.materialize(),
            Self::Explicit(p) => p.clone(),
        }
    }

    /// Parseable literal (`uniform <model>`, `dist {...}`, ...).
    pub fn label(&self) -> String {
        match self {
            Self::Family(f) => f.label(),
            Self::Explicit(p) => p.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistEntry {
    pub complexity: u32,
    pub dist: DistHandle,
}

fn matches_family(fd: &FamilyDist, kind: DistKind, family: FamilyId) -> bool {
    let Ok(t) = table(fd.n()) else { return false };
    fd.equivalents().iter().any(|q| {
        let same_kind = match (q.kind, kind) {
            (DistKind::Perturbed(_), DistKind::Perturbed(_)) => true,
            (a, b) => a == b,
        };
        same_kind && t.entry_of(&q.ext).is_some_and(|e| e.in_family(family))
    })
}

fn all_subsets_dists(n: u32, kinds: &[DistKind], cap: u32, out: &mut Vec<(u32, FamilyDist)>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for mask in 1u64..1u64 << (1u32 << n) {
        let ext = subset(n, mask);
        let mut ks: Vec<DistKind> = Vec::new();
        for k in kinds {
            match k {
                DistKind::Perturbed(_) => ks.extend((0..1u32 << n).map(DistKind::Perturbed)),
                k => ks.push(*k),
            }
        }
        for k in ks {
            let fd = FamilyDist::new(k, ext.clone()).canonical();
            if seen.insert(fd.clone()) {
                let c = family_dist_complexity(&fd)?;
                if c <= cap {
                    out.push((c, fd));
                }
            }
        }
    }
    Ok(())
}

fn collect(dfam: &DistributionFamily, n: u32, cap: u32, out: &mut Vec<DistEntry>) -> Result<()> {
    let family_kind = |kind: DistKind, f: FamilyId, out: &mut Vec<DistEntry>| -> Result<()> {
        check_family(f, n)?;
        if f == FamilyId::AllSubsets {
            let mut v = Vec::new();
            all_subsets_dists(n, &[kind], cap, &mut v)?;
            out.extend(v.into_iter().map(|(c, fd)| DistEntry { complexity: c, dist: DistHandle::Family(fd) }));
            return Ok(());
        }
        if !matches!(kind, DistKind::Perturbed(_)) {
            // same set as filtering the registry, without walking every perturbed form
            let mut seen = BTreeSet::new();
            for e in table(n)?.entries().iter().filter(|e| e.in_family(f)) {
                let fd = FamilyDist::new(kind, e.ext().clone()).canonical();
                if seen.insert(fd.clone()) {
                    let c = family_dist_complexity(&fd)?;
                    if c <= cap {
                        out.push(DistEntry { complexity: c, dist: DistHandle::Family(fd) });
                    }
                }
            }
            return Ok(());
        }
        for e in registry(n, cap)?.iter() {
            if matches_family(&e.dist, kind, f) {
                out.push(DistEntry { complexity: e.complexity, dist: DistHandle::Family(e.dist.clone()) });
            }
        }
        Ok(())
    };
    match dfam {
        DistributionFamily::Uniform(f) => family_kind(DistKind::Uniform, *f, out)?,
        DistributionFamily::HalfCube(f) => family_kind(DistKind::HalfCube, *f, out)?,
        DistributionFamily::Perturbed(f) => family_kind(DistKind::Perturbed(0), *f, out)?,
        DistributionFamily::Clones(params) => {
            if params.n() != n {
                return Err(Error::MixedUniverse);
            }
            let a = FiniteModel::from_params(params.clone());
            for s in 0..1u32 << n {
                let fd = FamilyDist::new(DistKind::Perturbed(s), a.extension().clone()).canonical();
                let c = family_dist_complexity(&fd)?;
                if c <= cap {
                    out.push(DistEntry { complexity: c, dist: DistHandle::Family(fd) });
                }
            }
        }
        DistributionFamily::PointMasses => {
            for y in 0..1u32 << n {
                let mut ext = Extension::empty(n);
                ext.insert(y);
                let fd = FamilyDist::new(DistKind::Uniform, ext).canonical();
                let c = family_dist_complexity(&fd)?;
                if c <= cap {
                    out.push(DistEntry { complexity: c, dist: DistHandle::Family(fd) });
                }
            }
        }
        DistributionFamily::Registry => {
            out.extend(registry(n, cap)?.iter().map(|e| DistEntry {
                complexity: e.complexity,
                dist: DistHandle::Family(e.dist.clone()),
            }));
        }
        DistributionFamily::List(list) => {
            let sys = DescriptionSystem::standard();
            for p in list {
                if p.n() != n {
                    return Err(Error::MixedUniverse);
                }
                let dist = match FamilyDist::representations(p).into_iter().next() {
                    Some(fd) => DistHandle::Family(fd.canonical()),
                    None => DistHandle::Explicit(p.clone()),
                };
                let c = complexity_in(&sys, &Object::Distribution(p.clone()))?.value;
                if c <= cap {
                    out.push(DistEntry { complexity: c, dist });
                }
            }
        }
        DistributionFamily::Union(parts) => {
            for part in parts {
                // a member family may be undefined at this length; the union skips it
                match collect(part, n, cap, out) {
                    Err(Error::ObjectOutOfBounds(_)) if parts.len() > 1 => {}
                    r => r?,
                }
            }
        }
    }
    Ok(())
}

fn dist_order(a: &DistEntry, b: &DistEntry) -> std::cmp::Ordering {
    use DistHandle::*;
    a.complexity.cmp(&b.complexity).then_with(|| match (&a.dist, &b.dist) {
        (Family(x), Family(y)) => x.cmp(y),
        (Family(_), Explicit(_)) => std::cmp::Ordering::Less,
        (Explicit(_), Family(_)) => std::cmp::Ordering::Greater,
        (Explicit(x), Explicit(y)) => x.serialize().cmp(&y.serialize()),
    })
}

/// Every distribution of `dfam` over `B^n` with `C(P) <= cap`, each once, ordered by
/// `(C(P), canonical form)`.
pub fn enumerate_distributions(dfam: &DistributionFamily, n: u32, cap: u32) -> Result<Vec<DistEntry>> {
    check_cap(cap)?;
    if n == 0 || n > TABLE_MAX_N {
        return Err(Error::ObjectOutOfBounds(format!("distributions over B^{n}")));
    }
    let mut out = Vec::new();
    collect(dfam, n, cap, &mut out)?;
    out.sort_by(dist_order);
    out.dedup_by(|a, b| a.dist == b.dist);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelParams;
    use crate::codebook::engine::{apriori, c};
    use crate::models::parse_model;

    #[test]
    fn direct_family_listing_matches_registry_filter() {
        for n in 2..=4 {
            for f in [FamilyId::Cylinders, FamilyId::HammingBalls, FamilyId::PrefixSets, FamilyId::LexIntervals, FamilyId::Singletons] {
                for kind in [DistKind::Uniform, DistKind::HalfCube] {
                    let dfam = match kind {
                        DistKind::Uniform => DistributionFamily::Uniform(f),
                        _ => DistributionFamily::HalfCube(f),
                    };
                    let got: Vec<(u32, String)> = enumerate_distributions(&dfam, n, 30).unwrap().into_iter().map(|e| (e.complexity, e.dist.label())).collect();
                    let mut want: Vec<(u32, String)> = registry(n, 30)
                        .unwrap()
                        .iter()
                        .filter(|e| matches_family(&e.dist, kind, f))
                        .map(|e| (e.complexity, DistHandle::Family(e.dist.clone()).label()))
                        .collect();
                    want.sort();
                    let mut g = got.clone();
                    g.sort();
                    assert_eq!(g, want, "{f} {kind:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn singletons_over_two_bits() {
        let v = enumerate_models(FamilyId::Singletons, 2, 40).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_cap_is_empty() {
        for f in FamilyId::ENUMERABLE {
            if f.available(4) {
                assert!(enumerate_models(f, 4, 0).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn caps_and_families_validated() {
        assert!(matches!(enumerate_models(FamilyId::Cylinders, 4, 41), Err(Error::CapTooLarge { .. })));
        assert!(matches!(enumerate_models(FamilyId::Explicit, 4, 20), Err(Error::UnknownFamily(_))));
        assert!(matches!(enumerate_models(FamilyId::PlaneLines, 3, 20), Err(Error::ObjectOutOfBounds(_))));
        assert!(matches!(enumerate_models(FamilyId::AllSubsets, 5, 20), Err(Error::ObjectOutOfBounds(_))));
    }

    #[test]
    fn cylinders_at_four_bits_are_the_distinct_extensions() {
        let v = enumerate_model_entries(FamilyId::Cylinders, 4, 40).unwrap();
        let distinct: BTreeSet<Extension> =
            ModelParams::enumerate(FamilyId::Cylinders, 4).iter().map(|p| p.extension()).collect();
        // 3^4 parameter choices, every one a different set
        assert_eq!(distinct.len(), 81);
        assert_eq!(v.len(), 81);
        for e in &v {
            assert_eq!(e.complexity, c(e.model.clone()).unwrap());
            assert_eq!(e.apriori, apriori(e.model.clone()).unwrap().value);
        }
    }

    #[test]
    fn cap_filters_exactly() {
        let all = enumerate_model_entries(FamilyId::HammingBalls, 4, 40).unwrap();
        for cap in [10, 14, 18, 22] {
            let got = enumerate_models(FamilyId::HammingBalls, 4, cap).unwrap();
            let want: Vec<FiniteModel> =
                all.iter().filter(|e| e.complexity <= cap).map(|e| e.model.clone()).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn all_subsets_at_two_bits() {
        let v = enumerate_model_entries(FamilyId::AllSubsets, 2, 40).unwrap();
        assert_eq!(v.len(), 15);
        assert!(v.windows(2).all(|w| w[0].model < w[1].model));
        let cyl = parse_model("cyl n=2 mask=10 pat=0").unwrap();
        assert!(v.iter().any(|e| e.model == cyl));
    }

    #[test]
    fn membership_agrees_with_extension() {
        for f in [FamilyId::Cylinders, FamilyId::HammingBalls, FamilyId::LexIntervals, FamilyId::PrefixSets] {
            for p in ModelParams::enumerate(f, 5) {
                let e = p.extension();
                for x in BitString::all(5) {
                    assert_eq!(p.contains(&x), e.contains(&x), "{p} {x}");
                }
                assert_eq!(p.cardinality(), e.count());
            }
        }
    }

    #[test]
    fn point_masses_and_clones() {
        let pts = enumerate_distributions(&DistributionFamily::PointMasses, 3, 40).unwrap();
        assert_eq!(pts.len(), 8);
        let a = parse_model("cyl n=3 mask=100 pat=0").unwrap();
        let clones =
            enumerate_distributions(&DistributionFamily::Clones(a.origin().unwrap().clone()), 3, 40).unwrap();
        assert_eq!(clones.len(), 8);
        for e in &clones {
            assert_eq!(e.complexity, c(e.dist.materialize()).unwrap());
        }
    }

    #[test]
    fn uniform_family_follows_the_model_family() {
        let v = enumerate_distributions(&DistributionFamily::Uniform(FamilyId::Cylinders), 3, 40).unwrap();
        let models = enumerate_models(FamilyId::Cylinders, 3, 40).unwrap();
        assert_eq!(v.len(), models.len());
        assert!(v.windows(2).all(|w| dist_order(&w[0], &w[1]).is_lt()));
    }

    #[test]
    fn mixtures_union_skips_unavailable_members() {
        let v = enumerate_distributions(&DistributionFamily::mixtures(), 3, 22).unwrap();
        assert!(!v.is_empty());
        assert!(v.iter().all(|e| e.complexity <= 22));
    }
}
