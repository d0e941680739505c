//! Exact minimum code length and exact a-priori mass of every object.
//!
//! Each scheme contributes either individual codes or closed-form groups of codes
//! (all explicit sets of a given size, all perturbation points outside the data, ...).
//! Minimum and mass are accumulated in one pass; witnesses are materialized only for
//! candidates that tie or beat the current best.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::{ceil_log2, gamma_len, BitString, Bits, StringTuple};
use crate::codebook::atoms;
use crate::codebook::codec::{
    all_subsets_body, all_subsets_body_len, explicit_body, explicit_body_len, explicit_dist_len,
    explicit_dist_len_bound, explicit_dist_payload, header, KIND_BITS, KIND_EXPLICIT,
};
use crate::codebook::famdist::FamilyDist;
use crate::codebook::sf::{sf_len, SfCode};
use crate::codebook::system::{
    AprioriMass, Code, CodeScheme, ComplexityReport, DescriptionSystem, Object, Scheme,
};
use crate::codebook::table::{table, ModelTable, TableEntry, TABLE_MAX_N};
use crate::error::{Error, Result};
use crate::models::family::{Word, ALL_SUBSETS_MAX_N};
use crate::models::{DistKind, FiniteModel, RationalDistribution};
use crate::scalar::Dyadic;

/// Running minimum (with lexicographic tie-break) and running mass.
pub(crate) struct Tally {
    best: Option<(Bits, CodeScheme)>,
    mass: Dyadic,
    want_mass: bool,
}

impl Tally {
    pub(crate) fn new(want_mass: bool) -> Self {
        Self { best: None, mass: Dyadic::zero(), want_mass }
    }

    pub(crate) fn best_len(&self) -> u32 {
        self.best.as_ref().map(|b| b.0.len() as u32).unwrap_or(u32::MAX)
    }

    /// Whether a candidate of this length could still matter for the minimum.
    pub(crate) fn competitive(&self, len: u32) -> bool {
        len <= self.best_len()
    }

    pub(crate) fn offer(&mut self, len: u32, scheme: CodeScheme, make: impl FnOnce() -> Bits) {
        if !self.competitive(len) {
            return;
        }
        let code = make();
        debug_assert_eq!(code.len() as u32, len, "{scheme}");
        let better = match &self.best {
            None => true,
            Some((b, _)) => code.len() < b.len() || code < *b,
        };
        if better {
            self.best = Some((code, scheme));
        }
    }

    pub(crate) fn add(&mut self, d: impl FnOnce() -> Dyadic) {
        if self.want_mass {
            self.mass += &d();
        }
    }

    pub(crate) fn into_report(self, what: &str) -> Result<ComplexityReport> {
        let (bits, scheme) = self.best.ok_or_else(|| Error::NoCode(what.to_string()))?;
        Ok(ComplexityReport { value: bits.len() as u32, witness: Code { bits, scheme } })
    }

    pub(crate) fn mass(self) -> Dyadic {
        self.mass
    }
}

/// Shortest atom code and total atom weight of every string of one length.
pub(crate) struct AtomTable {
    min_len: Vec<u32>,
    shortest: Vec<Bits>,
    weight: Vec<Dyadic>,
    total: Dyadic,
    /// Values sorted by (shortest length, shortest code).
    order: Vec<u32>,
}

impl AtomTable {
    fn build(n: u32) -> Self {
        let size = 1u32 << n;
        let words: Vec<Word> = (0..size).map(|v| Word::new(n, v)).collect();
        let min_len: Vec<u32> = words.iter().map(|w| atoms::min_len(*w)).collect();
        let shortest: Vec<Bits> = words.iter().map(|w| atoms::shortest(*w)).collect();
        let weight = words.iter().map(|w| atoms::weight(*w)).collect();
        let mut order: Vec<u32> = (0..size).collect();
        order.sort_by(|a, b| {
            min_len[*a as usize].cmp(&min_len[*b as usize]).then_with(|| shortest[*a as usize].cmp(&shortest[*b as usize]))
        });
        Self { min_len, shortest, weight, total: atoms::total_weight(n), order }
    }

    pub(crate) fn min_len(&self, v: u32) -> u32 {
        self.min_len[v as usize]
    }

    pub(crate) fn shortest(&self, v: u32) -> &Bits {
        &self.shortest[v as usize]
    }

    pub(crate) fn weight(&self, v: u32) -> &Dyadic {
        &self.weight[v as usize]
    }

    /// Values outside `exclude` with the shortest atom code, in tie-break order.
    pub(crate) fn cheapest_outside(&self, exclude: &[u32]) -> Vec<u32> {
        let mut out = Vec::new();
        for &v in &self.order {
            if exclude.contains(&v) {
                continue;
            }
            if out.first().is_some_and(|f: &u32| self.min_len(*f) < self.min_len(v)) {
                break;
            }
            out.push(v);
        }
        out
    }

    /// Total atom weight of values outside `exclude` (which must be distinct).
    pub(crate) fn weight_outside(&self, exclude: &[u32]) -> Dyadic {
        let inside = exclude.iter().fold(Dyadic::zero(), |acc, v| &acc + self.weight(*v));
        self.total.checked_sub(&inside).expect("subset weight below total")
    }
}

static ATOM_TABLES: [OnceLock<AtomTable>; TABLE_MAX_N as usize + 1] =
    [const { OnceLock::new() }; TABLE_MAX_N as usize + 1];

pub(crate) fn atom_table(n: u32) -> &'static AtomTable {
    ATOM_TABLES[n as usize].get_or_init(|| AtomTable::build(n))
}

fn check_n(sys: &DescriptionSystem, n: u32) -> Result<&'static ModelTable> {
    if n > sys.max_n() {
        return Err(Error::ObjectOutOfBounds(format!("n = {n} exceeds the system limit {}", sys.max_n())));
    }
    table(n)
}

fn pow2(len: u32) -> Dyadic {
    Dyadic::pow2_neg(len)
}

fn push_index(b: &mut Bits, idx: u64, card: u64) {
    b.push_uint(idx, ceil_log2(card));
}

/// Body of a family distribution code (kind bits, model body, perturbation atom).
pub(crate) fn family_dist_body(kind: DistKind, e: &TableEntry, atoms_n: &AtomTable) -> Bits {
    let mut b = Bits::new();
    b.push_uint(kind.code() as u64, KIND_BITS);
    b.extend(&e.witness);
    if let DistKind::Perturbed(s) = kind {
        b.extend(atoms_n.shortest(s));
    }
    b
}

pub(crate) fn family_dist_body_len(kind: DistKind, e: &TableEntry, atoms_n: &AtomTable) -> u32 {
    KIND_BITS
        + e.min_len
        + match kind {
            DistKind::Perturbed(s) => atoms_n.min_len(s),
            _ => 0,
        }
}

pub(crate) fn family_dist_body_weight(kind: DistKind, e: &TableEntry, atoms_n: &AtomTable) -> Dyadic {
    let w = e.weight.shr(KIND_BITS);
    match kind {
        DistKind::Perturbed(s) => w.mul(atoms_n.weight(s)),
        _ => w,
    }
}

/// `sum_{m=d}^{2^n} C(2^n - d, m - d) 2^-(fixed + body(m) + l ceil_log2 m)`: every
/// explicit or all-subsets set containing `d` given strings.
fn closed_form_mass(n: u32, d: u64, fixed: u32, l: u32, body: impl Fn(u64) -> u32) -> Dyadic {
    let size = 1u64 << n;
    let free = size - d;
    let mut acc = Dyadic::zero();
    let mut binom = BigUint::one();
    for m in d..=size {
        let k = m - d;
        if k > 0 {
            binom = binom * BigUint::from(free - k + 1) / BigUint::from(k);
        }
        acc += &pow2(fixed + body(m) + l * ceil_log2(m)).scale(&binom);
    }
    acc
}

/// Shannon-Fano length of `y` under half-cube over a set of size `card`.
fn half_cube_len(n: u32, in_a: bool, card: u64) -> u32 {
    sf_len(&crate::models::distribution::kind_prob(DistKind::HalfCube, n, in_a, card, 0))
}

// ---------------------------------------------------------------- strings

pub(crate) fn analyze_string(sys: &DescriptionSystem, x: &BitString, want_mass: bool) -> Result<Tally> {
    let n = x.len();
    let t = check_n(sys, n)?;
    let at = atom_table(n);
    let mut tally = Tally::new(want_mass);
    let gn = gamma_len(n as u64);

    if sys.enabled(Scheme::Literal) {
        let len = 2 + gn + n;
        tally.offer(len, CodeScheme::Plain(Scheme::Literal), || {
            let mut b = Bits::new();
            b.push_str_bits(header::LITERAL);
            b.push_gamma(n as u64);
            b.push_string(x);
            b
        });
        tally.add(|| pow2(len));
    }

    if sys.enabled(Scheme::Periodic) {
        let w = Word::of(x);
        for p in 1..=n {
            if !atoms::is_periodic(w, p) {
                continue;
            }
            let len = 4 + gn + gamma_len(p as u64) + p;
            tally.offer(len, CodeScheme::Plain(Scheme::Periodic), || {
                let mut b = Bits::new();
                b.push_str_bits(header::PERIODIC);
                b.push_gamma(n as u64);
                b.push_gamma(p as u64);
                b.push_uint((x.value() >> (n - p)) as u64, p);
                b
            });
            tally.add(|| pow2(len));
        }
    }

    let xs = [*x];
    if sys.enabled(Scheme::TwoPart) {
        let scheme = CodeScheme::Plain(Scheme::TwoPart);
        for (_, e) in t.containing(&xs) {
            let card = e.card();
            let len = 3 + e.min_len + ceil_log2(card);
            tally.offer(len, scheme, || {
                let mut b = Bits::new();
                b.push_str_bits(header::TWO_PART);
                b.extend(&e.witness);
                push_index(&mut b, e.ext().rank(x.value()), card);
                b
            });
            tally.add(|| e.weight.shr(3 + ceil_log2(card)));
        }
        let single = FiniteModel::explicit(&xs)?;
        if n <= ALL_SUBSETS_MAX_N {
            tally.offer(3 + all_subsets_body_len(n), scheme, || {
                let mut b = Bits::new();
                b.push_str_bits(header::TWO_PART);
                b.extend(&all_subsets_body(single.extension()));
                b
            });
            tally.add(|| closed_form_mass(n, 1, 3, 1, |_| all_subsets_body_len(n)));
        }
        tally.offer(3 + explicit_body_len(n, 1), scheme, || {
            let mut b = Bits::new();
            b.push_str_bits(header::TWO_PART);
            b.extend(&explicit_body(single.extension()));
            b
        });
        tally.add(|| closed_form_mass(n, 1, 3, 1, |m| explicit_body_len(n, m)));
    }

    if sys.enabled(Scheme::ViaDistribution) {
        via_distribution(&mut tally, t, at, &StringTuple::single(*x), Scheme::ViaDistribution);
    }
    Ok(tally)
}

/// Codes through a family distribution followed by Shannon-Fano codewords of the data.
/// Shared by strings (`1010`) and tuples (`1110`, with the EG(l-1) count).
fn via_distribution(tally: &mut Tally, t: &ModelTable, at: &AtomTable, xs: &StringTuple, scheme: Scheme) {
    let n = xs.n();
    let l = xs.l() as u32;
    let tuple = scheme == Scheme::TupleDistribution;
    let fixed = if tuple { 4 + gamma_len(l as u64 - 1) } else { 4 };
    let hdr = if tuple { header::TUPLE_DISTRIBUTION } else { header::VIA_DISTRIBUTION };
    let cs = CodeScheme::Plain(scheme);
    let distinct: Vec<u32> = xs.distinct().iter().map(|x| x.value()).collect();

    let emit = |kind: DistKind, e: &TableEntry| -> Bits {
        let fd = FamilyDist::new(kind, e.ext().clone());
        let p = fd.materialize();
        let code = SfCode::new(&p).expect("short codewords");
        let mut b = Bits::new();
        b.push_str_bits(hdr);
        b.extend(&family_dist_body(kind, e, at));
        if tuple {
            b.push_gamma(l as u64 - 1);
        }
        for x in xs.iter() {
            b.extend(&code.codeword(x).expect("in support"));
        }
        b
    };

    for e in t.entries() {
        let card = e.card();
        let inside: Vec<bool> = xs.iter().map(|x| e.ext().contains_value(x.value())).collect();
        let all_in = inside.iter().all(|b| *b);
        let idx_len = 1 + ceil_log2(card);

        if all_in {
            let data = l * ceil_log2(card);
            let len = fixed + KIND_BITS + e.min_len + data;
            tally.offer(len, cs, || emit(DistKind::Uniform, e));
            tally.add(|| e.weight.shr(fixed + KIND_BITS + data));
        }

        let data: u32 = inside.iter().map(|i| half_cube_len(n, *i, card)).sum();
        let len = fixed + KIND_BITS + e.min_len + data;
        tally.offer(len, cs, || emit(DistKind::HalfCube, e));
        tally.add(|| e.weight.shr(fixed + KIND_BITS + data));

        // perturbation point outside the data: every element must lie in the set
        if all_in {
            let data = l * idx_len;
            let base = fixed + KIND_BITS + e.min_len + data;
            let cheapest = at.cheapest_outside(&distinct);
            if let Some(&first) = cheapest.first() {
                let len = base + at.min_len(first);
                if tally.competitive(len) {
                    for s in cheapest {
                        tally.offer(len, cs, || emit(DistKind::Perturbed(s), e));
                    }
                }
            }
            tally.add(|| e.weight.shr(fixed + KIND_BITS + data).mul(&at.weight_outside(&distinct)));
        }

        // perturbation point on one of the data strings
        for &s in &distinct {
            let mut data = 0u32;
            let mut ok = true;
            for (x, i) in xs.iter().zip(&inside) {
                if x.value() == s {
                    let p = crate::models::distribution::kind_prob(DistKind::Perturbed(s), n, *i, card, s);
                    data += sf_len(&p);
                } else if *i {
                    data += idx_len;
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let len = fixed + KIND_BITS + e.min_len + at.min_len(s) + data;
            tally.offer(len, cs, || emit(DistKind::Perturbed(s), e));
            tally.add(|| e.weight.shr(fixed + KIND_BITS + data).mul(at.weight(s)));
        }
    }
}

// ---------------------------------------------------------------- tuples

pub(crate) fn analyze_tuple(sys: &DescriptionSystem, xs: &StringTuple, want_mass: bool) -> Result<Tally> {
    if xs.l() == 1 {
        return analyze_string(sys, &xs.items()[0], want_mass);
    }
    let n = xs.n();
    let l = xs.l() as u32;
    let t = check_n(sys, n)?;
    let at = atom_table(n);
    let mut tally = Tally::new(want_mass);
    let gn = gamma_len(n as u64);
    let gl = gamma_len(l as u64 - 1);

    if sys.enabled(Scheme::TupleLiteral) {
        let len = 4 + gn + gl + l * n;
        tally.offer(len, CodeScheme::Plain(Scheme::TupleLiteral), || {
            let mut b = Bits::new();
            b.push_str_bits(header::TUPLE_LITERAL);
            b.push_gamma(n as u64);
            b.push_gamma(l as u64 - 1);
            for x in xs.iter() {
                b.push_string(x);
            }
            b
        });
        tally.add(|| pow2(len));
    }

    let distinct = xs.distinct();
    let d = distinct.len() as u64;
    if sys.enabled(Scheme::TupleModel) {
        let scheme = CodeScheme::Plain(Scheme::TupleModel);
        let with_body = |body: &Bits, a: &crate::bits::Extension| {
            let mut b = Bits::new();
            b.push_str_bits(header::TUPLE_MODEL);
            b.extend(body);
            b.push_gamma(l as u64 - 1);
            for x in xs.iter() {
                push_index(&mut b, a.rank(x.value()), a.count());
            }
            b
        };
        for (_, e) in t.containing(&distinct) {
            let data = l * ceil_log2(e.card());
            tally.offer(4 + e.min_len + gl + data, scheme, || with_body(&e.witness, e.ext()));
            tally.add(|| e.weight.shr(4 + gl + data));
        }
        let dset = FiniteModel::explicit(&distinct)?;
        let data = l * ceil_log2(d);
        if n <= ALL_SUBSETS_MAX_N {
            tally.offer(4 + all_subsets_body_len(n) + gl + data, scheme, || {
                with_body(&all_subsets_body(dset.extension()), dset.extension())
            });
            tally.add(|| closed_form_mass(n, d, 4 + gl, l, |_| all_subsets_body_len(n)));
        }
        tally.offer(4 + explicit_body_len(n, d) + gl + data, scheme, || {
            with_body(&explicit_body(dset.extension()), dset.extension())
        });
        tally.add(|| closed_form_mass(n, d, 4 + gl, l, |m| explicit_body_len(n, m)));
    }

    if sys.enabled(Scheme::TupleDistribution) {
        via_distribution(&mut tally, t, at, xs, Scheme::TupleDistribution);
    }
    Ok(tally)
}

// ---------------------------------------------------------------- models

pub(crate) fn analyze_model(sys: &DescriptionSystem, a: &FiniteModel, want_mass: bool) -> Result<Tally> {
    let n = a.n();
    let t = check_n(sys, n)?;
    let mut tally = Tally::new(want_mass);
    if !sys.enabled(Scheme::Model) {
        return Ok(tally);
    }
    let scheme = CodeScheme::Plain(Scheme::Model);
    let with_body = |body: &Bits| {
        let mut b = Bits::new();
        b.push_str_bits(header::MODEL);
        b.extend(body);
        b
    };
    if let Some(e) = t.entry_of(a.extension()) {
        tally.offer(3 + e.min_len, scheme, || with_body(&e.witness));
        tally.add(|| e.weight.shr(3));
    }
    if n <= ALL_SUBSETS_MAX_N {
        let len = 3 + all_subsets_body_len(n);
        tally.offer(len, scheme, || with_body(&all_subsets_body(a.extension())));
        tally.add(|| pow2(len));
    }
    let len = 3 + explicit_body_len(n, a.cardinality());
    tally.offer(len, scheme, || with_body(&explicit_body(a.extension())));
    tally.add(|| pow2(len));
    Ok(tally)
}

// ---------------------------------------------------------------- distributions

pub(crate) fn analyze_distribution(
    sys: &DescriptionSystem,
    p: &RationalDistribution,
    want_mass: bool,
) -> Result<Tally> {
    let n = p.n();
    let t = check_n(sys, n)?;
    let at = atom_table(n);
    let mut tally = Tally::new(want_mass);
    if !sys.enabled(Scheme::Distribution) {
        return Ok(tally);
    }
    let scheme = CodeScheme::Plain(Scheme::Distribution);
    for fd in FamilyDist::representations(p) {
        let Some(e) = t.entry_of(&fd.ext) else { continue };
        let len = 3 + family_dist_body_len(fd.kind, e, at);
        tally.offer(len, scheme, || {
            let mut b = Bits::new();
            b.push_str_bits(header::DISTRIBUTION);
            b.extend(&family_dist_body(fd.kind, e, at));
            b
        });
        tally.add(|| family_dist_body_weight(fd.kind, e, at).shr(3));
    }
    let m = p.support().len() as u64;
    if tally.want_mass || tally.competitive(3 + explicit_dist_len_bound(n, m)) {
        let len = 3 + explicit_dist_len(p);
        tally.offer(len, scheme, || {
            let mut b = Bits::new();
            b.push_str_bits(header::DISTRIBUTION);
            b.push_uint(KIND_EXPLICIT as u64, KIND_BITS);
            b.extend(&explicit_dist_payload(p));
            b
        });
        tally.add(|| pow2(len));
    }
    Ok(tally)
}

/// `C(Q)` for a family distribution without materializing it unless its explicit code
/// could be the shortest.
pub(crate) fn family_dist_complexity(fd: &FamilyDist) -> Result<u32> {
    let n = fd.n();
    let t = table(n)?;
    let at = atom_table(n);
    let mut best = u32::MAX;
    for eq in fd.equivalents() {
        if let Some(e) = t.entry_of(&eq.ext) {
            best = best.min(3 + family_dist_body_len(eq.kind, e, at));
        }
    }
    if 3 + explicit_dist_len_bound(n, fd.support_size()) < best {
        best = best.min(3 + explicit_dist_len(&fd.materialize()));
    }
    Ok(best)
}

// ---------------------------------------------------------------- public entry points

fn analyze(sys: &DescriptionSystem, obj: &Object, want_mass: bool) -> Result<Tally> {
    match obj {
        Object::String(x) => analyze_string(sys, x, want_mass),
        Object::Tuple(xs) => analyze_tuple(sys, xs, want_mass),
        Object::Model(a) => analyze_model(sys, a, want_mass),
        Object::Distribution(p) => analyze_distribution(sys, p, want_mass),
    }
}

/// Exact minimum code length of `obj` under `sys`, with the lexicographically first
/// shortest code as witness.
pub fn complexity_in(sys: &DescriptionSystem, obj: &Object) -> Result<ComplexityReport> {
    analyze(sys, obj, false)?.into_report(&obj.to_string())
}

/// Exact `sum 2^-|c|` over every code of `obj` under `sys`.
pub fn apriori_in(sys: &DescriptionSystem, obj: &Object) -> Result<AprioriMass> {
    Ok(AprioriMass { value: analyze(sys, obj, true)?.mass() })
}

fn standard() -> &'static DescriptionSystem {
    static SYS: OnceLock<DescriptionSystem> = OnceLock::new();
    SYS.get_or_init(DescriptionSystem::standard)
}

pub fn complexity(obj: impl Into<Object>) -> Result<ComplexityReport> {
    complexity_in(standard(), &obj.into())
}

pub fn apriori(obj: impl Into<Object>) -> Result<AprioriMass> {
    apriori_in(standard(), &obj.into())
}

/// `C(obj)` as a bare number.
pub fn c(obj: impl Into<Object>) -> Result<u32> {
    complexity(obj).map(|r| r.value)
}

/// Complexity of the set, cached per table entry on first use.
pub(crate) fn model_complexity_cached(n: u32, idx: usize) -> Result<u32> {
    static CACHE: [OnceLock<Vec<u32>>; TABLE_MAX_N as usize + 1] = [const { OnceLock::new() }; TABLE_MAX_N as usize + 1];
    let t = table(n)?;
    let v = CACHE[n as usize].get_or_init(|| {
        t.entries()
            .iter()
            .map(|e| {
                let mut best = 3 + e.min_len;
                if n <= ALL_SUBSETS_MAX_N {
                    best = best.min(3 + all_subsets_body_len(n));
                }
                best.min(3 + explicit_body_len(n, e.card()))
            })
            .collect()
    });
    Ok(v[idx])
}

/// `m(A)` for the table entry `idx`, memoized per `n`.
pub(crate) fn model_apriori_cached(n: u32, idx: usize) -> Result<Dyadic> {
    static CACHE: [OnceLock<Vec<Dyadic>>; TABLE_MAX_N as usize + 1] = [const { OnceLock::new() }; TABLE_MAX_N as usize + 1];
    let t = table(n)?;
    let v = CACHE[n as usize].get_or_init(|| {
        t.entries()
            .iter()
            .map(|e| {
                let mut m = e.weight.shr(3);
                if n <= ALL_SUBSETS_MAX_N {
                    m += &pow2(3 + all_subsets_body_len(n));
                }
                m += &pow2(3 + explicit_body_len(n, e.card()));
                m
            })
            .collect()
    });
    Ok(v[idx].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::parse_model;

    fn s(x: &str) -> BitString {
        x.parse().unwrap()
    }

    #[test]
    fn literal_bound_holds() {
        for n in 1..=6 {
            for x in BitString::all(n) {
                let r = complexity(x).unwrap();
                assert!(r.value <= n + 2 * (31 - n.leading_zeros()) + 3);
                assert!(r.value >= 1);
            }
        }
    }

    #[test]
    fn zeros_use_periodic_code() {
        let r = complexity(s("00000000")).unwrap();
        // 4 + EG(8) + EG(1) + 1
        assert_eq!(r.value, 4 + 7 + 1 + 1);
        assert_eq!(r.witness.scheme, CodeScheme::Plain(Scheme::Periodic));
    }

    #[test]
    fn apriori_dominates_witness() {
        for x in BitString::all(3) {
            let c = complexity(x).unwrap().value;
            let m = apriori(x).unwrap().value;
            assert!(m >= Dyadic::pow2_neg(c));
        }
        let a = parse_model("cyl n=4 mask=1000 pat=0").unwrap();
        let c = complexity(a.clone()).unwrap().value;
        assert!(apriori(a).unwrap().value >= Dyadic::pow2_neg(c));
    }

    #[test]
    fn singleton_masses_are_complement_symmetric() {
        let m = |x: &str| apriori(FiniteModel::explicit(&[s(x)]).unwrap()).unwrap().value;
        assert_eq!(m("00"), m("11"));
        assert_eq!(m("01"), m("10"));
        // periodic atoms make constant strings cheaper
        assert!(m("00") > m("01"));
    }

    #[test]
    fn cached_model_complexity_matches_engine() {
        let t = table(3).unwrap();
        for (i, e) in t.entries().iter().enumerate() {
            assert_eq!(model_complexity_cached(3, i).unwrap(), c(e.model.clone()).unwrap());
        }
    }

    #[test]
    fn family_dist_complexity_matches_engine() {
        let t = table(2).unwrap();
        for e in t.entries() {
            for kind in [DistKind::Uniform, DistKind::HalfCube, DistKind::Perturbed(1)] {
                let fd = FamilyDist::new(kind, e.ext().clone());
                assert_eq!(family_dist_complexity(&fd).unwrap(), c(fd.materialize()).unwrap(), "{fd:?}");
            }
        }
    }

    #[test]
    fn out_of_range_is_refused() {
        let x = BitString::new(12, 5).unwrap();
        assert!(matches!(complexity(x), Err(Error::ObjectOutOfBounds(_))));
    }
}
