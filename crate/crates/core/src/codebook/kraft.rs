//! Kraft audit: exact code-length histograms of every scheme, and a brute-force
//! enumerator over the decoder to check them against.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bits::{ceil_log2, gamma_len, BitReader, Bits};
use crate::codebook::atoms;
use crate::codebook::codec::{all_subsets_body_len, explicit_body_len, KIND_BITS};
use crate::codebook::decode::read_object;
use crate::codebook::sf::sf_len;
use crate::codebook::system::{DescriptionSystem, Object, Scheme, CODEBOOK_VERSION};
use crate::codebook::table::{table, TableEntry};
use crate::models::distribution::kind_prob;
use crate::models::family::{Word, ALL_SUBSETS_MAX_N};
use crate::models::DistKind;

/// Codes longer than this are outside the audit.
pub const MAX_CODE_LEN: u32 = 40;

const W: usize = MAX_CODE_LEN as usize + 1;

/// Number of codes of each length `0..=MAX_CODE_LEN`.
pub type Hist = Vec<u128>;

fn hist() -> Hist {
    vec![0; W]
}

fn add_at(h: &mut Hist, len: u32, count: u128) {
    if len <= MAX_CODE_LEN && count > 0 {
        h[len as usize] += count;
    }
}

fn from_pairs(pairs: &[(u32, u64)]) -> Hist {
    let mut h = hist();
    for &(l, c) in pairs {
        add_at(&mut h, l, c as u128);
    }
    h
}

fn delta(len: u32) -> Hist {
    let mut h = hist();
    add_at(&mut h, len, 1);
    h
}

fn convolve(a: &Hist, b: &Hist) -> Hist {
    let mut out = hist();
    for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x > 0) {
        for (j, &y) in b[..W - i].iter().enumerate().filter(|(_, y)| **y > 0) {
            out[i + j] += x * y;
        }
    }
    out
}

fn accumulate(acc: &mut Hist, h: &Hist) {
    for (a, b) in acc.iter_mut().zip(h) {
        *a += b;
    }
}

fn min_len(h: &Hist) -> Option<u32> {
    h.iter().position(|c| *c > 0).map(|i| i as u32)
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Distribution shapes whose Shannon-Fano lengths depend only on `(n, |E|)`.
#[derive(Clone, Copy)]
enum Shape {
    Uniform,
    HalfCube,
    PerturbedIn,
    PerturbedOut,
}

fn sf_hist(shape: Shape, n: u32, card: u64) -> Hist {
    let len = |kind, in_a, y| sf_len(&kind_prob(kind, n, in_a, card, y));
    let mut h = hist();
    let size = 1u64 << n;
    match shape {
        Shape::Uniform => add_at(&mut h, ceil_log2(card), card as u128),
        Shape::HalfCube => {
            add_at(&mut h, len(DistKind::HalfCube, true, 0), card as u128);
            add_at(&mut h, len(DistKind::HalfCube, false, 0), (size - card) as u128);
        }
        Shape::PerturbedIn => {
            add_at(&mut h, len(DistKind::Perturbed(0), true, 0), 1);
            add_at(&mut h, len(DistKind::Perturbed(0), true, 1), (card - 1) as u128);
        }
        Shape::PerturbedOut => {
            add_at(&mut h, len(DistKind::Perturbed(0), false, 0), 1);
            add_at(&mut h, len(DistKind::Perturbed(0), true, 1), card as u128);
        }
    }
    h
}

/// `sum_{l >= 2} 2^-gamma(l-1) * one^(l)`: the data part of every tuple of length `l >= 2`.
fn tuple_tail(one: &Hist, budget: u32) -> Hist {
    let mut out = hist();
    let mut power = one.clone();
    let Some(step) = min_len(one) else { return out };
    for l in 2u64.. {
        let g = gamma_len(l - 1);
        if g > budget {
            break;
        }
        power = convolve(&power, one);
        match min_len(&power) {
            Some(m) if m + g <= budget => {}
            _ if step > 0 => break,
            _ => continue,
        }
        for (i, c) in power.iter().enumerate() {
            add_at(&mut out, i as u32 + g, *c);
        }
    }
    out
}

/// Per-value atom histograms and their total.
struct Atoms {
    by_value: Vec<Vec<(u32, u64)>>,
    total: Hist,
}

impl Atoms {
    fn new(n: u32) -> Self {
        let by_value = (0..1u32 << n)
            .map(|v| {
                let mut c: Vec<(u32, u64)> = Vec::new();
                for l in atoms::lengths(Word::new(n, v)) {
                    match c.iter_mut().find(|e| e.0 == l) {
                        Some(e) => e.1 += 1,
                        None => c.push((l, 1)),
                    }
                }
                c
            })
            .collect();
        Self { by_value, total: from_pairs(&atoms::length_histogram(n)) }
    }

    /// Atom histogram of values inside and outside `e`.
    fn split(&self, e: &TableEntry) -> (Hist, Hist) {
        let mut inside = hist();
        for v in e.ext().values() {
            for &(l, c) in &self.by_value[v as usize] {
                add_at(&mut inside, l, c as u128);
            }
        }
        let outside = self.total.iter().zip(&inside).map(|(t, i)| t - i).collect();
        (inside, outside)
    }
}

/// Number of reduced fractions `a/b` in `(0,1)` whose stick-breaking code has each length.
fn fraction_hist(budget: u32) -> Hist {
    let mut h = hist();
    let max_bits = budget.saturating_sub(1) / 2;
    for a in 1u64..(1u64 << max_bits) {
        let ga = gamma_len(a);
        if ga + 1 > budget {
            break;
        }
        for c in 1u64..(1u64 << max_bits) {
            let len = ga + gamma_len(c);
            if len > budget {
                break;
            }
            if a.gcd(&c) == 1 {
                add_at(&mut h, len, 1);
            }
        }
    }
    h
}

/// Exact histogram of code lengths of one scheme over `n <= sys.max_n()`.
pub fn scheme_histogram(sys: &DescriptionSystem, scheme: Scheme) -> Hist {
    let mut out = hist();
    if !sys.enabled(scheme) {
        return out;
    }
    for n in 1..=sys.max_n() {
        accumulate(&mut out, &scheme_histogram_n(scheme, n));
    }
    out
}

fn shifted(h: &Hist, k: u32) -> Hist {
    convolve(h, &delta(k))
}

fn scheme_histogram_n(scheme: Scheme, n: u32) -> Hist {
    let mut out = hist();
    let size = 1u64 << n;
    let gn = gamma_len(n as u64);
    let t = table(n).expect("system limit is within the tables");
    let has_all_subsets = n <= ALL_SUBSETS_MAX_N;
    match scheme {
        Scheme::Literal => add_at(&mut out, 2 + gn + n, size as u128),
        Scheme::Periodic => {
            for p in 1..=n {
                add_at(&mut out, 4 + gn + gamma_len(p as u64) + p, 1u128 << p);
            }
        }
        Scheme::TupleLiteral => {
            let mut one = hist();
            add_at(&mut one, n, size as u128);
            out = shifted(&tuple_tail(&one, MAX_CODE_LEN), 4 + gn);
        }
        Scheme::Model => {
            for e in t.entries() {
                accumulate(&mut out, &shifted(&from_pairs(&e.histogram), 3));
            }
            if has_all_subsets {
                add_at(&mut out, 3 + all_subsets_body_len(n), (1u128 << size) - 1);
            }
            for m in (1..=size).take_while(|m| 3 + explicit_body_len(n, *m) <= MAX_CODE_LEN) {
                add_at(&mut out, 3 + explicit_body_len(n, m), binomial(size, m));
            }
        }
        Scheme::TwoPart | Scheme::TupleModel => {
            let tuple = scheme == Scheme::TupleModel;
            let hdr = if tuple { 4 } else { 3 };
            let data = |card: u64| -> Hist {
                let one = {
                    let mut h = hist();
                    add_at(&mut h, ceil_log2(card), card as u128);
                    h
                };
                if tuple {
                    tuple_tail(&one, MAX_CODE_LEN)
                } else {
                    one
                }
            };
            let mut by_card: BTreeMap<u64, Hist> = BTreeMap::new();
            for e in t.entries() {
                accumulate(by_card.entry(e.card()).or_insert_with(hist), &from_pairs(&e.histogram));
            }
            for (card, bodies) in by_card {
                accumulate(&mut out, &shifted(&convolve(&bodies, &data(card)), hdr));
            }
            for m in 1..=size {
                let bodies = [
                    has_all_subsets.then(|| all_subsets_body_len(n)),
                    Some(explicit_body_len(n, m)),
                ];
                let bodies: Vec<u32> = bodies.into_iter().flatten().filter(|b| hdr + b <= MAX_CODE_LEN).collect();
                if bodies.is_empty() {
                    continue;
                }
                let d = data(m);
                let count = binomial(size, m);
                for b in bodies {
                    for (i, c) in shifted(&d, hdr + b).iter().enumerate() {
                        add_at(&mut out, i as u32, c * count);
                    }
                }
            }
        }
        Scheme::Distribution | Scheme::ViaDistribution | Scheme::TupleDistribution => {
            let hdr = if scheme == Scheme::Distribution { 3 } else { 4 };
            let at = Atoms::new(n);
            let mut cache: BTreeMap<(u8, u64), Hist> = Default::default();
            let mut data = |shape: Shape, card: u64| -> Hist {
                if scheme == Scheme::Distribution {
                    return delta(0);
                }
                cache
                    .entry((shape as u8, card))
                    .or_insert_with(|| {
                        let one = sf_hist(shape, n, card);
                        if scheme == Scheme::TupleDistribution {
                            tuple_tail(&one, MAX_CODE_LEN)
                        } else {
                            one
                        }
                    })
                    .clone()
            };
            // per cardinality: plain bodies, bodies with an atom inside the set, and outside
            let mut by_card: BTreeMap<u64, [Hist; 3]> = BTreeMap::new();
            for e in t.entries() {
                let body = shifted(&from_pairs(&e.histogram), hdr + KIND_BITS);
                let (inside, outside) = at.split(e);
                let acc = by_card.entry(e.card()).or_insert_with(|| [hist(), hist(), hist()]);
                accumulate(&mut acc[1], &convolve(&body, &inside));
                accumulate(&mut acc[2], &convolve(&body, &outside));
                accumulate(&mut acc[0], &body);
            }
            for (card, [body, pin, pout]) in by_card {
                accumulate(&mut out, &convolve(&body, &data(Shape::Uniform, card)));
                accumulate(&mut out, &convolve(&body, &data(Shape::HalfCube, card)));
                accumulate(&mut out, &convolve(&pin, &data(Shape::PerturbedIn, card)));
                accumulate(&mut out, &convolve(&pout, &data(Shape::PerturbedOut, card)));
            }
            if scheme == Scheme::Distribution {
                accumulate(&mut out, &explicit_dist_hist(n));
            }
        }
    }
    out
}

/// Histogram of `100 11` explicit distribution codes over `B^n`.
fn explicit_dist_hist(n: u32) -> Hist {
    let size = 1u64 << n;
    let mut out = hist();
    let fixed = |m: u64| 3 + KIND_BITS + gamma_len(n as u64) + gamma_len(m) + m as u32 * n;
    let budget = MAX_CODE_LEN.saturating_sub(fixed(2));
    let frac = fraction_hist(budget);
    let mut power = delta(0);
    for m in 1..=size {
        if m > 1 {
            power = convolve(&power, &frac);
        }
        let f = fixed(m);
        if f > MAX_CODE_LEN || min_len(&power).is_none() {
            break;
        }
        let count = binomial(size, m);
        for (i, c) in power.iter().enumerate() {
            add_at(&mut out, f + i as u32, c * count);
        }
    }
    out
}

/// Total histogram of every enabled scheme.
pub fn length_histogram(sys: &DescriptionSystem) -> Hist {
    let mut out = hist();
    for s in sys.schemes() {
        accumulate(&mut out, &scheme_histogram(sys, *s));
    }
    out
}

/// `sum count_k 2^-k`.
pub fn kraft_sum(h: &Hist) -> BigRational {
    let num = h
        .iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (k, c)| acc + (BigUint::from(*c) << (MAX_CODE_LEN as usize - k)));
    BigRational::new(BigInt::from(num), BigInt::from(1u8) << MAX_CODE_LEN as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeAudit {
    pub scheme: Scheme,
    pub histogram: Vec<u128>,
    /// Exact Kraft mass as `num/den`.
    pub mass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KraftReport {
    pub codebook_version: u32,
    pub max_n: u32,
    pub max_code_len: u32,
    pub schemes: Vec<SchemeAudit>,
    pub total: String,
}

impl KraftReport {
    pub fn total(&self) -> BigRational {
        self.total.parse().expect("written by this module")
    }
}

fn cache_path(sys: &DescriptionSystem) -> Option<PathBuf> {
    let names: Vec<&str> = sys.schemes().iter().map(|s| s.name()).collect();
    let key = if names.is_empty() { "none".to_string() } else { names.join("+") };
    DescriptionSystem::cache_dir()
        .map(|d| d.join(format!("kraft-v{CODEBOOK_VERSION}-n{}-{key}.json", sys.max_n())))
}

/// Per-scheme histograms and the exact total, read from the cache directory when present.
pub fn kraft_report(sys: &DescriptionSystem) -> KraftReport {
    let path = cache_path(sys);
    if let Some(p) = &path {
        if let Some(r) = std::fs::read(p).ok().and_then(|b| serde_json::from_slice::<KraftReport>(&b).ok()) {
            return r;
        }
    }
    let schemes: Vec<SchemeAudit> = sys
        .schemes()
        .iter()
        .map(|s| {
            let h = scheme_histogram(sys, *s);
            SchemeAudit { scheme: *s, mass: kraft_sum(&h).to_string(), histogram: h }
        })
        .collect();
    let total = schemes.iter().fold(BigRational::zero(), |acc, s| acc + kraft_sum(&s.histogram));
    let report = KraftReport {
        codebook_version: CODEBOOK_VERSION,
        max_n: sys.max_n(),
        max_code_len: MAX_CODE_LEN,
        schemes,
        total: total.to_string(),
    };
    if let Some(p) = &path {
        let _ = std::fs::create_dir_all(p.parent().unwrap());
        if let Ok(json) = serde_json::to_vec_pretty(&report) {
            let _ = std::fs::write(p, json);
        }
    }
    report
}

/// `sum 2^-|c|` over every decodable code of length at most [`MAX_CODE_LEN`].
pub fn kraft_audit(sys: &DescriptionSystem) -> BigRational {
    kraft_report(sys).total()
}

/// Visits every decodable code of length at most `max_len` in lexicographic order, by
/// depth-first search over prefixes the decoder has not yet rejected.
pub fn enumerate_codes(sys: &DescriptionSystem, max_len: u32, mut visit: impl FnMut(&Bits, Object)) {
    fn go(sys: &DescriptionSystem, max_len: u32, prefix: &mut Vec<bool>, visit: &mut dyn FnMut(&Bits, Object)) {
        let mut r = BitReader::new(prefix);
        match read_object(sys, &mut r) {
            Some(obj) => {
                debug_assert!(r.at_end());
                let mut b = Bits::new();
                for &x in prefix.iter() {
                    b.push(x);
                }
                visit(&b, obj);
            }
            None if r.exhausted() && (prefix.len() as u32) < max_len => {
                for bit in [false, true] {
                    prefix.push(bit);
                    go(sys, max_len, prefix, visit);
                    prefix.pop();
                }
            }
            None => {}
        }
    }
    go(sys, max_len, &mut Vec::new(), &mut visit);
}

/// Brute-force histogram of decodable codes up to `max_len`, and whether the decoded set
/// passed the sorted prefix scan.
pub fn brute_force_histogram(sys: &DescriptionSystem, max_len: u32) -> (Hist, bool) {
    let mut h = hist();
    let mut codes = Vec::new();
    enumerate_codes(sys, max_len, |b, _| {
        add_at(&mut h, b.len() as u32, 1);
        codes.push(b.clone());
    });
    codes.sort();
    let prefix_free = codes.windows(2).all(|w| !w[0].is_prefix_of(&w[1]));
    (h, prefix_free)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truncated(h: &Hist, max_len: u32) -> Hist {
        h.iter().enumerate().map(|(i, c)| if i as u32 <= max_len { *c } else { 0 }).collect()
    }

    #[test]
    fn empty_registry_has_zero_mass() {
        assert!(kraft_audit(&DescriptionSystem::empty()).is_zero());
    }

    #[test]
    fn literal_only_matches_direct_sum() {
        let sys = DescriptionSystem::with_schemes(&[Scheme::Literal]).limited_to(4).unwrap();
        // 2^-(2+gamma(n)) per n: 1/8 + 1/32 + 1/32 + 1/128
        let expected = BigRational::new(BigInt::from(25), BigInt::from(128));
        assert_eq!(kraft_audit(&sys), expected);
    }

    #[test]
    fn histograms_match_decoder_per_scheme() {
        for scheme in Scheme::ALL {
            let sys = DescriptionSystem::with_schemes(&[scheme]).limited_to(2).unwrap();
            let (brute, prefix_free) = brute_force_histogram(&sys, 18);
            assert!(prefix_free, "{scheme}");
            assert_eq!(truncated(&length_histogram(&sys), 18), brute, "{scheme}");
        }
    }

    #[test]
    fn histograms_match_decoder_at_four_bits() {
        let sys = DescriptionSystem::standard().limited_to(4).unwrap();
        let (brute, prefix_free) = brute_force_histogram(&sys, 15);
        assert!(prefix_free);
        assert_eq!(truncated(&length_histogram(&sys), 15), brute);
    }

    #[test]
    fn standard_audit_is_at_most_one() {
        let total = kraft_audit(&DescriptionSystem::standard());
        assert!(total <= BigRational::from_integer(1.into()), "{total}");
    }

    #[test]
    fn fraction_counts_small_lengths() {
        let h = fraction_hist(8);
        // 1/2; then 1/3, 2/3, 1/4, 3/4
        assert_eq!(h[2], 1);
        assert_eq!(h[3], 0);
        assert_eq!(h[4], 4);
    }
}
