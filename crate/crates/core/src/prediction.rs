//! Algorithmic and probabilistic prediction neighborhoods over a model family.
//!
//! Both neighborhoods of data `xs` are read off one pass over the enumerated sets that
//! contain `xs` (a [`Landscape`]): per candidate `y`, the best deficiency of a set holding
//! `xs` and `y`, and the two-stage posterior mass of `y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bits::{gamma_len, BitString, StringTuple};
use crate::codebook::codec::FAMILY_ID_BITS;
use crate::codebook::engine::complexity_in;
use crate::codebook::kraft::MAX_CODE_LEN;
use crate::codebook::system::DescriptionSystem;
use crate::error::{Error, Result};
use crate::models::{enumerate_model_entries, FamilyId, ModelEntry};
use crate::scalar::{ceil_neg_log2, log2_millibits_int, pow2, Weight, MILLIBITS_PER_BIT};

/// Bits every model code pays before its parameters: scheme header, family id, `EG(n)`.
pub fn model_code_overhead(n: u32) -> u32 {
    3 + FAMILY_ID_BITS + gamma_len(n as u64)
}

/// `4n` for one string and `(l+3)n` for a tuple, plus [`model_code_overhead`], clamped to
/// the longest code the system enumerates.
pub fn default_cap(n: u32, l: usize) -> u32 {
    let base = if l <= 1 { 4 * n } else { (l as u32 + 3) * n };
    (base + model_code_overhead(n)).min(MAX_CODE_LEN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `δ(xs, A) <= d`.
    Absolute,
    /// `δ(xs, A) <= min_B δ(xs, B) + d`.
    Relative,
}

impl Mode {
    /// Relative exactly when the family misses some singleton at length `n`.
    pub fn for_family(family: FamilyId, n: u32) -> Self {
        if family.contains_all_singletons(n) {
            Mode::Absolute
        } else {
            Mode::Relative
        }
    }
}

#[derive(Clone, Debug)]
pub struct PredictionQuery {
    pub data: StringTuple,
    pub family: FamilyId,
    pub cap_bits: u32,
    pub d_millibits: i64,
    pub mode: Mode,
}

impl PredictionQuery {
    /// Query with the default cap and the family's mode.
    pub fn new(data: StringTuple, family: FamilyId, d_millibits: i64) -> Self {
        let (n, l) = (data.n(), data.l());
        Self { data, family, cap_bits: default_cap(n, l), d_millibits, mode: Mode::for_family(family, n) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Member {
    pub y: BitString,
    /// Model label (algorithmic) or posterior probability (probabilistic).
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub kind: &'static str,
    pub mode: Option<Mode>,
    pub members: Vec<Member>,
}

impl Neighborhood {
    pub fn strings(&self) -> Vec<BitString> {
        self.members.iter().map(|m| m.y).collect()
    }
}

/// Per-string summary of the sets that contain the data and that string.
#[derive(Clone, Debug)]
struct Cell {
    /// Smallest `δ(xs, A)` and the first set (canonical order) attaining it.
    best: Option<(i64, usize)>,
    /// First set in canonical order containing `xs` and `y`.
    first: Option<usize>,
    /// `Σ m(A) / |A|^l` over those sets.
    mass: BigRational,
}

/// Everything both neighborhoods need for one `(xs, family, cap)`.
pub struct Landscape {
    xs: StringTuple,
    c_xs: u32,
    sets: Vec<(ModelEntry, i64, BigRational)>,
    cells: Vec<Cell>,
    total: BigRational,
}

impl Landscape {
    pub fn new(xs: &StringTuple, family: FamilyId, cap: u32) -> Result<Self> {
        let n = xs.n();
        let l = xs.l() as u32;
        let c_xs = complexity_in(&DescriptionSystem::standard(), &xs.into())?.value;
        let mut cells = vec![Cell { best: None, first: None, mass: BigRational::zero() }; 1usize << n];
        let mut sets = Vec::new();
        let mut total = BigRational::zero();
        for e in enumerate_model_entries(family, n, cap)? {
            if !e.model.contains_all(xs) {
                continue;
            }
            let card = e.model.cardinality();
            let delta = e.complexity as i64 * MILLIBITS_PER_BIT + l as i64 * log2_millibits_int(card)
                - c_xs as i64 * MILLIBITS_PER_BIT;
            let term = e.apriori.to_rational() / BigRational::from_integer(BigInt::from(card).pow(l));
            let idx = sets.len();
            for v in e.model.extension().values() {
                let cell = &mut cells[v as usize];
                cell.mass += &term;
                cell.first.get_or_insert(idx);
                if cell.best.is_none_or(|(b, _)| delta < b) {
                    cell.best = Some((delta, idx));
                }
            }
            total += &term;
            sets.push((e, delta, term));
        }
        Ok(Self { xs: xs.clone(), c_xs, sets, cells, total })
    }

    pub fn data(&self) -> &StringTuple {
        &self.xs
    }

    pub fn data_complexity(&self) -> u32 {
        self.c_xs
    }

    /// `Σ m(A) / |A|^l` over the enumerated sets containing the data.
    pub fn mass(&self) -> &BigRational {
        &self.total
    }

    /// Number of enumerated sets containing the data.
    pub fn containing(&self) -> usize {
        self.sets.len()
    }

    /// `p(y | xs)`; zero when nothing contains the data.
    pub fn prob(&self, y: &BitString) -> BigRational {
        if self.total.is_zero() {
            return BigRational::zero();
        }
        &self.cells[y.value() as usize].mass / &self.total
    }

    /// `min δ(xs, A)` over sets containing `xs` and `y`.
    pub fn best_delta(&self, y: &BitString) -> Option<i64> {
        self.cells[y.value() as usize].best.map(|(d, _)| d)
    }

    /// `min δ(xs, B)` over all sets containing `xs`.
    pub fn min_delta(&self) -> Option<i64> {
        self.sets.iter().map(|s| s.1).min()
    }

    /// `best_delta(y)`, less `min_delta` in relative mode.
    pub fn score(&self, y: &BitString, mode: Mode) -> Option<i64> {
        let d = self.best_delta(y)?;
        Some(match mode {
            Mode::Absolute => d,
            Mode::Relative => d - self.min_delta()?,
        })
    }

    fn all(&self) -> impl Iterator<Item = BitString> {
        BitString::all(self.xs.n())
    }

    /// The algorithmic neighborhood at `d` millibits. Above `3n` bits the witness is the
    /// first enumerated set holding the data and `y` rather than the best one.
    pub fn algorithmic(&self, d: i64, mode: Mode) -> Neighborhood {
        let trivial = d > 3 * self.xs.n() as i64 * MILLIBITS_PER_BIT;
        let members = self
            .all()
            .filter(|y| self.score(y, mode).is_some_and(|s| s <= d))
            .map(|y| {
                let cell = &self.cells[y.value() as usize];
                let idx = if trivial { cell.first } else { cell.best.map(|b| b.1) }.expect("member has a set");
                Member { y, witness: self.sets[idx].0.model.label() }
            })
            .collect();
        Neighborhood { kind: "algorithmic", mode: Some(mode), members }
    }

    /// The probabilistic neighborhood at `d` whole bits: `p(y | xs) >= 2^-d`.
    pub fn probabilistic(&self, d_bits: u32) -> Neighborhood {
        let threshold = pow2(-(d_bits as i64));
        let members = self
            .all()
            .filter_map(|y| {
                let p = self.prob(&y);
                (p.is_positive() && p >= threshold).then(|| Member { y, witness: p.to_string() })
            })
            .collect();
        Neighborhood { kind: "probabilistic", mode: None, members }
    }

    /// `ceil(-log2 p(y | xs))`, the least whole-bit `d` admitting `y`.
    pub fn prob_level(&self, y: &BitString) -> Option<u32> {
        let p = self.prob(y);
        p.is_positive().then(|| ceil_neg_log2(&p))
    }
}

/// `Σ m(A) / |A|^l` over `A` in the family with `C(A) <= cap` containing `xs`.
pub fn prediction_mass(xs: &StringTuple, family: FamilyId, cap: u32) -> Result<BigRational> {
    Ok(Landscape::new(xs, family, cap)?.total)
}

/// [`prediction_mass`] accumulated in any [`Weight`] scalar. `f64` skips the big-integer
/// arithmetic at the price of rounding.
pub fn prediction_mass_as<W: Weight>(xs: &StringTuple, family: FamilyId, cap: u32) -> Result<W> {
    let l = xs.l() as u32;
    let mut total = W::zero();
    for e in enumerate_model_entries(family, xs.n(), cap)? {
        if e.model.contains_all(xs) {
            total = total + W::from_dyadic(&e.apriori) * W::recip_pow(e.model.cardinality(), l);
        }
    }
    Ok(total)
}

/// The two-stage posterior `p(y | xs)`; `0/0` is `0`.
pub fn conditional_prediction_prob(y: &BitString, xs: &StringTuple, family: FamilyId, cap: u32) -> Result<BigRational> {
    if y.len() != xs.n() {
        return Err(Error::MixedUniverse);
    }
    Ok(Landscape::new(xs, family, cap)?.prob(y))
}

pub fn algorithmic_neighborhood(q: &PredictionQuery) -> Result<Neighborhood> {
    Ok(Landscape::new(&q.data, q.family, q.cap_bits)?.algorithmic(q.d_millibits, q.mode))
}

pub fn probabilistic_neighborhood(q: &PredictionQuery) -> Result<Neighborhood> {
    if q.d_millibits < 0 || q.d_millibits % MILLIBITS_PER_BIT != 0 {
        return Err(Error::FractionalThreshold(q.d_millibits));
    }
    let d = (q.d_millibits / MILLIBITS_PER_BIT) as u32;
    Ok(Landscape::new(&q.data, q.family, q.cap_bits)?.probabilistic(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Algorithmic `N(d)` inside probabilistic `N(d + s)`.
    AlgInProb,
    /// Probabilistic `N(d)` inside algorithmic `N(d + s)`.
    ProbInAlg,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::AlgInProb => "alg-in-prob",
            Direction::ProbInAlg => "prob-in-alg",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlackRow {
    pub d_bits: u32,
    pub direction: Direction,
    /// Least `s >= 0` making the containment hold; `None` if no `s` does.
    pub slack_millibits: Option<i64>,
}

/// For each `d` and direction, the least slack `s` with `N1(d) ⊆ N2(d + s)`. The
/// probabilistic side only takes whole-bit thresholds, so its slacks are whole bits.
pub fn containment_slack(land: &Landscape, mode: Mode, d_grid: &[u32]) -> Vec<SlackRow> {
    let mut rows = Vec::new();
    for &d in d_grid {
        let dm = d as i64 * MILLIBITS_PER_BIT;
        let alg = land.algorithmic(dm, mode);
        let mut s: Option<i64> = Some(0);
        for y in alg.strings() {
            s = match (s, land.prob_level(&y)) {
                (Some(s), Some(level)) => Some(s.max((level as i64 - d as i64) * MILLIBITS_PER_BIT)),
                _ => None,
            };
        }
        rows.push(SlackRow { d_bits: d, direction: Direction::AlgInProb, slack_millibits: s });

        let prob = land.probabilistic(d);
        let mut s: Option<i64> = Some(0);
        for y in prob.strings() {
            s = match (s, land.score(&y, mode)) {
                (Some(s), Some(g)) => Some(s.max(g - dm)),
                _ => None,
            };
        }
        rows.push(SlackRow { d_bits: d, direction: Direction::ProbInAlg, slack_millibits: s });
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// `C(A)`.
    pub i: u32,
    /// `floor(log2 |A|)`.
    pub j: u32,
    pub count: usize,
    #[serde(serialize_with = "ser_rational")]
    pub sum: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxTermReport {
    #[serde(serialize_with = "ser_rational")]
    pub sum: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub max_term: BigRational,
    pub max_term_set: String,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: BigRational,
    pub strata: Vec<Stratum>,
    /// Largest `stratum sum / max term`.
    #[serde(serialize_with = "ser_rational")]
    pub max_stratum_ratio: BigRational,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl MaxTermReport {
    /// The strata add up to the whole sum.
    pub fn stratification_holds(&self) -> bool {
        self.strata.iter().fold(BigRational::zero(), |acc, s| acc + &s.sum) == self.sum
    }

    /// `S / M <= (number of strata) * max stratum ratio`, the decomposition bound.
    pub fn decomposition_bound_holds(&self) -> bool {
        let k = BigRational::from_integer(BigInt::from(self.strata.len()));
        self.ratio <= k * &self.max_stratum_ratio
    }
}

/// `S / M` for `S = Σ m(A)/|A|^l` over sets with `C(A) <= m_cap` containing `xs` and `M` its
/// largest term, with `S` split by `(C(A), floor(log2 |A|))`.
pub fn max_term_ratio(xs: &StringTuple, family: FamilyId, m_cap: u32) -> Result<MaxTermReport> {
    let land = Landscape::new(xs, family, m_cap)?;
    let (best_idx, _) = land
        .sets
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .2.cmp(&b.1 .2).then(b.0.cmp(&a.0)))
        .ok_or(Error::EmptySum)?;
    let max_term = land.sets[best_idx].2.clone();
    let mut strata: Vec<Stratum> = Vec::new();
    for (e, _, term) in &land.sets {
        let i = e.complexity;
        let j = 63 - e.model.cardinality().leading_zeros();
        match strata.iter_mut().find(|s| s.i == i && s.j == j) {
            Some(s) => {
                s.count += 1;
                s.sum += term;
            }
            None => strata.push(Stratum { i, j, count: 1, sum: term.clone() }),
        }
    }
    strata.sort_by_key(|s| (s.i, s.j));
    let max_stratum_ratio = strata.iter().map(|s| &s.sum / &max_term).max().unwrap_or_else(BigRational::one);
    Ok(MaxTermReport {
        ratio: &land.total / &max_term,
        sum: land.total.clone(),
        max_term,
        max_term_set: land.sets[best_idx].0.model.label(),
        strata,
        max_stratum_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::engine::apriori;
    use crate::models::{enumerate_models, FiniteModel};
    use crate::statistics::tuple_optimality_deficiency;

    fn s(x: &str) -> BitString {
        x.parse().unwrap()
    }

    fn one(x: &str) -> StringTuple {
        StringTuple::single(s(x))
    }

    #[test]
    fn generic_mass_matches_exact() {
        for f in [FamilyId::Cylinders, FamilyId::HammingBalls] {
            let xs = StringTuple::new(vec![s("0110"), s("0100")]).unwrap();
            let exact = prediction_mass(&xs, f, default_cap(4, 2)).unwrap();
            assert_eq!(prediction_mass_as::<BigRational>(&xs, f, default_cap(4, 2)).unwrap(), exact);
            let approx: f64 = prediction_mass_as(&xs, f, default_cap(4, 2)).unwrap();
            assert!((approx - exact.approx()).abs() <= 1e-12 * exact.approx());
        }
    }

    #[test]
    fn default_caps() {
        assert_eq!(default_cap(4, 1), 16 + 11);
        assert_eq!(default_cap(4, 2), 20 + 11);
        assert_eq!(default_cap(6, 3), 40);
    }

    #[test]
    fn singleton_family_mass_is_apriori_of_singleton() {
        let x = s("0110");
        let mass = prediction_mass(&StringTuple::single(x), FamilyId::Singletons, 40).unwrap();
        let m = apriori(FiniteModel::explicit(&[x]).unwrap()).unwrap().to_rational();
        assert_eq!(mass, m);
    }

    #[test]
    fn self_prediction_is_certain() {
        for f in [FamilyId::Cylinders, FamilyId::HammingBalls, FamilyId::LexIntervals] {
            let x = s("0000");
            let p = conditional_prediction_prob(&x, &StringTuple::single(x), f, default_cap(4, 1)).unwrap();
            assert_eq!(p, BigRational::one());
        }
    }

    #[test]
    fn no_containing_set_gives_zero() {
        // plane lines over GF(4) hold 4 points each; a cap below every line empties the sum
        let xs = one("0000");
        assert_eq!(prediction_mass(&xs, FamilyId::PlaneLines, 12).unwrap(), BigRational::zero());
        assert_eq!(conditional_prediction_prob(&s("0000"), &xs, FamilyId::PlaneLines, 12).unwrap(), BigRational::zero());
        let land = Landscape::new(&xs, FamilyId::PlaneLines, 12).unwrap();
        assert!(land.algorithmic(100 * 1024, Mode::Relative).members.is_empty());
        assert!(matches!(max_term_ratio(&xs, FamilyId::PlaneLines, 12), Err(Error::EmptySum)));
    }

    /// Neighborhoods straight from the definitions.
    fn brute(xs: &StringTuple, f: FamilyId, cap: u32, d: i64, mode: Mode) -> (Vec<BitString>, Vec<BitString>) {
        let n = xs.n();
        let sets: Vec<FiniteModel> =
            enumerate_models(f, n, cap).unwrap().into_iter().filter(|a| a.contains_all(xs)).collect();
        let deltas: Vec<i64> = sets.iter().map(|a| tuple_optimality_deficiency(xs, a).unwrap().value).collect();
        let floor = match mode {
            Mode::Absolute => 0,
            Mode::Relative => deltas.iter().copied().min().unwrap_or(0),
        };
        let mut alg = Vec::new();
        let mut prob = Vec::new();
        let term = |a: &FiniteModel| apriori(a.clone()).unwrap().to_rational() / BigRational::from_integer(BigInt::from(a.cardinality()).pow(xs.l() as u32));
        let total: BigRational = sets.iter().map(term).sum();
        for y in BitString::all(n) {
            if sets.iter().zip(&deltas).any(|(a, dl)| a.contains(&y) && *dl <= floor + d) {
                alg.push(y);
            }
            let num: BigRational = sets.iter().filter(|a| a.contains(&y)).map(term).sum();
            if !total.is_zero() && num / &total >= pow2(-(d / 1024)) && sets.iter().any(|a| a.contains(&y)) {
                prob.push(y);
            }
        }
        (alg, prob)
    }

    #[test]
    fn neighborhoods_match_definitions() {
        let cases = [
            (one("0000"), FamilyId::Cylinders),
            (one("0110"), FamilyId::HammingBalls),
            (StringTuple::new(vec![s("0001"), s("0011")]).unwrap(), FamilyId::Cylinders),
            (one("0110"), FamilyId::PlaneLines),
        ];
        for (xs, f) in cases {
            let cap = default_cap(4, xs.l());
            let mode = Mode::for_family(f, 4);
            let land = Landscape::new(&xs, f, cap).unwrap();
            for d in 0..=6u32 {
                let (alg, prob) = brute(&xs, f, cap, d as i64 * 1024, mode);
                assert_eq!(land.algorithmic(d as i64 * 1024, mode).strings(), alg, "{xs} {f} {d}");
                assert_eq!(land.probabilistic(d).strings(), prob, "{xs} {f} {d}");
            }
        }
    }

    #[test]
    fn neighborhoods_grow_with_d_and_fill_the_cube() {
        let xs = one("0101");
        let land = Landscape::new(&xs, FamilyId::Cylinders, default_cap(4, 1)).unwrap();
        for d in 0..8u32 {
            let (a0, a1) = (land.algorithmic(d as i64 * 1024, Mode::Absolute), land.algorithmic((d as i64 + 1) * 1024, Mode::Absolute));
            assert!(a0.strings().iter().all(|y| a1.strings().contains(y)));
            let (p0, p1) = (land.probabilistic(d), land.probabilistic(d + 1));
            assert!(p0.strings().iter().all(|y| p1.strings().contains(y)));
            assert!(p0.strings().contains(&s("0101")));
        }
        // with d large enough the full cube's deficiency is admitted
        let full = tuple_optimality_deficiency(&xs, &FiniteModel::full(4)).unwrap().value;
        assert_eq!(land.algorithmic(full, Mode::Absolute).members.len(), 16);
    }

    #[test]
    fn slack_is_least_by_search() {
        let xs = one("0000");
        for f in [FamilyId::Cylinders, FamilyId::HammingBalls] {
            let land = Landscape::new(&xs, f, default_cap(4, 1)).unwrap();
            let grid: Vec<u32> = (0..=4).collect();
            for row in containment_slack(&land, Mode::Absolute, &grid) {
                let s = row.slack_millibits.unwrap();
                let d = row.d_bits;
                let holds = |s: i64| match row.direction {
                    Direction::AlgInProb => {
                        let p = land.probabilistic(d + (s / 1024) as u32).strings();
                        land.algorithmic(d as i64 * 1024, Mode::Absolute).strings().iter().all(|y| p.contains(y))
                    }
                    Direction::ProbInAlg => {
                        let a = land.algorithmic(d as i64 * 1024 + s, Mode::Absolute).strings();
                        land.probabilistic(d).strings().iter().all(|y| a.contains(y))
                    }
                };
                assert!(holds(s), "{row:?}");
                let step = if row.direction == Direction::AlgInProb { 1024 } else { 1 };
                assert!(s == 0 || !holds(s - step), "{row:?}");
            }
        }
    }

    #[test]
    fn stratification_is_exact() {
        let r = max_term_ratio(&one("0000"), FamilyId::Cylinders, default_cap(4, 1)).unwrap();
        assert!(r.stratification_holds());
        assert!(r.decomposition_bound_holds());
        assert!(r.ratio >= BigRational::one());
        let single = max_term_ratio(&one("0110"), FamilyId::Singletons, 40).unwrap();
        assert_eq!(single.ratio, BigRational::one());
    }

    #[test]
    fn fractional_threshold_refused() {
        let q = PredictionQuery::new(one("0000"), FamilyId::Cylinders, 1500);
        assert!(matches!(probabilistic_neighborhood(&q), Err(Error::FractionalThreshold(1500))));
        assert!(algorithmic_neighborhood(&q).is_ok());
    }
}
