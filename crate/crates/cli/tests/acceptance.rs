//! One pass/fail line per acceptance criterion. Regression values come from the frozen
//! `baselines/slack.json`; this target never writes it.

use std::path::PathBuf;
use std::time::Instant;

use algostat::bits::{BitString, StringTuple};
use algostat::codebook::conditional::conditional_complexity;
use algostat::codebook::famdist::FamilyDist;
use algostat::codebook::kraft::kraft_audit;
use algostat::constructions::{example3_family, lines_through, plane_pair, shared_prefix_pair};
use algostat::field::Gf;
use algostat::models::family::{ModelParams, Word};
use algostat::models::{enumerate_models, DistKind};
use algostat::statistics::{dist_optimality_deficiency, optimality_profile, profile_distance, stochasticity_profile};
use algostat::verify::{self, Experiment, Report};
use algostat::{c, DescriptionSystem, DistributionFamily, FamilyId, Object};
use algostat_cli::baseline::{SlackBaseline, Status};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Largest string length for the exhaustive counting criteria.
const COUNT_N: u32 = 6;
/// Bound on the two-part overhead `C(x) - C(A) - ceil(log2 |A|)`.
const TWO_PART_H_BITS: i64 = 8;
/// Families whose members every two-part and tail check walks.
const SET_FAMILIES: [FamilyId; 3] = [FamilyId::Cylinders, FamilyId::HammingBalls, FamilyId::PrefixSets];
/// Enumeration cap; above every model complexity at these lengths.
const ENUM_CAP: u32 = 40;
/// Shared-prefix staircase point: `a <= n + PAIR_A_SLACK_BITS` and `b <= PAIR_B_SLACK_BITS`.
const PAIR_A_SLACK_BITS: i64 = 24;
const PAIR_B_SLACK_BITS: i64 = 6;
const MB: i64 = 1024;

type Verdict = Result<String, String>;

fn baseline() -> SlackBaseline {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../baselines/slack.json");
    SlackBaseline::load(&path).expect("readable baseline").expect("baselines/slack.json is checked in")
}

fn run_all(exps: &[Experiment]) -> Report {
    let mut r = Report::default();
    for e in exps {
        r.merge(verify::run(*e).unwrap_or_else(|err| panic!("{e}: {err}")));
    }
    r
}

/// Every check passes and every measurement sits within its frozen value.
fn within_baseline(r: &Report) -> Verdict {
    if let Some(bad) = r.checks.iter().find(|c| !c.ok) {
        return Err(format!("check failed: {} ({})", bad.name, bad.detail));
    }
    let verdicts = baseline().compare(&r.measurements);
    if let Some(v) = verdicts.iter().find(|v| v.status != Status::Within) {
        return Err(format!("{:?} measured {} frozen {:?}", v.key, v.measured, v.frozen));
    }
    Ok(format!("{} checks, {} measurements within baseline", r.checks.len(), verdicts.len()))
}

fn all_strings(n: u32) -> impl Iterator<Item = BitString> {
    (0..1u32 << n).map(move |v| BitString::new(n, v).unwrap())
}

fn criterion_1() -> Verdict {
    let k = kraft_audit(&DescriptionSystem::standard());
    if k > BigRational::one() {
        return Err(format!("kraft sum {k} > 1"));
    }
    for n in 1..=COUNT_N {
        let cs: Vec<u32> = all_strings(n).map(|x| c(x).unwrap()).collect();
        let top = *cs.iter().max().unwrap();
        for k in 0..=top + 1 {
            let below = cs.iter().filter(|&&cx| cx < k).count() as u64;
            if below >= 1u64 << k {
                return Err(format!("n={n}: {below} strings with C(x) < {k}"));
            }
        }
    }
    Ok(format!("kraft sum {:.6} <= 1; counting bound holds for n <= {COUNT_N}", approx(&k)))
}

fn approx(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn ceil_log2(m: u64) -> i64 {
    (64 - (m - 1).leading_zeros()) as i64 * (m > 1) as i64
}

fn criterion_2() -> Verdict {
    let mut worst = i64::MIN;
    let mut pairs = 0usize;
    for n in 1..=COUNT_N {
        let cx: Vec<i64> = all_strings(n).map(|x| c(x).unwrap() as i64).collect();
        for f in SET_FAMILIES {
            for a in enumerate_models(f, n, ENUM_CAP).map_err(|e| e.to_string())? {
                let bound = c(Object::Model(a.clone())).unwrap() as i64 + ceil_log2(a.cardinality());
                for x in a.members() {
                    worst = worst.max(cx[x.value() as usize] - bound);
                    pairs += 1;
                }
            }
        }
    }
    if worst > TWO_PART_H_BITS {
        return Err(format!("overhead {worst} bits exceeds H"));
    }
    Ok(format!("{pairs} pairs; max C(x) - C(A) - ceil log|A| = {worst} bits, H = {TWO_PART_H_BITS}"))
}

fn criterion_3() -> Verdict {
    let mut models = 0usize;
    for n in 1..=COUNT_N {
        for f in SET_FAMILIES {
            for a in enumerate_models(f, n, ENUM_CAP).map_err(|e| e.to_string())? {
                let size = a.cardinality() as u128;
                let cond: Vec<u32> = a
                    .members()
                    .map(|x| conditional_complexity(x, Object::Model(a.clone())).unwrap().value)
                    .collect();
                for beta in 1..=10u32 {
                    // d(x|A) > beta  <=>  2^(C(x|A) + beta) < |A|
                    let over = cond.iter().filter(|&&cc| cc + beta < 128 && (1u128 << (cc + beta)) < size).count() as u128;
                    if over << beta >= size && over > 0 {
                        return Err(format!("{} beta={beta}: {over} of {size}", a.label()));
                    }
                }
                models += 1;
            }
        }
    }
    Ok(format!("{models} models, beta 1..=10: tail count < 2^-beta |A|"))
}

fn criterion_4() -> Verdict {
    let r = run_all(&[Experiment::Theorem1]);
    let detail = within_baseline(&r)?;
    // least-squares fit of the per-n maximum slack against log2 n, reported only
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for n in 3..=6u32 {
        let m = r.measurements.iter().filter(|m| m.key.n == n).map(|m| m.value).max();
        if let Some(m) = m {
            pts.push(((n as f64).log2(), m as f64 / MB as f64));
        }
    }
    let (c1, c2) = fit(&pts);
    Ok(format!("{detail}; max slack ~ {c1:.2} log2 n + {c2:.2} bits"))
}

fn fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    (slope, (sy - slope * sx) / k)
}

fn criterion_5() -> Verdict {
    within_baseline(&run_all(&[Experiment::Theorem2, Experiment::Theorem3, Experiment::Theorem4]))
}

fn criterion_6() -> Verdict {
    let r = run_all(&[Experiment::Corollary1]);
    let detail = within_baseline(&r)?;
    let strata = r.checks.iter().filter(|c| c.name.contains("stratification")).count();
    if strata == 0 {
        return Err("no stratification checks ran".into());
    }
    Ok(format!("{detail}; {strata} exact stratification identities"))
}

fn criterion_7() -> Verdict {
    let r = run_all(&[Experiment::Lemma1]);
    for needed in ["transcripts audit", "success rate positive", "exhaustive strategies"] {
        if !r.checks.iter().any(|c| c.name.contains(needed) && c.ok) {
            return Err(format!("missing or failed: {needed}"));
        }
    }
    within_baseline(&r)
}

fn criterion_8() -> Verdict {
    let clones = within_baseline(&run_all(&[Experiment::Lemma4]))?;
    let mut endgame = run_all(&[Experiment::Theorem6]);
    endgame.measurements.retain(|m| m.key.family.ends_with("/endgame"));
    let n = endgame.measurements.len();
    within_baseline(&endgame)?;
    Ok(format!("clones: {clones}; {n} endgame measurements within baseline"))
}

fn criterion_9() -> Verdict {
    let mut r = run_all(&[Experiment::Theorem5, Experiment::Theorem6]);
    r.measurements.retain(|m| !m.key.family.ends_with("/endgame"));
    within_baseline(&r)
}

fn criterion_10() -> Verdict {
    let gf = Gf::new(4).map_err(|e| e.to_string())?;
    let q = gf.order() as usize;
    let mut point_hits = vec![0usize; q * q];
    for slope in gf.elements() {
        for intercept in gf.elements() {
            let line = algostat::constructions::PlaneLine { slope, intercept };
            let members: Vec<BitString> = line.model().members().collect();
            if members.len() != q {
                return Err(format!("line {} has {} points", line.encode(), members.len()));
            }
            for u in gf.elements() {
                let p = line.point_at(u);
                if !line.contains(&p) {
                    return Err("point_at left its line".into());
                }
                point_hits[p.encode().value() as usize] += 1;
            }
        }
    }
    if point_hits.iter().any(|&h| h != q) {
        return Err("point marginal of (line, point on line) is not uniform".into());
    }
    for v in 0..(q * q) as u32 {
        let p = algostat::constructions::PlanePoint::decode(gf, &BitString::new(8, v).unwrap()).unwrap();
        let through = lines_through(&p);
        if through.len() != q || through.iter().any(|l| !l.contains(&p)) {
            return Err(format!("point {v}: wrong pencil"));
        }
    }

    // a pair with one string on the prefix and one off it
    let n = 4;
    let prefix = BitString::new(n, 0b0101).unwrap();
    let fd = example3_family(n, &prefix).map_err(|e| e.to_string())?;
    let on = prefix.concat(&BitString::zeros(n).unwrap()).unwrap();
    let off = BitString::new(2 * n, on.value() ^ 1 << (2 * n - 1)).unwrap();
    let lik = fd.likelihood(&StringTuple::new(vec![on, off]).unwrap());
    let expected = BigRational::new(BigInt::from(17), BigInt::one() << 18);
    if lik != expected {
        return Err(format!("example likelihood {lik}, expected 2^-(18 - log2 17)"));
    }

    let dfam = DistributionFamily::parse("mixtures").unwrap();
    let mut worst = (i64::MIN, i64::MIN);
    for n in 2..=4u32 {
        for seed in 0..3 {
            let (a, b) = shared_prefix_pair(n, seed).map_err(|e| e.to_string())?;
            let xs = StringTuple::new(vec![a, b]).unwrap();
            let x_star = BitString::new(n, a.value() >> n).unwrap();
            let ext = ModelParams::PrefixSet { n: 2 * n, prefix: Word::of(&x_star) }.extension();
            let p = FamilyDist::new(DistKind::Uniform, ext).materialize();
            let a_star = c(Object::Distribution(p.clone())).unwrap() as i64;
            let profile = optimality_profile(&xs, &dfam, verify::PROFILE_A_MAX).map_err(|e| e.to_string())?;
            let b = profile.b_at(a_star).ok_or("staircase undefined at a*")?;
            let direct = dist_optimality_deficiency(&xs, &p).unwrap().value;
            if b > direct {
                return Err(format!("staircase above its own witness at n={n} seed={seed}"));
            }
            worst = (worst.0.max(a_star - n as i64), worst.1.max(b));
        }
    }
    if worst.0 > PAIR_A_SLACK_BITS || worst.1 > PAIR_B_SLACK_BITS * MB {
        return Err(format!("prefix-pair point (n + {}, {} mb) outside slack", worst.0, worst.1));
    }

    let (line, point) = plane_pair(2, 0).unwrap();
    let xs = StringTuple::new(vec![line.encode(), point.encode()]).unwrap();
    let po = optimality_profile(&xs, &dfam, verify::PROFILE_A_MAX).map_err(|e| e.to_string())?;
    let ps = stochasticity_profile(&xs, &dfam, verify::PROFILE_A_MAX).map_err(|e| e.to_string())?;
    let plane = profile_distance(&po, &ps);
    Ok(format!(
        "GF(16) incidence and marginals exhaustive; likelihood 17/2^18; prefix-pair point at a <= n + {}, b <= {} mb; plane-pair distance {:?} mb (not asserted)",
        worst.0, worst.1, plane
    ))
}

fn report(id: u32, name: &str, f: fn() -> Verdict) {
    let t = Instant::now();
    let verdict = f();
    let secs = t.elapsed().as_secs_f64();
    match verdict {
        Ok(d) => println!("criterion {id:>2} PASS {name} [{secs:.1}s]: {d}"),
        Err(d) => {
            println!("criterion {id:>2} FAIL {name} [{secs:.1}s]: {d}");
            panic!("criterion {id} failed: {d}");
        }
    }
}

#[test]
fn criterion_01_kraft_and_counting() {
    report(1, "kraft and counting", criterion_1);
}

#[test]
fn criterion_02_two_part_inequality() {
    report(2, "two-part inequality", criterion_2);
}

#[test]
fn criterion_03_deficiency_tail() {
    report(3, "randomness-deficiency tail", criterion_3);
}

#[test]
fn criterion_04_containment_absolute() {
    report(4, "containment, absolute mode", criterion_4);
}

#[test]
fn criterion_05_containment_relative_and_tuples() {
    report(5, "containment, relative and tuple modes", criterion_5);
}

#[test]
fn criterion_06_prediction_mass() {
    report(6, "prediction mass ratios", criterion_6);
}

#[test]
fn criterion_07_marking_game() {
    report(7, "marking game", criterion_7);
}

#[test]
fn criterion_08_simplification_and_endgame() {
    report(8, "distribution simplification and endgame", criterion_8);
}

#[test]
fn criterion_09_profile_distances() {
    report(9, "profile distances", criterion_9);
}

#[test]
fn criterion_10_constructions() {
    report(10, "constructions", criterion_10);
}
