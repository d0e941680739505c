//! Executes an [`ExperimentConfig`] and wraps the result in a self-describing report.

use algostat::bits::StringTuple;
use algostat::codebook::conditional::conditional_complexity;
use algostat::constructions::{example3_distribution, example3_family, plane_pair, shared_prefix_pair};
use algostat::games::{exhaustive_winning_strategy, probabilistic_marking, simplify_distribution, BipartiteGame};
use algostat::models::{enumerate_models, parse_distribution, parse_model};
use algostat::prediction::{default_cap, Landscape, Mode, PredictionQuery};
use algostat::statistics::{
    dist_optimality_deficiency, dist_randomness_deficiency, optimality_profile, profile_distance, stochasticity_profile,
    tuple_optimality_deficiency, Profile,
};
use algostat::verify::{self, Experiment, Report};
use algostat::{complexity, DistributionFamily, FamilyId, Object, CODEBOOK_VERSION};
use serde::Serialize;
use serde_json::{json, Value};

use crate::baseline::{freeze_baselines, FreezeOutcome, Status};
use crate::config::{
    parse_d_grid, Command, ConstructCommand, DeficiencyKind, ExperimentConfig, Format, GameCommand, GraphArgs, ModeArg,
    NeighborhoodKind, PairKind, VerifyArgs,
};

/// `git describe` of the build, or the package version outside a checkout.
pub const BUILD_ID: &str = env!("ALGOSTAT_BUILD_ID");

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, inputs or configuration (exit 2).
    Usage(String),
    /// A check failed or a baseline was exceeded (exit 1); the report is still written.
    Assertion(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Assertion(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Assertion(m) => f.write_str(m),
        }
    }
}

impl From<algostat::Error> for Failure {
    fn from(e: algostat::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// A finished run: the report text and, if an assertion failed, why.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    config: &'a ExperimentConfig,
    seeds: Vec<u64>,
    codebook_version: u32,
    build_id: &'a str,
    result: Value,
}

struct Body {
    result: Value,
    csv: Option<String>,
    failure: Option<Failure>,
}

impl Body {
    fn ok(result: Value) -> Self {
        Self { result, csv: None, failure: None }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Res<Outcome> {
    let body = dispatch(&cfg.command)?;
    let text = match cfg.format {
        Format::Json => {
            let env = Envelope {
                config: cfg,
                seeds: cfg.command.seeds(),
                codebook_version: CODEBOOK_VERSION,
                build_id: BUILD_ID,
                result: body.result,
            };
            serde_json::to_string_pretty(&env).expect("plain data") + "\n"
        }
        Format::Csv => {
            let csv = body.csv.ok_or_else(|| usage("csv output is available for profile, predict and containment verify runs"))?;
            let header = format!(
                "# config={} seeds={:?} codebook_version={CODEBOOK_VERSION} build_id={BUILD_ID}\n",
                serde_json::to_string(cfg).expect("plain data"),
                cfg.command.seeds()
            );
            header + &csv
        }
    };
    Ok(Outcome { text, failure: body.failure })
}

fn dispatch(cmd: &Command) -> Res<Body> {
    match cmd {
        Command::Complexity { object, given } => complexity_cmd(object, given.as_deref()),
        Command::Deficiency { data, model, dist, kind } => deficiency_cmd(data, model.as_deref(), dist.as_deref(), *kind),
        Command::Predict { data, family, d, cap, mode, kind } => predict_cmd(data, family, *d, *cap, *mode, *kind),
        Command::Profile { data, pair, n, seed, dfam, amax } => profile_cmd(data.as_deref(), *pair, *n, *seed, dfam, *amax),
        Command::Verify(args) => verify_cmd(args),
        Command::Game(g) => game_cmd(g),
        Command::Construct(c) => construct_cmd(c),
        Command::Families { n } => families_cmd(*n),
    }
}

fn parse_object(s: &str) -> Res<Object> {
    s.parse::<Object>().map_err(|e| usage(format!("cannot read `{s}`: {e}")))
}

fn parse_data(s: &str) -> Res<StringTuple> {
    s.parse::<StringTuple>().map_err(|e| usage(format!("cannot read data `{s}`: {e}")))
}

fn complexity_cmd(object: &str, given: Option<&str>) -> Res<Body> {
    let obj = parse_object(object)?;
    let r = match given {
        Some(g) => conditional_complexity(obj.clone(), parse_object(g)?)?,
        None => complexity(obj.clone())?,
    };
    Ok(Body::ok(json!({
        "object": object, "kind": obj.kind(), "given": given,
        "complexity_bits": r.value, "scheme": format!("{:?}", r.witness.scheme), "witness": r.witness.bits.to_string(),
    })))
}

fn deficiency_cmd(data: &str, model: Option<&str>, dist: Option<&str>, kind: DeficiencyKind) -> Res<Body> {
    let xs = parse_data(data)?;
    let v = match (model, dist, kind) {
        (Some(m), _, DeficiencyKind::Optimality) => tuple_optimality_deficiency(&xs, &parse_model(m)?)?,
        (Some(m), _, DeficiencyKind::Randomness) => {
            if xs.l() != 1 {
                return Err(usage("randomness deficiency in a model takes one string; use --dist for tuples"));
            }
            algostat::statistics::randomness_deficiency(&xs.items()[0], &parse_model(m)?)?
        }
        (None, Some(p), DeficiencyKind::Optimality) => dist_optimality_deficiency(&xs, &parse_distribution(p)?)?,
        (None, Some(p), DeficiencyKind::Randomness) => dist_randomness_deficiency(&xs, &parse_distribution(p)?)?,
        (None, None, _) => return Err(usage("give --model or --dist")),
    };
    Ok(Body::ok(json!({"data": data, "kind": kind, "deficiency": v})))
}

fn predict_cmd(data: &str, family: &str, d: u32, cap: Option<u32>, mode: Option<ModeArg>, kind: NeighborhoodKind) -> Res<Body> {
    let xs = parse_data(data)?;
    let family = FamilyId::parse(family)?;
    let mut q = PredictionQuery::new(xs.clone(), family, d as i64 * 1024);
    if let Some(c) = cap {
        q.cap_bits = c;
    }
    if let Some(m) = mode {
        q.mode = match m {
            ModeArg::Absolute => Mode::Absolute,
            ModeArg::Relative => Mode::Relative,
        };
    }
    let land = Landscape::new(&xs, family, q.cap_bits)?;
    let nb = match kind {
        NeighborhoodKind::Algorithmic => land.algorithmic(q.d_millibits, q.mode),
        NeighborhoodKind::Probabilistic => land.probabilistic(d),
    };
    let mut csv = String::from("y,witness\n");
    for m in &nb.members {
        csv += &format!("{},{}\n", m.y, csv_field(&m.witness));
    }
    Ok(Body {
        result: json!({
            "data": data, "family": family.name(), "d_bits": d, "cap_bits": q.cap_bits, "mode": q.mode, "kind": kind,
            "containing_sets": land.containing(), "members": nb.strings(), "witnesses": nb.members,
        }),
        csv: Some(csv),
        failure: None,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn profile_csv(p: &Profile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a_bits", "b_millibits", "witness"]).expect("in-memory");
    for pt in &p.points {
        w.write_record([pt.a_bits.to_string(), pt.b_millibits.to_string(), pt.witness.clone()]).expect("in-memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("utf-8")
}

fn profile_cmd(data: Option<&str>, pair: Option<PairKind>, n: u32, seed: u64, dfam: &str, amax: u32) -> Res<Body> {
    let (label, xs) = match (data, pair) {
        (Some(d), _) => (d.to_string(), parse_data(d)?),
        (None, Some(PairKind::Prefix)) => {
            let (a, b) = shared_prefix_pair(n, seed)?;
            (format!("prefix-pair n={n} seed={seed}"), StringTuple::new(vec![a, b])?)
        }
        (None, Some(PairKind::Plane)) => {
            let (l, p) = plane_pair(n, seed)?;
            (format!("plane-pair k={n} seed={seed}"), StringTuple::new(vec![l.encode(), p.encode()])?)
        }
        (None, None) => return Err(usage("give --data or --pair")),
    };
    let fam = DistributionFamily::parse(dfam)?;
    let p = optimality_profile(&xs, &fam, amax)?;
    let q = stochasticity_profile(&xs, &fam, amax)?;
    let dist = profile_distance(&p, &q);
    let csv = format!(
        "# optimality\n{}# stochasticity\n{}# distance_millibits={}\n",
        profile_csv(&p),
        profile_csv(&q),
        dist.map_or("unreachable".into(), |d| d.to_string())
    );
    Ok(Body {
        result: json!({
            "data": label, "tuple": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "dfam": dfam, "amax": amax,
            "optimality": p, "stochasticity": q, "distance_millibits": dist,
        }),
        csv: Some(csv),
        failure: None,
    })
}

fn run_experiment(e: Experiment, args: &VerifyArgs) -> Res<Report> {
    let overridden = !args.n.is_empty() || !args.family.is_empty() || args.d.is_some();
    if !overridden {
        return Ok(verify::run(e)?);
    }
    let families = args.family.iter().map(|f| FamilyId::parse(f)).collect::<algostat::Result<Vec<_>>>()?;
    let d_grid = args.d.as_deref().map(parse_d_grid).transpose().map_err(usage)?;
    let mut grids = verify::default_containment_grids(e);
    if !grids.is_empty() {
        for g in &mut grids {
            if !args.n.is_empty() {
                g.ns = args.n.clone();
            }
            if !families.is_empty() {
                g.families = families.clone();
            }
            if d_grid.is_some() {
                g.d_grid = d_grid.clone();
            }
        }
        return Ok(verify::containment_all(e, &grids)?);
    }
    if d_grid.is_some() {
        return Err(usage(format!("--d applies to containment experiments, not {e}")));
    }
    match e {
        Experiment::Corollary1 => {
            let ns = if args.n.is_empty() { vec![4] } else { args.n.clone() };
            let fams = if families.is_empty() { vec![FamilyId::Cylinders, FamilyId::HammingBalls] } else { families };
            Ok(verify::corollary_ratios(&ns, &[1, 2], &fams, 2)?)
        }
        Experiment::Theorem5 if families.is_empty() => Ok(verify::string_profiles(&args.n)?),
        _ => Err(usage(format!("{e} has a fixed grid; drop --n/--family"))),
    }
}

fn verify_cmd(args: &VerifyArgs) -> Res<Body> {
    let experiments: Vec<Experiment> = if args.experiment == "all" {
        Experiment::ALL.to_vec()
    } else {
        vec![Experiment::parse(&args.experiment).map_err(|_| {
            usage(format!("unknown experiment `{}`; expected theorem-1..theorem-6, corollary-1, lemma-1, lemma-4 or all", args.experiment))
        })?]
    };
    let mut report = Report::default();
    for e in &experiments {
        report.merge(run_experiment(*e, args)?);
    }
    let (outcome, verdicts) = freeze_baselines(&args.baseline, &report.measurements, args.refreeze)?;
    let failing_checks: Vec<_> = report.checks.iter().filter(|c| !c.ok).collect();
    let over: Vec<_> = verdicts.iter().filter(|v| v.status != Status::Within).collect();
    let failure = if !failing_checks.is_empty() {
        Some(Failure::Assertion(format!("{} checks failed, first: {}", failing_checks.len(), failing_checks[0].name)))
    } else if outcome == FreezeOutcome::Refused {
        Some(Failure::Assertion(format!(
            "{} measurements exceed or are missing from {}; rerun with --refreeze to accept them",
            over.len(),
            args.baseline.display()
        )))
    } else {
        None
    };
    let slack_table = report.slack_table();
    let csv = (!report.containment.is_empty()).then(|| {
        let mut s = String::from("d_bits,direction,slack_millibits\n");
        for r in &slack_table {
            s += &format!("{},{},{}\n", r.d_bits, r.direction.name(), r.slack_millibits.map_or(String::new(), |v| v.to_string()));
        }
        s
    });
    let result = json!({
        "experiments": experiments.iter().map(|e| json!({"name": e.name(), "measures": e.description()})).collect::<Vec<_>>(),
        "baseline": args.baseline, "baseline_outcome": outcome, "passed": failure.is_none(),
        "verdicts": verdicts, "checks": report.checks, "slack_table": slack_table,
        "containment": report.containment, "profiles": report.profiles, "details": report.details,
    });
    Ok(Body { result, csv, failure })
}

fn build_game(g: &GraphArgs) -> Res<BipartiteGame> {
    if g.i > 20 {
        return Err(usage("--i above 20 would create more than a million left nodes"));
    }
    Ok(BipartiteGame::random(g.n, g.i, g.k, g.left.unwrap_or(1 << g.i), g.degree, g.graph_seed)?)
}

fn game_summary(game: &BipartiteGame) -> Value {
    json!({
        "n": game.n, "i": game.i, "k": game.k, "left": game.left().len(), "right": game.right_count(),
        "p": game.mark_probability(), "mark_budget": game.mark_budget(), "graph_complexity_bits": game.graph_complexity(),
    })
}

fn game_cmd(g: &GameCommand) -> Res<Body> {
    match g {
        GameCommand::Run { graph, seed, transcript } => {
            let game = build_game(graph)?;
            let run = probabilistic_marking(&game, *seed);
            let mut result = json!({
                "game": game_summary(&game), "seed": run.seed, "success": run.success, "marked": run.marked_count(),
                "over_budget": run.over_budget, "first_violation": run.first_violation,
                "audit": algostat::games::audit_run(&game, &run),
            });
            if *transcript {
                let events: Vec<Value> = run.transcript(&game).iter().map(|l| serde_json::from_str(l).expect("own output")).collect();
                result["transcript"] = Value::Array(events);
            }
            Ok(Body::ok(result))
        }
        GameCommand::Search { graph, max_states } => {
            let game = build_game(graph)?;
            let found = exhaustive_winning_strategy(&game, *max_states)?;
            Ok(Body::ok(json!({
                "game": game_summary(&game),
                "strategy_found": found.is_some(),
                "decisions": found.as_ref().map(|s| s.len()),
                "replay_verified": found.as_ref().map(|s| s.defeats_every_adversary(&game)),
            })))
        }
        GameCommand::Simplify { data, dfam, a, b, seed } => {
            let xs = parse_data(data)?;
            let s = simplify_distribution(&xs, &DistributionFamily::parse(dfam)?, *a, *b, None, *seed)?;
            Ok(Body::ok(json!({"data": data, "dfam": dfam, "simplified": s})))
        }
    }
}

fn construct_cmd(c: &ConstructCommand) -> Res<Body> {
    match c {
        ConstructCommand::PlanePair { k, seed } => {
            let (line, point) = plane_pair(*k, *seed)?;
            Ok(Body::ok(json!({
                "k": k, "seed": seed,
                "line": {"slope": line.slope.value(), "intercept": line.intercept.value(), "encoding": line.encode()},
                "point": {"u": point.u.value(), "v": point.v.value(), "encoding": point.encode()},
                "incident": line.contains(&point),
            })))
        }
        ConstructCommand::PrefixPair { n, seed } => {
            let (a, b) = shared_prefix_pair(*n, *seed)?;
            Ok(Body::ok(json!({"n": n, "seed": seed, "first": a, "second": b})))
        }
        ConstructCommand::Example3 { n, prefix } => {
            let prefix = prefix.parse().map_err(|e| usage(format!("bad --prefix: {e}")))?;
            let fd = example3_family(*n, &prefix)?;
            let listed = example3_distribution(*n, &prefix).ok().map(|p| p.support().len());
            let on = prefix.concat(&algostat::BitString::zeros(*n)?)?;
            Ok(Body::ok(json!({
                "n": n, "prefix": prefix, "distribution": fd.label(),
                "p_on_prefix": fd.prob(&on).to_string(),
                "p_off_prefix": fd.prob(&flip_first(&on)?).to_string(),
                "listed_support": listed,
            })))
        }
    }
}

fn flip_first(x: &algostat::BitString) -> Res<algostat::BitString> {
    Ok(algostat::BitString::new(x.len(), x.value() ^ (1 << (x.len() - 1)))?)
}

fn families_cmd(n: Option<u32>) -> Res<Body> {
    let mut out = Vec::new();
    for f in FamilyId::ALL {
        let mut entry = json!({"name": f.name(), "code": f.code(), "description": f.description()});
        if let Some(n) = n {
            entry["available"] = json!(f.available(n));
            if f.available(n) && f != FamilyId::Explicit && (f != FamilyId::AllSubsets || n <= 3) {
                entry["members_within_default_cap"] = json!(enumerate_models(f, n, default_cap(n, 1))?.len());
            }
        }
        out.push(entry);
    }
    Ok(Body::ok(json!({"families": out})))
}
