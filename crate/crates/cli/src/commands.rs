use std::fs;
use std::io::Write;

use serde::Serialize;

use qsearch::bounds::{bounds_report, BoundsReport, CSV_COLUMNS};
use qsearch::game::{
    build_oracle, build_searcher, default_limit, replay, run_game, sweep_fixed, transcript_to_json, Adversary,
    BranchStats, Outcome, ReplayReport, Transcript,
};
use qsearch::literal::format_subspace;
use qsearch::plane::Plane;
use qsearch::separating::format::{read_query_set, write_query_set};
use qsearch::separating::{
    brute_force_minimum, claim_count_formula, claim_counts_all_pairs, explicit_construction, is_separating,
    random_construction, CandidatePool, QuerySet, Separation,
};
use qsearch::{Error, Field, Space};

use crate::{Cli, Command, Dims, Failure, Format, Method, OracleCommand};

type CmdResult = std::result::Result<(), Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Adaptive { dims, strategy, oracle, seed, point_rate, limit, transcript, format } => {
            adaptive(cli, *dims, strategy, oracle, *seed, *point_rate, *limit, transcript.as_deref(), *format)
        }
        Command::Construct { dims, method, seed, retries, out, format } => {
            construct(cli, *dims, *method, *seed, *retries, out.as_deref(), *format)
        }
        Command::Verify { file } => verify(cli, file),
        Command::Bounds { dims, json, csv } => bounds(cli, *dims, *json, *csv),
        Command::Oracle { which: OracleCommand::ClaimCount { dims, format } } => claim_count(cli, *dims, *format),
        Command::Oracle { which: OracleCommand::BruteMin { dims, max, pool, format } } => {
            brute_min(cli, *dims, *max, (*pool).into(), *format)
        }
        Command::Replay { file, format } => replay_cmd(cli, file, *format),
    }
}

fn space(dims: Dims) -> std::result::Result<Space, Failure> {
    if dims.n < 2 {
        return Err(Failure::Usage(format!("n must be at least 2, got {}", dims.n)));
    }
    Ok(Space::new(Field::new(dims.q)?, dims.n)?)
}

fn emit(cli: &Cli, text: &str) -> CmdResult {
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Emits the report, then fails with `why` unless `passed`.
fn finish<T: Serialize>(cli: &Cli, report: &T, format: Format, text: String, passed: bool, why: &str) -> CmdResult {
    match format {
        Format::Json => emit(cli, &json(report))?,
        Format::Text => emit(cli, &text)?,
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(why.to_string()))
    }
}

/// A bound figure with the name of the result behind it.
#[derive(Serialize, Clone, Copy)]
struct Figure {
    value: u64,
    tag: &'static str,
}

#[derive(Serialize)]
struct AdaptiveReport {
    n: usize,
    q: u64,
    strategy: String,
    oracle: String,
    games: usize,
    max_queries: usize,
    mean_queries: f64,
    upper_bound: Figure,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<Figure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branches: Option<BranchStats>,
    identified: bool,
    passed: bool,
}

fn strategy_name(strategy: &str, seed: Option<u64>, point_rate: u32) -> std::result::Result<String, Failure> {
    match strategy {
        "plane" | "inductive" | "two-round" => Ok(strategy.to_string()),
        "random" => {
            let seed = seed.ok_or_else(|| Failure::Usage("the random strategy needs --seed".into()))?;
            Ok(if point_rate == 0 { format!("random:{seed}") } else { format!("random-mixed:{seed}:{point_rate}") })
        }
        other => Err(Failure::Usage(format!("unknown strategy `{other}`"))),
    }
}

fn strategy_bound(strategy: &str, n: usize, q: u64) -> Figure {
    let k = q - 1;
    match strategy {
        "plane" => Figure { value: 2 * q - 1, tag: "plane-pencil" },
        "inductive" => Figure { value: k * (n as u64 - 1) + 1, tag: "inductive-strategy" },
        "two-round" => Figure { value: n as u64 + (n as u64 - 1) * (q - 2), tag: "two-round" },
        _ => Figure { value: default_limit(n, q) as u64, tag: "point-count" },
    }
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    cli: &Cli,
    dims: Dims,
    strategy: &str,
    oracle: &str,
    seed: Option<u64>,
    point_rate: u32,
    limit: Option<usize>,
    transcript: Option<&std::path::Path>,
    format: Format,
) -> CmdResult {
    let space = space(dims)?;
    let (n, q) = (dims.n, dims.q);
    let name = strategy_name(strategy, seed, point_rate)?;
    build_searcher(&name, &space)?;
    let limit = limit.unwrap_or_else(|| default_limit(n, q));
    if limit == 0 {
        return Err(Failure::Usage("--limit must be positive".into()));
    }
    let upper = strategy_bound(strategy, n, q);
    let mut lower = None;
    let mut branches = None;
    let games: Vec<Transcript> = if oracle == "fixed:all" {
        if transcript.is_some() {
            return Err(Failure::Usage("--transcript needs a single game, not fixed:all".into()));
        }
        space.check_cap(cli.point_cap)?;
        sweep_fixed(&space, || build_searcher(&name, &space), limit)?
    } else if oracle == "adversary" {
        if n != 3 {
            return Err(Failure::Usage("the adversary plays in the plane only (n = 3)".into()));
        }
        let mut s = build_searcher(&name, &space)?;
        let mut adv = Adversary::new(Plane::from_space(space.clone())?);
        let t = run_game(&space, s.as_mut(), &mut adv, limit)?;
        lower = Some(Figure { value: 2 * q - 1, tag: "plane-adversary" });
        branches = Some(adv.stats().clone());
        vec![t]
    } else {
        let mut s = build_searcher(&name, &space)?;
        let mut o = build_oracle(oracle, &space)?;
        vec![run_game(&space, s.as_mut(), o.as_mut(), limit)?]
    };
    if let (Some(path), [t]) = (transcript, games.as_slice()) {
        fs::write(path, transcript_to_json(t))?;
    }
    let counts: Vec<usize> = games.iter().map(Transcript::count).collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let mean = counts.iter().sum::<usize>() as f64 / counts.len().max(1) as f64;
    let identified = games.iter().all(|t| matches!(t.outcome, Outcome::Identified(_)));
    let passed = identified && max as u64 <= upper.value && lower.is_none_or(|l| max as u64 >= l.value);
    let oracle_name = if games.len() == 1 { games[0].oracle.clone() } else { oracle.to_string() };
    let report = AdaptiveReport {
        n,
        q,
        strategy: name,
        oracle: oracle_name,
        games: games.len(),
        max_queries: max,
        mean_queries: mean,
        upper_bound: upper,
        lower_bound: lower,
        branches,
        identified,
        passed,
    };
    let mut text = format!(
        "{} vs {} (n = {n}, q = {q}): {} game(s), max {max} queries, mean {mean:.4}\n",
        report.strategy, report.oracle, report.games
    );
    text.push_str(&format!("upper bound {} ({}): {}\n", upper.value, upper.tag, ok(max as u64 <= upper.value)));
    if let Some(l) = lower {
        text.push_str(&format!("forced lower bound {} ({}): {}\n", l.value, l.tag, ok(max as u64 >= l.value)));
    }
    if !identified {
        text.push_str("some game ended without identifying the point\n");
    }
    finish(cli, &report, format, text, passed, "adaptive query count outside its bound")
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "VIOLATED"
    }
}

#[derive(Serialize)]
struct ConstructReport {
    n: usize,
    q: u64,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attempts: Option<usize>,
    size: usize,
    separating: bool,
    bound: Figure,
    within_bound: bool,
}

fn construct(
    cli: &Cli,
    dims: Dims,
    method: Method,
    seed: Option<u64>,
    retries: usize,
    out: Option<&std::path::Path>,
    format: Format,
) -> CmdResult {
    let space = space(dims)?;
    let (n, q) = (dims.n, dims.q);
    space.check_cap(cli.point_cap)?;
    let (set, attempts, bound, name): (QuerySet, Option<usize>, Figure, &'static str) = match method {
        Method::Explicit => {
            let value = n as u64 + (n * (n - 1) / 2) as u64 * (q - 2);
            (explicit_construction(&space)?, None, Figure { value, tag: "explicit-construction" }, "explicit")
        }
        Method::Random => {
            let seed = seed.ok_or_else(|| Failure::Usage("the random method needs --seed".into()))?;
            let r = random_construction(&space, seed, retries, cli.point_cap)?;
            (r.set, Some(r.attempts), Figure { value: 2 * n as u64 * q, tag: "random-pencils" }, "random")
        }
    };
    let separating = is_separating(&space, &set, cli.point_cap)?.is_separating();
    let within = set.len() as u64 <= bound.value;
    let report = ConstructReport {
        n,
        q,
        method: name,
        seed: if method == Method::Random { seed } else { None },
        attempts,
        size: set.len(),
        separating,
        bound,
        within_bound: within,
    };
    if !separating {
        return Err(Failure::Check("constructed family does not separate".into()));
    }
    let file = write_query_set(&set);
    let text = format!(
        "{name} construction (n = {n}, q = {q}): size {}, separating, bound {} ({}): {}\n",
        set.len(),
        bound.value,
        bound.tag,
        ok(within)
    );
    match out {
        Some(path) => {
            fs::write(path, file)?;
            finish(cli, &report, format, text, within, "construction larger than its bound")
        }
        None => {
            emit(cli, &file)?;
            eprint!("{}", if format == Format::Json { json(&report) } else { text });
            if within {
                Ok(())
            } else {
                Err(Failure::Check("construction larger than its bound".into()))
            }
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    q: u64,
    size: usize,
    separating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[Vec<usize>; 2]>,
}

fn verify(cli: &Cli, file: &std::path::Path) -> CmdResult {
    let text = fs::read_to_string(file)?;
    let (space, set) = read_query_set(&text)?;
    let verdict = is_separating(&space, &set, cli.point_cap)?;
    let witness = match &verdict {
        Separation::Separating => None,
        Separation::Collision(u, v) => Some([u.to_indices(), v.to_indices()]),
    };
    let report =
        VerifyReport { n: space.n(), q: space.q(), size: set.len(), separating: verdict.is_separating(), witness };
    emit(cli, &json(&report))?;
    if report.separating {
        Ok(())
    } else {
        Err(Failure::Check("query set does not separate all points".into()))
    }
}

fn bounds_text(r: &BoundsReport) -> String {
    let mut t = format!("n = {}, q = {}\n", r.n, r.q);
    t.push_str(&format!(
        "adaptive: {:.6} (ceil {}) <= A <= {}\n",
        r.adaptive.lower.approx, r.adaptive.lower_ceil, r.adaptive.upper.value
    ));
    t.push_str(&format!(
        "non-adaptive: max({:.6}, {:.6}) <= M <= {} (explicit {}, random {})\n",
        r.nonadaptive.lower_katona.approx,
        r.nonadaptive.lower_simplified.approx,
        r.nonadaptive.upper.value,
        r.nonadaptive.upper_explicit.value,
        r.nonadaptive.upper_random.value
    ));
    if let Some(p) = &r.plane {
        if let Some(h) = &p.ht_lower {
            t.push_str(&format!("plane lower bound: {:.6}\n", h.approx));
        }
        t.push_str(&format!("double blocking lower bound: {:.6}\n", p.tau2_lower.approx));
        if let Some(u) = &p.tau2_upper {
            t.push_str(&format!("double blocking upper bound: {}\n", u.value));
        }
        if let Some(e) = &p.exact_m3q {
            t.push_str(&format!("exact plane value: {}\n", e.value));
        }
    }
    t
}

fn bounds(cli: &Cli, dims: Dims, as_json: bool, as_csv: bool) -> CmdResult {
    space(dims)?;
    let r = bounds_report(dims.n, dims.q)?;
    let text = if as_json {
        json(&r)
    } else if as_csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS)
            .and_then(|_| w.write_record(r.csv_row()))
            .map_err(|e| Failure::Usage(e.to_string()))?;
        String::from_utf8(w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?).expect("csv is utf-8")
    } else {
        bounds_text(&r)
    };
    emit(cli, &text)?;
    if r.is_ordered() {
        Ok(())
    } else {
        Err(Failure::Check("a lower bound exceeds an upper bound".into()))
    }
}

#[derive(Serialize)]
struct Mismatch {
    u: Vec<usize>,
    v: Vec<usize>,
    count: u64,
}

#[derive(Serialize)]
struct ClaimReport {
    n: usize,
    q: u64,
    formula: u64,
    pairs: usize,
    mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_mismatch: Option<Mismatch>,
    passed: bool,
}

fn claim_count(cli: &Cli, dims: Dims, format: Format) -> CmdResult {
    let space = space(dims)?;
    let formula = claim_count_formula(dims.n, dims.q)?;
    let formula: u64 = formula.try_into().map_err(|_| Failure::Usage("formula value exceeds 64 bits".into()))?;
    let counts = claim_counts_all_pairs(&space, cli.point_cap)?;
    let bad: Vec<_> = counts.iter().filter(|c| c.count != formula).collect();
    let report = ClaimReport {
        n: dims.n,
        q: dims.q,
        formula,
        pairs: counts.len(),
        mismatches: bad.len(),
        first_mismatch: bad.first().map(|c| Mismatch {
            u: space.point_at(c.u).to_indices(),
            v: space.point_at(c.v).to_indices(),
            count: c.count,
        }),
        passed: bad.is_empty(),
    };
    let text = format!(
        "pair count (n = {}, q = {}): formula {formula}, enumeration agrees on {}/{} pairs\n",
        dims.n,
        dims.q,
        counts.len() - bad.len(),
        counts.len()
    );
    finish(cli, &report, format, text, report.passed, "pair-count formula disagrees with enumeration")
}

#[derive(Serialize)]
struct Bracket {
    lower: u64,
    upper: u64,
    within: bool,
}

#[derive(Serialize)]
struct BruteReport {
    n: usize,
    q: u64,
    pool: CandidatePool,
    max: usize,
    size: usize,
    witness: Vec<String>,
    nodes: u64,
    bracket: Bracket,
    passed: bool,
}

fn brute_min(cli: &Cli, dims: Dims, max: usize, pool: CandidatePool, format: Format) -> CmdResult {
    let space = space(dims)?;
    let (n, q) = (dims.n, dims.q);
    let r = match brute_force_minimum(&space, max, pool) {
        Ok(r) => r,
        Err(Error::Exhausted(m)) => return Err(Failure::Check(format!("no separating system of size at most {m}"))),
        Err(e) => return Err(e.into()),
    };
    let b = bounds_report(n, q)?;
    let mut lower = b.adaptive.lower_ceil;
    if let Some(h) = b.plane.as_ref().and_then(|p| p.ht_lower.as_ref()) {
        lower = lower.max(h.approx.ceil() as u64);
    }
    let upper: u64 = b.nonadaptive.upper.value.clone().try_into().unwrap_or(u64::MAX);
    let within = (lower..=upper).contains(&(r.size as u64));
    let report = BruteReport {
        n,
        q,
        pool,
        max,
        size: r.size,
        witness: r.witness.queries().iter().map(|s| format_subspace(q, s)).collect(),
        nodes: r.nodes,
        bracket: Bracket { lower, upper, within },
        passed: within,
    };
    let mut text =
        format!("minimum separating system (n = {n}, q = {q}): {} in [{lower}, {upper}]: {}\n", r.size, ok(within));
    for w in &report.witness {
        text.push_str(w);
        text.push('\n');
    }
    finish(cli, &report, format, text, within, "minimum outside the bound bracket")
}

fn replay_cmd(cli: &Cli, file: &std::path::Path, format: Format) -> CmdResult {
    let text = fs::read_to_string(file)?;
    let r: ReplayReport = replay(&text)?;
    let passed = r.consistent && r.reproduced;
    let summary = format!(
        "{} queries; consistent: {}; reproduced: {}{}\n",
        r.count,
        r.consistent,
        r.reproduced,
        r.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
    );
    finish(cli, &r, format, summary, passed, "transcript does not replay")
}
