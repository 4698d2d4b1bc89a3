//! `cycle-revival`: simulate walks on cycles, verify revival tables, run the
//! solvers and build special states.
//!
//! Exit codes: 0 success, 1 verification or construction failure, 2 usage error.

mod parse;

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cycle_revival::expr::ExactValue;
use cycle_revival::record::SolutionRecord;
use cycle_revival::revival::CERTIFY_TOL;
use cycle_revival::solver::{self, CaseTag, RhoEdge, Solution, DEFAULT_MAX_DEN};
use cycle_revival::special::{self, build_special_state, demoivre_subspace, eigenbasis};
use cycle_revival::walk::{build_walk_operator, line_walk_trajectory, trajectory, CoinParams, WalkerState};
use cycle_revival::{ReducedFraction, C64};

use parse::Initial;

#[derive(Parser)]
#[command(name = "cycle-revival", version, about = "Quantum walks on cycles and their revivals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Step a walk and print every amplitude.
    Simulate(SimulateArgs),
    /// Check ‖U^N - I‖ for a table or a single point.
    Verify(VerifyArgs),
    /// Search for revival parameters.
    Solve(SolveArgs),
    /// Build a state that revives with a given period.
    Special(SpecialArgs),
}

/// Coin phases. Without any of these flags `δ = 0`.
#[derive(Args, Clone)]
struct CoinArgs {
    /// ρ, e.g. `2/3` or `(5-sqrt5)/8`.
    #[arg(long, value_parser = parse::exact)]
    rho: Option<ExactValue>,
    #[arg(long, value_parser = parse::real, conflicts_with_all = ["delta_frac", "delta_rad"])]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse::real, conflicts_with_all = ["delta_frac", "delta_rad"])]
    beta: Option<f64>,
    /// δ = 2π·u/v.
    #[arg(long, value_name = "U/V", value_parser = parse::fraction, conflicts_with = "delta_rad")]
    delta_frac: Option<ReducedFraction>,
    /// δ in radians.
    #[arg(long, value_parser = parse::real)]
    delta_rad: Option<f64>,
}

impl CoinArgs {
    fn rho(&self) -> Result<&ExactValue> {
        self.rho.as_ref().ok_or_else(|| usage("--rho is required"))
    }

    fn params(&self, rho: f64) -> Result<CoinParams> {
        if self.alpha.is_some() || self.beta.is_some() {
            return Ok(CoinParams::new(rho, self.alpha.unwrap_or(0.0), self.beta.unwrap_or(0.0))?);
        }
        if let Some(d) = self.delta_frac {
            return Ok(CoinParams::from_delta_fraction(rho, d)?);
        }
        Ok(CoinParams::from_delta(rho, self.delta_rad.unwrap_or(0.0).rem_euclid(TAU))?)
    }

    /// `δ/2π` for the exact solvers, which need it rational.
    fn delta_fraction(&self) -> Result<ReducedFraction> {
        if self.delta_rad.is_some() || self.alpha.is_some() || self.beta.is_some() {
            return Err(usage("this mode needs --delta-frac"));
        }
        Ok(self.delta_frac.unwrap_or(ReducedFraction::ZERO))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SimulateArgs {
    /// Cycle length; omit with --line.
    #[arg(long, required_unless_present = "line")]
    k: Option<usize>,
    #[command(flatten)]
    coin: CoinArgs,
    #[arg(long, default_value_t = 10)]
    steps: u64,
    /// `up0`, `symmetric`, or amplitudes `re[:im],...` in order
    /// (0,↑), (0,↓), (1,↑), ...
    #[arg(long, default_value = "up0", value_parser = parse::initial)]
    initial: Initial,
    /// Walk on the infinite line instead of a cycle.
    #[arg(long, conflicts_with = "k")]
    line: bool,
    #[arg(long, value_enum, default_value = "csv")]
    out: OutFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5), conflicts_with_all = ["k", "n"])]
    table: Option<u8>,
    #[arg(long, required_unless_present = "table")]
    k: Option<usize>,
    #[command(flatten)]
    coin: CoinArgs,
    #[arg(long, required_unless_present = "table")]
    n: Option<u64>,
    #[arg(long, default_value_t = CERTIFY_TOL, value_parser = parse::positive)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    RhoEdge,
    K2,
    K3,
    K4,
    TwoForm,
    Approx,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    case: Case,
    /// Phase m/n fixing ρ (k2, k3, k4). k3 and k4 scan all phases without it.
    #[arg(long, value_name = "M/N", value_parser = parse::fraction)]
    seed: Option<ReducedFraction>,
    #[command(flatten)]
    coin: CoinArgs,
    /// Largest phase denominator searched.
    #[arg(long, default_value_t = DEFAULT_MAX_DEN)]
    max_den: u64,
    /// Drop results with a longer period.
    #[arg(long)]
    max_n: Option<u64>,
    /// Tolerance on ρ for the approximate solver.
    #[arg(long, value_parser = parse::positive)]
    epsilon: Option<f64>,
    /// 0 or 1 for rho-edge; both when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    edge: Option<u8>,
}

#[derive(Args)]
struct SpecialArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    coin: CoinArgs,
    #[arg(long)]
    period: u64,
    /// One coefficient per selected eigenvector, `re[:im],...`; equal weights by default.
    #[arg(long, value_delimiter = ',', value_parser = parse::complex)]
    coeffs: Option<Vec<C64>>,
    /// Tolerance on |λ^N - 1| when selecting eigenvectors.
    #[arg(long, default_value_t = CERTIFY_TOL, value_parser = parse::positive)]
    tol: f64,
}

/// A flag combination clap cannot rule out on its own.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::Special(a) => special_state(a),
    };
    match result {
        Ok(code) => code,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// The reader went away, e.g. `| head`.
fn broken_pipe(e: &anyhow::Error) -> bool {
    let io_kind = |e: &io::Error| e.kind() == io::ErrorKind::BrokenPipe;
    e.downcast_ref::<io::Error>().is_some_and(io_kind)
        || e.downcast_ref::<csv::Error>().is_some_and(|e| match e.kind() {
            csv::ErrorKind::Io(e) => io_kind(e),
            _ => false,
        })
}

fn c(z: C64) -> Value {
    json!([z.re, z.im])
}

/// One step: `(step, [(position, [up, down])])`.
type Frame = (u64, Vec<(i64, [C64; 2])>);

fn simulate(a: SimulateArgs) -> Result<ExitCode> {
    let rho = match &a.coin.rho {
        Some(r) => r.value,
        None if a.line => 0.5,
        None => return Err(usage("--rho is required")),
    };
    let params = a.coin.params(rho)?;
    let mut rows: Vec<Frame> = Vec::new();
    if a.line {
        let amps = a.initial.amplitudes(match &a.initial {
            Initial::Explicit(v) => v.len().div_ceil(2).max(1),
            _ => 1,
        });
        let amps = amps.map_err(usage)?;
        let init: BTreeMap<i64, [C64; 2]> =
            amps.chunks(2).enumerate().map(|(x, p)| (x as i64, [p[0], p[1]])).collect();
        let steps = usize::try_from(a.steps).context("too many steps")?;
        for (t, table) in line_walk_trajectory(&init, &params, steps)?.iter().enumerate() {
            let sites = table.positions().zip(table.amplitudes.iter().copied()).collect();
            rows.push((t as u64, sites));
        }
    } else {
        let k = a.k.expect("clap requires --k without --line");
        let amps = a.initial.amplitudes(k).map_err(usage)?;
        let state = WalkerState::new(k, amps).context("initial state")?;
        let op = build_walk_operator(k, &params)?;
        for (t, s) in trajectory(&state, &op, a.steps)?.iter().enumerate() {
            let sites = (0..k).map(|x| (x as i64, [s.amplitude(x, 0), s.amplitude(x, 1)])).collect();
            rows.push((t as u64, sites));
        }
    }
    let out = io::stdout().lock();
    match a.out {
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["step", "position", "coin", "re", "im", "prob"])?;
            for (t, sites) in &rows {
                for (x, pair) in sites {
                    for (coin, z) in pair.iter().enumerate() {
                        w.serialize((t, x, coin, z.re, z.im, z.norm_sqr()))?;
                    }
                }
            }
            w.flush()?;
        }
        OutFormat::Json => {
            let mut out = out;
            for (t, sites) in &rows {
                let line = json!({
                    "step": t,
                    "positions": sites.iter().map(|(x, _)| x).collect::<Vec<_>>(),
                    "amplitudes": sites.iter().flat_map(|(_, p)| p.map(c)).collect::<Vec<_>>(),
                    "probabilities": sites.iter().map(|(_, [u, d])| u.norm_sqr() + d.norm_sqr()).collect::<Vec<_>>(),
                });
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let rows: Vec<Value> = match a.table {
        Some(t) => solver::verify_table(t)?
            .rows
            .iter()
            .map(serde_json::to_value)
            .collect::<std::result::Result<_, _>>()?,
        None => {
            let (k, n) = (a.k.expect("clap requires --k"), a.n.expect("clap requires --n"));
            let rho = a.coin.rho()?;
            let params = a.coin.params(rho.value)?;
            let mut row = json!({
                "k": k,
                "n": n,
                "rho_expr": rho.expr,
                "rho": rho.value,
                "max_deviation": solver::verify_point(k, &params, n)?,
            });
            match a.coin.delta_frac {
                Some(d) => row["delta"] = serde_json::to_value(d)?,
                None => row["delta_radians"] = json!(params.delta()),
            }
            vec![row]
        }
    };
    let deviation = |r: &Value| r["max_deviation"].as_f64().unwrap_or(f64::NAN);
    let failures: Vec<&Value> = rows.iter().filter(|r| !(deviation(r) < a.tol)).collect();
    let worst = rows.iter().map(deviation).fold(0.0, f64::max);
    let report = json!({
        "table": a.table,
        "tol": a.tol,
        "passed": failures.is_empty(),
        "checks": rows.len(),
        "max_deviation": worst,
        "failures": failures,
        "rows": rows,
    });
    writeln!(io::stdout().lock(), "{report}")?;
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &failures {
            eprintln!("FAIL {f}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn require<T>(v: Option<T>, flag: &str, case: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("--case {case} needs {flag}")))
}

fn forbid<T>(v: &Option<T>, flag: &str, case: &str) -> Result<()> {
    match v {
        Some(_) => Err(usage(format!("--case {case} does not take {flag}"))),
        None => Ok(()),
    }
}

fn fixed_k(k: Option<usize>, allowed: &[usize], case: &str) -> Result<usize> {
    match k {
        None => Ok(allowed[0]),
        Some(k) if allowed.contains(&k) => Ok(k),
        Some(k) => Err(usage(format!("--case {case} works for k in {allowed:?}, not {k}"))),
    }
}

/// Library argument errors on the solver path come from flag values.
fn as_usage(e: cycle_revival::error::Error) -> anyhow::Error {
    match e {
        cycle_revival::error::Error::InvalidArgument(m) => usage(m),
        other => other.into(),
    }
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let mut found: Vec<Solution> = match a.case {
        Case::RhoEdge => {
            let name = "rho-edge";
            forbid(&a.seed, "--seed", name)?;
            forbid(&a.epsilon, "--epsilon", name)?;
            let k = require(a.k, "--k", name)?;
            let uv = a.coin.delta_fraction()?;
            let edges = match a.edge {
                Some(0) => vec![RhoEdge::Zero],
                Some(_) => vec![RhoEdge::One],
                None => vec![RhoEdge::Zero, RhoEdge::One],
            };
            edges
                .into_iter()
                .map(|e| solver::solve_rho_edge(k, uv, e))
                .collect::<cycle_revival::error::Result<_>>()
                .map_err(as_usage)?
        }
        Case::K2 => {
            let name = "k2";
            fixed_k(a.k, &[2], name)?;
            forbid(&a.epsilon, "--epsilon", name)?;
            match (a.seed, &a.coin.rho) {
                (Some(seed), None) => {
                    let uv = a.coin.delta_fraction()?;
                    vec![solver::solve_k2(seed, uv, a.max_den).map_err(as_usage)?]
                }
                (None, Some(rho)) => {
                    if a.coin.delta_frac.is_some() || a.coin.delta_rad.is_some() {
                        return Err(usage("--case k2 with --rho chooses delta itself"));
                    }
                    let mut s = solver::solve_k2_free(rho.value).map_err(as_usage)?;
                    s.rho_expr = Some(rho.expr.clone());
                    vec![s]
                }
                _ => return Err(usage("--case k2 needs exactly one of --seed or --rho")),
            }
        }
        Case::K3 | Case::K4 => {
            let (name, ks, tag): (_, &[usize], _) = match a.case {
                Case::K3 => ("k3", &[3, 6], CaseTag::K3Family),
                _ => ("k4", &[4], CaseTag::K4Family),
            };
            let k = fixed_k(a.k, ks, name)?;
            forbid(&a.epsilon, "--epsilon", name)?;
            forbid(&a.coin.rho, "--rho", name)?;
            let delta = a.coin.delta_fraction()?;
            match a.seed {
                Some(mn) if k == 3 => vec![solver::solve_k3(delta, mn).map_err(as_usage)?],
                Some(mn) if k == 4 => vec![solver::solve_k4(delta, mn).map_err(as_usage)?],
                Some(mn) => vec![solver::solve_single_form(k, delta, mn, tag).map_err(as_usage)?],
                None => solver::scan_single_form(k, delta, a.max_den, a.max_n, tag).map_err(as_usage)?,
            }
        }
        Case::TwoForm => {
            let name = "two-form";
            forbid(&a.seed, "--seed", name)?;
            forbid(&a.epsilon, "--epsilon", name)?;
            forbid(&a.coin.rho, "--rho", name)?;
            let k = fixed_k(a.k, &[5, 8, 10], name)?;
            if a.k.is_none() {
                return Err(usage("--case two-form needs --k"));
            }
            let delta = a.coin.delta_fraction()?;
            solver::solve_two_form(k, delta, a.max_den).map_err(as_usage)?
        }
        Case::Approx => {
            let name = "approx";
            forbid(&a.seed, "--seed", name)?;
            let k = require(a.k, "--k", name)?;
            let rho = require(a.coin.rho.as_ref(), "--rho", name)?;
            let epsilon = require(a.epsilon, "--epsilon", name)?;
            let params = a.coin.params(rho.value).map_err(|e| usage(e.to_string()))?;
            match solver::solve_approximate(k, rho.value, params.delta(), a.coin.delta_frac, epsilon)
                .map_err(as_usage)?
            {
                Some(mut s) => {
                    s.rho_expr = Some(rho.expr.clone());
                    vec![s]
                }
                None => {
                    eprintln!("error: no N up to {} approximates rho within {epsilon}", solver::APPROX_MAX_N);
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
    };
    if let Some(max_n) = a.max_n {
        found.retain(|s| s.certificate.n <= max_n);
    }
    solver::canonicalize(&mut found);
    let mut out = io::stdout().lock();
    for s in &found {
        writeln!(out, "{}", SolutionRecord::from_solution(s).to_json()?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn special_state(a: SpecialArgs) -> Result<ExitCode> {
    let rho = a.coin.rho()?;
    let params = a.coin.params(rho.value)?;
    if a.period < 1 {
        return Err(usage("--period must be at least 1"));
    }
    let basis = eigenbasis(a.k, &params)?;
    let subset = demoivre_subspace(&basis, a.period, a.tol)?;
    if subset.is_empty() {
        eprintln!(
            "error: no eigenvalue of U satisfies lambda^{} = 1 within {} for k={} rho={}",
            a.period, a.tol, a.k, rho.expr
        );
        return Ok(ExitCode::FAILURE);
    }
    let reachable = special::subspace_period(&subset, a.period)?;
    if reachable != a.period {
        eprintln!(
            "error: the {} eigenvalues with lambda^{} = 1 are all roots of unity of order dividing {}, \
             so no state has period {}",
            subset.len(),
            a.period,
            reachable,
            a.period
        );
        return Ok(ExitCode::FAILURE);
    }
    let coeffs = match a.coeffs {
        Some(c) if c.len() != subset.len() => {
            return Err(usage(format!(
                "--coeffs has {} entries but {} eigenvectors qualify",
                c.len(),
                subset.len()
            )))
        }
        Some(c) => c,
        None => vec![C64::new(1.0, 0.0); subset.len()],
    };
    let state = build_special_state(&subset, &coeffs)?;
    let op = build_walk_operator(a.k, &params)?;
    let series = special::fidelity_series(&state, &op, a.period)?;
    let last = *series.last().expect("series starts at t = 0");
    let report = json!({
        "k": a.k,
        "rho": {"value": rho.value, "expr": rho.expr},
        "delta_radians": params.delta(),
        "period": a.period,
        "eigenvectors": subset.iter().zip(&coeffs).map(|(e, &w)| json!({
            "block": e.block,
            "branch": e.branch.to_string(),
            "phase_turns": special::entry_turns(e),
            "coefficient": c(w),
        })).collect::<Vec<_>>(),
        "state": state.amplitudes().iter().map(|&z| c(z)).collect::<Vec<_>>(),
        "fidelity": series,
    });
    writeln!(io::stdout().lock(), "{report}")?;
    if !(last > 1.0 - CERTIFY_TOL) {
        eprintln!("error: fidelity at t={} is {last}", a.period);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}
