//! `sbal`: command-line front end for the Subset Balancing solvers.
//!
//! Exit codes: 0 success (or a valid solution for `verify`), 1 invalid
//! solution, 2 malformed input or library error, 3 no solution found,
//! 4 retryable failure after all attempts.

mod bench;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sbal_core::gen::{gen_instance, GenMode};
use sbal_core::{analysis, ess, mitm, oracle, rep_with0, rep_without0};
use sbal_core::{CoefficientSet, Instance, Outcome, SolutionProfile, SolverReport};
use serde::Serialize;
use serde_json::json;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "sbal", version, about = "Exact solvers for Subset Balancing")]
struct Cli {
    /// Worker threads for profile sweeps and rounds (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Record wall-clock times. Off by default so output is reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance read from a JSON file or stdin.
    Solve {
        /// Instance file, or `-` for stdin.
        #[arg(default_value = "-")]
        path: String,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attempts of a randomized solver while it has not found a solution.
        #[arg(long, default_value_t = 1)]
        repeats: u32,
        #[arg(long)]
        json: bool,
    },
    /// Check a solution file against an instance file.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Count all solutions by exhaustive enumeration.
    Count {
        #[arg(default_value = "-")]
        path: String,
    },
    /// Generate a random instance.
    Generate {
        #[arg(long)]
        n: usize,
        /// Coefficient set: `[-d:d]`, `[±d]`, `range:d` or `nozero:d`.
        #[arg(long = "set")]
        set: CoefficientSet,
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
        /// Entries are drawn from `[-w, w]`.
        #[arg(long, default_value_t = 1000)]
        w: i64,
        /// Planted profile as comma-separated counts in ascending order of
        /// coefficient; defaults to the near-balanced profile.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the planted solution.
        #[arg(long)]
        solution_out: Option<PathBuf>,
    },
    /// Print optimizer results or table checks as JSON.
    Analyze {
        #[arg(long, value_enum)]
        target: Target,
        /// Largest d for `appendix-b`.
        #[arg(long, default_value_t = 8)]
        d_max: u32,
    },
    /// Run a benchmark suite and write CSV.
    Bench {
        /// Suite spec (JSON), or `-` for stdin.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
pub enum Algo {
    Auto,
    Mitm,
    Unbalanced,
    Rep0,
    Repnz,
    Ess,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Uniform,
    Planted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Pm2,
    Pm3,
    Ess,
    AppendixB,
    Table1,
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub msg: String,
}

impl Fail {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        Fail { code: 2, msg: msg.to_string() }
    }
}

impl From<sbal_core::Error> for Fail {
    fn from(e: sbal_core::Error) -> Self {
        Fail::input(e)
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("sbal: {}", e.msg);
        return ExitCode::from(e.code);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sbal: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) -> Result<(), Fail> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(Fail::input)?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: usize) -> Result<(), Fail> {
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let timing = cli.timing;
    match cli.command {
        Command::Solve { path, algo, seed, repeats, json } => cmd_solve(&path, algo, seed, repeats, json, timing),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Count { path } => {
            let inst = read_instance(&path)?;
            let count = oracle::count_solutions(&inst)?;
            emit(&json!({ "schema_version": SCHEMA_VERSION, "count": count }))?;
            Ok(0)
        }
        Command::Generate { n, set, mode, w, profile, seed, out, solution_out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mode = match mode {
                Mode::Uniform => GenMode::UniformRange { w },
                Mode::Planted => {
                    let profile = match profile {
                        Some(counts) => SolutionProfile::new(set, counts)?,
                        None => SolutionProfile::near_balanced(set, n),
                    };
                    GenMode::Planted { profile, w }
                }
            };
            let generated = gen_instance(n, set, &mode, &mut rng)?;
            write_json(out.as_deref(), &generated.instance)?;
            if let Some(path) = solution_out {
                let planted = generated.planted.ok_or_else(|| Fail::input("uniform mode plants no solution"))?;
                write_json(Some(&path), &planted)?;
            }
            Ok(0)
        }
        Command::Analyze { target, d_max } => {
            emit(&analyze(target, d_max)?)?;
            Ok(0)
        }
        Command::Bench { suite, out } => {
            let spec: bench::Suite = serde_json::from_str(&read_source(&suite)?).map_err(Fail::input)?;
            let csv = bench::run(&spec, timing)?;
            match out {
                Some(path) => fs::write(path, csv)?,
                None => io::stdout().write_all(csv.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn read_source(path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Fail::input(format!("{path}: {e}")))
    }
}

fn read_instance(path: &str) -> Result<Instance, Fail> {
    serde_json::from_str(&read_source(path)?).map_err(|e| Fail::input(format!("malformed instance: {e}")))
}

fn emit<T: Serialize>(value: &T) -> Result<(), Fail> {
    write_json(None, value)
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Fail> {
    let mut text = serde_json::to_string_pretty(value).map_err(Fail::input)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Picks the solver for `auto`: ESS for `[-1:1]`, the zero-aware
/// representation solver for other ranges, the shifted one without zero.
pub fn route(set: CoefficientSet) -> Algo {
    if set == CoefficientSet::full_range(1).expect("d = 1 is valid") {
        Algo::Ess
    } else if set.has_zero() {
        Algo::Rep0
    } else {
        Algo::Repnz
    }
}

pub fn solve_once(inst: &Instance, algo: Algo, rng: &mut ChaCha8Rng) -> sbal_core::Result<SolverReport> {
    match algo {
        Algo::Auto => solve_once(inst, route(inst.coeff_set()), rng),
        Algo::Mitm => mitm::classic_mitm(inst),
        Algo::Unbalanced => mitm::solve_unbalanced(inst, rng),
        Algo::Rep0 => rep_with0::solve_with0(inst, rng),
        Algo::Repnz => rep_without0::solve_without0(inst, rng),
        Algo::Ess => ess::solve_ess(inst, rng),
        Algo::Oracle => oracle::brute_force_solve(inst),
    }
}

pub fn exit_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Solved(_) => 0,
        Outcome::NoSolutionFound => 3,
        Outcome::RetryableFailure => 4,
    }
}

fn cmd_solve(path: &str, algo: Algo, seed: u64, repeats: u32, as_json: bool, timing: bool) -> Result<u8, Fail> {
    let inst = read_instance(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut attempts = 0;
    let mut report = loop {
        attempts += 1;
        let report = solve_once(&inst, algo, &mut rng)?;
        let deterministic = matches!(algo, Algo::Mitm | Algo::Oracle);
        if report.outcome.is_solved() || deterministic || attempts >= repeats.max(1) {
            break report;
        }
    };
    let millis = start.elapsed().as_secs_f64() * 1e3;
    if let Outcome::Solved(s) = &mut report.outcome {
        mitm::normalize_sign(&mut s.c);
    }
    if as_json {
        let mut out = json!({
            "schema_version": SCHEMA_VERSION,
            "seed": seed,
            "attempts": attempts,
            "report": report,
        });
        if timing {
            out["millis"] = json!(millis);
        }
        emit(&out)?;
    } else {
        let mut text = format!("algorithm: {}\noutcome: {}\n", report.algorithm, report.outcome.label());
        if let Some(s) = report.outcome.solution() {
            text += &format!("c: {:?}\n", s.c);
        }
        let st = &report.stats;
        text += &format!(
            "seed: {seed}\nattempts: {attempts}\nrounds: {}\nprofiles: {}\nmax_list: {}\n",
            st.rounds, st.profiles, st.max_list
        );
        if let Some(p) = st.last_prime {
            text += &format!("prime: {p}\n");
        }
        if timing {
            text += &format!("millis: {millis:.3}\n");
        }
        io::stdout().write_all(text.as_bytes())?;
    }
    Ok(exit_code(&report.outcome))
}

/// Accepts `{"c": [...]}` or a bare array.
fn read_solution(path: &Path) -> Result<Vec<i64>, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Fail::input(format!("malformed solution: {e}")))?;
    let c = value.get("c").cloned().unwrap_or(value);
    serde_json::from_value(c).map_err(|e| Fail::input(format!("malformed solution: {e}")))
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<u8, Fail> {
    let inst = read_instance(&instance.to_string_lossy())?;
    let c = read_solution(solution)?;
    let valid = sbal_core::is_solution(&inst, &c)?;
    emit(&json!({ "schema_version": SCHEMA_VERSION, "valid": valid }))?;
    Ok(if valid { 0 } else { 1 })
}

fn to<T: Serialize>(v: T) -> Result<serde_json::Value, Fail> {
    serde_json::to_value(v).map_err(Fail::input)
}

fn analyze(target: Target, d_max: u32) -> Result<serde_json::Value, Fail> {
    match target {
        Target::Pm2 => to(analysis::optimize_pm2()),
        Target::Pm3 => to(analysis::optimize_pm3()),
        Target::Ess => to(analysis::optimize_ess()),
        Target::AppendixB => {
            let mut rows = Vec::new();
            for d in 1..=d_max {
                let row = analysis::appendix_b_check(d)?;
                let tabulated = analysis::BOUND_ROWS.iter().find(|t| t.0 == d);
                rows.push(json!({
                    "d": d,
                    "lhs": row.lhs_base,
                    "rhs": row.rhs_base,
                    "holds": row.holds(),
                    "table_lhs": tabulated.map(|t| t.1),
                    "table_rhs": tabulated.map(|t| t.2),
                }));
            }
            Ok(json!(rows))
        }
        Target::Table1 => {
            let mut rows = Vec::new();
            for row in &rep_without0::catalog().rows {
                for v in 0..row.variants.len() {
                    rows.push(to(analysis::table1_check(row.d, v)?)?);
                }
            }
            Ok(json!(rows))
        }
    }
}
