//! Command-line front end: `solve`, `check`, `gen` and `bench`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 instance class and solver do
//! not match, 3 a produced solution failed its own verification.

pub mod format;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sfvs_core::gen::{gen_instance, GenParams};
use sfvs_core::{circular_arc, cobipartite, interval, oracle, permutation, solve_auto};
use sfvs_core::{Instance, Kind, Solution, SolveError, Weight};

use format::{emit_instance, emit_solution, parse_instance, parse_solution, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Interval,
    CircularArc,
    Permutation,
    Cobipartite,
    Oracle,
}

#[derive(Debug, Parser)]
#[command(name = "sfvs", about = "Exact weighted subset feedback vertex set solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve an instance file
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// Defaults to standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify a solution file against an instance
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Write a seeded random instance
    Gen {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Probability of joining S: a decimal or p/q
        #[arg(long, value_parser = parse_fraction, default_value = "0.3")]
        s_frac: f64,
        #[arg(long, default_value_t = 100)]
        max_weight: Weight,
        #[arg(long)]
        output: PathBuf,
    },
    /// Solve generated instances over sizes and seeds and write CSV rows
    Bench {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        /// Comma-separated sizes, e.g. 10,20,40
        #[arg(long, value_parser = parse_sizes)]
        sizes: Sizes,
        /// Inclusive seed range, e.g. 1..5
        #[arg(long, value_parser = parse_seeds)]
        seeds: SeedRange,
        #[arg(long, value_parser = parse_fraction, default_value = "0.3")]
        s_frac: f64,
        #[arg(long, default_value_t = 100)]
        max_weight: Weight,
        /// Write 0 for wall_millis so output is reproducible byte for byte
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone)]
struct Sizes(Vec<usize>);

#[derive(Debug, Clone, Copy)]
struct SeedRange(u64, u64);

fn parse_kind(s: &str) -> Result<Kind, String> {
    Kind::parse(s).ok_or_else(|| {
        let all: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
        format!("unknown kind `{s}`; expected one of {}", all.join(", "))
    })
}

/// A probability written as a decimal (`0.25`) or a ratio (`1/4`).
pub fn parse_fraction(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: u64 = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let q: u64 = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            if q == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            p as f64 / q as f64
        }
        None => s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("`{s}` is outside [0, 1]"));
    }
    Ok(v)
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad size `{t}`")))
        .collect::<Result<Vec<_>, _>>()
        .map(Sizes)
}

fn parse_seeds(s: &str) -> Result<SeedRange, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected s1..s2, got `{s}`"))?;
    let a: u64 = a.parse().map_err(|_| format!("bad seed `{a}`"))?;
    let b: u64 = b.parse().map_err(|_| format!("bad seed `{b}`"))?;
    if a > b {
        return Err(format!("empty seed range `{s}`"));
    }
    Ok(SeedRange(a, b))
}

/// Exit code for a solver refusal.
pub fn solve_error_code(e: &SolveError) -> i32 {
    match e {
        SolveError::Model(_) => EXIT_INPUT,
        SolveError::WrongModel { .. }
        | SolveError::NotCoBipartite(_)
        | SolveError::OracleTooLarge { .. }
        | SolveError::TooLarge(_) => EXIT_MISMATCH,
        SolveError::Internal(_) => EXIT_VERIFY,
    }
}

pub fn solve_with(inst: &Instance, algo: Algo) -> Result<Solution, SolveError> {
    match algo {
        Algo::Auto => solve_auto(inst),
        Algo::Interval => interval::solve_interval(inst),
        Algo::CircularArc => circular_arc::solve_circular_arc(inst),
        Algo::Permutation => permutation::solve_permutation(inst),
        Algo::Cobipartite => cobipartite::solve_cobipartite(inst),
        Algo::Oracle => oracle::oracle_solve(inst),
    }
}

/// Solves and re-verifies; the error carries the exit code.
pub fn solve_checked(inst: &Instance, algo: Algo) -> Result<Solution, (i32, String)> {
    let sol = solve_with(inst, algo).map_err(|e| (solve_error_code(&e), e.to_string()))?;
    sol.verify(inst, &inst.graph())
        .map_err(|e| (EXIT_VERIFY, format!("{} solver produced an invalid solution: {e}", sol.solver)))?;
    Ok(sol)
}

/// Checks a solution file against an instance.
pub fn check_solution(inst: &Instance, sol: &SolutionFile) -> Result<(), String> {
    let n = inst.n();
    if let Some(&v) = sol.removed.iter().find(|&&v| v == 0 || v > n) {
        return Err(format!("removed vertex {v} is outside 1..={n}"));
    }
    let mut keep = vec![true; n + 1];
    keep[0] = false;
    for &v in &sol.removed {
        keep[v] = false;
    }
    let w: Weight = sol.removed.iter().map(|&v| inst.weight(v)).sum();
    if w != sol.weight {
        return Err(format!("removed vertices weigh {w}, file says {}", sol.weight));
    }
    if !sfvs_core::is_s_forest(&inst.graph(), &inst.s_mask(), &keep) {
        return Err("the retained vertices still contain a cycle through S".into());
    }
    Ok(())
}

fn read(path: &PathBuf) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), (i32, String)> {
    std::fs::write(path, text).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Instance, (i32, String)> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| (EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn gen_params(kind: Kind, n: usize, seed: u64, s_frac: f64, max_weight: Weight) -> Result<GenParams, (i32, String)> {
    if (n as u128) * (max_weight as u128) > i64::MAX as u128 {
        return Err((EXIT_INPUT, format!("{n} vertices with weights up to {max_weight} overflow the 63-bit budget")));
    }
    Ok(GenParams { kind, n, seed, s_frac, max_weight })
}

/// CSV text for a benchmark sweep. Rows go size by size, then seed by seed.
pub fn bench_csv(
    kind: Kind,
    sizes: &[usize],
    seeds: (u64, u64),
    s_frac: f64,
    max_weight: Weight,
    timing: bool,
) -> Result<String, (i32, String)> {
    let mut out = String::from("kind,n,m,seed,removed_weight,wall_millis\n");
    for &n in sizes {
        for seed in seeds.0..=seeds.1 {
            let inst = gen_instance(&gen_params(kind, n, seed, s_frac, max_weight)?);
            let m = inst.graph().edge_count();
            let t0 = Instant::now();
            let sol = solve_checked(&inst, Algo::Auto)?;
            let ms = if timing { t0.elapsed().as_millis() } else { 0 };
            let _ = writeln!(out, "{kind},{n},{m},{seed},{},{ms}", sol.removed_weight);
        }
    }
    Ok(out)
}

fn dispatch(cmd: Cmd, stdout: &mut dyn Write) -> Result<(), (i32, String)> {
    match cmd {
        Cmd::Solve { input, algo, output } => {
            let inst = load(&input)?;
            let sol = solve_checked(&inst, algo)?;
            let text = emit_solution(&SolutionFile::from(&sol));
            match output {
                Some(p) => write(&p, &text),
                None => stdout.write_all(text.as_bytes()).map_err(|e| (EXIT_INPUT, e.to_string())),
            }
        }
        Cmd::Check { input, solution } => {
            let inst = load(&input)?;
            let sol = parse_solution(&read(&solution)?).map_err(|e| (EXIT_INPUT, format!("{}: {e}", solution.display())))?;
            check_solution(&inst, &sol).map_err(|e| (EXIT_INPUT, format!("{}: {e}", solution.display())))?;
            writeln!(stdout, "ok weight {}", sol.weight).map_err(|e| (EXIT_INPUT, e.to_string()))
        }
        Cmd::Gen { kind, n, seed, s_frac, max_weight, output } => {
            let inst = gen_instance(&gen_params(kind, n, seed, s_frac, max_weight)?);
            write(&output, &emit_instance(&inst))
        }
        Cmd::Bench { kind, sizes, seeds, s_frac, max_weight, no_timing, output } => {
            let csv = bench_csv(kind, &sizes.0, (seeds.0, seeds.1), s_frac, max_weight, !no_timing)?;
            write(&output, &csv)
        }
    }
}

/// Runs one command line (`args[0]` is the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli.cmd, stdout) {
        Ok(()) => EXIT_OK,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}
