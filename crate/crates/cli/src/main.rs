//! `mses`: generate synthetic shells, solve them with the swarm or Welzl's algorithm,
//! and compare the two.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mses::Weights64;

#[derive(Debug, Parser)]
#[command(name = "mses", version, about = "Smallest enclosing spheres for noisy point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a noisy spherical shell (or two overlapping shells).
    Gen(GenArgs),
    /// Run one solver on a cloud file.
    Solve(SolveArgs),
    /// Run the swarm and Welzl's algorithm on the same cloud and compare.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
struct ShellArgs {
    /// Shell radius.
    #[arg(long, default_value_t = mses::cloud_gen::DEFAULT_SHELL_RADIUS)]
    radius: f64,
    /// Points per shell.
    #[arg(long, default_value_t = mses::cloud_gen::DEFAULT_SHELL_POINTS, value_parser = parse_count)]
    n: usize,
    /// Noise standard deviation per coordinate [default: 0.05 * radius].
    #[arg(long)]
    sigma: Option<f64>,
    /// Add a second shell shifted by (r/2, r/2, r/2).
    #[arg(long)]
    two_sphere: bool,
}

#[derive(Debug, Clone, Args)]
struct SwarmArgs {
    /// Objective weights LAMBDA,ALPHA,BETA.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<Weights64>,
    /// Number of particles.
    #[arg(long)]
    particles: Option<usize>,
    /// Iteration budget.
    #[arg(long)]
    iters: Option<usize>,
    /// Draw one r1, r2 per particle instead of one per dimension.
    #[arg(long)]
    scalar_random: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    shell: ShellArgs,
    /// Random seed; a fresh one is drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (.csv or .json); CSV on stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Pso,
    Welzl,
    Brute,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Cloud file (CSV with header x,y,z, or JSON array of [x,y,z]).
    cloud: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Pso)]
    algo: Algo,
    /// Random seed; a fresh one is drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace CSV path [default: <out>.trace.csv when --out is given].
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    swarm: SwarmArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Cloud file; a shell is generated from the shell flags when omitted.
    cloud: Option<PathBuf>,
    #[command(flatten)]
    shell: ShellArgs,
    /// Seed of the generated cloud [default: --seed].
    #[arg(long)]
    cloud_seed: Option<u64>,
    /// Random seed; a fresh one is drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; printed after the table when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace CSV path [default: <out>.trace.csv when --out is given].
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    swarm: SwarmArgs,
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_weights(s: &str) -> Result<Weights64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [l, a, b] = parts[..] else {
        return Err(format!("expected LAMBDA,ALPHA,BETA, got {s:?}"));
    };
    let num = |v: &str| v.parse::<f64>().map_err(|_| format!("not a number: {v:?}"));
    Weights64::new(num(l)?, num(a)?, num(b)?).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Solve(args) => commands::solve(args),
        Command::Compare(args) => commands::compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
