use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use mses::cloud_gen::{generate_shell, generate_two_sphere, ShellSpec, DEFAULT_SIGMA_FRACTION};
use mses::io::{read_cloud, write_cloud, write_csv};
use mses::pso::convergence_gate;
use mses::report::{compare as run_compare, write_trace_csv, CloudMeta, GeneratorMeta, SolveReport, WelzlReport};
use mses::{bounding_box, brute_force_ses, solve as run_pso, welzl_ses, Cloud64, Point3d, SupportSet, SwarmConfig64};
use serde::Serialize;

use crate::{Algo, CompareArgs, GenArgs, ShellArgs, SolveArgs, SwarmArgs};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl From<mses::Error> for CliError {
    fn from(e: mses::Error) -> Self {
        use mses::Error as E;
        match e {
            E::Io(_) | E::Json(_) | E::Parse { .. } | E::NonFinite { .. } => CliError::Io(e.to_string()),
            E::InvalidWeights(_) | E::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn load(path: &Path) -> CliResult<Cloud64> {
    read_cloud(path).map_err(|e| match e {
        mses::Error::EmptyInput => CliError::Io(format!("{}: no points", path.display())),
        mses::Error::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        other => CliError::Io(format!("{}: {other}", path.display())),
    })
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit_json<S: Serialize>(value: &S, out: Option<&Path>) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn trace_path(trace: Option<PathBuf>, out: Option<&Path>) -> Option<PathBuf> {
    trace.or_else(|| out.map(|p| p.with_extension("trace.csv")))
}

fn emit_trace(trace: &[mses::TraceRecord<f64>], path: Option<PathBuf>) -> CliResult {
    if let Some(path) = path {
        let mut w = create(&path)?;
        write_trace_csv(trace, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn swarm_setup(args: &SwarmArgs, seed: u64) -> CliResult<(mses::Weights64, SwarmConfig64)> {
    let weights = args.weights.unwrap_or_default();
    let mut config = SwarmConfig64 {
        seed,
        scalar_random: args.scalar_random,
        ..SwarmConfig64::default()
    };
    if let Some(n) = args.particles {
        config.n_particles = n;
    }
    if let Some(n) = args.iters {
        config.max_iters = n;
    }
    config.validate()?;
    if !convergence_gate(&config) {
        eprintln!("warning: inertia and acceleration coefficients fail the convergence condition");
    }
    Ok((weights, config))
}

fn sigma_of(shell: &ShellArgs) -> f64 {
    shell.sigma.unwrap_or(DEFAULT_SIGMA_FRACTION * shell.radius)
}

fn generate(shell: &ShellArgs, seed: u64) -> CliResult<Cloud64> {
    let sigma = sigma_of(shell);
    let cloud = if shell.two_sphere {
        generate_two_sphere(shell.radius, shell.n, sigma, seed)
    } else {
        ShellSpec::new(Point3d::origin(), shell.radius, shell.n, sigma, seed).and_then(|s| generate_shell(&s))
    };
    cloud.map_err(|e| CliError::Usage(e.to_string()))
}

pub fn gen(args: GenArgs) -> CliResult {
    let seed = seed_or_fresh(args.seed);
    let cloud = generate(&args.shell, seed)?;
    let bbox = bounding_box(&cloud)?;
    let summary = format!(
        "n: {}\nbbox min: ({:.6}, {:.6}, {:.6})\nbbox max: ({:.6}, {:.6}, {:.6})\nseed: {seed}",
        cloud.len(),
        bbox.min.x,
        bbox.min.y,
        bbox.min.z,
        bbox.max.x,
        bbox.max.y,
        bbox.max.z,
    );
    match &args.out {
        Some(path) => {
            write_cloud(&cloud, path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_csv(&cloud, &mut w)?;
            w.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn solve(args: SolveArgs) -> CliResult {
    let cloud = load(&args.cloud)?;
    let out = args.out.as_deref();
    match args.algo {
        Algo::Pso => {
            let seed = seed_or_fresh(args.seed);
            let (weights, config) = swarm_setup(&args.swarm, seed)?;
            let result = run_pso(&cloud, &weights, &config)?;
            let report = SolveReport::new(&result, cloud.len(), &weights, &config);
            emit_json(&report, out)?;
            emit_trace(&result.trace, trace_path(args.trace, out))
        }
        Algo::Welzl => {
            let seed = seed_or_fresh(args.seed);
            let (sphere, support) = welzl_ses(&cloud, seed)?;
            emit_json(&WelzlReport::new(&cloud, &sphere, &support, seed), out)
        }
        Algo::Brute => {
            let sphere = brute_force_ses(&cloud)?;
            let seed = args.seed.unwrap_or(0);
            let support = SupportSet::new(Vec::new())?;
            emit_json(&WelzlReport::new(&cloud, &sphere, &support, seed), out)
        }
    }
}

pub fn compare(args: CompareArgs) -> CliResult {
    let seed = seed_or_fresh(args.seed);
    let (cloud, meta) = match &args.cloud {
        Some(path) => {
            let cloud = load(path)?;
            let meta = CloudMeta {
                source: path.display().to_string(),
                n_points: cloud.len(),
                generator: None,
            };
            (cloud, meta)
        }
        None => {
            let cloud_seed = args.cloud_seed.unwrap_or(seed);
            let cloud = generate(&args.shell, cloud_seed)?;
            let meta = CloudMeta {
                source: "generated".into(),
                n_points: cloud.len(),
                generator: Some(GeneratorMeta {
                    radius: args.shell.radius,
                    n_per_shell: args.shell.n,
                    sigma: sigma_of(&args.shell),
                    seed: cloud_seed,
                    two_sphere: args.shell.two_sphere,
                }),
            };
            (cloud, meta)
        }
    };
    let (weights, config) = swarm_setup(&args.swarm, seed)?;
    let report = run_compare(&cloud, &weights, &config, meta)?;
    print!("{}", report.table());
    let out = args.out.as_deref();
    emit_json(&report, out)?;
    emit_trace(&report.trace, trace_path(args.trace, out))
}
