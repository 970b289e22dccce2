//! Serializable run reports and the PSO-versus-Welzl comparison.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{classify, PointCloud, Sphere, DEFAULT_ON_SURFACE_EPS};
use crate::objective::Weights;
use crate::pso::{solve, SolveResult, SwarmConfig, TerminatedBy, TraceRecord};
use crate::scalar::Real;
use crate::welzl::{validate_sphere, welzl_ses, SupportSet};

pub const TRACE_HEADER: &str = "iter,gbest_j,inside_count,radius,lms,lyapunov";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SolveReport<T> {
    pub center: [T; 3],
    pub radius: T,
    pub j: T,
    pub inside_count: usize,
    pub outside_count: usize,
    pub iterations: usize,
    pub terminated_by: TerminatedBy,
    pub seed: u64,
    pub lms: T,
    pub gate_satisfied: bool,
    pub weights: Weights<T>,
    pub config: SwarmConfig<T>,
}

impl<T: Real> SolveReport<T> {
    pub fn new(result: &SolveResult<T>, cloud_len: usize, weights: &Weights<T>, config: &SwarmConfig<T>) -> Self {
        Self {
            center: result.sphere.center.to_array(),
            radius: result.sphere.radius,
            j: result.fitness.j,
            inside_count: result.fitness.inside_count,
            outside_count: cloud_len - result.fitness.inside_count,
            iterations: result.iterations_run,
            terminated_by: result.terminated_by,
            seed: config.seed,
            lms: result.fitness.lms,
            gate_satisfied: result.gate_satisfied,
            weights: *weights,
            config: *config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WelzlReport<T> {
    pub center: [T; 3],
    pub radius: T,
    pub support: Vec<[T; 3]>,
    pub max_violation: T,
    pub enclosed_fraction: T,
    pub boundary_count: usize,
    pub seed: u64,
}

impl<T: Real> WelzlReport<T> {
    pub fn new(cloud: &PointCloud<T>, sphere: &Sphere<T>, support: &SupportSet<T>, seed: u64) -> Self {
        let v = validate_sphere(cloud, sphere);
        Self {
            center: sphere.center.to_array(),
            radius: sphere.radius,
            support: support.points().iter().map(|p| p.to_array()).collect(),
            max_violation: v.max_violation,
            enclosed_fraction: v.enclosed_fraction,
            boundary_count: v.boundary_count,
            seed,
        }
    }
}

/// Parameters of a generated cloud, recorded so a comparison can be regenerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub radius: f64,
    pub n_per_shell: usize,
    pub sigma: f64,
    pub seed: u64,
    pub two_sphere: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudMeta {
    pub source: String,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<GeneratorMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ComparisonReport<T> {
    pub pso: SolveReport<T>,
    pub welzl: WelzlReport<T>,
    pub pso_inside_fraction: T,
    pub welzl_inside_fraction: T,
    pub radius_ratio: T,
    pub cloud_meta: CloudMeta,
    pub trace: Vec<TraceRecord<T>>,
}

fn inside_fraction<T: Real>(cloud: &PointCloud<T>, sphere: &Sphere<T>) -> T {
    let part = classify(cloud, sphere, T::lit(DEFAULT_ON_SURFACE_EPS));
    T::from_usize_lossy(part.inside.len()) / T::from_usize_lossy(cloud.len())
}

/// Runs both solvers on the same cloud. The Welzl permutation uses the swarm seed.
pub fn compare<T: Real>(
    cloud: &PointCloud<T>,
    weights: &Weights<T>,
    config: &SwarmConfig<T>,
    cloud_meta: CloudMeta,
) -> Result<ComparisonReport<T>> {
    let result = solve(cloud, weights, config)?;
    let (sphere, support) = welzl_ses(cloud, config.seed)?;
    let pso = SolveReport::new(&result, cloud.len(), weights, config);
    let welzl = WelzlReport::new(cloud, &sphere, &support, config.seed);
    Ok(ComparisonReport {
        pso_inside_fraction: inside_fraction(cloud, &result.sphere),
        welzl_inside_fraction: inside_fraction(cloud, &sphere),
        radius_ratio: result.sphere.radius / sphere.radius,
        pso,
        welzl,
        cloud_meta,
        trace: result.trace,
    })
}

/// Formats `v` with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i64;
    if !(-5..=15).contains(&mag) {
        return format!("{:.*e}", digits.saturating_sub(1), v);
    }
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

impl<T: Real> ComparisonReport<T> {
    /// Side-by-side summary with 10 significant digits.
    pub fn table(&self) -> String {
        let f = |v: T| fmt_sig(v.to_f64_lossy(), 10);
        let c = |a: [T; 3]| format!("({}, {}, {})", f(a[0]), f(a[1]), f(a[2]));
        let n = self.cloud_meta.n_points;
        let welzl_inside = (self.welzl_inside_fraction.to_f64_lossy() * n as f64).round() as usize;
        let rows = [
            ("center", c(self.pso.center), c(self.welzl.center)),
            ("radius", f(self.pso.radius), f(self.welzl.radius)),
            (
                "inside",
                format!("{} / {n}", self.pso.inside_count),
                format!("{welzl_inside} / {n}"),
            ),
            ("inside fraction", f(self.pso_inside_fraction), f(self.welzl_inside_fraction)),
            ("objective J", f(self.pso.j), "-".into()),
            ("iterations", self.pso.iterations.to_string(), "-".into()),
            ("support points", "-".into(), self.welzl.support.len().to_string()),
        ];
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(3);
        let mut out = String::new();
        let _ = writeln!(out, "{:w0$}  {:w1$}  Welzl", "", "PSO");
        for (name, a, b) in rows {
            let _ = writeln!(out, "{name:w0$}  {a:w1$}  {b}");
        }
        let _ = writeln!(out, "radius ratio (PSO / Welzl): {}", f(self.radius_ratio));
        out
    }
}

pub fn write_trace_csv<T: Real, W: Write>(trace: &[TraceRecord<T>], mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(
            out,
            "{},{:.15e},{},{:.15e},{:.15e},{:.15e}",
            r.iter, r.gbest_j, r.inside_count, r.radius, r.lms, r.lyapunov
        )?;
    }
    Ok(())
}
