//! Inertia-weight particle swarm over the sphere search space.
//!
//! A particle position is the 4-vector `(cx, cy, cz, r)`. Each step applies the
//! elementwise velocity update
//!
//! ```text
//! v <- w(t) v + c1 R1 ⊙ (p_i - x) + c2 R2 ⊙ (g - x)
//! x <- x + v
//! ```
//!
//! with `g` frozen for the whole step, so particle updates are independent and are
//! evaluated in parallel. Random draws are generated up front, in particle order, so
//! the result does not depend on thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_box, Point3, PointCloud, Sphere};
use crate::objective::{evaluate, ObjectiveBreakdown, Weights};
use crate::rng::{SeededDraws, UnitDraws};
use crate::scalar::Real;

pub const DIM: usize = 4;
pub const RADIUS_AXIS: usize = 3;

pub type Vec4<T> = [T; DIM];

/// Position box and symmetric velocity limits of the search space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SearchBounds<T> {
    pub lower: Vec4<T>,
    pub upper: Vec4<T>,
    /// Velocity component `k` is clamped to `[-velocity[k], velocity[k]]`.
    pub velocity: Vec4<T>,
}

impl<T: Real> SearchBounds<T> {
    pub fn contains_position(&self, x: &Vec4<T>) -> bool {
        (0..DIM).all(|k| self.lower[k] <= x[k] && x[k] <= self.upper[k])
    }

    pub fn contains_velocity(&self, v: &Vec4<T>) -> bool {
        (0..DIM).all(|k| v[k].abs() <= self.velocity[k])
    }

    fn clamp_position(&self, x: &mut Vec4<T>) {
        for ((xk, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xk = xk.max(*lo).min(*hi);
        }
    }

    fn clamp_velocity(&self, v: &mut Vec4<T>) {
        for (vk, vmax) in v.iter_mut().zip(&self.velocity) {
            *vk = vk.max(-*vmax).min(*vmax);
        }
    }
}

/// Search space derived from the cloud's bounding box.
///
/// Centers may range over the box grown by half its diagonal on every side, radii over
/// `[0, diagonal]`. Velocity limits are `v_max_fraction` of each axis' cloud extent (the
/// diagonal for flat axes) and of the diagonal for the radius. A cloud of one repeated
/// point falls back to a unit-sized space around it.
pub fn search_bounds<T: Real>(cloud: &PointCloud<T>, v_max_fraction: T) -> Result<SearchBounds<T>> {
    let bbox = bounding_box(cloud)?;
    let diag = bbox.diagonal();
    let extent = bbox.extent();
    if diag <= T::zero() {
        let half = T::lit(0.5);
        let c = bbox.min;
        return Ok(SearchBounds {
            lower: [c.x - half, c.y - half, c.z - half, T::zero()],
            upper: [c.x + half, c.y + half, c.z + half, T::one()],
            velocity: [v_max_fraction; DIM],
        });
    }
    let grow = diag * T::lit(0.5);
    let mut lower = [T::zero(); DIM];
    let mut upper = [T::zero(); DIM];
    let mut velocity = [T::zero(); DIM];
    for k in 0..3 {
        lower[k] = bbox.min[k] - grow;
        upper[k] = bbox.max[k] + grow;
        let span = if extent[k] > T::zero() { extent[k] } else { diag };
        velocity[k] = v_max_fraction * span;
    }
    upper[RADIUS_AXIS] = diag;
    velocity[RADIUS_AXIS] = v_max_fraction * diag;
    Ok(SearchBounds {
        lower,
        upper,
        velocity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SwarmConfig<T> {
    pub n_particles: usize,
    pub w_start: T,
    pub w_end: T,
    pub c1: T,
    pub c2: T,
    pub max_iters: usize,
    pub stagnation_window: usize,
    pub stagnation_tol: T,
    pub v_max_fraction: T,
    pub seed: u64,
    /// Draw one `r1`, `r2` per particle instead of one per dimension.
    pub scalar_random: bool,
}

impl<T: Real> Default for SwarmConfig<T> {
    fn default() -> Self {
        Self {
            n_particles: 100,
            w_start: T::lit(0.9),
            w_end: T::lit(0.4),
            c1: T::lit(1.49445),
            c2: T::lit(1.49445),
            max_iters: 1000,
            stagnation_window: 100,
            stagnation_tol: T::lit(1e-8),
            v_max_fraction: T::lit(0.2),
            seed: 0,
            scalar_random: false,
        }
    }
}

impl<T: Real> SwarmConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_particles < 2 {
            return bad(format!("n_particles must be at least 2, got {}", self.n_particles));
        }
        if self.max_iters < 1 {
            return bad("max_iters must be at least 1".into());
        }
        let (ws, we) = (self.w_start, self.w_end);
        if !(we > T::zero() && we <= ws && ws < T::one()) {
            return bad(format!("inertia schedule needs 0 < w_end <= w_start < 1, got {ws} -> {we}"));
        }
        if !(self.c1 > T::zero() && self.c2 > T::zero()) || !(self.c1 + self.c2).is_finite() {
            return bad(format!("c1 and c2 must be positive, got {} and {}", self.c1, self.c2));
        }
        if !(self.v_max_fraction > T::zero() && self.v_max_fraction <= T::one()) {
            return bad(format!("v_max_fraction must lie in (0, 1], got {}", self.v_max_fraction));
        }
        if self.stagnation_tol.is_nan() || self.stagnation_tol < T::zero() {
            return bad(format!("stagnation_tol must be non-negative, got {}", self.stagnation_tol));
        }
        Ok(())
    }
}

/// Linear inertia schedule from `w_start` at `t = 0` to `w_end` at `t = max_iters`.
pub fn inertia_at<T: Real>(t: usize, config: &SwarmConfig<T>) -> T {
    let frac = T::from_usize_lossy(t.min(config.max_iters)) / T::from_usize_lossy(config.max_iters);
    config.w_start + (config.w_end - config.w_start) * frac
}

/// Bounded-trajectory condition `0 < w < 1` and `0 < c1 + c2 < 2 / (1 - w)`.
pub fn contraction_holds<T: Real>(w: T, c_sum: T) -> bool {
    w > T::zero() && w < T::one() && c_sum > T::zero() && c_sum < T::lit(2.0) / (T::one() - w)
}

/// Checks the bounded-trajectory condition at both ends of the inertia schedule.
pub fn convergence_gate<T: Real>(config: &SwarmConfig<T>) -> bool {
    let c = config.c1 + config.c2;
    contraction_holds(config.w_start, c) && contraction_holds(config.w_end, c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ParticleState<T> {
    pub position: Vec4<T>,
    pub velocity: Vec4<T>,
    pub pbest_position: Vec4<T>,
    pub pbest_fitness: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SwarmState<T> {
    pub particles: Vec<ParticleState<T>>,
    pub gbest_position: Vec4<T>,
    pub gbest: ObjectiveBreakdown<T>,
    pub iteration: usize,
    pub bounds: SearchBounds<T>,
}

impl<T: Real> SwarmState<T> {
    pub fn gbest_fitness(&self) -> T {
        self.gbest.j
    }

    pub fn gbest_sphere(&self) -> Sphere<T> {
        decode(&self.gbest_position)
    }
}

/// Sphere encoded by a particle position; negative radii read as zero.
pub fn decode<T: Real>(x: &Vec4<T>) -> Sphere<T> {
    Sphere {
        center: Point3::new(x[0], x[1], x[2]),
        radius: x[RADIUS_AXIS].max(T::zero()),
    }
}

fn fitness<T: Real>(cloud: &PointCloud<T>, weights: &Weights<T>, x: &Vec4<T>) -> ObjectiveBreakdown<T> {
    evaluate(cloud, &decode(x), weights)
}

/// Uniform initial swarm inside `bounds`.
///
/// Draw order: for each particle in index order, position components 0..4, then
/// velocity components 0..4.
pub fn init_swarm<T: Real, D: UnitDraws<T>>(
    config: &SwarmConfig<T>,
    bounds: &SearchBounds<T>,
    cloud: &PointCloud<T>,
    weights: &Weights<T>,
    draws: &mut D,
) -> SwarmState<T> {
    let mut starts = Vec::with_capacity(config.n_particles);
    for _ in 0..config.n_particles {
        let mut position = [T::zero(); DIM];
        for (k, x) in position.iter_mut().enumerate() {
            *x = bounds.lower[k] + draws.next_unit() * (bounds.upper[k] - bounds.lower[k]);
        }
        let mut velocity = [T::zero(); DIM];
        for (k, v) in velocity.iter_mut().enumerate() {
            let vmax = bounds.velocity[k];
            *v = -vmax + draws.next_unit() * (vmax + vmax);
        }
        starts.push((position, velocity));
    }

    let fits: Vec<ObjectiveBreakdown<T>> = starts
        .par_iter()
        .map(|(x, _)| fitness(cloud, weights, x))
        .collect();

    let particles: Vec<ParticleState<T>> = starts
        .iter()
        .zip(&fits)
        .map(|(&(position, velocity), f)| ParticleState {
            position,
            velocity,
            pbest_position: position,
            pbest_fitness: f.j,
        })
        .collect();

    let mut best = 0;
    for (i, f) in fits.iter().enumerate().skip(1) {
        if f.j < fits[best].j {
            best = i;
        }
    }

    SwarmState {
        gbest_position: particles[best].position,
        gbest: fits[best],
        particles,
        iteration: 0,
        bounds: *bounds,
    }
}

struct StepDraws<T> {
    r1: Vec4<T>,
    r2: Vec4<T>,
}

fn draw_step<T: Real, D: UnitDraws<T>>(n: usize, scalar: bool, draws: &mut D) -> Vec<StepDraws<T>> {
    (0..n)
        .map(|_| {
            if scalar {
                let r1 = draws.next_unit();
                let r2 = draws.next_unit();
                StepDraws {
                    r1: [r1; DIM],
                    r2: [r2; DIM],
                }
            } else {
                let mut r1 = [T::zero(); DIM];
                let mut r2 = [T::zero(); DIM];
                r1.iter_mut().for_each(|r| *r = draws.next_unit());
                r2.iter_mut().for_each(|r| *r = draws.next_unit());
                StepDraws { r1, r2 }
            }
        })
        .collect()
}

/// Moves one particle; returns its new position before evaluation.
fn advance<T: Real>(
    particle: &mut ParticleState<T>,
    r: &StepDraws<T>,
    g: &Vec4<T>,
    w: T,
    config: &SwarmConfig<T>,
    bounds: &SearchBounds<T>,
) {
    let x = particle.position;
    let mut v = particle.velocity;
    for k in 0..DIM {
        v[k] = w * v[k]
            + config.c1 * r.r1[k] * (particle.pbest_position[k] - x[k])
            + config.c2 * r.r2[k] * (g[k] - x[k]);
    }
    bounds.clamp_velocity(&mut v);
    let mut next = x;
    for k in 0..DIM {
        next[k] += v[k];
    }
    bounds.clamp_position(&mut next);
    particle.velocity = v;
    particle.position = next;
}

/// One synchronous swarm update.
///
/// Draw order: for each particle in index order, `r1` components 0..4 then `r2`
/// components 0..4 (or one `r1` then one `r2` when `scalar_random` is set).
/// Personal and global bests are replaced only on strict improvement; among several
/// particles beating the incumbent global best the lowest index with the smallest
/// fitness wins.
pub fn step<T: Real, D: UnitDraws<T>>(
    mut state: SwarmState<T>,
    cloud: &PointCloud<T>,
    weights: &Weights<T>,
    config: &SwarmConfig<T>,
    draws: &mut D,
) -> SwarmState<T> {
    let w = inertia_at(state.iteration, config);
    let rs = draw_step(state.particles.len(), config.scalar_random, draws);
    let g = state.gbest_position;
    let bounds = state.bounds;

    let fits: Vec<ObjectiveBreakdown<T>> = state
        .particles
        .par_iter_mut()
        .zip(rs.par_iter())
        .map(|(particle, r)| {
            advance(particle, r, &g, w, config, &bounds);
            fitness(cloud, weights, &particle.position)
        })
        .collect();

    let mut best: Option<usize> = None;
    for (i, (particle, f)) in state.particles.iter_mut().zip(&fits).enumerate() {
        if f.j < particle.pbest_fitness {
            particle.pbest_fitness = f.j;
            particle.pbest_position = particle.position;
        }
        let incumbent = best.map_or(state.gbest.j, |b| fits[b].j);
        if f.j < incumbent {
            best = Some(i);
        }
    }
    if let Some(b) = best {
        state.gbest_position = state.particles[b].position;
        state.gbest = fits[b];
    }
    state.iteration += 1;
    state
}

/// Mean squared distance of particle positions to the global best.
pub fn lyapunov<T: Real>(state: &SwarmState<T>) -> T {
    if state.particles.is_empty() {
        return T::zero();
    }
    let g = &state.gbest_position;
    let sum: T = state
        .particles
        .iter()
        .map(|p| (0..DIM).map(|k| (p.position[k] - g[k]).powi(2)).sum::<T>())
        .sum();
    sum / T::from_usize_lossy(state.particles.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminatedBy {
    MaxIters,
    Stagnation,
}

impl std::fmt::Display for TerminatedBy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminatedBy::MaxIters => "max_iters",
            TerminatedBy::Stagnation => "stagnation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TraceRecord<T> {
    pub iter: usize,
    pub gbest_j: T,
    pub inside_count: usize,
    pub radius: T,
    pub lms: T,
    pub lyapunov: T,
}

impl<T: Real> TraceRecord<T> {
    fn capture(state: &SwarmState<T>) -> Self {
        Self {
            iter: state.iteration,
            gbest_j: state.gbest.j,
            inside_count: state.gbest.inside_count,
            radius: decode(&state.gbest_position).radius,
            lms: state.gbest.lms,
            lyapunov: lyapunov(state),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SolveResult<T> {
    pub sphere: Sphere<T>,
    pub fitness: ObjectiveBreakdown<T>,
    pub iterations_run: usize,
    /// One record after initialization (`iter = 0`) and one per step.
    pub trace: Vec<TraceRecord<T>>,
    pub terminated_by: TerminatedBy,
    pub bounds: SearchBounds<T>,
    pub gate_satisfied: bool,
}

/// Runs the swarm to `max_iters` or until the global best stagnates.
///
/// Stagnation: once at least `stagnation_window` steps have run, stop when the best
/// fitness improved by less than `stagnation_tol` over the last `stagnation_window`
/// steps. A window of zero disables the check.
pub fn solve<T: Real>(
    cloud: &PointCloud<T>,
    weights: &Weights<T>,
    config: &SwarmConfig<T>,
) -> Result<SolveResult<T>> {
    config.validate()?;
    weights.validate()?;
    cloud.ensure_non_empty()?;

    let bounds = search_bounds(cloud, config.v_max_fraction)?;
    let mut draws = SeededDraws::new(config.seed);
    let mut state = init_swarm(config, &bounds, cloud, weights, &mut draws);
    let mut trace = Vec::with_capacity(config.max_iters + 1);
    trace.push(TraceRecord::capture(&state));

    let window = config.stagnation_window;
    let mut terminated_by = TerminatedBy::MaxIters;
    while state.iteration < config.max_iters {
        state = step(state, cloud, weights, config, &mut draws);
        let rec = TraceRecord::capture(&state);
        trace.push(rec);
        if window > 0 && state.iteration >= window {
            let earlier = trace[trace.len() - 1 - window].gbest_j;
            if earlier - rec.gbest_j < config.stagnation_tol {
                terminated_by = TerminatedBy::Stagnation;
                break;
            }
        }
    }

    Ok(SolveResult {
        sphere: state.gbest_sphere(),
        fitness: state.gbest,
        iterations_run: state.iteration,
        trace,
        terminated_by,
        bounds,
        gate_satisfied: convergence_gate(config),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::PinnedDraws;

    fn p(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    fn cube() -> PointCloud<f64> {
        let mut v = Vec::new();
        for &x in &[0.0, 1.0] {
            for &y in &[0.0, 1.0] {
                for &z in &[0.0, 1.0] {
                    v.push(p(x, y, z));
                }
            }
        }
        PointCloud::new(v).unwrap()
    }

    fn wide_bounds() -> SearchBounds<f64> {
        SearchBounds {
            lower: [-100.0; 4],
            upper: [100.0; 4],
            velocity: [100.0; 4],
        }
    }

    fn state_with(particles: Vec<ParticleState<f64>>, g: Vec4<f64>) -> SwarmState<f64> {
        let gbest = ObjectiveBreakdown {
            j: -1e300,
            inside_count: 0,
            radius_term: 0.0,
            lms: 0.0,
            lms_term: 0.0,
        };
        SwarmState {
            particles,
            gbest_position: g,
            gbest,
            iteration: 0,
            bounds: wide_bounds(),
        }
    }

    #[test]
    fn bounds_unit_cube() {
        let b = search_bounds(&cube(), 0.2).unwrap();
        let h = 3f64.sqrt() / 2.0;
        for k in 0..3 {
            assert!((b.lower[k] + h).abs() < 1e-15);
            assert!((b.upper[k] - (1.0 + h)).abs() < 1e-15);
        }
        assert_eq!(b.lower[3], 0.0);
        assert!((b.upper[3] - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bounds_single_point_fallback() {
        let c = PointCloud::new(vec![p(2., 3., 4.); 5]).unwrap();
        let b = search_bounds(&c, 0.2).unwrap();
        assert_eq!(b.lower, [1.5, 2.5, 3.5, 0.0]);
        assert_eq!(b.upper, [2.5, 3.5, 4.5, 1.0]);
        assert!(b.velocity.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn bounds_velocity_limits() {
        let c = PointCloud::new(vec![p(0., 0., 0.), p(10., 10., 10.)]).unwrap();
        let b = search_bounds(&c, 0.2).unwrap();
        for k in 0..3 {
            assert!((b.velocity[k] - 2.0).abs() < 1e-12);
        }
        assert!((b.velocity[3] - 0.2 * 10.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bounds_flat_axis_keeps_velocity() {
        let c = PointCloud::new(vec![p(0., 0., 0.), p(3., 4., 0.)]).unwrap();
        let b = search_bounds(&c, 0.5).unwrap();
        assert_eq!(b.velocity[2], 2.5);
    }

    #[test]
    fn inertia_schedule() {
        let cfg = SwarmConfig::<f64> {
            max_iters: 100,
            ..Default::default()
        };
        assert_eq!(inertia_at(0, &cfg), 0.9);
        assert!((inertia_at(100, &cfg) - 0.4).abs() < 1e-15);
        assert!((inertia_at(50, &cfg) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn gate_truth_table() {
        assert!(contraction_holds(0.7, 3.0));
        assert!(!contraction_holds(1.0, 0.5));
        assert!(!contraction_holds(0.5, 4.5));
        assert!(convergence_gate(&SwarmConfig::<f64>::default()));
        let loose = SwarmConfig::<f64> {
            w_end: 0.1,
            c1: 1.2,
            c2: 1.2,
            ..Default::default()
        };
        assert!(!convergence_gate(&loose));
    }

    #[test]
    fn config_validation() {
        let ok = SwarmConfig::<f64>::default();
        assert!(ok.validate().is_ok());
        let cases = [
            SwarmConfig { n_particles: 1, ..ok },
            SwarmConfig { max_iters: 0, ..ok },
            SwarmConfig { w_start: 1.0, ..ok },
            SwarmConfig { w_end: 0.95, ..ok },
            SwarmConfig { w_end: 0.0, ..ok },
            SwarmConfig { c1: 0.0, ..ok },
            SwarmConfig { v_max_fraction: 1.5, ..ok },
            SwarmConfig { stagnation_tol: -1.0, ..ok },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))), "{c:?}");
        }
    }

    #[test]
    fn init_is_deterministic_and_in_bounds() {
        let cloud = cube();
        let w = Weights::default();
        let cfg = SwarmConfig {
            n_particles: 2,
            seed: 11,
            ..Default::default()
        };
        let b = search_bounds(&cloud, cfg.v_max_fraction).unwrap();
        let a = init_swarm(&cfg, &b, &cloud, &w, &mut SeededDraws::new(11));
        let again = init_swarm(&cfg, &b, &cloud, &w, &mut SeededDraws::new(11));
        assert_eq!(a, again);
        let m = a.particles[0].pbest_fitness.min(a.particles[1].pbest_fitness);
        assert_eq!(a.gbest_fitness(), m);
        for particle in &a.particles {
            assert!(b.contains_position(&particle.position));
            assert!(b.contains_velocity(&particle.velocity));
            assert_eq!(particle.pbest_position, particle.position);
            assert_eq!(particle.pbest_fitness, fitness(&cloud, &w, &particle.position).j);
        }
    }

    #[test]
    fn step_with_zero_coefficients_drifts() {
        let cloud = cube();
        let cfg = SwarmConfig {
            w_start: 1.0,
            w_end: 1.0,
            c1: 0.0,
            c2: 0.0,
            ..Default::default()
        };
        let v = [0.5, -0.25, 1.0, 0.125];
        let x = [1.0, 2.0, 3.0, 4.0];
        let state = state_with(
            vec![ParticleState {
                position: x,
                velocity: v,
                pbest_position: x,
                pbest_fitness: 0.0,
            }],
            x,
        );
        let next = step(state, &cloud, &Weights::default(), &cfg, &mut PinnedDraws(1.0));
        let got = next.particles[0].position;
        for k in 0..4 {
            assert!((got[k] - (x[k] + v[k])).abs() < 1e-12);
        }
        assert_eq!(next.iteration, 1);
    }

    #[test]
    fn step_at_own_best_without_inertia_stays() {
        let cloud = cube();
        let cfg = SwarmConfig {
            w_start: 0.0,
            w_end: 0.0,
            c2: 0.0,
            ..Default::default()
        };
        let x = [0.5, 0.5, 0.5, 2.0];
        let state = state_with(
            vec![ParticleState {
                position: x,
                velocity: [3.0, 3.0, 3.0, 3.0],
                pbest_position: x,
                pbest_fitness: 0.0,
            }],
            [9.0, 9.0, 9.0, 9.0],
        );
        let next = step(state, &cloud, &Weights::default(), &cfg, &mut PinnedDraws(0.7));
        let got = next.particles[0].position;
        for k in 0..4 {
            assert!((got[k] - x[k]).abs() < 1e-12);
            assert!(next.particles[0].velocity[k].abs() < 1e-12);
        }
    }

    #[test]
    fn step_pinned_draws_substitution() {
        let cloud = cube();
        let cfg = SwarmConfig {
            w_start: 0.5,
            w_end: 0.5,
            c1: 1.0,
            c2: 1.0,
            ..Default::default()
        };
        let state = state_with(
            vec![ParticleState {
                position: [0.0, 0.0, 0.0, 1.0],
                velocity: [1.0, 0.0, 0.0, 0.0],
                pbest_position: [2.0, 0.0, 0.0, 1.0],
                pbest_fitness: -1e300,
            }],
            [4.0, 0.0, 0.0, 1.0],
        );
        let next = step(state, &cloud, &Weights::default(), &cfg, &mut PinnedDraws(1.0));
        assert_eq!(next.particles[0].velocity, [6.5, 0.0, 0.0, 0.0]);
        assert_eq!(next.particles[0].position, [6.5, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn step_clamps_to_bounds() {
        let cloud = cube();
        let cfg = SwarmConfig::<f64>::default();
        let b = search_bounds(&cloud, cfg.v_max_fraction).unwrap();
        let mut state = init_swarm(&cfg, &b, &cloud, &Weights::default(), &mut SeededDraws::new(3));
        state.particles[0].position = b.lower;
        state.particles[0].velocity = [-b.velocity[0]; 4];
        let next = step(state, &cloud, &Weights::default(), &cfg, &mut SeededDraws::new(4));
        for particle in &next.particles {
            assert!(b.contains_position(&particle.position));
            assert!(b.contains_velocity(&particle.velocity));
            assert!(particle.position[RADIUS_AXIS] >= 0.0);
        }
    }

    #[test]
    fn scalar_random_consumes_two_draws_per_particle() {
        struct Counting(usize);
        impl UnitDraws<f64> for Counting {
            fn next_unit(&mut self) -> f64 {
                self.0 += 1;
                0.5
            }
        }
        let cloud = cube();
        let cfg = SwarmConfig::<f64>::default();
        let b = search_bounds(&cloud, cfg.v_max_fraction).unwrap();
        let state = init_swarm(&cfg, &b, &cloud, &Weights::default(), &mut SeededDraws::new(1));
        let mut count = Counting(0);
        let state = step(state, &cloud, &Weights::default(), &cfg, &mut count);
        assert_eq!(count.0, 8 * cfg.n_particles);
        let scalar = SwarmConfig {
            scalar_random: true,
            ..cfg
        };
        let mut count = Counting(0);
        step(state, &cloud, &Weights::default(), &scalar, &mut count);
        assert_eq!(count.0, 2 * cfg.n_particles);
    }

    #[test]
    fn lyapunov_examples() {
        let particle = |x: Vec4<f64>| ParticleState {
            position: x,
            velocity: [0.0; 4],
            pbest_position: x,
            pbest_fitness: 0.0,
        };
        let g = [1.0, 1.0, 1.0, 1.0];
        let s = state_with(vec![particle(g), particle(g)], g);
        assert_eq!(lyapunov(&s), 0.0);
        let s = state_with(vec![particle([1.0, 1.0, 3.0, 1.0])], g);
        assert_eq!(lyapunov(&s), 4.0);
        let s = state_with(
            vec![particle([2.0, 1.0, 1.0, 1.0]), particle([1.0, 1.0, 1.0, 4.0])],
            g,
        );
        assert_eq!(lyapunov(&s), 5.0);
    }

    #[test]
    fn solve_rejects_bad_input() {
        let empty = PointCloud::<f64>::new(vec![]).unwrap();
        assert!(matches!(
            solve(&empty, &Weights::default(), &SwarmConfig::default()),
            Err(Error::EmptyInput)
        ));
        let cfg = SwarmConfig::<f64> {
            n_particles: 0,
            ..Default::default()
        };
        assert!(matches!(
            solve(&cube(), &Weights::default(), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn solve_trace_is_monotone_and_repeatable() {
        let cfg = SwarmConfig::<f64> {
            max_iters: 150,
            seed: 5,
            ..Default::default()
        };
        let a = solve(&cube(), &Weights::default(), &cfg).unwrap();
        let b = solve(&cube(), &Weights::default(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trace.len(), a.iterations_run + 1);
        for pair in a.trace.windows(2) {
            assert!(pair[1].gbest_j <= pair[0].gbest_j);
            assert!(pair[1].lyapunov >= 0.0);
        }
        assert_eq!(a.fitness.j, a.trace.last().unwrap().gbest_j);
    }

    #[test]
    fn solve_single_precision() {
        let cloud = PointCloud::new(
            cube().iter().map(|q| Point3::new(q.x as f32, q.y as f32, q.z as f32)).collect(),
        )
        .unwrap();
        let cfg = SwarmConfig::<f32> {
            max_iters: 50,
            ..Default::default()
        };
        let r = solve(&cloud, &Weights::<f32>::default(), &cfg).unwrap();
        assert!(r.sphere.radius >= 0.0);
    }
}
