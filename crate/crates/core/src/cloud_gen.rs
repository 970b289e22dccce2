//! Synthetic noisy spherical shells.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point3, PointCloud};
use crate::rng::{derive_seed, seeded};
use crate::scalar::Real;

/// Default shell radius; puts generated clouds at radii of roughly 7 to 11 units.
pub const DEFAULT_SHELL_RADIUS: f64 = 7.0;
/// Default noise scale relative to the shell radius.
pub const DEFAULT_SIGMA_FRACTION: f64 = 0.05;
/// Default number of samples per shell.
pub const DEFAULT_SHELL_POINTS: usize = 634;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ShellSpec<T> {
    pub center: Point3<T>,
    pub radius: T,
    pub n_points: usize,
    /// Per-coordinate standard deviation of the additive isotropic noise.
    pub sigma: T,
    pub seed: u64,
}

impl<T: Real> ShellSpec<T> {
    pub fn new(center: Point3<T>, radius: T, n_points: usize, sigma: T, seed: u64) -> Result<Self> {
        let spec = Self {
            center,
            radius,
            n_points,
            sigma,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::InvalidConfig("shell center must be finite".into()));
        }
        if !(self.radius.is_finite() && self.radius > T::zero()) {
            return Err(Error::InvalidConfig(format!("shell radius must be positive, got {}", self.radius)));
        }
        if !(self.sigma.is_finite() && self.sigma >= T::zero()) {
            return Err(Error::InvalidConfig(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        Ok(())
    }
}

fn unit_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Samples `n_points` uniformly on the sphere surface and adds isotropic Gaussian noise.
///
/// Each point consumes three normals for its direction (redrawn in the measure-zero case
/// of a near-zero vector) and then three for its noise, even when `sigma` is zero.
pub fn generate_shell<T: Real>(spec: &ShellSpec<T>) -> Result<PointCloud<T>> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let radius = spec.radius.to_f64_lossy();
    let sigma = spec.sigma.to_f64_lossy();
    let c = spec.center;
    let points = (0..spec.n_points)
        .map(|_| {
            let d = unit_direction(&mut rng);
            let noise: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            Point3::new(
                c.x + T::lit(radius * d[0] + sigma * noise[0]),
                c.y + T::lit(radius * d[1] + sigma * noise[1]),
                c.z + T::lit(radius * d[2] + sigma * noise[2]),
            )
        })
        .collect();
    PointCloud::new(points)
}

/// Sub-seed of the second shell in a two-shell cloud.
pub fn second_shell_seed(seed: u64) -> u64 {
    derive_seed(seed, 2)
}

/// Center of the second shell: shifted by half the radius along every axis.
pub fn second_shell_center<T: Real>(radius: T) -> Point3<T> {
    let h = radius * T::lit(0.5);
    Point3::new(h, h, h)
}

/// Two equal shells, the first at the origin, the second at `(r/2, r/2, r/2)`.
///
/// The first shell uses `seed` directly, so the first half of the cloud equals
/// `generate_shell` with that seed; the second uses [`second_shell_seed`].
pub fn generate_two_sphere<T: Real>(radius: T, n_per_shell: usize, sigma: T, seed: u64) -> Result<PointCloud<T>> {
    let a = ShellSpec::new(Point3::origin(), radius, n_per_shell, sigma, seed)?;
    let b = ShellSpec::new(second_shell_center(radius), radius, n_per_shell, sigma, second_shell_seed(seed))?;
    let mut cloud = generate_shell(&a)?;
    cloud.extend(generate_shell(&b)?);
    Ok(cloud)
}
