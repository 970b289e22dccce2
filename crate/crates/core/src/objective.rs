//! The modified enclosing-sphere fitness
//!
//! `J(C, r) = -lambda * |inside| + alpha * r + beta * LMS`, where LMS is the mean
//! squared distance from every excluded point to the sphere surface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Partition, PointCloud, Sphere, DEFAULT_ON_SURFACE_EPS};
use crate::scalar::Real;

/// Coefficients of the fitness: enclosure reward, radius cost, and excluded-point penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Weights<T> {
    pub lambda: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> Weights<T> {
    pub fn new(lambda: T, alpha: T, beta: T) -> Result<Self> {
        let w = Self {
            lambda,
            alpha,
            beta,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda, self.alpha, self.beta];
        if all.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and non-negative, got ({}, {}, {})",
                self.lambda, self.alpha, self.beta
            )));
        }
        if all.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidWeights("at least one weight must be non-zero".into()));
        }
        Ok(())
    }

    /// `(1, 1, 0.5)`: enclosing points dominates, radius and exclusion penalties are light.
    pub fn lambda_dominant() -> Self {
        Self {
            lambda: T::one(),
            alpha: T::one(),
            beta: T::lit(0.5),
        }
    }

    /// Every coefficient multiplied by `k`.
    pub fn scaled(&self, k: T) -> Self {
        Self {
            lambda: self.lambda * k,
            alpha: self.alpha * k,
            beta: self.beta * k,
        }
    }
}

/// Defaults are tuning knobs, not derived constants: with them a noisy shell of radius
/// 7 and ~600 points keeps a few percent of its samples outside.
impl<T: Real> Default for Weights<T> {
    fn default() -> Self {
        Self {
            lambda: T::lit(1.0),
            alpha: T::lit(50.0),
            beta: T::lit(5.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ObjectiveBreakdown<T> {
    pub j: T,
    pub inside_count: usize,
    pub radius_term: T,
    pub lms: T,
    pub lms_term: T,
}

impl<T: Real> ObjectiveBreakdown<T> {
    fn compose(weights: &Weights<T>, inside_count: usize, radius: T, lms: T) -> Self {
        let radius_term = weights.alpha * radius;
        let lms_term = weights.beta * lms;
        let j = -weights.lambda * T::from_usize_lossy(inside_count) + radius_term + lms_term;
        Self {
            j,
            inside_count,
            radius_term,
            lms,
            lms_term,
        }
    }
}

/// Mean squared surface distance of the partition's outside points; zero when none are outside.
pub fn lms_error<T: Real>(
    cloud: &PointCloud<T>,
    partition: &Partition,
    sphere: &Sphere<T>,
) -> Result<T> {
    let points = cloud.points();
    if let Some(&index) = partition
        .inside
        .iter()
        .chain(&partition.outside)
        .find(|&&i| i >= points.len())
    {
        return Err(Error::InconsistentPartition {
            index,
            len: points.len(),
        });
    }
    if partition.outside.is_empty() {
        return Ok(T::zero());
    }
    let sum: T = partition
        .outside
        .iter()
        .map(|&i| {
            let e = distance(points[i], sphere.center) - sphere.radius;
            e * e
        })
        .sum();
    Ok(sum / T::from_usize_lossy(partition.outside.len()))
}

/// Full fitness breakdown of `sphere` on `cloud`.
///
/// Single pass over the cloud; agrees with `classify` followed by [`lms_error`].
pub fn evaluate<T: Real>(
    cloud: &PointCloud<T>,
    sphere: &Sphere<T>,
    weights: &Weights<T>,
) -> ObjectiveBreakdown<T> {
    let eps = T::lit(DEFAULT_ON_SURFACE_EPS);
    let limit = sphere.radius * (T::one() + eps) + eps;
    let mut inside = 0usize;
    let mut outside = 0usize;
    let mut sq_sum = T::zero();
    for p in cloud {
        let d = distance(*p, sphere.center);
        if d <= limit {
            inside += 1;
        } else {
            outside += 1;
            let e = d - sphere.radius;
            sq_sum += e * e;
        }
    }
    let lms = if outside == 0 {
        T::zero()
    } else {
        sq_sum / T::from_usize_lossy(outside)
    };
    ObjectiveBreakdown::compose(weights, inside, sphere.radius, lms)
}
