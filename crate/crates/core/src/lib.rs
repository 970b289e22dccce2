//! Smallest enclosing spheres for noisy 3D point clouds.
//!
//! Two solvers share one set of geometric types:
//!
//! * [`pso::solve`] minimizes the trade-off fitness of [`objective::evaluate`]: reward
//!   for enclosed points, cost for radius, and a mean-squared penalty for the points
//!   left outside. It may leave a few outlying samples out.
//! * [`welzl::welzl_ses`] computes the exact smallest sphere enclosing every point.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `*64` aliases below
//! name the double precision instantiations used by the command-line tool.

pub mod cloud_gen;
pub mod error;
pub mod geometry;
pub mod io;
pub mod objective;
pub mod pso;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod welzl;

pub use error::{Error, Result};
pub use geometry::{bounding_box, classify, distance, Aabb, Partition, Point3, PointCloud, Sphere};
pub use objective::{evaluate, lms_error, ObjectiveBreakdown, Weights};
pub use pso::{solve, SearchBounds, SolveResult, SwarmConfig, SwarmState, TerminatedBy, TraceRecord};
pub use scalar::Real;
pub use welzl::{brute_force_ses, circumsphere, validate_sphere, welzl_ses, SphereValidation, SupportSet};

pub type Point3d = Point3<f64>;
pub type Point3f = Point3<f32>;
pub type Cloud64 = PointCloud<f64>;
pub type Cloud32 = PointCloud<f32>;
pub type Sphere64 = Sphere<f64>;
pub type Sphere32 = Sphere<f32>;
pub type Weights64 = Weights<f64>;
pub type SwarmConfig64 = SwarmConfig<f64>;
pub type SolveResult64 = SolveResult<f64>;
