//! Points, spheres, and the inside/outside split of a cloud against a sphere.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative tolerance used when deciding whether a point lies on a sphere surface.
pub const DEFAULT_ON_SURFACE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Point3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    #[inline]
    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn midpoint(self, other: Self) -> Self {
        (self + other) * T::lit(0.5)
    }

    pub fn component_min(self, other: Self) -> Self {
        Self::new(self.x.min(other.x), self.y.min(other.y), self.z.min(other.z))
    }

    pub fn component_max(self, other: Self) -> Self {
        Self::new(self.x.max(other.x), self.y.max(other.y), self.z.max(other.z))
    }
}

impl<T: Real> Add for Point3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Point3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Point3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Neg for Point3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T> Index<usize> for Point3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Point3 index {i} out of range"),
        }
    }
}

/// Euclidean distance between two points.
#[inline]
pub fn distance<T: Real>(p: Point3<T>, q: Point3<T>) -> T {
    (p - q).norm()
}

/// An ordered point cloud. Indices are stable identifiers; duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud<T> {
    points: Vec<Point3<T>>,
}

impl<T: Real> PointCloud<T> {
    /// Builds a cloud, rejecting NaN or infinite coordinates.
    pub fn new(points: Vec<Point3<T>>) -> Result<Self> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point3<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point3<T>> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point3<T>> {
        self.points
    }

    /// Appends the points of `other`, keeping this cloud's indices in place.
    pub fn extend(&mut self, other: PointCloud<T>) {
        self.points.extend(other.points);
    }

    pub fn push(&mut self, p: Point3<T>) -> Result<()> {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                index: self.points.len(),
            });
        }
        self.points.push(p);
        Ok(())
    }

    /// Sub-cloud made of the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            points: indices.iter().map(|&i| self.points[i]).collect(),
        }
    }

    pub(crate) fn ensure_non_empty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptyInput)
        } else {
            Ok(())
        }
    }
}

impl<'a, T> IntoIterator for &'a PointCloud<T> {
    type Item = &'a Point3<T>;
    type IntoIter = std::slice::Iter<'a, Point3<T>>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// A candidate sphere: center and non-negative radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Sphere<T> {
    pub center: Point3<T>,
    pub radius: T,
}

impl<T: Real> Sphere<T> {
    pub fn new(center: Point3<T>, radius: T) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidSphere("center is not finite".into()));
        }
        if !(radius.is_finite() && radius >= T::zero()) {
            return Err(Error::InvalidSphere(format!(
                "radius must be finite and non-negative, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// Point-sized sphere at `p`.
    pub fn point(p: Point3<T>) -> Self {
        Self {
            center: p,
            radius: T::zero(),
        }
    }

    /// Whether `p` is inside or on the surface, with relative/absolute slack `eps_on`.
    #[inline]
    pub fn contains(&self, p: Point3<T>, eps_on: T) -> bool {
        distance(p, self.center) <= self.radius * (T::one() + eps_on) + eps_on
    }
}

/// Index split of a cloud into enclosed and excluded points.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Partition {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.inside.len() + self.outside.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Splits `cloud` against `sphere`. Surface points count as inside.
pub fn classify<T: Real>(cloud: &PointCloud<T>, sphere: &Sphere<T>, eps_on: T) -> Partition {
    let mut partition = Partition::default();
    for (i, p) in cloud.iter().enumerate() {
        if sphere.contains(*p, eps_on) {
            partition.inside.push(i);
        } else {
            partition.outside.push(i);
        }
    }
    partition
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Aabb<T> {
    pub min: Point3<T>,
    pub max: Point3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn extent(&self) -> Point3<T> {
        self.max - self.min
    }

    pub fn diagonal(&self) -> T {
        self.extent().norm()
    }

    pub fn contains(&self, p: Point3<T>) -> bool {
        (0..3).all(|k| self.min[k] <= p[k] && p[k] <= self.max[k])
    }
}

pub fn bounding_box<T: Real>(cloud: &PointCloud<T>) -> Result<Aabb<T>> {
    let mut iter = cloud.iter();
    let first = *iter.next().ok_or(Error::EmptyInput)?;
    let (min, max) = iter.fold((first, first), |(lo, hi), p| {
        (lo.component_min(*p), hi.component_max(*p))
    });
    Ok(Aabb { min, max })
}
