//! Exact smallest enclosing sphere.
//!
//! [`welzl_ses`] is the randomized move-to-front variant of Welzl's recursion: the
//! support list never grows past four points, so the recursion depth is bounded by
//! four regardless of cloud size. [`brute_force_ses`] enumerates every support
//! candidate of size one to four and is used as an oracle on small clouds.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_box, distance, Point3, PointCloud, Sphere};
use crate::rng::seeded;
use crate::scalar::Real;

/// Relative determinant threshold below which a support set is treated as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-10;
/// Relative slack of the "point lies outside the current sphere" test.
pub const OUTSIDE_RTOL: f64 = 1e-10;
/// Relative slack used when validating and when the oracle checks enclosure.
pub const ENCLOSURE_RTOL: f64 = 1e-9;
/// Largest cloud the brute-force oracle accepts.
pub const ORACLE_MAX_POINTS: usize = 60;

/// Up to four points on the boundary of a sphere.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SupportSet<T> {
    points: Vec<Point3<T>>,
}

impl<T: Real> SupportSet<T> {
    pub fn new(points: Vec<Point3<T>>) -> Result<Self> {
        if points.len() > 4 {
            return Err(Error::DegenerateSupport("more than four support points"));
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
}

/// Smallest sphere having all of `support` on its boundary.
///
/// Zero points give the empty sphere at the origin, one point a zero-radius sphere,
/// two the diameter sphere, three the circumcircle's sphere in the triangle plane, and
/// four the tetrahedron circumsphere. Collinear triples and coplanar quadruples are
/// rejected with [`Error::DegenerateSupport`].
pub fn circumsphere<T: Real>(support: &[Point3<T>]) -> Result<Sphere<T>> {
    match *support {
        [] => Ok(Sphere::point(Point3::origin())),
        [a] => Ok(Sphere::point(a)),
        [a, b] => Ok(Sphere {
            center: a.midpoint(b),
            radius: distance(a, b) * T::lit(0.5),
        }),
        [a, b, c] => circumsphere3(a, b, c),
        [a, b, c, d] => circumsphere4(a, b, c, d),
        _ => Err(Error::DegenerateSupport("more than four support points")),
    }
}

fn max_edge<T: Real>(pts: &[Point3<T>]) -> T {
    let mut m = T::zero();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            m = m.max(distance(p, q));
        }
    }
    m
}

fn circumsphere3<T: Real>(a: Point3<T>, b: Point3<T>, c: Point3<T>) -> Result<Sphere<T>> {
    let u = b - a;
    let v = c - a;
    let n = u.cross(v);
    let n2 = n.norm_squared();
    let scale = max_edge(&[a, b, c]);
    if scale.is_zero() || n2 <= T::lit(DEGENERACY_RTOL) * scale.powi(4) {
        return Err(Error::DegenerateSupport("collinear triple"));
    }
    // Offset from `a` to the circumcenter within the plane of the triangle.
    let offset = (v * u.norm_squared() - u * v.norm_squared()).cross(n) * (T::one() / (n2 + n2));
    let center = a + offset;
    Ok(Sphere {
        center,
        radius: offset.norm(),
    })
}

fn circumsphere4<T: Real>(a: Point3<T>, b: Point3<T>, c: Point3<T>, d: Point3<T>) -> Result<Sphere<T>> {
    // Equidistance to `a` gives (q - a) . x = |q - a|^2 / 2 for x = center - a.
    let rows = [b - a, c - a, d - a];
    let half = T::lit(0.5);
    let rhs = [
        rows[0].norm_squared() * half,
        rows[1].norm_squared() * half,
        rows[2].norm_squared() * half,
    ];
    let det = rows[0].dot(rows[1].cross(rows[2]));
    let scale = max_edge(&[a, b, c, d]);
    if scale.is_zero() || det.abs() <= T::lit(DEGENERACY_RTOL) * scale.powi(3) {
        return Err(Error::DegenerateSupport("coplanar quadruple"));
    }
    // Cramer's rule via the adjugate: x = (rhs0 (r1 x r2) + rhs1 (r2 x r0) + rhs2 (r0 x r1)) / det.
    let offset = (rows[1].cross(rows[2]) * rhs[0]
        + rows[2].cross(rows[0]) * rhs[1]
        + rows[0].cross(rows[1]) * rhs[2])
        * (T::one() / det);
    Ok(Sphere {
        center: a + offset,
        radius: offset.norm(),
    })
}

#[derive(Clone, Copy)]
struct Ball<T> {
    sphere: Sphere<T>,
    support: [usize; 4],
    support_len: usize,
}

struct MoveToFront<'a, T> {
    points: &'a [Point3<T>],
    order: Vec<usize>,
    support: Vec<usize>,
    slack: T,
}

impl<T: Real> MoveToFront<'_, T> {
    fn outside(&self, ball: &Option<Ball<T>>, p: Point3<T>) -> bool {
        match ball {
            None => true,
            Some(b) => {
                let r = b.sphere.radius;
                distance(p, b.sphere.center) > r + T::lit(OUTSIDE_RTOL) * r.max(self.slack)
            }
        }
    }

    /// Smallest sphere through the current support, falling back to the best enclosing
    /// sphere of a proper subset when the support is degenerate.
    fn ball_from_support(&self) -> Option<Ball<T>> {
        let pts: Vec<Point3<T>> = self.support.iter().map(|&i| self.points[i]).collect();
        if pts.is_empty() {
            return None;
        }
        if let Ok(sphere) = circumsphere(&pts) {
            let mut support = [0; 4];
            support[..pts.len()].copy_from_slice(&self.support);
            return Some(Ball {
                sphere,
                support,
                support_len: pts.len(),
            });
        }
        let k = pts.len();
        let mut best: Option<Ball<T>> = None;
        for mask in 1u32..(1 << k) - 1 {
            let idx: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).collect();
            let sub: Vec<Point3<T>> = idx.iter().map(|&b| pts[b]).collect();
            let Ok(sphere) = circumsphere(&sub) else { continue };
            let tol = T::lit(ENCLOSURE_RTOL) * sphere.radius.max(self.slack);
            if pts.iter().any(|&q| distance(q, sphere.center) > sphere.radius + tol) {
                continue;
            }
            if best.is_none_or(|b| sphere.radius < b.sphere.radius) {
                let mut support = [0; 4];
                for (slot, &b) in support.iter_mut().zip(&idx) {
                    *slot = self.support[b];
                }
                best = Some(Ball {
                    sphere,
                    support,
                    support_len: idx.len(),
                });
            }
        }
        best
    }

    fn run(&mut self, end: usize) -> Option<Ball<T>> {
        let mut ball = self.ball_from_support();
        if self.support.len() == 4 {
            return ball;
        }
        for i in 0..end {
            let idx = self.order[i];
            if self.outside(&ball, self.points[idx]) {
                self.support.push(idx);
                ball = self.run(i);
                self.support.pop();
                self.order[..=i].rotate_right(1);
            }
        }
        ball
    }
}

/// Minimum-radius sphere enclosing every point of `cloud`, with its support set.
///
/// The input order is shuffled with `seed` before the recursion; the result does not
/// depend on the seed beyond floating-point noise.
pub fn welzl_ses<T: Real>(cloud: &PointCloud<T>, seed: u64) -> Result<(Sphere<T>, SupportSet<T>)> {
    cloud.ensure_non_empty()?;
    let points = cloud.points();
    let slack = bounding_box(cloud)?.diagonal();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut seeded(seed));
    let mut mtf = MoveToFront {
        points,
        order,
        support: Vec::with_capacity(4),
        slack,
    };
    let n = points.len();
    let ball = mtf.run(n).expect("non-empty cloud always yields a ball");
    let support = ball.support[..ball.support_len]
        .iter()
        .map(|&i| points[i])
        .collect();
    Ok((ball.sphere, SupportSet { points: support }))
}

fn encloses_all<T: Real>(points: &[Point3<T>], sphere: &Sphere<T>) -> bool {
    let limit = sphere.radius * (T::one() + T::lit(ENCLOSURE_RTOL));
    points.iter().all(|&p| distance(p, sphere.center) <= limit)
}

/// Exhaustive smallest enclosing sphere over all support candidates of size 1..=4.
pub fn brute_force_ses<T: Real>(cloud: &PointCloud<T>) -> Result<Sphere<T>> {
    cloud.ensure_non_empty()?;
    let pts = cloud.points();
    let n = pts.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::OracleSizeLimit {
            len: n,
            max: ORACLE_MAX_POINTS,
        });
    }
    let mut best: Option<Sphere<T>> = None;
    let mut consider = |candidate: Result<Sphere<T>>| {
        let Ok(s) = candidate else { return };
        if best.is_some_and(|b| s.radius >= b.radius) {
            return;
        }
        if encloses_all(pts, &s) {
            best = Some(s);
        }
    };
    for i in 0..n {
        consider(circumsphere(&[pts[i]]));
        for j in i + 1..n {
            consider(circumsphere(&[pts[i], pts[j]]));
            for k in j + 1..n {
                consider(circumsphere(&[pts[i], pts[j], pts[k]]));
                for l in k + 1..n {
                    consider(circumsphere(&[pts[i], pts[j], pts[k], pts[l]]));
                }
            }
        }
    }
    best.ok_or(Error::DegenerateSupport("no enclosing candidate found"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SphereValidation<T> {
    /// `max_p (|p - C| - r)`; non-positive when every point is enclosed.
    pub max_violation: T,
    pub enclosed_fraction: T,
    pub boundary_count: usize,
}

/// Post-hoc numerical check of a sphere against a cloud.
///
/// A point counts as enclosed within `r * 1e-9` of the surface and as a boundary point
/// when its surface distance is within the same band.
pub fn validate_sphere<T: Real>(cloud: &PointCloud<T>, sphere: &Sphere<T>) -> SphereValidation<T> {
    let tol = T::lit(ENCLOSURE_RTOL) * sphere.radius;
    let mut max_violation = T::neg_infinity();
    let mut enclosed = 0usize;
    let mut boundary = 0usize;
    for p in cloud {
        let gap = distance(*p, sphere.center) - sphere.radius;
        max_violation = max_violation.max(gap);
        if gap <= tol {
            enclosed += 1;
        }
        if gap.abs() <= tol {
            boundary += 1;
        }
    }
    let enclosed_fraction = if cloud.is_empty() {
        T::one()
    } else {
        T::from_usize_lossy(enclosed) / T::from_usize_lossy(cloud.len())
    };
    SphereValidation {
        max_violation,
        enclosed_fraction,
        boundary_count: boundary,
    }
}
