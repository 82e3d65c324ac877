//! Metric geometry of the Grushin plane.
//!
//! The vector fields X1 = ∂x1, X2 = x1 ∂x2 induce several comparable
//! distance-like structures, all implemented here in closed form:
//!
//! * the gauge `ρ(x, y) = ((x1² − y1²)² + 4 (x2 − y2)²)^{1/4}`, which vanishes
//!   at the two points (±y1, y2);
//! * the quasi distance `d̃(x, y) = |x1 − y1| + √(x1² + y1² + 4|x2 − y2|)
//!   − √(x1² + y1²)`, a genuine distance up to a bounded factor;
//! * the comparison boxes `Box(y, r) = {|h1| < r, |h2| < r (|y1| + r)}`;
//! * the gauge sublevel sets G(y, r) / G̃(y, r) whose definition switches at
//!   `|y1| = r` between `ρ < r` and `ρ² / |y1| < r`, with a half-plane
//!   restriction `x1 y1 ≥ 0` for the G kind;
//! * the anisotropic dilations `δ_t(x) = (t x1, t² x2)` (homogeneous
//!   dimension Q = 3), the translation–scaling `T(x) = (r x1, y2 + r² x2)`
//!   and the reflection `S(x) = (−x1, x2)`.
//!
//! Membership predicates use strict inequalities: all sets are open.
//!
//! Submodules add volumes and the ring condition ([`volume`]), a lattice
//! approximation of the Carnot–Carathéodory distance ([`cc`]) and sampled
//! inclusion checks of the structure theorems ([`structure`]).

pub mod cc;
pub mod structure;
pub mod volume;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A location in the plane. Both coordinates are finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub fn new(x1: f64, x2: f64) -> Point {
        debug_assert!(x1.is_finite() && x2.is_finite(), "point coordinates must be finite");
        Point { x1, x2 }
    }
}

impl From<(f64, f64)> for Point {
    fn from(p: (f64, f64)) -> Point {
        Point::new(p.0, p.1)
    }
}

/// Anisotropic dilation δ_t(x) = (t x1, t² x2), t > 0.
pub fn dilate(t: f64, x: Point) -> Point {
    assert!(t > 0.0, "dilation scale must be positive");
    Point::new(t * x.x1, t * t * x.x2)
}

/// Translation–scaling T(x) = (r x1, y2 + r² x2), r > 0. Maps unit-scale
/// configurations centered on the x1-axis to radius-r configurations at
/// height y2; the operator transforms covariantly under it.
pub fn translate_scale(r: f64, y2: f64, x: Point) -> Point {
    assert!(r > 0.0, "scaling factor must be positive");
    Point::new(r * x.x1, y2 + r * r * x.x2)
}

/// Reflection S(x) = (−x1, x2) across the degenerate axis.
pub fn reflect(x: Point) -> Point {
    Point::new(-x.x1, x.x2)
}

/// The gauge ρ(x, y) = ((x1² − y1²)² + 4 (x2 − y2)²)^{1/4}.
///
/// ρ(x, y) = 0 exactly when x1² = y1² and x2 = y2, i.e. at the two points
/// (±y1, y2). ρ is 1-homogeneous under simultaneous dilation of x and y and
/// even in x1.
pub fn rho(x: Point, y: Point) -> f64 {
    let d = x.x1 * x.x1 - y.x1 * y.x1;
    let e = x.x2 - y.x2;
    (d * d + 4.0 * e * e).sqrt().sqrt()
}

/// The quasi distance d̃(x, y) = |x1 − y1| + √(s + 4|x2 − y2|) − √s with
/// s = x1² + y1².
///
/// Symmetric, vanishing exactly on the diagonal, 1-homogeneous under the
/// dilations and 1/2-Hölder in each argument. The square-root difference is
/// evaluated in the cancellation-free form 4|Δx2| / (√(s + 4|Δx2|) + √s).
pub fn quasi_distance(x: Point, y: Point) -> f64 {
    let s = x.x1 * x.x1 + y.x1 * y.x1;
    let d2 = 4.0 * (x.x2 - y.x2).abs();
    let vertical = if d2 == 0.0 { 0.0 } else { d2 / ((s + d2).sqrt() + s.sqrt()) };
    (x.x1 - y.x1).abs() + vertical
}

/// Coordinate axis; the degree of x1 is 1 and the degree of x2 is 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

/// Half-width of the comparison box along the given axis:
/// F1(x, r) = r and F2(x, r) = r (|x1| + r). Requires r ≥ 0; strictly
/// increasing in r with F_j(x, 2r) ≤ 4 F_j(x, r).
pub fn box_halfwidth(axis: Axis, x: Point, r: f64) -> f64 {
    assert!(r >= 0.0, "box radius must be nonnegative");
    match axis {
        Axis::X1 => r,
        Axis::X2 => r * (x.x1.abs() + r),
    }
}

/// Inverse of [`box_halfwidth`] in its radius argument: G1(x, s) = s and
/// G2(x, s) = (−|x1| + √(x1² + 4 s)) / 2, evaluated in the stable form
/// 2 s / (|x1| + √(x1² + 4 s)).
pub fn box_halfwidth_inverse(axis: Axis, x: Point, s: f64) -> f64 {
    assert!(s >= 0.0, "half-width must be nonnegative");
    match axis {
        Axis::X1 => s,
        Axis::X2 => {
            if s == 0.0 {
                0.0
            } else {
                let a = x.x1.abs();
                2.0 * s / (a + (a * a + 4.0 * s).sqrt())
            }
        }
    }
}

/// `G1(x, |y1 − x1|) + G2(x, |y2 − x2|)`: the box gauge comparable to the
/// Carnot–Carathéodory distance between x and y.
pub fn box_gauge(x: Point, y: Point) -> f64 {
    box_halfwidth_inverse(Axis::X1, x, (y.x1 - x.x1).abs())
        + box_halfwidth_inverse(Axis::X2, x, (y.x2 - x.x2).abs())
}

/// Open axis-aligned comparison box Box(center, radius).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BoxSpec {
    pub center: Point,
    pub radius: f64,
}

impl BoxSpec {
    pub fn new(center: Point, radius: f64) -> BoxSpec {
        assert!(radius > 0.0, "box radius must be positive");
        BoxSpec { center, radius }
    }

    pub fn contains(&self, x: Point) -> bool {
        (x.x1 - self.center.x1).abs() < box_halfwidth(Axis::X1, self.center, self.radius)
            && (x.x2 - self.center.x2).abs() < box_halfwidth(Axis::X2, self.center, self.radius)
    }

    /// Uniform sample from the open box.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        let w1 = box_halfwidth(Axis::X1, self.center, self.radius);
        let w2 = box_halfwidth(Axis::X2, self.center, self.radius);
        Point::new(
            self.center.x1 + rng.gen_range(-w1..w1),
            self.center.x2 + rng.gen_range(-w2..w2),
        )
    }
}

/// The four quasi-ball families.
///
/// * `B`: d̃-ball.
/// * `BTilde`: B(y, r) ∪ B(S(y), r), symmetrized across the axis.
/// * `G`: gauge sublevel set with the half-plane restriction x1 y1 ≥ 0 when
///   |y1| ≥ r (single zero).
/// * `GTilde`: plain gauge sublevel set (two zeros at (±y1, y2)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuasiBallKind {
    B,
    BTilde,
    G,
    GTilde,
}

/// One of the quasi-ball families at a given center and radius.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuasiBallSpec {
    pub center: Point,
    pub radius: f64,
    pub kind: QuasiBallKind,
}

/// Value of the symmetric gauge g̃_r(x, y): ρ(x, y) when |y1| < r, else
/// ρ²(x, y)/|y1|.
pub fn symmetric_gauge(x: Point, y: Point, r: f64) -> f64 {
    let p = rho(x, y);
    if y.x1.abs() < r {
        p
    } else {
        p * p / y.x1.abs()
    }
}

/// Value of the one-sided gauge g_r(x, y): as [`symmetric_gauge`] but +∞ on
/// the half plane x1 y1 < 0 when |y1| ≥ r.
pub fn one_sided_gauge(x: Point, y: Point, r: f64) -> f64 {
    if y.x1.abs() >= r && x.x1 * y.x1 < 0.0 {
        f64::INFINITY
    } else {
        symmetric_gauge(x, y, r)
    }
}

/// Radius of the ρ-level set that bounds G̃(y, s): s itself when |y1| < s,
/// else √(s |y1|). G̃(y, s) = {ρ(·, y) < rho_level(y, s)}.
pub fn rho_level(y: Point, s: f64) -> f64 {
    assert!(s >= 0.0);
    if y.x1.abs() < s {
        s
    } else {
        (s * y.x1.abs()).sqrt()
    }
}

impl QuasiBallSpec {
    pub fn new(center: Point, radius: f64, kind: QuasiBallKind) -> QuasiBallSpec {
        assert!(radius > 0.0, "quasi-ball radius must be positive");
        QuasiBallSpec { center, radius, kind }
    }

    pub fn contains(&self, x: Point) -> bool {
        let y = self.center;
        let r = self.radius;
        match self.kind {
            QuasiBallKind::B => quasi_distance(x, y) < r,
            QuasiBallKind::BTilde => {
                quasi_distance(x, y) < r || quasi_distance(x, reflect(y)) < r
            }
            QuasiBallKind::G => one_sided_gauge(x, y, r) < r,
            QuasiBallKind::GTilde => symmetric_gauge(x, y, r) < r,
        }
    }

    /// A rectangle (as a center/half-width pair) containing the set, used to
    /// build grids and samplers around it.
    pub fn bounding_rect(&self) -> (Point, f64, f64) {
        let y = self.center;
        let r = self.radius;
        match self.kind {
            QuasiBallKind::B | QuasiBallKind::BTilde => {
                // d̃ ≥ |x1 − y1| and d̃ ≥ √(s + 4|Δx2|) − √s with s ≤ (|y1|+r)² + y1²
                let s_max = ((y.x1.abs() + r) * (y.x1.abs() + r) + y.x1 * y.x1).sqrt();
                let w2 = 0.25 * r * r + 0.5 * r * s_max;
                let w1 = match self.kind {
                    QuasiBallKind::B => r,
                    _ => y.x1.abs() + r, // both lobes, centered on the axis
                };
                let c1 = match self.kind {
                    QuasiBallKind::B => y.x1,
                    _ => 0.0,
                };
                (Point::new(c1, y.x2), w1, w2)
            }
            QuasiBallKind::G | QuasiBallKind::GTilde => {
                // ρ < R forces x1² < y1² + R² and |x2 − y2| < R²/2
                let rr = rho_level(y, r);
                let w1 = (y.x1 * y.x1 + rr * rr).sqrt();
                (Point::new(0.0, y.x2), w1, 0.5 * rr * rr)
            }
        }
    }
}

/// A point on the ρ-level set {ρ(·, y) = level} parametrized by an angle ψ
/// and a sign for x1. Returns `None` for angles where the level set has no
/// point with the requested x1 sign (x1² would be negative).
pub fn rho_level_point(y: Point, level: f64, psi: f64, positive_x1: bool) -> Option<Point> {
    let r2 = level * level;
    let x1_sq = y.x1 * y.x1 + r2 * psi.cos();
    if x1_sq < 0.0 {
        return None;
    }
    let x1 = if positive_x1 { x1_sq.sqrt() } else { -x1_sq.sqrt() };
    Some(Point::new(x1, y.x2 + 0.5 * r2 * psi.sin()))
}
