//! Second-order jets and pointwise application of the operator.
//!
//! Everything downstream (barrier verification, covariance checks, discrete
//! diagnostics) works with exact jets: value, gradient and Hessian of a C²
//! function at a point. The operator acts on a jet as
//!
//! ```text
//! L u = a11 u11 + 2 a12 x1 u12 + a22 x1² u22,
//! ```
//!
//! the nondivergence form of a11 X1² + 2 a12 X2 X1 + a22 X2² written in the
//! coordinate Hessian. The horizontal Hessian
//!
//! ```text
//! X²u = [ u11      x1 u12  ]
//!       [ x1 u12   x1² u22 ]
//! ```
//!
//! satisfies det X²u = x1² det D²u and trace(A · X²u) = L u.

use crate::fields::{CoefficientField, Coefficients};
use crate::geometry::{dilate, reflect, translate_scale, Point};
use serde::{Deserialize, Serialize};

/// Value and derivatives of a scalar function at a point, up to second
/// order. Mixed partials are symmetric, so only d12 is stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 { value: 0.0, d1: 0.0, d2: 0.0, d11: 0.0, d12: 0.0, d22: 0.0 };

    pub fn constant(value: f64) -> Jet2 {
        Jet2 { value, ..Jet2::ZERO }
    }

    /// det D²u of this jet.
    pub fn hessian_det(&self) -> f64 {
        self.d11 * self.d22 - self.d12 * self.d12
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d11: self.d11 + o.d11,
            d12: self.d12 + o.d12,
            d22: self.d22 + o.d22,
        }
    }
}

impl std::ops::Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2 {
            value: s * self.value,
            d1: s * self.d1,
            d2: s * self.d2,
            d11: s * self.d11,
            d12: s * self.d12,
            d22: s * self.d22,
        }
    }
}

/// A twice differentiable function given by exact point evaluators.
pub trait SmoothFn {
    fn jet(&self, x: Point) -> Jet2;

    fn value(&self, x: Point) -> f64 {
        self.jet(x).value
    }
}

impl<T: SmoothFn + ?Sized> SmoothFn for &T {
    fn jet(&self, x: Point) -> Jet2 {
        (**self).jet(x)
    }
}

/// Symmetric 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Eigenvalue range (min, max) from the closed form for symmetric 2×2.
    pub fn eigen_bounds(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let half_gap = 0.5 * (self.xx - self.yy);
        let radius = (half_gap * half_gap + self.xy * self.xy).sqrt();
        (mean - radius, mean + radius)
    }
}

/// The horizontal Hessian X²u at x assembled from the coordinate jet.
/// Degenerates to diag(u11, 0) on the axis x1 = 0.
pub fn horizontal_hessian(u: &impl SmoothFn, x: Point) -> Sym2 {
    let j = u.jet(x);
    horizontal_hessian_of_jet(x, &j)
}

pub fn horizontal_hessian_of_jet(x: Point, j: &Jet2) -> Sym2 {
    Sym2 { xx: j.d11, xy: x.x1 * j.d12, yy: x.x1 * x.x1 * j.d22 }
}

/// Pointwise value of the operator on a jet, for given coefficients.
pub fn operator_on_jet(a: Coefficients, x: Point, j: &Jet2) -> f64 {
    a.a11 * j.d11 + 2.0 * a.a12 * x.x1 * j.d12 + a.a22 * x.x1 * x.x1 * j.d22
}

/// L u at x: coefficients evaluated at x, second derivatives from the jet.
pub fn apply_operator(field: &CoefficientField, u: &impl SmoothFn, x: Point) -> f64 {
    operator_on_jet(field.evaluate(x), x, &u.jet(x))
}

/// The coordinate changes under which the operator transforms covariantly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMap {
    /// δ_t(x) = (t x1, t² x2).
    Dilate { t: f64 },
    /// T(x) = (r x1, y2 + r² x2).
    TranslateScale { r: f64, y2: f64 },
    /// S(x) = (−x1, x2).
    Reflect,
}

impl PointMap {
    pub fn apply(&self, x: Point) -> Point {
        match *self {
            PointMap::Dilate { t } => dilate(t, x),
            PointMap::TranslateScale { r, y2 } => translate_scale(r, y2, x),
            PointMap::Reflect => reflect(x),
        }
    }

    /// Linear scaling factors (c1, c2) with map(x) = (c1 x1, c2 x2 + shift):
    /// all three maps are diagonal-affine.
    fn factors(&self) -> (f64, f64) {
        match *self {
            PointMap::Dilate { t } => (t, t * t),
            PointMap::TranslateScale { r, .. } => (r, r * r),
            PointMap::Reflect => (-1.0, 1.0),
        }
    }

    /// Jet of u ∘ map at x, given the jet of u at map(x). Exact chain rule
    /// for diagonal-affine maps.
    pub fn pull_back(&self, outer: &Jet2) -> Jet2 {
        let (c1, c2) = self.factors();
        Jet2 {
            value: outer.value,
            d1: c1 * outer.d1,
            d2: c2 * outer.d2,
            d11: c1 * c1 * outer.d11,
            d12: c1 * c2 * outer.d12,
            d22: c2 * c2 * outer.d22,
        }
    }
}

/// u ∘ map as a smooth function.
pub struct Composed<F> {
    pub inner: F,
    pub map: PointMap,
}

impl<F: SmoothFn> SmoothFn for Composed<F> {
    fn jet(&self, x: Point) -> Jet2 {
        self.map.pull_back(&self.inner.jet(self.map.apply(x)))
    }
}

/// Bivariate polynomial with exact jets; the workhorse for correctness
/// tests where every derivative is known in closed form.
#[derive(Clone, Debug)]
pub struct Polynomial2 {
    /// (coefficient, power of x1, power of x2)
    pub terms: Vec<(f64, u32, u32)>,
}

impl Polynomial2 {
    pub fn new(terms: Vec<(f64, u32, u32)>) -> Polynomial2 {
        Polynomial2 { terms }
    }
}

fn dpow(x: f64, p: u32, order: u32) -> f64 {
    // d^order/dx^order of x^p
    if order > p {
        return 0.0;
    }
    let mut c = 1.0;
    for k in 0..order {
        c *= (p - k) as f64;
    }
    c * x.powi((p - order) as i32)
}

impl SmoothFn for Polynomial2 {
    fn jet(&self, x: Point) -> Jet2 {
        let mut j = Jet2::ZERO;
        for &(c, p, q) in &self.terms {
            j.value += c * dpow(x.x1, p, 0) * dpow(x.x2, q, 0);
            j.d1 += c * dpow(x.x1, p, 1) * dpow(x.x2, q, 0);
            j.d2 += c * dpow(x.x1, p, 0) * dpow(x.x2, q, 1);
            j.d11 += c * dpow(x.x1, p, 2) * dpow(x.x2, q, 0);
            j.d12 += c * dpow(x.x1, p, 1) * dpow(x.x2, q, 1);
            j.d22 += c * dpow(x.x1, p, 0) * dpow(x.x2, q, 2);
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_field, EllipticityConstants, FieldDescriptor, FieldKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity_field() -> CoefficientField {
        make_field(&FieldDescriptor::new(FieldKind::Identity, 1.0, 1.0, 0)).unwrap()
    }

    #[test]
    fn operator_annihilates_affine() {
        let field = identity_field();
        let u = Polynomial2::new(vec![(2.0, 0, 0), (3.0, 1, 0), (-1.0, 0, 1)]);
        for x in [Point::new(0.0, 0.0), Point::new(2.0, -1.0), Point::new(-0.5, 3.0)] {
            assert_eq!(apply_operator(&field, &u, x), 0.0);
        }
    }

    #[test]
    fn operator_tabulated_values() {
        let field = identity_field();
        let u = Polynomial2::new(vec![(1.0, 2, 0)]); // x1²
        assert_eq!(apply_operator(&field, &u, Point::new(0.7, -0.2)), 2.0);
        let v = Polynomial2::new(vec![(1.0, 0, 2)]); // x2²
        assert_eq!(apply_operator(&field, &v, Point::new(3.0, 5.0)), 18.0);
    }

    #[test]
    fn horizontal_hessian_determinant_weight() {
        // u = x1² x2: det D²u = −4 x1², det X²u = −4 x1⁴
        let u = Polynomial2::new(vec![(1.0, 2, 1)]);
        for x in [Point::new(1.0, 2.0), Point::new(-1.7, 0.3), Point::new(0.25, -4.0)] {
            let j = u.jet(x);
            let hh = horizontal_hessian(&u, x);
            assert!((hh.det() - x.x1 * x.x1 * j.hessian_det()).abs() < 1e-12);
            assert!((j.hessian_det() + 4.0 * x.x1 * x.x1).abs() < 1e-12);
        }
    }

    #[test]
    fn horizontal_hessian_degenerates_on_axis() {
        let u = Polynomial2::new(vec![(0.5, 2, 0), (0.5, 0, 2)]);
        let hh = horizontal_hessian(&u, Point::new(0.0, 1.0));
        assert_eq!(hh, Sym2 { xx: 1.0, xy: 0.0, yy: 0.0 });
        let hh = horizontal_hessian(&u, Point::new(2.0, 1.0));
        let (lo, _) = hh.eigen_bounds();
        assert!(lo >= 0.0);
    }

    #[test]
    fn dilation_covariance_is_exact() {
        // L_{a∘δ_t}(u ∘ δ_t)(x) = t² (L_a u)(δ_t x)
        let ell = EllipticityConstants::new(1.0, 3.0).unwrap();
        let field = make_field(&FieldDescriptor::new(
            FieldKind::Rotating { theta_max: 0.2, frequency: 1.3 },
            ell.lambda(),
            ell.big_lambda(),
            7,
        ))
        .unwrap();
        let u = Polynomial2::new(vec![(1.0, 3, 0), (2.0, 1, 1), (-0.5, 0, 2), (1.0, 2, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let x = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let t = rng.gen_range(0.1..4.0);
            let map = PointMap::Dilate { t };
            let pulled_field = field.composed_with(map);
            let composed = Composed { inner: &u, map };
            let lhs = apply_operator(&pulled_field, &composed, x);
            let rhs = t * t * apply_operator(&field, &u, dilate(t, x));
            assert!(
                (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0),
                "covariance violated: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn translation_scaling_covariance_is_exact() {
        let field = make_field(&FieldDescriptor::new(
            FieldKind::Checkerboard { cell: 0.7 },
            1.0,
            2.0,
            0,
        ))
        .unwrap();
        let u = Polynomial2::new(vec![(1.0, 2, 0), (1.0, 1, 1), (0.25, 0, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let x = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(0.2..3.0);
            let y2 = rng.gen_range(-2.0..2.0);
            let map = PointMap::TranslateScale { r, y2 };
            let lhs = apply_operator(&field.composed_with(map), &Composed { inner: &u, map }, x);
            let rhs = r * r * apply_operator(&field, &u, translate_scale(r, y2, x));
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn reflection_preserves_the_equation() {
        // L_S u_S (x) = (L u)(S x)
        let field = make_field(&FieldDescriptor::new(
            FieldKind::RandomSmooth { modes: 3 },
            1.0,
            4.0,
            11,
        ))
        .unwrap();
        let u = Polynomial2::new(vec![(1.0, 2, 0), (1.0, 1, 2), (-2.0, 3, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let x = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let map = PointMap::Reflect;
            let lhs = apply_operator(&field.composed_with(map), &Composed { inner: &u, map }, x);
            let rhs = apply_operator(&field, &u, reflect(x));
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }
    }
}
