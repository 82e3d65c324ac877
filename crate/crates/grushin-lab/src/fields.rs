//! Coefficient fields with declared ellipticity constants.
//!
//! A field evaluates the symmetric matrix (a11, a12, a22) at a point and
//! declares constants 0 < λ ≤ Λ with
//!
//! ```text
//! λ |ξ|² ≤ a11 ξ1² + 2 a12 ξ1 ξ2 + a22 ξ2² ≤ Λ |ξ|²
//! ```
//!
//! at every queried point. Generators are deterministic given their seed and
//! satisfy the bounds by construction; [`check_ellipticity`] spot-checks the
//! eigenvalue range on a sample set and reports the worst margins.
//!
//! Fields compose with the covariance maps (dilation, translation–scaling,
//! reflection), which is how rescaled and mirrored experiments reuse one
//! generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{PointMap, Sym2};
use crate::geometry::Point;
use crate::report::ExperimentReport;
use crate::{Error, Result};

/// Ellipticity bounds 0 < λ ≤ Λ with respect to the field pair (X1, X2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityConstants {
    lambda: f64,
    big_lambda: f64,
}

impl EllipticityConstants {
    pub fn new(lambda: f64, big_lambda: f64) -> Result<EllipticityConstants> {
        if !(lambda > 0.0 && big_lambda >= lambda) {
            return Err(Error::InvalidParameter(format!(
                "ellipticity constants need 0 < lambda <= Lambda, got ({lambda}, {big_lambda})"
            )));
        }
        Ok(EllipticityConstants { lambda, big_lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn big_lambda(&self) -> f64 {
        self.big_lambda
    }

    /// Condition ratio Λ/λ ≥ 1.
    pub fn ratio(&self) -> f64 {
        self.big_lambda / self.lambda
    }
}

/// Coefficient matrix at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Coefficients {
    pub fn as_sym2(&self) -> Sym2 {
        Sym2 { xx: self.a11, xy: self.a12, yy: self.a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }
}

/// Generator families for coefficient fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    /// a = I; λ = Λ = 1 regardless of the declared pair.
    Identity,
    /// A fixed symmetric matrix; the declared constants are its eigenvalues.
    Constant { a11: f64, a12: f64, a22: f64 },
    /// R(θ(x)) diag(λ, Λ) R(θ(x))ᵀ with θ(x) = θmax w(x1) sin(freq (x1 + x2) + φ).
    /// The amplitude taper w(s) = s / (1 + s²) vanishes on the degenerate
    /// axis and decays at infinity, keeping the discretized rows diagonally
    /// dominant at the resolutions the experiments run at.
    Rotating { theta_max: f64, frequency: f64 },
    /// diag(λ, Λ) and diag(Λ, λ) on alternating cells of side `cell`.
    Checkerboard { cell: f64 },
    /// Smoothly varying eigenvalues in [λ, Λ] and a tapered rotation, with
    /// `modes` random Fourier modes drawn from the seed.
    RandomSmooth { modes: usize },
}

impl FieldKind {
    pub fn name(&self) -> &'static str {
        match self {
            FieldKind::Identity => "identity",
            FieldKind::Constant { .. } => "constant",
            FieldKind::Rotating { .. } => "rotating",
            FieldKind::Checkerboard { .. } => "checkerboard",
            FieldKind::RandomSmooth { .. } => "random_smooth",
        }
    }
}

/// Generator name, parameters, declared constants and seed: everything that
/// determines a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    #[serde(flatten)]
    pub kind: FieldKind,
    pub lambda: f64,
    pub big_lambda: f64,
    pub seed: u64,
}

impl FieldDescriptor {
    pub fn new(kind: FieldKind, lambda: f64, big_lambda: f64, seed: u64) -> FieldDescriptor {
        FieldDescriptor { kind, lambda, big_lambda, seed }
    }
}

#[derive(Clone, Debug)]
struct RandomModes {
    // per mode: wave vector, phase, and per-channel weights
    waves: Vec<[f64; 2]>,
    phases: Vec<[f64; 3]>,
}

/// A coefficient field: evaluator plus declared constants, possibly
/// precomposed with covariance maps (innermost last).
#[derive(Clone, Debug)]
pub struct CoefficientField {
    descriptor: FieldDescriptor,
    declared: EllipticityConstants,
    transforms: Vec<PointMap>,
    modes: Option<RandomModes>,
}

/// Builds a field from its descriptor. Fails when the parameters are
/// inconsistent with positivity (Constant with a non-positive-definite
/// matrix) or with the declared pair.
pub fn make_field(descriptor: &FieldDescriptor) -> Result<CoefficientField> {
    let declared = match descriptor.kind {
        FieldKind::Identity => {
            // any declared envelope containing the identity spectrum is valid
            if !(descriptor.lambda <= 1.0 && descriptor.big_lambda >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "identity field needs lambda <= 1 <= Lambda, got ({}, {})",
                    descriptor.lambda, descriptor.big_lambda
                )));
            }
            EllipticityConstants::new(descriptor.lambda, descriptor.big_lambda)?
        }
        FieldKind::Constant { a11, a12, a22 } => {
            let (lo, hi) = (Sym2 { xx: a11, xy: a12, yy: a22 }).eigen_bounds();
            if lo <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "constant field is not positive definite (min eigenvalue {lo})"
                )));
            }
            // the true spectrum, not the requested envelope
            EllipticityConstants::new(lo, hi)?
        }
        FieldKind::Rotating { theta_max, .. } => {
            if !(0.0..=0.7).contains(&theta_max) {
                return Err(Error::InvalidParameter(format!(
                    "rotation amplitude must lie in [0, 0.7], got {theta_max}"
                )));
            }
            EllipticityConstants::new(descriptor.lambda, descriptor.big_lambda)?
        }
        FieldKind::Checkerboard { cell } => {
            if !(cell > 0.0) {
                return Err(Error::InvalidParameter(format!("cell size must be positive, got {cell}")));
            }
            EllipticityConstants::new(descriptor.lambda, descriptor.big_lambda)?
        }
        FieldKind::RandomSmooth { modes } => {
            if modes == 0 || modes > 16 {
                return Err(Error::InvalidParameter(format!("modes must lie in 1..=16, got {modes}")));
            }
            EllipticityConstants::new(descriptor.lambda, descriptor.big_lambda)?
        }
    };
    let modes = match descriptor.kind {
        FieldKind::RandomSmooth { modes } => {
            let mut rng = ChaCha8Rng::seed_from_u64(descriptor.seed);
            let mut waves = Vec::with_capacity(modes);
            let mut phases = Vec::with_capacity(modes);
            for _ in 0..modes {
                waves.push([rng.gen_range(0.4..2.2), rng.gen_range(0.4..2.2)]);
                phases.push([
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ]);
            }
            Some(RandomModes { waves, phases })
        }
        _ => None,
    };
    Ok(CoefficientField { descriptor: descriptor.clone(), declared, transforms: Vec::new(), modes })
}

fn rotation_conjugate(lambda: f64, big_lambda: f64, theta: f64) -> Coefficients {
    let (s, c) = theta.sin_cos();
    Coefficients {
        a11: lambda * c * c + big_lambda * s * s,
        a12: (big_lambda - lambda) * s * c,
        a22: lambda * s * s + big_lambda * c * c,
    }
}

/// Odd taper s / (1 + s²): vanishes at 0, peaks at ±1, decays like 1/s.
fn taper(s: f64) -> f64 {
    s / (1.0 + s * s)
}

impl CoefficientField {
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn declared(&self) -> EllipticityConstants {
        self.declared
    }

    /// The field a ∘ map; its declared constants are unchanged (all maps
    /// act by reparametrization).
    pub fn composed_with(&self, map: PointMap) -> CoefficientField {
        let mut f = self.clone();
        f.transforms.push(map);
        f
    }

    pub fn transforms(&self) -> &[PointMap] {
        &self.transforms
    }

    pub fn evaluate(&self, x: Point) -> Coefficients {
        // innermost transform was pushed last, so it acts first
        let mut p = x;
        for map in self.transforms.iter().rev() {
            p = map.apply(p);
        }
        self.evaluate_base(p)
    }

    fn evaluate_base(&self, x: Point) -> Coefficients {
        let lambda = self.declared.lambda();
        let big = self.declared.big_lambda();
        match self.descriptor.kind {
            FieldKind::Identity => Coefficients { a11: 1.0, a12: 0.0, a22: 1.0 },
            FieldKind::Constant { a11, a12, a22 } => Coefficients { a11, a12, a22 },
            FieldKind::Rotating { theta_max, frequency } => {
                let phase = splitmix_phase(self.descriptor.seed);
                let theta =
                    theta_max * taper(x.x1) * (frequency * (x.x1 + x.x2) + phase).sin();
                rotation_conjugate(lambda, big, theta)
            }
            FieldKind::Checkerboard { cell } => {
                let parity = ((x.x1 / cell).floor() + (x.x2 / cell).floor()) as i64 % 2;
                if parity == 0 {
                    Coefficients { a11: lambda, a12: 0.0, a22: big }
                } else {
                    Coefficients { a11: big, a12: 0.0, a22: lambda }
                }
            }
            FieldKind::RandomSmooth { .. } => {
                let m = self.modes.as_ref().expect("modes drawn at construction");
                let n = m.waves.len() as f64;
                let mut s = [0.0f64; 3];
                for (w, ph) in m.waves.iter().zip(&m.phases) {
                    let arg = w[0] * x.x1 + w[1] * x.x2;
                    for (chan, acc) in s.iter_mut().enumerate() {
                        *acc += (arg + ph[chan]).sin() / n;
                    }
                }
                // eigenvalues in [λ, Λ], rotation tapered off the axis
                let mu1 = lambda + (big - lambda) * 0.5 * (1.0 + s[0]);
                let mu2 = lambda + (big - lambda) * 0.5 * (1.0 + s[1]);
                let theta = 0.15 * taper(x.x1) * s[2];
                let (sn, cs) = theta.sin_cos();
                Coefficients {
                    a11: mu1 * cs * cs + mu2 * sn * sn,
                    a12: (mu2 - mu1) * sn * cs,
                    a22: mu1 * sn * sn + mu2 * cs * cs,
                }
            }
        }
    }
}

fn splitmix_phase(seed: u64) -> f64 {
    // cheap stable hash of the seed into [0, 2π)
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z as f64 / u64::MAX as f64) * std::f64::consts::TAU
}

#[derive(Serialize)]
struct EllipticityCheckConfig<'a> {
    descriptor: &'a FieldDescriptor,
    samples: usize,
}

/// Verifies the eigenvalue bounds at each sample point and reports the worst
/// margins (min over samples of μmin − λ and of Λ − μmax). A negative margin
/// beyond round-off fails the report.
pub fn check_ellipticity(field: &CoefficientField, points: &[Point]) -> ExperimentReport {
    let ell = field.declared();
    let mut report = ExperimentReport::new("check_ellipticity", field.descriptor.seed)
        .with_config(&EllipticityCheckConfig { descriptor: field.descriptor(), samples: points.len() });
    let mut lower_margin = f64::INFINITY;
    let mut upper_margin = f64::INFINITY;
    for &x in points {
        let (lo, hi) = field.evaluate(x).as_sym2().eigen_bounds();
        lower_margin = lower_margin.min(lo - ell.lambda());
        upper_margin = upper_margin.min(ell.big_lambda() - hi);
    }
    let tol = -1e-12 * ell.big_lambda().max(1.0);
    report.record("worst_lower_margin", lower_margin);
    report.record("worst_upper_margin", upper_margin);
    report.judge("lower_bound", lower_margin >= tol, lower_margin, tol.abs(), "min eigenvalue >= lambda");
    report.judge("upper_bound", upper_margin >= tol, upper_margin, tol.abs(), "max eigenvalue <= Lambda");
    report
}

/// [`check_ellipticity`] that rejects the field on violation.
pub fn validate_field(field: &CoefficientField, points: &[Point]) -> Result<()> {
    let report = check_ellipticity(field, points);
    if report.passed() {
        Ok(())
    } else {
        Err(Error::FieldRejected(format!(
            "margins {:?} / {:?} below tolerance",
            report.measurement("worst_lower_margin"),
            report.measurement("worst_upper_margin"),
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn sample_points(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
            .collect()
    }

    #[test]
    fn identity_field_has_zero_margin() {
        let f = make_field(&FieldDescriptor::new(FieldKind::Identity, 1.0, 1.0, 0)).unwrap();
        let rep = check_ellipticity(&f, &sample_points(100, 1));
        assert!(rep.passed());
        assert_eq!(rep.measurement("worst_lower_margin"), Some(0.0));
        assert_eq!(rep.measurement("worst_upper_margin"), Some(0.0));
    }

    #[test]
    fn constant_field_declares_true_spectrum() {
        let f = make_field(&FieldDescriptor::new(
            FieldKind::Constant { a11: 2.0, a12: 0.5, a22: 1.0 },
            1.0, // requested envelope is ignored for Constant
            2.0,
            0,
        ))
        .unwrap();
        // eigenvalues 1.5 ± √(((2−1)/2)² + 0.5²) = 1.5 ± √0.5
        let r = (0.25f64 + 0.25).sqrt();
        assert!((f.declared().lambda() - (1.5 - r)).abs() < 1e-14);
        assert!((f.declared().big_lambda() - (1.5 + r)).abs() < 1e-14);
        assert!(check_ellipticity(&f, &sample_points(50, 2)).passed());
    }

    #[test]
    fn non_positive_constant_rejected() {
        let bad = FieldDescriptor::new(FieldKind::Constant { a11: 1.0, a12: 2.0, a22: 1.0 }, 1.0, 2.0, 0);
        assert!(make_field(&bad).is_err());
    }

    #[test]
    fn misdeclared_bounds_fail_every_point() {
        // diag(1, 3) declared as (1, 2): upper margin = −1 at every sample
        let f = CoefficientField {
            descriptor: FieldDescriptor::new(
                FieldKind::Constant { a11: 1.0, a12: 0.0, a22: 3.0 },
                1.0,
                2.0,
                0,
            ),
            declared: EllipticityConstants::new(1.0, 2.0).unwrap(),
            transforms: Vec::new(),
            modes: None,
        };
        let rep = check_ellipticity(&f, &sample_points(20, 3));
        assert!(!rep.passed());
        assert_eq!(rep.measurement("worst_upper_margin"), Some(-1.0));
        assert!(validate_field(&f, &sample_points(20, 3)).is_err());
    }

    #[test]
    fn rotation_preserves_spectrum_exactly() {
        let f = make_field(&FieldDescriptor::new(
            FieldKind::Rotating { theta_max: 0.5, frequency: 2.0 },
            0.5,
            4.0,
            9,
        ))
        .unwrap();
        for x in sample_points(200, 4) {
            let (lo, hi) = f.evaluate(x).as_sym2().eigen_bounds();
            assert!((lo - 0.5).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn checkerboard_alternates_and_stays_diagonal() {
        let f = make_field(&FieldDescriptor::new(FieldKind::Checkerboard { cell: 1.0 }, 1.0, 2.0, 0))
            .unwrap();
        let a = f.evaluate(Point::new(0.5, 0.5));
        let b = f.evaluate(Point::new(1.5, 0.5));
        assert_eq!(a.a12, 0.0);
        assert_eq!(b.a12, 0.0);
        assert_ne!(a.a11, b.a11);
        assert!(check_ellipticity(&f, &sample_points(300, 5)).passed());
    }

    #[test]
    fn random_smooth_is_deterministic_and_elliptic() {
        let d = FieldDescriptor::new(FieldKind::RandomSmooth { modes: 3 }, 1.0, 4.0, 12345);
        let f1 = make_field(&d).unwrap();
        let f2 = make_field(&d).unwrap();
        for x in sample_points(100, 6) {
            assert_eq!(f1.evaluate(x), f2.evaluate(x));
        }
        assert!(check_ellipticity(&f1, &sample_points(500, 7)).passed());
    }

    #[test]
    fn composition_applies_innermost_last() {
        let f = make_field(&FieldDescriptor::new(FieldKind::Checkerboard { cell: 1.0 }, 1.0, 2.0, 0))
            .unwrap();
        let g = f
            .composed_with(PointMap::Reflect)
            .composed_with(PointMap::Dilate { t: 2.0 });
        // g(x) = f(reflect(dilate(2, x)))
        let x = Point::new(0.3, 0.2);
        let expected = f.evaluate(crate::geometry::reflect(crate::geometry::dilate(2.0, x)));
        assert_eq!(g.evaluate(x), expected);
    }
}
