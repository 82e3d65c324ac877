//! Volumes of quasi-metric balls and the ring condition.
//!
//! Fubini reduces |B(y, r)| to a one-dimensional integral
//!
//! ```text
//! f(r) = ½ ∫_{-r}^{r} ( (r − |t|)² + 2 (r − |t|) √((y1 + t)² + y1²) ) dt,
//! ```
//!
//! which only depends on |y1| and r. The integrand has a single kink at
//! t = 0 (plus a square-root kink there when y1 = 0), so the two halves are
//! integrated separately by adaptive Gauss–Kronrod quadrature.
//!
//! f is differentiable with f'(r) = r² + ∫ √((y1+t)² + y1²) dt ≤ 4 r (r + |y1|),
//! which yields the ring bound |B(y,r) \ B(y,(1−ε)r)| ≤ c ε |B(y,r)|.

use crate::geometry::Point;
use crate::quad::integrate;
use crate::{Error, Result};

const ABS_TOL: f64 = 1e-10;
const REL_TOL: f64 = 1e-12;

/// Lebesgue measure of the quasi-ball B(y, r).
///
/// Satisfies C⁻¹ r² (r + |y1|) ≤ |B(y, r)| ≤ C r² (r + |y1|); at y1 = 0 the
/// reduced integral evaluates in closed form to 2 r³ / 3.
pub fn ball_volume(y: Point, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius must be positive, got {r}")));
    }
    let y1 = y.x1.abs();
    let integrand = |t: f64| {
        let s = r - t.abs();
        let w = ((y1 + t) * (y1 + t) + y1 * y1).sqrt();
        0.5 * (s * s + 2.0 * s * w)
    };
    let left = integrate(&integrand, -r, 0.0, ABS_TOL, REL_TOL);
    let right = integrate(&integrand, 0.0, r, ABS_TOL, REL_TOL);
    Ok(left + right)
}

/// Relative volume of the ring B(y, r) \ B(y, (1−ε)r):
/// (f(r) − f((1−ε) r)) / f(r), for ε ∈ (0, 1). Bounded by c·ε uniformly.
pub fn ring_deficit(y: Point, r: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("ring width must lie in (0, 1), got {eps}")));
    }
    let outer = ball_volume(y, r)?;
    let inner = ball_volume(y, (1.0 - eps) * r)?;
    Ok((outer - inner) / outer)
}

/// The proof-level ring bound 4 r² (r + |y1|) / f(r): an explicit upper
/// bound for ring_deficit(y, r, ε)/ε valid for all ε.
pub fn ring_deficit_rate_bound(y: Point, r: f64) -> Result<f64> {
    Ok(4.0 * r * r * (r + y.x1.abs()) / ball_volume(y, r)?)
}

/// Largest volume ratio |B(y, 2r)| / |B(y, r)| over centers with
/// |y1| / r taken from `offset_ratios` (r = 1 by homogeneity).
pub fn measured_doubling_constant(offset_ratios: &[f64]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &s in offset_ratios {
        let y = Point::new(s.abs(), 0.0);
        let ratio = ball_volume(y, 2.0)? / ball_volume(y, 1.0)?;
        worst = worst.max(ratio);
    }
    Ok(worst)
}

/// Measured comparability constant for |B(y, r)| against r² (r + |y1|):
/// returns (min, max) of the normalized volume over the offset sweep.
pub fn volume_comparability(offset_ratios: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &s in offset_ratios {
        let y = Point::new(s.abs(), 0.0);
        let v = ball_volume(y, 1.0)? / (1.0 + s.abs());
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{quasi_distance, Point};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_on_the_axis() {
        // y1 = 0: f(r) = 2 r³ / 3, independent of y2
        let v = ball_volume(Point::new(0.0, 3.7), 1.0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9 * v);
        let v = ball_volume(Point::new(0.0, 0.0), 2.0).unwrap();
        assert!((v - 16.0 / 3.0).abs() < 1e-9 * v);
    }

    #[test]
    fn monte_carlo_matches_reduced_integral() {
        let y = Point::new(0.8, -0.4);
        let r = 1.3;
        let quad = ball_volume(y, r).unwrap();
        // membership counting over the bounding rectangle of B(y, r)
        let w1 = r;
        let s_max = ((y.x1.abs() + r) * (y.x1.abs() + r) + y.x1 * y.x1).sqrt();
        let w2 = 0.25 * r * r + 0.5 * r * s_max;
        let area = 4.0 * w1 * w2;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 2_000_000usize;
        let mut hits = 0usize;
        for _ in 0..n {
            let x = Point::new(
                y.x1 + rng.gen_range(-w1..w1),
                y.x2 + rng.gen_range(-w2..w2),
            );
            if quasi_distance(x, y) < r {
                hits += 1;
            }
        }
        let p = hits as f64 / n as f64;
        let mc = area * p;
        let sigma = area * (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (mc - quad).abs() < 3.0 * sigma,
            "quadrature {quad} vs Monte Carlo {mc} ± {sigma}"
        );
    }

    #[test]
    fn ring_deficit_closed_form_on_axis() {
        // y1 = 0: deficit = 1 − (1−ε)³
        let d = ring_deficit(Point::new(0.0, 0.0), 1.0, 0.1).unwrap();
        assert!((d - 0.271).abs() < 1e-9);
    }

    #[test]
    fn ring_deficit_rate_is_finite_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let y = Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-1.0..1.0));
            let r = rng.gen_range(0.05..3.0);
            let bound = ring_deficit_rate_bound(y, r).unwrap();
            for eps in [0.1, 0.01, 0.001] {
                let d = ring_deficit(y, r, eps).unwrap();
                assert!(d / eps <= bound + 1e-8, "deficit rate above proof bound");
            }
            // ε → 0 limit: deficit/ε → f'(r) r / f(r), finite
            let d = ring_deficit(y, r, 1e-6).unwrap();
            assert!(d / 1e-6 < bound + 1e-6);
            assert!(d > 0.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ball_volume(Point::new(0.0, 0.0), 0.0).is_err());
        assert!(ball_volume(Point::new(0.0, 0.0), -1.0).is_err());
        assert!(ring_deficit(Point::new(0.0, 0.0), 1.0, 0.0).is_err());
        assert!(ring_deficit(Point::new(0.0, 0.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn doubling_constant_over_sweep() {
        let ratios: Vec<f64> = (-12..=12).map(|k| 10f64.powf(k as f64 / 4.0)).collect();
        let cd = measured_doubling_constant(&ratios).unwrap();
        // ranges from 8 (center on the axis) down to 4 (far from it)
        assert!((4.0..=8.5).contains(&cd), "doubling constant {cd}");
    }
}
