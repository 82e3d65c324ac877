//! Sampled verification of the structure theorems.
//!
//! Two inclusion chains tie the families together with proof-level
//! constants:
//!
//! ```text
//! B(y, r)      ⊆ Box(y, r)   ⊆ B(y, 3r)        (quasi-ball vs box)
//! Box(y, r/5)  ⊆ G(y, r)     ⊆ Box(y, 3r)      (gauge sublevel vs box)
//! ```
//!
//! and the box gauge G1 + G2 is comparable to the Carnot–Carathéodory
//! distance. The checks sample the outer box uniformly, count violations
//! (which must be zero for the inclusions) and report measured
//! comparability constants for the lattice distance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::cc::{cc_distance_field, nearest_node_index, CCLattice};
use crate::geometry::{box_gauge, BoxSpec, Point, QuasiBallKind, QuasiBallSpec};
use crate::report::ExperimentReport;
use crate::{Error, Result};

/// Which structure statement to exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    /// B(y, r) ⊆ Box(y, r) ⊆ B(y, 3r).
    Charact,
    /// Box(y, r/5) ⊆ G(y, r) ⊆ Box(y, 3r).
    Equiv,
    /// Lattice CC distance comparable to the box gauge G1 + G2.
    Frla,
}

#[derive(Serialize)]
struct StructureConfig {
    kind: StructureKind,
    center: Point,
    radius: f64,
    samples: usize,
}

/// Samples `samples` points uniformly on Box(y, 3r) and checks the inclusion
/// chain named by `kind`; for [`StructureKind::Frla`] it instead measures
/// the ratio of the lattice distance to the box gauge over sampled targets.
pub fn structure_check(
    kind: StructureKind,
    y: Point,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut report = ExperimentReport::new(
        match kind {
            StructureKind::Charact => "structure_charact",
            StructureKind::Equiv => "structure_equiv",
            StructureKind::Frla => "structure_frla",
        },
        seed,
    )
    .with_config(&StructureConfig { kind, center: y, radius: r, samples });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer = BoxSpec::new(y, 3.0 * r);
    match kind {
        StructureKind::Charact => {
            let ball_inner = QuasiBallSpec::new(y, r, QuasiBallKind::B);
            let box_mid = BoxSpec::new(y, r);
            let ball_outer = QuasiBallSpec::new(y, 3.0 * r, QuasiBallKind::B);
            let mut violations = 0usize;
            for _ in 0..samples {
                let x = outer.sample(&mut rng);
                if ball_inner.contains(x) && !box_mid.contains(x) {
                    violations += 1;
                }
                if box_mid.contains(x) && !ball_outer.contains(x) {
                    violations += 1;
                }
            }
            report.record("violations", violations as f64);
            report.judge("inclusions", violations == 0, violations as f64, 0.0,
                "B(y,r) within Box(y,r) within B(y,3r)");
        }
        StructureKind::Equiv => {
            let box_inner = BoxSpec::new(y, r / 5.0);
            let g_mid = QuasiBallSpec::new(y, r, QuasiBallKind::G);
            let box_outer = BoxSpec::new(y, 3.0 * r);
            let mut violations = 0usize;
            for _ in 0..samples {
                let x = outer.sample(&mut rng);
                if box_inner.contains(x) && !g_mid.contains(x) {
                    violations += 1;
                }
                if g_mid.contains(x) && !box_outer.contains(x) {
                    violations += 1;
                }
            }
            report.record("violations", violations as f64);
            report.judge("inclusions", violations == 0, violations as f64, 0.0,
                "Box(y,r/5) within G(y,r) within Box(y,3r)");
        }
        StructureKind::Frla => {
            // one Dijkstra sweep from y, ratios against the box gauge at
            // sampled targets inside Box(y, r)
            let lattice = CCLattice::with_spacing(outer, r / 64.0)?;
            let times = cc_distance_field(y, &lattice)?;
            let inner = BoxSpec::new(y, r);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut used = 0usize;
            for _ in 0..samples {
                let x = inner.sample(&mut rng);
                let sigma = box_gauge(y, x);
                if sigma < r * 1e-3 {
                    continue; // too close to the center for a stable ratio
                }
                let d = times[nearest_node_index(x, &lattice)?];
                if !d.is_finite() {
                    continue;
                }
                let ratio = d / sigma;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                used += 1;
            }
            report.record("samples_used", used as f64);
            report.record("min_ratio", lo);
            report.record("max_ratio", hi);
            let spread = hi / lo;
            report.record("ratio_spread", spread);
            report.judge(
                "comparable",
                used > 0 && spread.is_finite() && spread <= 10.0,
                spread,
                10.0,
                "lattice distance within a uniform factor of G1 + G2",
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charact_inclusions_hold() {
        for offset in [0.0, 0.5, 1.0, 2.0] {
            let rep = structure_check(StructureKind::Charact, Point::new(offset, 0.3), 1.0, 5000, 1)
                .unwrap();
            assert!(rep.passed(), "offset {offset}: {:?}", rep.verdicts);
        }
    }

    #[test]
    fn equiv_inclusions_hold() {
        for offset in [0.0, 0.5, 1.0, 5.0] {
            let rep = structure_check(StructureKind::Equiv, Point::new(offset, 0.0), 1.0, 5000, 2)
                .unwrap();
            assert!(rep.passed(), "offset {offset}: {:?}", rep.verdicts);
        }
    }

    #[test]
    fn tiny_radius_is_degenerate_but_valid() {
        let rep = structure_check(StructureKind::Charact, Point::new(0.2, 0.1), 1e-9, 1, 3).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn frla_ratio_is_uniform() {
        let rep = structure_check(StructureKind::Frla, Point::new(0.0, 0.0), 1.0, 400, 4).unwrap();
        assert!(rep.passed(), "{:?}", rep.measurements);
        let rep = structure_check(StructureKind::Frla, Point::new(2.0, 0.0), 1.0, 400, 5).unwrap();
        assert!(rep.passed(), "{:?}", rep.measurements);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(structure_check(StructureKind::Charact, Point::new(0.0, 0.0), 1.0, 0, 0).is_err());
    }
}
