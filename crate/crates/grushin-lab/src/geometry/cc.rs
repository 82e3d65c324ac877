//! Lattice approximation of the Carnot–Carathéodory distance.
//!
//! A subunit curve moves horizontally at speed ≤ 1 and vertically at speed
//! ≤ |x1|, so on an axis-aligned lattice a horizontal step of length Δx1
//! costs |Δx1| and a vertical step costs |Δx2| / max(|x̄1|, ε) where x̄1 is
//! the abscissa of the (vertical) edge and ε > 0 is a regularization floor
//! letting paths cross the degenerate axis at finite cost. Shortest path
//! times converge to the lattice Finsler metric as the spacing shrinks,
//! which is comparable to d_CC within a fixed factor.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use crate::geometry::{Axis, BoxSpec, Point};
use crate::{Error, Result};

/// Rectangular lattice over a comparison box, with node spacing `h` and the
/// vertical-cost floor `eps` (0 < eps ≤ h).
#[derive(Clone, Debug)]
pub struct CCLattice {
    pub bounds: BoxSpec,
    pub spacing: f64,
    pub eps_floor: f64,
}

impl CCLattice {
    pub fn new(bounds: BoxSpec, spacing: f64, eps_floor: f64) -> Result<CCLattice> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidParameter(format!("lattice spacing must be positive, got {spacing}")));
        }
        if !(eps_floor > 0.0 && eps_floor <= spacing) {
            return Err(Error::InvalidParameter(format!(
                "regularization floor must lie in (0, spacing]; got {eps_floor} with spacing {spacing}"
            )));
        }
        Ok(CCLattice { bounds, spacing, eps_floor })
    }

    /// Spacing `h` and floor `h`: the default refinement family.
    pub fn with_spacing(bounds: BoxSpec, spacing: f64) -> Result<CCLattice> {
        CCLattice::new(bounds, spacing, spacing)
    }

    fn half_counts(&self) -> (i64, i64) {
        let w1 = super::box_halfwidth(Axis::X1, self.bounds.center, self.bounds.radius);
        let w2 = super::box_halfwidth(Axis::X2, self.bounds.center, self.bounds.radius);
        (
            (w1 / self.spacing).floor() as i64,
            (w2 / self.spacing).floor() as i64,
        )
    }

    fn node(&self, i: i64, j: i64) -> Point {
        Point::new(
            self.bounds.center.x1 + i as f64 * self.spacing,
            self.bounds.center.x2 + j as f64 * self.spacing,
        )
    }

    fn snap(&self, x: Point) -> Result<(i64, i64)> {
        let (k1, k2) = self.half_counts();
        let i = ((x.x1 - self.bounds.center.x1) / self.spacing).round() as i64;
        let j = ((x.x2 - self.bounds.center.x2) / self.spacing).round() as i64;
        if i.abs() > k1 || j.abs() > k2 {
            return Err(Error::OutsideLattice(x.x1, x.x2));
        }
        Ok((i, j))
    }
}

/// Shortest-path travel time between the lattice nodes nearest to `x` and
/// `y`. Errors when either point falls outside the bounding box.
pub fn cc_distance(x: Point, y: Point, lattice: &CCLattice) -> Result<f64> {
    let source = lattice.snap(x)?;
    let target = lattice.snap(y)?;
    let dist = shortest_times(lattice, source, Some(target))?;
    let (k1, _) = lattice.half_counts();
    let n1 = (2 * k1 + 1) as usize;
    let idx = node_index(target, lattice);
    let _ = n1;
    Ok(dist[idx])
}

/// Travel times from the node nearest to `source` to every lattice node.
/// One Dijkstra sweep; used to compare against the closed-form gauges on
/// many targets at once.
pub fn cc_distance_field(source: Point, lattice: &CCLattice) -> Result<Vec<f64>> {
    let s = lattice.snap(source)?;
    shortest_times(lattice, s, None)
}

/// Node index of the lattice node nearest to a point already known to be
/// inside the bounding box.
pub fn nearest_node_index(x: Point, lattice: &CCLattice) -> Result<usize> {
    Ok(node_index(lattice.snap(x)?, lattice))
}

fn node_index((i, j): (i64, i64), lattice: &CCLattice) -> usize {
    let (k1, k2) = lattice.half_counts();
    let n1 = (2 * k1 + 1) as usize;
    ((j + k2) as usize) * n1 + (i + k1) as usize
}

fn shortest_times(
    lattice: &CCLattice,
    source: (i64, i64),
    target: Option<(i64, i64)>,
) -> Result<Vec<f64>> {
    let (k1, k2) = lattice.half_counts();
    let n1 = (2 * k1 + 1) as usize;
    let n2 = (2 * k2 + 1) as usize;
    let n = n1 * n2;
    let h = lattice.spacing;
    let mut dist = vec![f64::INFINITY; n];
    let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>> = BinaryHeap::new();
    let start = node_index(source, lattice);
    dist[start] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), start)));
    let goal = target.map(|t| node_index(t, lattice));
    while let Some(Reverse((OrderedFloat(d), at))) = heap.pop() {
        if d > dist[at] {
            continue;
        }
        if goal == Some(at) {
            break;
        }
        let i = (at % n1) as i64 - k1;
        let j = (at / n1) as i64 - k2;
        let x1 = lattice.node(i, j).x1;
        let vertical_cost = h / x1.abs().max(lattice.eps_floor);
        let neighbors = [
            (i - 1, j, h),
            (i + 1, j, h),
            (i, j - 1, vertical_cost),
            (i, j + 1, vertical_cost),
        ];
        for (ni, nj, cost) in neighbors {
            if ni.abs() > k1 || nj.abs() > k2 {
                continue;
            }
            let to = node_index((ni, nj), lattice);
            let nd = d + cost;
            if nd < dist[to] {
                dist[to] = nd;
                heap.push(Reverse((OrderedFloat(nd), to)));
            }
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_gauge;

    fn lattice(radius: f64, h: f64) -> CCLattice {
        CCLattice::with_spacing(BoxSpec::new(Point::new(0.0, 0.0), radius), h).unwrap()
    }

    #[test]
    fn horizontal_segments_are_exact() {
        let lat = lattice(2.0, 0.05);
        for t in [0.25f64, 1.0, -1.5] {
            let d = cc_distance(Point::new(0.0, 0.0), Point::new(t, 0.0), &lat).unwrap();
            assert!((d - t.abs()).abs() < 1e-12, "t = {t}, d = {d}");
        }
    }

    #[test]
    fn vertical_travel_comparable_to_box_gauge() {
        // σ = G1(0, 0) + G2(0, 1) = 1 for the pair ((0,0), (0,1))
        let lat = lattice(2.0, 0.02);
        let d = cc_distance(Point::new(0.0, 0.0), Point::new(0.0, 1.0), &lat).unwrap();
        let sigma = box_gauge(Point::new(0.0, 0.0), Point::new(0.0, 1.0));
        assert!((sigma - 1.0).abs() < 1e-12);
        assert!(d >= sigma / 5.0 && d <= 5.0 * sigma, "d = {d}");
        // the optimal profile detours to |x1| ≈ 1/√2 for a cost near 2√2
        assert!((d - 2.0 * 2.0_f64.sqrt()).abs() < 0.2, "d = {d}");
    }

    #[test]
    fn refinement_does_not_increase_much() {
        let coarse = lattice(2.0, 0.08);
        let fine = lattice(2.0, 0.04);
        let x = Point::new(0.0, 0.0);
        let y = Point::new(0.0, 1.0);
        let dc = cc_distance(x, y, &coarse).unwrap();
        let df = cc_distance(x, y, &fine).unwrap();
        assert!(df <= dc + 2.0 * 0.08, "coarse {dc}, fine {df}");
    }

    #[test]
    fn outside_lattice_is_an_error() {
        let lat = lattice(1.0, 0.1);
        assert!(cc_distance(Point::new(0.0, 0.0), Point::new(5.0, 0.0), &lat).is_err());
        assert!(cc_distance(Point::new(0.0, 9.0), Point::new(0.0, 0.0), &lat).is_err());
    }

    #[test]
    fn invalid_lattice_parameters() {
        let b = BoxSpec::new(Point::new(0.0, 0.0), 1.0);
        assert!(CCLattice::new(b, 0.0, 0.1).is_err());
        assert!(CCLattice::new(b, 0.1, 0.0).is_err());
        assert!(CCLattice::new(b, 0.1, 0.2).is_err());
    }
}
