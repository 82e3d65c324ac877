//! Discrete convex envelopes on grids.
//!
//! The envelope of a grid function is evaluated node-exactly: Γ(z) is the
//! value at z of the lower convex hull of the lifted node cloud
//! {(x_i, v_i)}, where v = −u⁻ = min(u, 0). At each query node this is the
//! tiny linear program
//!
//! ```text
//! minimize Σ λ_i v_i   s.t.   Σ λ_i x_i = z,  Σ λ_i = 1,  λ ≥ 0,
//! ```
//!
//! solved by a revised simplex on the three-row system, warm-started from
//! the neighboring node's optimal triangle. The dual solution is the
//! supporting plane at z, which doubles as a correctness certificate: the
//! plane must lie below v at every node and meet the primal value at z
//! (weak duality pinches the hull value between the two).
//!
//! Contact nodes are those where the envelope meets v within the tolerance
//! τ (default 10 h², the truncation order of the solver that produced u).

use std::io::Write;

use crate::grid::GridFunction;
use crate::{Error, Result};

/// Envelope values, contact mask and the supporting plane per node.
#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    /// Γ_u: the convex envelope of −u⁻, node-wise.
    pub envelope: GridFunction,
    /// Nodes where −u⁻ and Γ_u agree within `tolerance`.
    pub contact: Vec<bool>,
    /// The contact tolerance τ that produced the mask.
    pub tolerance: f64,
    /// Supporting plane (p1, p2, t0) at each node: ℓ(x) = p·x + t0 touches
    /// the hull at the node and lies below −u⁻ everywhere. This is a
    /// selection of the normal mapping of Γ_u.
    pub supports: Vec<[f64; 3]>,
}

impl EnvelopeResult {
    /// CSV rows `x1,x2,u,envelope,contact` in node order.
    pub fn write_csv<W: Write>(&self, source: &GridFunction, mut out: W) -> Result<()> {
        let grid = self.envelope.grid();
        writeln!(out, "x1,x2,u,envelope,contact")?;
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let p = grid.node(i, j);
                let k = grid.index(i, j);
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.x1,
                    p.x2,
                    source.values()[k],
                    self.envelope.values()[k],
                    u8::from(self.contact[k]),
                )?;
            }
        }
        Ok(())
    }
}

/// Envelope with the default contact tolerance τ = 10 h².
pub fn convex_envelope(u: &GridFunction) -> Result<EnvelopeResult> {
    let h = u.grid().h_max();
    convex_envelope_with_tolerance(u, 10.0 * h * h)
}

/// Envelope of −u⁻ with an explicit contact tolerance.
pub fn convex_envelope_with_tolerance(u: &GridFunction, tau: f64) -> Result<EnvelopeResult> {
    let grid = u.grid().clone();
    let negative_part: Vec<f64> = u.values().iter().map(|&v| v.min(0.0)).collect();
    let (hull, supports) = lower_hull_at_nodes(&grid, &negative_part)?;
    let contact = negative_part
        .iter()
        .zip(&hull)
        .map(|(&v, &g)| (v - g).abs() <= tau)
        .collect();
    Ok(EnvelopeResult {
        envelope: GridFunction::from_values(grid, hull)?,
        contact,
        tolerance: tau,
        supports,
    })
}

/// 3×3 solve with partial pivoting; `None` when the matrix is singular to
/// working precision.
fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let mut a = m;
    let mut b = rhs;
    let mut perm = [0usize, 1, 2];
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if a[perm[row]][col].abs() > a[perm[pivot]][col].abs() {
                pivot = row;
            }
        }
        perm.swap(col, pivot);
        let p = a[perm[col]][col];
        if p.abs() < 1e-300 {
            return None;
        }
        for row in col + 1..3 {
            let factor = a[perm[row]][col] / p;
            for k in col..3 {
                a[perm[row]][k] -= factor * a[perm[col]][k];
            }
            b[perm[row]] -= factor * b[perm[col]];
        }
    }
    let mut x = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut s = b[perm[col]];
        for k in col + 1..3 {
            s -= a[perm[col]][k] * x[k];
        }
        x[col] = s / a[perm[col]][col];
    }
    Some(x)
}

struct HullLp<'a> {
    x1: Vec<f64>,
    x2: Vec<f64>,
    v: &'a [f64],
}

impl<'a> HullLp<'a> {
    fn column(&self, j: usize) -> [f64; 3] {
        [self.x1[j], self.x2[j], 1.0]
    }

    fn basis_matrix(&self, cols: &[usize; 3]) -> [[f64; 3]; 3] {
        let mut m = [[0.0f64; 3]; 3];
        for (k, &c) in cols.iter().enumerate() {
            let col = self.column(c);
            for r in 0..3 {
                m[r][k] = col[r];
            }
        }
        m
    }

    fn basis_matrix_t(&self, cols: &[usize; 3]) -> [[f64; 3]; 3] {
        let mut m = [[0.0f64; 3]; 3];
        for (k, &c) in cols.iter().enumerate() {
            let col = self.column(c);
            for r in 0..3 {
                m[k][r] = col[r];
            }
        }
        m
    }
}

/// Exact hull values and supporting planes at every grid node.
fn lower_hull_at_nodes(
    grid: &std::sync::Arc<crate::grid::Grid>,
    v: &[f64],
) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    let n1 = grid.n1;
    let n2 = grid.n2;
    let n = n1 * n2;
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    for j in 0..n2 {
        for i in 0..n1 {
            let p = grid.node(i, j);
            x1.push(p.x1);
            x2.push(p.x2);
        }
    }
    let lp = HullLp { x1, x2, v };
    let vscale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut hull = vec![0.0f64; n];
    let mut planes = vec![[0.0f64; 3]; n];
    let mut warm: Option<[usize; 3]> = None;
    for q in 0..n {
        let target = [lp.x1[q], lp.x2[q], 1.0];
        // warm start from the previous node's optimal triangle when it
        // still contains the new target
        let mut basis: Option<([usize; 3], [f64; 3])> = None;
        if let Some(cols) = warm {
            if let Some(lambda) = solve3(lp.basis_matrix(&cols), target) {
                if lambda.iter().all(|&l| l >= -1e-12) {
                    basis = Some((cols, lambda.map(|l| l.max(0.0))));
                }
            }
        }
        let (cols, lambda) = basis.unwrap_or_else(|| {
            let (i, j) = grid.coords(q);
            let ni = if i + 1 < n1 { q + 1 } else { q - 1 };
            let nj = if j + 1 < n2 { q + n1 } else { q - n1 };
            ([q, ni, nj], [1.0, 0.0, 0.0])
        });
        let (value, plane, cols) = simplex(&lp, target, cols, lambda, vscale)?;
        hull[q] = value;
        planes[q] = plane;
        warm = Some(cols);
    }
    Ok((hull, planes))
}

/// Revised simplex on the hull LP for one query node. Dantzig pricing with
/// a switch to Bland's rule after a while to rule out cycling.
fn simplex(
    lp: &HullLp,
    target: [f64; 3],
    mut cols: [usize; 3],
    mut lambda: [f64; 3],
    vscale: f64,
) -> Result<(f64, [f64; 3], [usize; 3])> {
    let n = lp.v.len();
    let tol = 1e-12 * vscale;
    let max_iters = 40 * n + 1000;
    for iter in 0..max_iters {
        let cb = [lp.v[cols[0]], lp.v[cols[1]], lp.v[cols[2]]];
        let y = solve3(lp.basis_matrix_t(&cols), cb)
            .ok_or_else(|| Error::SingularSystem("degenerate hull basis".into()))?;
        // pricing
        let bland = iter > 200;
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..n {
            let reduced = lp.v[j] - (y[0] * lp.x1[j] + y[1] * lp.x2[j] + y[2]);
            if reduced < -tol {
                match entering {
                    None => entering = Some((j, reduced)),
                    Some((_, best)) if !bland && reduced < best => entering = Some((j, reduced)),
                    _ => {}
                }
                if bland {
                    break; // smallest index rule
                }
            }
        }
        let Some((enter, _)) = entering else {
            // project back onto exact feasibility before reading the value
            if let Some(exact) = solve3(lp.basis_matrix(&cols), target) {
                if exact.iter().all(|&l| l >= -1e-9) {
                    lambda = exact.map(|l| l.max(0.0));
                }
            }
            let value = lambda[0] * cb[0] + lambda[1] * cb[1] + lambda[2] * cb[2];
            return Ok((value, [y[0], y[1], y[2]], cols));
        };
        let d = solve3(lp.basis_matrix(&cols), lp.column(enter))
            .ok_or_else(|| Error::SingularSystem("degenerate hull basis".into()))?;
        let mut leave: Option<(usize, f64)> = None;
        for k in 0..3 {
            if d[k] > 1e-12 {
                let ratio = lambda[k] / d[k];
                match leave {
                    None => leave = Some((k, ratio)),
                    Some((kk, best)) => {
                        if ratio < best - 1e-15
                            || ((ratio - best).abs() <= 1e-15 && cols[k] < cols[kk])
                        {
                            leave = Some((k, ratio));
                        }
                    }
                }
            }
        }
        let Some((leave, theta)) = leave else {
            // cannot happen on a bounded feasible set
            return Err(Error::SingularSystem("unbounded hull subproblem".into()));
        };
        for k in 0..3 {
            lambda[k] = (lambda[k] - theta * d[k]).max(0.0);
        }
        cols[leave] = enter;
        lambda[leave] = theta.max(0.0);
    }
    Err(Error::SingularSystem("hull simplex iteration cap reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn square_grid(n: usize) -> Arc<Grid> {
        Arc::new(Grid::rectangle((-1.0, 1.0), (-1.0, 1.0), n, n).unwrap())
    }

    /// Ground truth by exhaustive Carathéodory enumeration: the hull value
    /// at a node is the least interpolation over single nodes, segments and
    /// triangles containing it. Cubic in the node count; tiny grids only.
    fn exhaustive_hull(grid: &Arc<Grid>, v: &[f64]) -> Vec<f64> {
        let n = grid.n_nodes();
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let (i, j) = grid.coords(k);
                let p = grid.node(i, j);
                (p.x1, p.x2)
            })
            .collect();
        let mut out = vec![0.0; n];
        for q in 0..n {
            let (zx, zy) = pts[q];
            let mut best = v[q];
            for a in 0..n {
                for b in (a + 1)..n {
                    let (ax, ay) = pts[a];
                    let (bx, by) = pts[b];
                    // z on the segment [a, b]?
                    let cross = (bx - ax) * (zy - ay) - (by - ay) * (zx - ax);
                    let len2 = (bx - ax) * (bx - ax) + (by - ay) * (by - ay);
                    if cross.abs() < 1e-12 && len2 > 0.0 {
                        let t = ((zx - ax) * (bx - ax) + (zy - ay) * (by - ay)) / len2;
                        if (-1e-12..=1.0 + 1e-12).contains(&t) {
                            best = best.min(v[a] + t.clamp(0.0, 1.0) * (v[b] - v[a]));
                        }
                    }
                    for c in (b + 1)..n {
                        let (cx, cy) = pts[c];
                        let det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
                        if det.abs() < 1e-12 {
                            continue;
                        }
                        let l1 = ((bx - zx) * (cy - zy) - (cx - zx) * (by - zy)) / det;
                        let l2 = ((cx - zx) * (ay - zy) - (ax - zx) * (cy - zy)) / det;
                        let l3 = 1.0 - l1 - l2;
                        if l1 >= -1e-12 && l2 >= -1e-12 && l3 >= -1e-12 {
                            best = best.min(l1 * v[a] + l2 * v[b] + l3 * v[c]);
                        }
                    }
                }
            }
            out[q] = best;
        }
        out
    }

    #[test]
    fn nonnegative_input_has_zero_envelope_and_full_contact() {
        let grid = square_grid(9);
        let u = GridFunction::from_fn(grid, |p| 1.0 + p.x1 * p.x1);
        let env = convex_envelope(&u).unwrap();
        assert!(env.envelope.values().iter().all(|&g| g == 0.0));
        assert!(env.contact.iter().all(|&c| c));
    }

    #[test]
    fn convex_nonpositive_input_is_its_own_envelope() {
        let grid = square_grid(11);
        let u = GridFunction::from_fn(grid, |p| 0.5 * (p.x1 * p.x1 + p.x2 * p.x2) - 2.0);
        let env = convex_envelope_with_tolerance(&u, 1e-9).unwrap();
        for (g, v) in env.envelope.values().iter().zip(u.values()) {
            assert!((g - v).abs() < 1e-10);
        }
        assert!(env.contact.iter().all(|&c| c));
    }

    #[test]
    fn matches_exhaustive_enumeration_on_small_grids() {
        for (n, seed) in [(5usize, 1u64), (7, 2), (7, 3)] {
            let grid = square_grid(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = GridFunction::from_fn(grid.clone(), |p| {
                (p.x1 * 3.1).sin() * (p.x2 * 2.3).cos() - 0.3 + 0.2 * rng.gen::<f64>()
            });
            let v: Vec<f64> = u.values().iter().map(|&t| t.min(0.0)).collect();
            let expected = exhaustive_hull(&grid, &v);
            let env = convex_envelope(&u).unwrap();
            for (k, (&got, &want)) in env.envelope.values().iter().zip(&expected).enumerate() {
                assert!(
                    (got - want).abs() < 1e-9,
                    "node {k}: hull {got} vs exhaustive {want} (n = {n}, seed = {seed})"
                );
            }
        }
    }

    #[test]
    fn radial_well_passes_supporting_plane_certificates() {
        // u = |x|² − 1 clipped above at 0; duality pinches the hull value
        let grid = square_grid(33);
        let u = GridFunction::from_fn(grid.clone(), |p| (p.x1 * p.x1 + p.x2 * p.x2 - 1.0).min(0.0));
        let v: Vec<f64> = u.values().iter().map(|&t| t.min(0.0)).collect();
        let env = convex_envelope(&u).unwrap();
        for q in 0..grid.n_nodes() {
            let plane = env.supports[q];
            let (i, j) = grid.coords(q);
            let z = grid.node(i, j);
            // plane touches the primal value at the query node
            let at_query = plane[0] * z.x1 + plane[1] * z.x2 + plane[2];
            assert!(
                (at_query - env.envelope.values()[q]).abs() < 1e-10,
                "duality gap at node {q}"
            );
            // the supporting plane really supports: below v at every node
            for k in 0..grid.n_nodes() {
                let (ii, jj) = grid.coords(k);
                let x = grid.node(ii, jj);
                let lv = plane[0] * x.x1 + plane[1] * x.x2 + plane[2];
                assert!(lv <= v[k] + 1e-10, "plane of node {q} exceeds v at node {k}");
            }
            // and the envelope never exceeds the source
            assert!(env.envelope.values()[q] <= v[q] + 1e-12);
        }
    }

    #[test]
    fn envelope_is_discretely_convex_including_diagonals() {
        let grid = square_grid(17);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = GridFunction::from_fn(grid.clone(), |p| {
            (p.x1 * 2.0).sin() + (p.x2 * 3.0).cos() - 1.2 + 0.3 * rng.gen::<f64>()
        });
        let env = convex_envelope(&u).unwrap();
        let g = &env.envelope;
        let n = grid.n1;
        for j in 1..grid.n2 - 1 {
            for i in 1..n - 1 {
                let c = g.value(i, j);
                let along_x1 = g.value(i - 1, j) - 2.0 * c + g.value(i + 1, j);
                let along_x2 = g.value(i, j - 1) - 2.0 * c + g.value(i, j + 1);
                let diag_main = g.value(i - 1, j - 1) - 2.0 * c + g.value(i + 1, j + 1);
                let diag_anti = g.value(i - 1, j + 1) - 2.0 * c + g.value(i + 1, j - 1);
                for d in [along_x1, along_x2, diag_main, diag_anti] {
                    assert!(d >= -1e-9, "second difference {d} at ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn idempotent_and_monotone() {
        let grid = square_grid(15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let noise: Vec<f64> = (0..grid.n_nodes()).map(|_| rng.gen_range(0.0..0.4)).collect();
        let u = GridFunction::from_fn(grid.clone(), |p| (p.x1 * 4.0).sin() * 0.7 - 0.4 + p.x2 * 0.1);
        let bigger =
            GridFunction::from_values(grid.clone(), u.values().iter().zip(&noise).map(|(&a, &e)| a + e).collect())
                .unwrap();
        let env_u = convex_envelope(&u).unwrap();
        let env_b = convex_envelope(&bigger).unwrap();
        for (a, b) in env_u.envelope.values().iter().zip(env_b.envelope.values()) {
            assert!(a <= &(b + 1e-10), "monotonicity violated");
        }
        let again = convex_envelope(&env_u.envelope).unwrap();
        for (a, b) in again.envelope.values().iter().zip(env_u.envelope.values()) {
            assert!((a - b).abs() < 1e-10, "idempotence violated");
        }
    }

    #[test]
    fn csv_export_shape() {
        let grid = square_grid(3);
        let u = GridFunction::from_fn(grid, |p| p.x1 - 0.5);
        let env = convex_envelope(&u).unwrap();
        let mut buf = Vec::new();
        env.write_csv(&u, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x1,x2,u,envelope,contact\n"));
        assert_eq!(text.lines().count(), 10);
    }
}
