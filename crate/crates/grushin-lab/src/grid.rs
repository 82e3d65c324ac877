//! Rectangular grids and grid functions.
//!
//! A [`Grid`] is a tensor lattice over a rectangle with an interior mask:
//! interior nodes are unknowns of the Dirichlet problem, every other node
//! carries boundary data. Masks carve non-rectangular domains (quasi-metric
//! balls, annuli) out of the rectangle; the outermost node layer is always
//! boundary.
//!
//! Node order is row-major by x2 then x1 (index = j · n1 + i), which is also
//! the CSV export order.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::geometry::Point;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Grid {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub n1: usize,
    pub n2: usize,
    interior: Vec<bool>,
}

impl Grid {
    /// Grid over a rectangle with all strictly-inside nodes interior.
    pub fn rectangle(
        (x1_min, x1_max): (f64, f64),
        (x2_min, x2_max): (f64, f64),
        n1: usize,
        n2: usize,
    ) -> Result<Grid> {
        Grid::masked((x1_min, x1_max), (x2_min, x2_max), n1, n2, |_| true)
    }

    /// Grid whose interior is the strict inside of the rectangle intersected
    /// with `inside`. Nodes failing `inside` (and the outer layer) are
    /// boundary nodes.
    pub fn masked(
        (x1_min, x1_max): (f64, f64),
        (x2_min, x2_max): (f64, f64),
        n1: usize,
        n2: usize,
        inside: impl Fn(Point) -> bool,
    ) -> Result<Grid> {
        if n1 < 3 || n2 < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3 nodes per axis, got {n1} x {n2}"
            )));
        }
        if !(x1_max > x1_min && x2_max > x2_min) {
            return Err(Error::InvalidParameter("grid rectangle is empty".into()));
        }
        let mut grid = Grid {
            x1_min,
            x1_max,
            x2_min,
            x2_max,
            n1,
            n2,
            interior: vec![false; n1 * n2],
        };
        for j in 1..n2 - 1 {
            for i in 1..n1 - 1 {
                let idx = j * n1 + i;
                grid.interior[idx] = inside(grid.node(i, j));
            }
        }
        Ok(grid)
    }

    pub fn h1(&self) -> f64 {
        (self.x1_max - self.x1_min) / (self.n1 - 1) as f64
    }

    pub fn h2(&self) -> f64 {
        (self.x2_max - self.x2_min) / (self.n2 - 1) as f64
    }

    /// max(h1, h2); the h in O(h²) statements.
    pub fn h_max(&self) -> f64 {
        self.h1().max(self.h2())
    }

    pub fn n_nodes(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2);
        j * self.n1 + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.n1, idx / self.n1)
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.x1_min + i as f64 * self.h1(),
            self.x2_min + j as f64 * self.h2(),
        )
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.interior[self.index(i, j)]
    }

    pub fn is_interior_idx(&self, idx: usize) -> bool {
        self.interior[idx]
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|&&b| b).count()
    }

    /// Indices of interior nodes in node order.
    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.n_nodes()).filter(|&k| self.interior[k]).collect()
    }
}

/// Values of a scalar function on the nodes of a shared grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: Arc<Grid>) -> GridFunction {
        let n = grid.n_nodes();
        GridFunction { grid, values: vec![0.0; n] }
    }

    pub fn from_fn(grid: Arc<Grid>, mut f: impl FnMut(Point) -> f64) -> GridFunction {
        let mut values = Vec::with_capacity(grid.n_nodes());
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                values.push(f(grid.node(i, j)));
            }
        }
        GridFunction { grid, values }
    }

    pub fn from_values(grid: Arc<Grid>, values: Vec<f64>) -> Result<GridFunction> {
        if values.len() != grid.n_nodes() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match grid with {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = self.grid.index(i, j);
        self.values[idx] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Infimum over nodes selected by the predicate (on node position).
    pub fn inf_where(&self, pred: impl Fn(Point) -> bool) -> Option<f64> {
        self.fold_where(pred, f64::INFINITY, f64::min)
    }

    pub fn sup_where(&self, pred: impl Fn(Point) -> bool) -> Option<f64> {
        self.fold_where(pred, f64::NEG_INFINITY, f64::max)
    }

    fn fold_where(
        &self,
        pred: impl Fn(Point) -> bool,
        init: f64,
        combine: impl Fn(f64, f64) -> f64,
    ) -> Option<f64> {
        let mut acc = init;
        let mut any = false;
        for j in 0..self.grid.n2 {
            for i in 0..self.grid.n1 {
                if pred(self.grid.node(i, j)) {
                    acc = combine(acc, self.value(i, j));
                    any = true;
                }
            }
        }
        any.then_some(acc)
    }

    /// Counts nodes satisfying both predicates, and nodes satisfying `region`
    /// alone; the ratio is the node-measure fraction of `which` in `region`.
    pub fn fraction_where(
        &self,
        region: impl Fn(Point) -> bool,
        which: impl Fn(Point, f64) -> bool,
    ) -> (usize, usize) {
        let mut hit = 0;
        let mut total = 0;
        for j in 0..self.grid.n2 {
            for i in 0..self.grid.n1 {
                let p = self.grid.node(i, j);
                if region(p) {
                    total += 1;
                    if which(p, self.value(i, j)) {
                        hit += 1;
                    }
                }
            }
        }
        (hit, total)
    }

    /// Writes `x1,x2,value` rows, row-major by x2 then x1. Values print in
    /// shortest round-trip form with `.` as the decimal separator.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x1,x2,value")?;
        for j in 0..self.grid.n2 {
            for i in 0..self.grid.n1 {
                let p = self.grid.node(i, j);
                writeln!(out, "{},{},{}", p.x1, p.x2, self.value(i, j))?;
            }
        }
        Ok(())
    }

    /// Reads a CSV produced by [`write_csv`]. The mask is not stored in the
    /// format, so the reconstructed grid has the default rectangular
    /// interior.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<GridFunction> {
        let mut lines = reader.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "x1,x2,value" => {}
            _ => return Err(Error::Csv("missing x1,x2,value header".into())),
        }
        let mut x1s: Vec<f64> = Vec::new();
        let mut x2s: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Csv(format!("short row at line {}", lineno + 2)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))
            };
            let x1 = parse(parts.next())?;
            let x2 = parse(parts.next())?;
            let v = parse(parts.next())?;
            if x2s.is_empty() || x2 != *x2s.last().unwrap() {
                x2s.push(x2);
            }
            if x2s.len() == 1 {
                x1s.push(x1);
            }
            values.push(v);
        }
        let (n1, n2) = (x1s.len(), x2s.len());
        if n1 < 3 || n2 < 3 || values.len() != n1 * n2 {
            return Err(Error::Csv(format!(
                "expected a full {n1} x {n2} lattice, got {} rows",
                values.len()
            )));
        }
        let grid = Grid::rectangle(
            (x1s[0], *x1s.last().unwrap()),
            (x2s[0], *x2s.last().unwrap()),
            n1,
            n2,
        )?;
        GridFunction::from_values(Arc::new(grid), values)
    }
}
