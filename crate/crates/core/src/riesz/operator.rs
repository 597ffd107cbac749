//! Discrete sector kernels on a radial grid.
//!
//! A *collocation row* `c(r)` holds `c_j(r) = ∫ K_ℓ(r, s) φ_j(s) s^{d-1} ds`
//! for the nodal basis `φ_j`, so `c(r) · f` is the sector potential of the
//! interpolant of `f` at `r`. The Galerkin matrix
//! `H_ij = ∫ φ_i(r) c_j(r) r^{d-1} dr` is the symmetric form used by the
//! solver and the linearized operator.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::kernel::SectorKernelFn;
use crate::grid::RadialGrid;
use crate::quadrature::{gauss_legendre, Rule};

/// Geometric ratio of the panels graded towards the kernel singularity.
const GRADING: f64 = 0.15;
const LEVELS: usize = 20;

pub(crate) struct RowBuilder<'a> {
    grid: &'a RadialGrid,
    kernel: SectorKernelFn,
    far: Vec<(Vec<f64>, Vec<f64>)>,
    panel: Rule,
}

impl<'a> RowBuilder<'a> {
    pub(crate) fn new(grid: &'a RadialGrid, kernel: SectorKernelFn) -> Self {
        let q = grid.order();
        let far = (0..grid.elements().len())
            .map(|e| grid.element_quadrature(e, q + 6))
            .collect();
        Self {
            grid,
            kernel,
            far,
            panel: gauss_legendre(q + 4),
        }
    }

    fn accumulate(&self, e: usize, r: f64, s: f64, w: f64, row: &mut [f64]) {
        let k = self.kernel.eval(r, s);
        if k == 0.0 || w == 0.0 {
            return;
        }
        let phi = self.grid.basis_at(e, s);
        for (g, b) in self.grid.element_nodes(e).zip(phi) {
            row[g] += w * k * b;
        }
    }

    /// Integrates over `[a, b]` with panels shrinking towards `c ∈ {a, b}`.
    fn graded(&self, e: usize, r: f64, a: f64, b: f64, towards_a: bool, row: &mut [f64]) {
        let len = b - a;
        if len <= 0.0 {
            return;
        }
        let dm1 = self.grid.d() as i32 - 1;
        let c = if towards_a { a } else { b };
        // Panels below this width would collapse onto `c` in floating point.
        let floor = 1e-14 * c.abs();
        let mut outer = len;
        for _ in 0..LEVELS {
            let inner = outer * GRADING;
            if inner < floor {
                break;
            }
            let (lo, hi) = if towards_a {
                (a + inner, a + outer)
            } else {
                (b - outer, b - inner)
            };
            let (pts, wts) = self.panel.mapped(lo, hi);
            for (s, w) in pts.into_iter().zip(wts) {
                self.accumulate(e, r, s, w * s.powi(dm1), row);
            }
            outer = inner;
        }
    }

    /// `c(r)` over all grid nodes.
    pub(crate) fn row(&self, r: f64) -> Vec<f64> {
        let mut row = vec![0.0; self.grid.len()];
        for (e, el) in self.grid.elements().iter().enumerate() {
            let h = el.width();
            if r > el.lo - 0.5 * h && r < el.hi + 0.5 * h {
                let c = r.clamp(el.lo, el.hi);
                self.graded(e, r, el.lo, c, false, &mut row);
                self.graded(e, r, c, el.hi, true, &mut row);
            } else {
                let (pts, wts) = &self.far[e];
                for (&s, &w) in pts.iter().zip(wts) {
                    self.accumulate(e, r, s, w, &mut row);
                }
            }
        }
        row
    }
}

/// Rows `c(r_i)` at every node, stacked as a matrix.
pub(crate) fn collocation_matrix(grid: &RadialGrid, kernel: SectorKernelFn) -> DMatrix<f64> {
    let builder = RowBuilder::new(grid, kernel);
    let rows: Vec<Vec<f64>> = grid.nodes().par_iter().map(|&r| builder.row(r)).collect();
    let n = grid.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Galerkin matrix before symmetrization.
pub(crate) fn galerkin_matrix(grid: &RadialGrid, kernel: SectorKernelFn) -> DMatrix<f64> {
    let builder = RowBuilder::new(grid, kernel);
    let q = grid.order();
    let n = grid.len();
    let points: Vec<(usize, f64, f64)> = (0..grid.elements().len())
        .flat_map(|e| {
            let (pts, wts) = grid.element_quadrature(e, q + 12);
            pts.into_iter().zip(wts).map(move |(r, w)| (e, r, w))
        })
        .collect();
    let rows: Vec<Vec<f64>> = points.par_iter().map(|&(_, r, _)| builder.row(r)).collect();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (&(e, r, w), row) in points.iter().zip(&rows) {
        let phi = grid.basis_at(e, r);
        for (gi, b) in grid.element_nodes(e).zip(phi) {
            let scale = w * b;
            for (j, v) in row.iter().enumerate() {
                h[(gi, j)] += scale * v;
            }
        }
    }
    h
}
