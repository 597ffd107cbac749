//! Running integrals `∫_0^r f_h(s) s^b ds` of the nodal interpolant.

use crate::grid::RadialGrid;
use crate::quadrature::{gauss_jacobi, gauss_legendre, Rule};

pub(crate) struct Cumulative<'a> {
    grid: &'a RadialGrid,
    values: &'a [f64],
    b: f64,
    jacobi: Rule,
    legendre: Rule,
    /// `∫_0^{lo_e}` for every element `e`, plus the grand total at the end.
    offsets: Vec<f64>,
}

impl<'a> Cumulative<'a> {
    pub(crate) fn new(grid: &'a RadialGrid, values: &'a [f64], b: f64) -> Self {
        let m = grid.order() + 8;
        let mut this = Self {
            grid,
            values,
            b,
            jacobi: gauss_jacobi(m, b),
            legendre: gauss_legendre(m),
            offsets: Vec::with_capacity(grid.elements().len() + 1),
        };
        let mut acc = 0.0;
        this.offsets.push(0.0);
        for (e, el) in grid.elements().iter().enumerate() {
            acc += this.within(e, el.hi);
            this.offsets.push(acc);
        }
        this
    }

    /// `∫_{lo_e}^{r}` inside element `e`.
    fn within(&self, e: usize, r: f64) -> f64 {
        let lo = self.grid.elements()[e].lo;
        if r <= lo {
            return 0.0;
        }
        let idx = self.grid.element_nodes(e);
        let interp = |s: f64| -> f64 {
            let phi = self.grid.basis_at(e, s);
            idx.clone().zip(phi).map(|(g, p)| self.values[g] * p).sum()
        };
        if e == 0 {
            // Jacobi weight absorbs s^b exactly, including b < 0.
            let rule = &self.jacobi;
            let half = 0.5 * r;
            let sum: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| w * interp(half * (1.0 + t)))
                .sum();
            sum * half.powf(self.b + 1.0)
        } else {
            let (pts, wts) = self.legendre.mapped(lo, r);
            pts.iter()
                .zip(&wts)
                .map(|(&s, w)| w * interp(s) * s.powf(self.b))
                .sum()
        }
    }

    pub(crate) fn total(&self) -> f64 {
        *self.offsets.last().unwrap()
    }

    /// `∫_0^r`; constant beyond `r_max`.
    pub(crate) fn at(&self, r: f64) -> f64 {
        match self.grid.locate(r) {
            None if r <= 0.0 => 0.0,
            None => self.total(),
            Some(e) => self.offsets[e] + self.within(e, r),
        }
    }

    /// Values at every node.
    pub(crate) fn at_nodes(&self) -> Vec<f64> {
        let nodes = self.grid.nodes();
        let mut out = vec![0.0; nodes.len()];
        for e in 0..self.grid.elements().len() {
            for g in self.grid.element_nodes(e) {
                out[g] = self.offsets[e] + self.within(e, nodes[g]);
            }
        }
        out
    }
}
