//! Radial discretization.
//!
//! The half line `[0, r_max]` is split into elements whose widths grow
//! geometrically by `stretch`. Every element carries a degree-`order`
//! polynomial basis: the first element uses Gauss-Radau-Jacobi nodes for the
//! measure `r^{d-1} dr` (the origin is never a node), all others use
//! Gauss-Lobatto-Legendre nodes, so neighbouring elements share an endpoint.
//! The nodal quadrature is positive and, with the `r^{d-1}` surface weight
//! folded in, exact for polynomials of degree `2 * order - 1` on each element.
//! `order = 1` reduces to linear elements with trapezoid weights away from
//! the origin.
//!
//! The last node is `r_max`; operators impose a homogeneous Dirichlet
//! condition there by acting on the `n - 1` free nodes only.

mod field;
mod params;

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use field::RadialField;
pub use params::ChoquardParams;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_jacobi, gauss_legendre, lobatto, radau_right, LagrangeBasis, Rule};

/// Polynomial degree per element used by [`make_grid`].
pub const DEFAULT_ORDER: usize = 8;
/// Default geometric growth factor of element widths.
pub const DEFAULT_STRETCH: f64 = 1.02;
/// Default truncation radius.
pub const DEFAULT_R_MAX: f64 = 25.0;

/// Surface area of the unit sphere `S^{d-1}` in `R^d` (`2` for `d = 1`).
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => panic!("dimension must be positive"),
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

/// Volume of the unit ball in `R^d`.
pub fn ball_volume(d: usize) -> f64 {
    sphere_area(d) / d as f64
}

/// Everything needed to rebuild a grid bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub r_max: f64,
    /// Requested node count; the built grid has `elements * order + 1 >= n` nodes.
    pub n: usize,
    pub stretch: f64,
    pub order: usize,
}

impl GridSpec {
    pub fn new(d: usize, r_max: f64, n: usize, stretch: f64) -> Self {
        Self {
            d,
            r_max,
            n,
            stretch,
            order: DEFAULT_ORDER,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn build(&self) -> Result<Arc<RadialGrid>> {
        RadialGrid::build(*self).map(Arc::new)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub lo: f64,
    pub hi: f64,
}

impl Element {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn to_local(&self, r: f64) -> f64 {
        (2.0 * r - self.lo - self.hi) / (self.hi - self.lo)
    }
}

#[derive(Debug)]
pub struct RadialGrid {
    spec: GridSpec,
    elements: Vec<Element>,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
    volume_weights: Vec<f64>,
    origin_rule: Rule,
    lobatto_rule: Rule,
    origin_basis: LagrangeBasis,
    lobatto_basis: LagrangeBasis,
}

/// Uniform or geometrically stretched grid with the default element order.
pub fn make_grid(d: usize, r_max: f64, n: usize, stretch: f64) -> Result<Arc<RadialGrid>> {
    GridSpec::new(d, r_max, n, stretch).build()
}

impl RadialGrid {
    pub fn build(spec: GridSpec) -> Result<Self> {
        let GridSpec {
            d,
            r_max,
            n,
            stretch,
            order,
        } = spec;
        if d < 1 {
            return Err(Error::InvalidArgument("dimension d must be >= 1".into()));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidArgument("r_max must be positive".into()));
        }
        if n < 16 {
            return Err(Error::InvalidArgument("need n >= 16 nodes".into()));
        }
        if !(stretch.is_finite() && stretch >= 1.0) {
            return Err(Error::InvalidArgument("stretch must be finite and >= 1".into()));
        }
        if !(1..=32).contains(&order) {
            return Err(Error::InvalidArgument("element order must lie in 1..=32".into()));
        }

        let n_el = ((n - 1) + order - 1) / order;
        let n_el = n_el.max(2);
        let widths: Vec<f64> = (0..n_el).map(|e| stretch.powi(e as i32)).collect();
        let total: f64 = widths.iter().sum();
        let mut elements = Vec::with_capacity(n_el);
        let mut lo = 0.0;
        for (e, w) in widths.iter().enumerate() {
            let hi = if e + 1 == n_el { r_max } else { lo + w * r_max / total };
            elements.push(Element { lo, hi });
            lo = hi;
        }

        let dm1 = (d - 1) as f64;
        let origin_rule = radau_right(order + 1, dm1);
        let lobatto_rule = lobatto(order + 1);
        let n_nodes = n_el * order + 1;
        let mut nodes = vec![0.0; n_nodes];
        let mut volume_weights = vec![0.0; n_nodes];
        for (e, el) in elements.iter().enumerate() {
            let half = 0.5 * el.width();
            let rule = if e == 0 { &origin_rule } else { &lobatto_rule };
            for k in 0..=order {
                let g = e * order + k;
                let r = el.lo + half * (1.0 + rule.nodes[k]);
                if e == 0 || k > 0 {
                    nodes[g] = r;
                }
                // The Radau-Jacobi weights already contain (1 + xi)^{d-1}.
                volume_weights[g] += if e == 0 {
                    half.powi(d as i32) * rule.weights[k]
                } else {
                    half * rule.weights[k] * r.powi(d as i32 - 1)
                };
            }
        }
        nodes[n_nodes - 1] = r_max;
        let quad_weights = nodes
            .iter()
            .zip(&volume_weights)
            .map(|(r, w)| w / r.powi(d as i32 - 1))
            .collect();

        Ok(Self {
            spec,
            origin_basis: LagrangeBasis::new(&origin_rule.nodes),
            lobatto_basis: LagrangeBasis::new(&lobatto_rule.nodes),
            elements,
            nodes,
            quad_weights,
            volume_weights,
            origin_rule,
            lobatto_rule,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn r_max(&self) -> f64 {
        self.spec.r_max
    }

    pub fn stretch(&self) -> f64 {
        self.spec.stretch
    }

    pub fn order(&self) -> usize {
        self.spec.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes not pinned by the Dirichlet condition at `r_max`.
    pub fn n_free(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights `w_i` with `sum_i w_i g(r_i) ≈ ∫_0^{r_max} g(r) dr`.
    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    /// `W_i = w_i r_i^{d-1}`: the lumped mass of node `i`.
    pub fn volume_weights(&self) -> &[f64] {
        &self.volume_weights
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Global node indices of element `e`.
    pub fn element_nodes(&self, e: usize) -> std::ops::RangeInclusive<usize> {
        let q = self.spec.order;
        e * q..=e * q + q
    }

    pub fn basis(&self, e: usize) -> &LagrangeBasis {
        if e == 0 {
            &self.origin_basis
        } else {
            &self.lobatto_basis
        }
    }

    /// Reference rule whose nodes are the element's nodes.
    pub fn nodal_rule(&self, e: usize) -> &Rule {
        if e == 0 {
            &self.origin_rule
        } else {
            &self.lobatto_rule
        }
    }

    /// Element containing `r` (the left one at shared endpoints), `None`
    /// outside `[0, r_max]`.
    pub fn locate(&self, r: f64) -> Option<usize> {
        if !(0.0..=self.r_max()).contains(&r) {
            return None;
        }
        let idx = self.elements.partition_point(|el| el.hi < r);
        Some(idx.min(self.elements.len() - 1))
    }

    /// Basis values of element `e` at radius `r`.
    pub fn basis_at(&self, e: usize, r: f64) -> Vec<f64> {
        self.basis(e).eval(self.elements[e].to_local(r))
    }

    /// Basis derivatives (with respect to `r`) of element `e` at `r`.
    pub fn basis_deriv_at(&self, e: usize, r: f64) -> Vec<f64> {
        let scale = 2.0 / self.elements[e].width();
        let mut v = self.basis(e).eval_deriv(self.elements[e].to_local(r));
        for x in &mut v {
            *x *= scale;
        }
        v
    }

    /// Points and weights for `∫_e g(r) r^{d-1} dr` with an `m`-point Gauss
    /// rule that is exact for polynomial `g` of degree `2m - 1`.
    pub fn element_quadrature(&self, e: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
        let el = self.elements[e];
        let half = 0.5 * el.width();
        let d = self.d() as i32;
        if e == 0 {
            let rule = gauss_jacobi(m, (d - 1) as f64);
            let pts = rule.nodes.iter().map(|t| half * (1.0 + t)).collect();
            let w = rule.weights.iter().map(|w| w * half.powi(d)).collect();
            (pts, w)
        } else {
            let rule = gauss_legendre(m);
            let (pts, w): (Vec<f64>, Vec<f64>) = rule.mapped(el.lo, el.hi);
            let w = pts.iter().zip(&w).map(|(r, w)| w * r.powi(d - 1)).collect();
            (pts, w)
        }
    }

    /// Value at `r` of the piecewise-polynomial interpolant of nodal `values`;
    /// zero beyond `r_max`.
    pub fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        let r = r.abs();
        match self.locate(r) {
            None => 0.0,
            Some(e) => {
                let phi = self.basis_at(e, r);
                self.element_nodes(e)
                    .zip(phi)
                    .map(|(g, b)| values[g] * b)
                    .sum()
            }
        }
    }

    /// Derivative at `r` of the interpolant.
    pub fn interpolate_deriv(&self, values: &[f64], r: f64) -> f64 {
        match self.locate(r) {
            None => 0.0,
            Some(e) => {
                let dphi = self.basis_deriv_at(e, r);
                self.element_nodes(e)
                    .zip(dphi)
                    .map(|(g, b)| values[g] * b)
                    .sum()
            }
        }
    }

    /// Nodal derivative of the interpolant; shared element endpoints get the
    /// mean of the one-sided values.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        let mut count = vec![0u8; self.len()];
        for e in 0..self.elements.len() {
            let basis = self.basis(e);
            let scale = 2.0 / self.elements[e].width();
            let idx: Vec<usize> = self.element_nodes(e).collect();
            for (i, &gi) in idx.iter().enumerate() {
                let row = basis.diff_row(i);
                let v: f64 = idx.iter().zip(row).map(|(&g, c)| values[g] * c).sum();
                out[gi] += v * scale;
                count[gi] += 1;
            }
        }
        for (o, c) in out.iter_mut().zip(count) {
            *o /= c as f64;
        }
        out
    }

    /// Symmetric stiffness matrix of the sector operator
    /// `-f'' - (d-1) f'/r + ell(ell+d-2) f/r^2` in weak form, over all nodes
    /// (the Dirichlet node included as the last row and column). Dividing a
    /// row by the lumped mass gives the strong-form value at that node.
    pub fn stiffness(&self, ell: usize) -> DMatrix<f64> {
        let n = self.len();
        let q = self.order();
        let d = self.d();
        let mut s = DMatrix::<f64>::zeros(n, n);
        let m = q + d / 2 + 2;
        for e in 0..self.elements.len() {
            let (pts, wts) = self.element_quadrature(e, m);
            let idx: Vec<usize> = self.element_nodes(e).collect();
            for (r, w) in pts.iter().zip(&wts) {
                let dphi = self.basis_deriv_at(e, *r);
                for (a, &ga) in idx.iter().enumerate() {
                    let wa = w * dphi[a];
                    for (b, &gb) in idx.iter().enumerate() {
                        s[(ga, gb)] += wa * dphi[b];
                    }
                }
            }
        }
        let centrifugal = (ell * (ell + d)) as f64 - 2.0 * ell as f64;
        if centrifugal != 0.0 {
            for i in 0..n {
                s[(i, i)] += centrifugal * self.volume_weights[i] / (self.nodes[i] * self.nodes[i]);
            }
        }
        // Exact symmetry for the eigenproblems downstream.
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        s
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

/// `|S^{d-1}| Σ W_i f_i`, i.e. `∫_{R^d} f dx` for a radial `f`.
pub fn integrate_radial(grid: &RadialGrid, f: &RadialField) -> Result<f64> {
    f.check_grid(grid)?;
    Ok(integrate_values(grid, f.values()))
}

pub(crate) fn integrate_values(grid: &RadialGrid, values: &[f64]) -> f64 {
    sphere_area(grid.d())
        * grid
            .volume_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum::<f64>()
}

/// Strong-form `-Δ` restricted to harmonic sector `ell`, evaluated at every
/// free node; the Dirichlet node reports zero.
pub fn laplacian_sector(grid: &RadialGrid, f: &RadialField, ell: i64) -> Result<RadialField> {
    f.check_grid(grid)?;
    if ell < 0 {
        return Err(Error::UnsupportedSector(ell));
    }
    let s = grid.stiffness(ell as usize);
    let v = nalgebra::DVector::from_column_slice(f.values());
    let sv = &s * &v;
    let w = grid.volume_weights();
    let mut out: Vec<f64> = (0..grid.len()).map(|i| sv[i] / w[i]).collect();
    let last = out.len() - 1;
    out[last] = 0.0;
    RadialField::new(f.grid_arc(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(5) - 8.0 * PI * PI / 15.0).abs() < 1e-13);
    }

    #[test]
    fn construction_contract() {
        let g = make_grid(3, 20.0, 200, 1.02).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*g.nodes().last().unwrap(), 20.0);
        assert!(g.nodes()[0] > 0.0);
        assert!(g.quad_weights().iter().all(|&w| w > 0.0));
        assert!(g.len() >= 200);

        let g1 = make_grid(1, 15.0, 128, 1.0).unwrap();
        assert_eq!(*g1.nodes().last().unwrap(), 15.0);
        assert!(g1.elements().windows(2).all(|w| (w[0].width() - w[1].width()).abs() < 1e-12));
    }

    #[test]
    fn uniform_linear_grid_has_unit_spacing_weights() {
        let g = GridSpec::new(3, 10.0, 101, 1.0).with_order(1).build().unwrap();
        assert_eq!(g.elements().len(), 100);
        assert!((g.elements()[7].width() - 0.1).abs() < 1e-14);
        let sum: f64 = g.quad_weights().iter().sum();
        assert!((sum - 10.0).abs() < 0.05, "sum = {sum}");
        // Interior weights are the trapezoid spacing.
        assert!((g.quad_weights()[50] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_grid(3, 0.0, 100, 1.0).is_err());
        assert!(make_grid(3, -1.0, 100, 1.0).is_err());
        assert!(make_grid(3, 10.0, 15, 1.0).is_err());
        assert!(make_grid(3, 10.0, 100, f64::NAN).is_err());
    }

    #[test]
    fn plain_weights_sum_to_length() {
        for d in 1..=5 {
            let g = make_grid(d, 10.0, 200, 1.0).unwrap();
            let sum: f64 = g.quad_weights().iter().sum();
            // Exact on every element except the origin one, where the rule
            // integrates g r^{d-1} exactly instead.
            assert!((sum - 10.0).abs() < 0.05, "d={d} sum={sum}");
        }
    }

    #[test]
    fn interpolation_matches_nodes_and_polynomials() {
        let g = make_grid(3, 5.0, 40, 1.1).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| r * r - 2.0 * r).collect();
        for (i, r) in g.nodes().iter().enumerate() {
            assert!((g.interpolate(&f, *r) - f[i]).abs() < 1e-12);
        }
        for r in [0.0, 0.013, 1.7, 4.99] {
            assert!((g.interpolate(&f, r) - (r * r - 2.0 * r)).abs() < 1e-11);
            assert!((g.interpolate_deriv(&f, r) - (2.0 * r - 2.0)).abs() < 1e-9);
        }
        assert_eq!(g.interpolate(&f, 6.0), 0.0);
    }

    #[test]
    fn nodal_derivative() {
        let g = make_grid(2, 6.0, 64, 1.05).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| (-r * r).exp()).collect();
        let df = g.derivative(&f);
        for (i, r) in g.nodes().iter().enumerate() {
            let exact = -2.0 * r * (-r * r).exp();
            assert!((df[i] - exact).abs() < 1e-6, "r={r}");
        }
    }
}
