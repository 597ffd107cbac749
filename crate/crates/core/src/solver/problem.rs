//! The discrete nonlinear problem shared by the solver, the linearized
//! operator and continuation.
//!
//! Unknowns live on the free nodes (all but the Dirichlet node at `r_max`).
//! With `S` the stiffness matrix, `W` the lumped mass and `N(u)` the
//! nonlinearity, the discrete equation reads `(S + W) u = W N(u)`.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::Equation;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::BandCholesky;
use crate::riesz::{sector_kernel, SectorKernel};

pub(crate) struct Problem {
    pub grid: Arc<RadialGrid>,
    pub equation: Equation,
    /// Full `n x n` stiffness for `ℓ = 0`.
    pub stiffness: DMatrix<f64>,
    shifted: BandCholesky,
    pub kernel: Option<Arc<SectorKernel>>,
}

impl Problem {
    pub fn new(grid: Arc<RadialGrid>, equation: Equation) -> Result<Self> {
        if grid.d() != equation.d() {
            return Err(Error::InvalidArgument(format!(
                "grid dimension {} does not match d = {}",
                grid.d(),
                equation.d()
            )));
        }
        let stiffness = grid.stiffness(0);
        let nf = grid.n_free();
        let mut a = stiffness.clone();
        for (i, w) in grid.volume_weights().iter().enumerate() {
            a[(i, i)] += w;
        }
        let shifted = BandCholesky::factor(&a, nf, grid.order())
            .ok_or_else(|| Error::InvalidArgument("shifted Laplacian is not positive definite".into()))?;
        let kernel = match equation {
            Equation::Choquard(p) => Some(sector_kernel(&grid, p.alpha, 0)?),
            Equation::Model { .. } => None,
        };
        Ok(Self {
            grid,
            equation,
            stiffness,
            shifted,
            kernel,
        })
    }

    pub fn nf(&self) -> usize {
        self.grid.n_free()
    }

    pub fn p(&self) -> f64 {
        self.equation.p()
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.volume_weights()
    }

    /// Degree of homogeneity of `N`.
    pub fn homogeneity(&self) -> f64 {
        match self.equation {
            Equation::Choquard(p) => 2.0 * p.p - 1.0,
            Equation::Model { p, .. } => p,
        }
    }

    /// `(|·|^{-α} * |u|^p)` at every node.
    pub fn potential(&self, u: &[f64]) -> Option<Vec<f64>> {
        let p = self.p();
        self.kernel.as_ref().map(|k| {
            let up: Vec<f64> = u.iter().map(|v| v.abs().powf(p)).collect();
            k.apply(&up)
        })
    }

    /// `N(u)` at every node (zero at the Dirichlet node).
    pub fn nonlinearity(&self, u: &[f64]) -> Vec<f64> {
        let p = self.p();
        let mut out: Vec<f64> = match self.potential(u) {
            Some(pot) => u
                .iter()
                .zip(&pot)
                .map(|(&v, &q)| q * signed_pow(v, p - 1.0))
                .collect(),
            None => u.iter().map(|&v| signed_pow(v, p)).collect(),
        };
        let last = out.len() - 1;
        out[last] = 0.0;
        out
    }

    /// `(S + W) u` restricted to the free nodes (`u` has `n` entries).
    pub fn apply_shifted(&self, u: &[f64]) -> Vec<f64> {
        let nf = self.nf();
        let q = self.grid.order();
        let w = self.weights();
        (0..nf)
            .map(|i| {
                let lo = i.saturating_sub(q);
                let hi = (i + q).min(nf - 1);
                let mut s = w[i] * u[i];
                for j in lo..=hi {
                    s += self.stiffness[(i, j)] * u[j];
                }
                s
            })
            .collect()
    }

    /// `(S + W)^{-1} b` on the free nodes, padded with the Dirichlet zero.
    pub fn solve_shifted(&self, b: &[f64]) -> Vec<f64> {
        let nf = self.nf();
        let mut x = b[..nf].to_vec();
        self.shifted.solve_in_place(&mut x);
        x.push(0.0);
        x
    }

    /// Strong-form residual `max_i |(S + W) u - W N(u)|_i / W_i`.
    pub fn residual(&self, u: &[f64]) -> f64 {
        let au = self.apply_shifted(u);
        let nu = self.nonlinearity(u);
        let w = self.weights();
        au.iter()
            .enumerate()
            .map(|(i, a)| ((a - w[i] * nu[i]) / w[i]).abs())
            .fold(0.0, f64::max)
    }

    /// `uᵀ (S + W) u` and `uᵀ W N(u)` over the free nodes.
    pub fn nehari_parts(&self, u: &[f64]) -> (f64, f64) {
        let au = self.apply_shifted(u);
        let nu = self.nonlinearity(u);
        let w = self.weights();
        let lhs = au.iter().zip(u).map(|(a, v)| a * v).sum();
        let rhs = (0..self.nf()).map(|i| u[i] * w[i] * nu[i]).sum();
        (lhs, rhs)
    }
}

pub(crate) fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(e)
    }
}
