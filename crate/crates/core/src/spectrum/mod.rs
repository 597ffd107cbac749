//! The linearized operator
//!
//! ```text
//! L₊ξ = -Δξ + ξ - (p-1) V ξ - p (|·|^{-α} * (Q^{p-1} ξ)) Q^{p-1},   V = (|·|^{-α} * Q^p) Q^{p-2}
//! ```
//!
//! restricted to the harmonic sectors `ℓ = 0, 1`, and the verdicts built on
//! its low spectrum.

mod report;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use report::{spectral_report, write_eigenfields_csv, SectorSummary, SpectralReport};

use crate::error::{Error, Result};
use crate::grid::{RadialField, RadialGrid};
use crate::linalg::relative_asymmetry;
use crate::riesz::sector_kernel;
use crate::solver::problem::Problem;
use crate::solver::{Equation, GroundState};

/// Half-width of the window around zero that counts as kernel.
pub const DEFAULT_GAP_TOL: f64 = 0.05;
/// Minimal correlation of an `ℓ = 1` kernel vector with `-∂_r Q`.
pub const TRANSLATION_CORRELATION: f64 = 0.99;
pub const MAX_EIGENPAIRS: usize = 10;

/// `L₊` on one sector, conjugated by `W^{1/2}` so the discrete `L²` product
/// becomes Euclidean. Rows and columns run over the free nodes.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub ell: i64,
    pub equation: Equation,
    pub matrix: DMatrix<f64>,
    /// `V` at every node (the Dirichlet node included).
    pub potential_v: RadialField,
    /// Identifies the profile the operator was linearized at.
    pub state_ref: String,
    sqrt_w: Vec<f64>,
}

impl SectorOperator {
    pub fn grid(&self) -> &RadialGrid {
        self.potential_v.grid()
    }

    pub fn asymmetry(&self) -> f64 {
        relative_asymmetry(&self.matrix)
    }

    /// `(L₊ξ)` in strong form at the free nodes, padded with zero at `r_max`.
    pub fn apply(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid().len();
        if xi.len() != n {
            return Err(Error::GridMismatch);
        }
        let nf = n - 1;
        let y: Vec<f64> = (0..nf).map(|i| self.sqrt_w[i] * xi[i]).collect();
        let mut out: Vec<f64> = (0..nf)
            .map(|i| {
                let row: f64 = (0..nf).map(|j| self.matrix[(i, j)] * y[j]).sum();
                row / self.sqrt_w[i]
            })
            .collect();
        out.push(0.0);
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Nodal values with `Σ W_i ξ_i² = 1` (zero at `r_max`).
    pub field: RadialField,
}

fn label(equation: &Equation, grid: &RadialGrid) -> String {
    let g = grid.spec();
    let head = match equation {
        Equation::Choquard(q) => format!("choquard d={} alpha={} p={}", q.d, q.alpha, q.p),
        Equation::Model { d, p } => format!("model d={d} p={p}"),
    };
    format!("{head} n={} r_max={} stretch={} order={}", g.n, g.r_max, g.stretch, g.order)
}

/// Linearization at a converged state.
pub fn assemble_lplus(state: &GroundState, ell: i64) -> Result<SectorOperator> {
    if !state.is_converged() {
        return Err(Error::InvalidArgument(format!(
            "state is not converged (residual {:.3e} > tol {:.3e})",
            state.residual, state.tol
        )));
    }
    assemble_lplus_for(state.equation, &state.field, ell)
}

/// Linearization at an arbitrary profile; the zero field gives the free operator.
pub fn assemble_lplus_for(equation: Equation, field: &RadialField, ell: i64) -> Result<SectorOperator> {
    if !(ell == 0 || ell == 1) || (ell == 1 && equation.d() == 1) {
        return Err(Error::UnsupportedSector(ell));
    }
    let grid = field.grid_arc();
    let problem = Problem::new(grid.clone(), equation)?;
    let n = grid.len();
    let nf = n - 1;
    let p = equation.p();
    let q = field.values();
    let w = grid.volume_weights();
    let stiffness = grid.stiffness(ell as usize);

    // Local part, weak form.
    let (local, v) = match problem.potential(q) {
        Some(pot) => {
            let v: Vec<f64> = (0..n).map(|i| pot[i] * pos_pow(q[i], p - 2.0)).collect();
            ((0..n).map(|i| (p - 1.0) * v[i]).collect::<Vec<_>>(), v)
        }
        None => {
            let v: Vec<f64> = q.iter().map(|&x| pos_pow(x, p - 1.0)).collect();
            ((0..n).map(|i| p * v[i]).collect(), v)
        }
    };
    let mut a = DMatrix::<f64>::zeros(nf, nf);
    for i in 0..nf {
        for j in 0..nf {
            a[(i, j)] = stiffness[(i, j)];
        }
        a[(i, i)] += w[i] * (1.0 - local[i]);
    }
    // Nonlocal part: p W g K W g with g = Q^{p-1}.
    if let Equation::Choquard(params) = equation {
        let g: Vec<f64> = q.iter().map(|&x| pos_pow(x, p - 1.0)).collect();
        if g.iter().any(|&x| x != 0.0) {
            let kernel = sector_kernel(&grid, params.alpha, ell)?;
            let k = kernel.matrix();
            for i in 0..nf {
                let wi = p * w[i] * g[i];
                if wi == 0.0 {
                    continue;
                }
                for j in 0..nf {
                    a[(i, j)] -= wi * k[(i, j)] * w[j] * g[j];
                }
            }
        }
    }
    let sqrt_w: Vec<f64> = w[..nf].iter().map(|x| x.sqrt()).collect();
    for i in 0..nf {
        for j in 0..nf {
            a[(i, j)] /= sqrt_w[i] * sqrt_w[j];
        }
    }
    Ok(SectorOperator {
        ell,
        equation,
        matrix: a,
        potential_v: RadialField::new(grid.clone(), v)?,
        state_ref: label(&equation, &grid),
        sqrt_w,
    })
}

fn pos_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(e)
    }
}

/// The `k` algebraically smallest eigenpairs, ascending.
pub fn eig_smallest(op: &SectorOperator, k: usize) -> Result<Vec<Eigenpair>> {
    if k == 0 || k > MAX_EIGENPAIRS {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={MAX_EIGENPAIRS}")));
    }
    let nf = op.matrix.nrows();
    let eig = SymmetricEigen::try_new(op.matrix.clone(), 1e-14, 100 * nf.max(1)).ok_or_else(|| {
        Error::Eigen(format!(
            "no convergence on a {nf}x{nf} matrix (Frobenius norm {:.3e}, relative asymmetry {:.3e})",
            op.matrix.norm(),
            op.asymmetry()
        ))
    })?;
    let mut order: Vec<usize> = (0..nf).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let grid = op.potential_v.grid_arc();
    order
        .into_iter()
        .take(k)
        .map(|c| {
            let col = eig.eigenvectors.column(c);
            let mut v: Vec<f64> = (0..nf).map(|i| col[i] / op.sqrt_w[i]).collect();
            // Sign convention: the largest-magnitude entry is positive.
            let lead = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            let norm = col.norm();
            let s = lead.signum() / norm;
            v.iter_mut().for_each(|x| *x *= s);
            v.push(0.0);
            Ok(Eigenpair {
                value: eig.eigenvalues[c],
                field: RadialField::new(grid.clone(), v)?,
            })
        })
        .collect()
}

/// `|⟨a, b⟩_W| / (‖a‖_W ‖b‖_W)` over the free nodes.
pub fn correlation(grid: &RadialGrid, a: &[f64], b: &[f64]) -> f64 {
    let w = grid.volume_weights();
    let nf = grid.n_free();
    let dot = |x: &[f64], y: &[f64]| (0..nf).map(|i| w[i] * x[i] * y[i]).sum::<f64>();
    let den = (dot(a, a) * dot(b, b)).sqrt();
    if den > 0.0 {
        dot(a, b).abs() / den
    } else {
        0.0
    }
}

/// `-∂_r Q` at the nodes.
pub fn translation_profile(field: &RadialField) -> Vec<f64> {
    let mut t: Vec<f64> = field.grid().derivative(field.values()).into_iter().map(|x| -x).collect();
    *t.last_mut().unwrap() = 0.0;
    t
}

/// Sector-wise kernel verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    pub radial_kernel_trivial: bool,
    pub translation_mode_found: bool,
    pub negative_count_ell0: usize,
    /// Eigenvalue closest to zero in each sector.
    pub nearest_zero_ell0: f64,
    pub nearest_zero_ell1: f64,
    /// Correlation of the `ℓ = 1` eigenfield nearest zero with `-∂_r Q`.
    pub translation_correlation: f64,
    pub gap_tol: f64,
}

impl Nondegeneracy {
    pub fn nondegenerate(&self) -> bool {
        self.radial_kernel_trivial && self.translation_mode_found
    }
}

pub fn nondegeneracy_verdict(state: &GroundState, gap_tol: f64) -> Result<Nondegeneracy> {
    if !(gap_tol > 0.0) {
        return Err(Error::InvalidArgument("gap_tol must be positive".into()));
    }
    let ell0 = eig_smallest(&assemble_lplus(state, 0)?, MAX_EIGENPAIRS)?;
    let ell1 = eig_smallest(&assemble_lplus(state, 1)?, MAX_EIGENPAIRS)?;
    let nearest = |pairs: &[Eigenpair]| {
        pairs
            .iter()
            .min_by(|a, b| a.value.abs().total_cmp(&b.value.abs()))
            .cloned()
            .expect("at least one eigenpair")
    };
    let n0 = nearest(&ell0);
    let n1 = nearest(&ell1);
    let grid = state.grid();
    let corr = correlation(grid, n1.field.values(), &translation_profile(&state.field));
    Ok(Nondegeneracy {
        radial_kernel_trivial: n0.value.abs() >= gap_tol,
        translation_mode_found: n1.value.abs() < gap_tol && corr > TRANSLATION_CORRELATION,
        negative_count_ell0: ell0.iter().filter(|e| e.value < 0.0).count(),
        nearest_zero_ell0: n0.value,
        nearest_zero_ell1: n1.value,
        translation_correlation: corr,
        gap_tol,
    })
}

/// `sup|L₊Q + 2(p-1)(|·|^{-α} * Q^p) Q^{p-1}| / sup|2(p-1)(|·|^{-α} * Q^p) Q^{p-1}|`
/// over the free nodes; for the local model the reference is `(p-1)|Q|^{p-1}Q`.
pub fn lplus_identity_error(state: &GroundState) -> Result<f64> {
    let op = assemble_lplus(state, 0)?;
    let q = state.values();
    let lq = op.apply(q)?;
    let problem = Problem::new(state.field.grid_arc(), state.equation)?;
    let p = state.equation.p();
    let nl = problem.nonlinearity(q);
    let nf = q.len() - 1;
    let target: Vec<f64> = match state.equation {
        Equation::Choquard(_) => nl.iter().map(|x| -2.0 * (p - 1.0) * x).collect(),
        Equation::Model { .. } => nl.iter().map(|x| -(p - 1.0) * x).collect(),
    };
    let scale = target[..nf].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let err = (0..nf).map(|i| (lq[i] - target[i]).abs()).fold(0.0, f64::max);
    Ok(if scale > 0.0 { err / scale } else { err })
}
