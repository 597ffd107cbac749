use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{sphere_area, RadialField};
use crate::solver::problem::Problem;
use crate::solver::state::gradient_energy;
use crate::solver::{Equation, GroundState};

/// Global functional identities evaluated on a profile.
///
/// With `G = ‖∇u‖²`, `M = ‖u‖²` and `E` the nonlinear energy
/// (`∫(|·|^{-α} * |u|^p)|u|^p` for Choquard, `∫|u|^{p+1}` for the model):
///
/// * `func01`: `G + M = E`
/// * `func02`: `(d-2)/2 G + d/2 M = c E` (Pohozaev)
/// * `func03`: `G = a E`
/// * `func04`: `M = b E`
///
/// Absolute residuals are stored alongside residuals relative to `max(G, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevReport {
    pub nonlocal_energy: f64,
    pub grad_sq: f64,
    pub mass_sq: f64,
    pub residual_func01: f64,
    pub residual_func02: f64,
    pub residual_func03: f64,
    pub residual_func04: f64,
    pub relative: [f64; 4],
    /// `None` for the zero field.
    pub ratio_grad_mass: Option<f64>,
    pub predicted_ratio: f64,
}

impl PohozaevReport {
    pub fn max_relative(&self) -> f64 {
        self.relative.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn ratio_error(&self) -> Option<f64> {
        self.ratio_grad_mass.map(|r| (r - self.predicted_ratio).abs())
    }
}

/// Coefficients `(c, a, b)` of `func02`–`func04` and the predicted `G/M`.
fn coefficients(eq: &Equation) -> (f64, f64, f64, f64) {
    match *eq {
        Equation::Choquard(q) => {
            let d = q.d as f64;
            let hls = 2.0 * d - q.alpha;
            let two_p = 2.0 * q.p;
            (hls / two_p, (q.p * d - hls) / two_p, (hls - q.p * (d - 2.0)) / two_p, q.predicted_ratio())
        }
        Equation::Model { d, p } => {
            let d = d as f64;
            let two = 2.0 * (p + 1.0);
            let a = d * (p - 1.0) / two;
            let b = ((d + 2.0) - p * (d - 2.0)) / two;
            (d / (p + 1.0), a, b, a / b)
        }
    }
}

pub fn pohozaev_report(state: &GroundState) -> Result<PohozaevReport> {
    pohozaev_for(state.equation, &state.field)
}

/// The same identities for an arbitrary profile, e.g. an injected exact solution.
pub fn pohozaev_for(equation: Equation, field: &RadialField) -> Result<PohozaevReport> {
    let grid = field.grid_arc();
    let problem = Problem::new(grid.clone(), equation)?;
    let u = field.values();
    let area = sphere_area(grid.d());
    let w = grid.volume_weights();
    let p = equation.p();
    let grad_sq = area * gradient_energy(&grid, u);
    let mass_sq = area * w.iter().zip(u).map(|(w, v)| w * v * v).sum::<f64>();
    let energy = area
        * match problem.potential(u) {
            Some(pot) => (0..u.len()).map(|i| w[i] * pot[i] * u[i].abs().powf(p)).sum::<f64>(),
            None => (0..u.len()).map(|i| w[i] * u[i].abs().powf(p + 1.0)).sum::<f64>(),
        };
    let d = grid.d() as f64;
    let (c, a, b, predicted) = coefficients(&equation);
    let r1 = (grad_sq + mass_sq - energy).abs();
    let r2 = ((d - 2.0) / 2.0 * grad_sq + d / 2.0 * mass_sq - c * energy).abs();
    let r3 = (grad_sq - a * energy).abs();
    let r4 = (mass_sq - b * energy).abs();
    let scale = grad_sq.max(mass_sq);
    let rel = |x: f64| if scale > 0.0 { x / scale } else { 0.0 };
    Ok(PohozaevReport {
        nonlocal_energy: energy,
        grad_sq,
        mass_sq,
        residual_func01: r1,
        residual_func02: r2,
        residual_func03: r3,
        residual_func04: r4,
        relative: [rel(r1), rel(r2), rel(r3), rel(r4)],
        ratio_grad_mass: (mass_sq > 0.0).then(|| grad_sq / mass_sq),
        predicted_ratio: predicted,
    })
}
