use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::sphere_area;
use crate::solver::problem::Problem;
use crate::solver::GroundState;

/// Upper end of the window scanned by the decay certificate, as a fraction of `r_max`.
const CERTIFICATE_REACH: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEntry {
    pub exponent: f64,
    pub value: f64,
}

/// Discrete a-priori norms of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AprioriReport {
    /// `‖u‖_{L^q}` for each requested `q`.
    pub lebesgue: Vec<NormEntry>,
    pub h1: f64,
    /// `(‖u‖_r^r + ‖u'‖_r^r + ‖Δu‖_r^r)^{1/r}` with `Δu` taken from the equation.
    pub sobolev2: Vec<NormEntry>,
    /// `sup (|u'(s)| + u(s)) e^{s/2}` over `s <= 0.6 r_max`.
    pub decay_certificate: f64,
}

/// `r_exponents` are the requested Lebesgue and `W^{2,r}` exponents, each `>= 1`.
pub fn apriori_report(state: &GroundState, r_exponents: &[f64]) -> Result<AprioriReport> {
    if let Some(q) = r_exponents.iter().find(|q| !(**q >= 1.0 && q.is_finite())) {
        return Err(Error::InvalidArgument(format!("exponent {q} must be finite and >= 1")));
    }
    let grid = state.field.grid_arc();
    let u = state.values();
    let problem = Problem::new(grid.clone(), state.equation)?;
    let nl = problem.nonlinearity(u);
    let lap: Vec<f64> = u.iter().zip(&nl).map(|(a, b)| a - b).collect();
    let du = grid.derivative(u);
    let w = grid.volume_weights();
    let area = sphere_area(grid.d());
    let norm = |f: &[f64], q: f64| -> f64 {
        area * w.iter().zip(f).map(|(w, v)| w * v.abs().powf(q)).sum::<f64>()
    };
    let lebesgue = r_exponents
        .iter()
        .map(|&q| NormEntry {
            exponent: q,
            value: norm(u, q).powf(1.0 / q),
        })
        .collect();
    let sobolev2 = r_exponents
        .iter()
        .map(|&q| NormEntry {
            exponent: q,
            value: (norm(u, q) + norm(&du, q) + norm(&lap, q)).powf(1.0 / q),
        })
        .collect();
    let reach = CERTIFICATE_REACH * grid.r_max();
    let decay_certificate = grid
        .nodes()
        .iter()
        .enumerate()
        .take_while(|(_, s)| **s <= reach)
        .map(|(i, s)| (du[i].abs() + u[i].abs()) * (0.5 * s).exp())
        .fold(0.0, f64::max);
    Ok(AprioriReport {
        lebesgue,
        h1: state.norms.h1,
        sobolev2,
        decay_certificate,
    })
}
