//! Radial positive ground states of the Choquard equation and of the local
//! model `-Δu + u = |u|^{p-1} u`.

mod decay;
mod iterate;
pub(crate) mod problem;
pub(crate) mod state;

use serde::{Deserialize, Serialize};

pub use decay::{fit_decay, Decay};
pub use iterate::{solve, solve_choquard, solve_from, solve_model};
pub use state::{norms_of, GroundState, Norms};

use crate::error::{Error, Result};
use crate::grid::ChoquardParams;

/// Which equation a state solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum Equation {
    Choquard(ChoquardParams),
    Model { d: usize, p: f64 },
}

impl Equation {
    pub fn d(&self) -> usize {
        match self {
            Equation::Choquard(q) => q.d,
            Equation::Model { d, .. } => *d,
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            Equation::Choquard(q) => q.p,
            Equation::Model { p, .. } => *p,
        }
    }

    pub fn params(&self) -> Option<ChoquardParams> {
        match self {
            Equation::Choquard(q) => Some(*q),
            Equation::Model { .. } => None,
        }
    }

    /// Range check for the existence theory each solver relies on.
    pub fn check_window(&self) -> Result<()> {
        match *self {
            Equation::Choquard(q) => {
                ChoquardParams::new(q.d, q.alpha, q.p)?;
                if q.in_window_para2() {
                    Ok(())
                } else {
                    Err(Error::ParameterWindow(format!(
                        "(d, alpha, p) = ({}, {}, {}) violates 1/2 >= 1/p > (d-2)/(2d-alpha)",
                        q.d, q.alpha, q.p
                    )))
                }
            }
            Equation::Model { d, p } => {
                if d < 1 {
                    return Err(Error::InvalidArgument("dimension d must be >= 1".into()));
                }
                let upper = if d >= 3 {
                    (d as f64 + 2.0) / (d as f64 - 2.0)
                } else {
                    f64::INFINITY
                };
                if p > 1.0 && p < upper && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::ParameterWindow(format!(
                        "model exponent p = {p} outside (1, {upper})"
                    )))
                }
            }
        }
    }
}

/// Fixed-point scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Renormalized fixed point with a power-law stabilizing multiplier.
    Petviashvili,
    /// Preconditioned gradient flow with Nehari rescaling.
    GradientFlow,
    /// Damped Newton; produced by continuation, not accepted by the solver.
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
    /// Retry with the gradient flow when the primary method stalls.
    pub fallback: bool,
    /// Step of the gradient flow.
    pub flow_step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
            method: Method::Petviashvili,
            fallback: true,
            flow_step: 0.5,
        }
    }
}

#[cfg(test)]
mod tests;
