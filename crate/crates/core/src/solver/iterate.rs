use std::sync::Arc;

use super::problem::Problem;
use super::{fit_decay, Equation, GroundState, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::grid::{ChoquardParams, RadialField, RadialGrid};

/// Iterations without a new best residual before the scheme is declared stalled.
const STALL_WINDOW: usize = 300;

pub fn solve_choquard(
    params: ChoquardParams,
    grid: &Arc<RadialGrid>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    solve(Equation::Choquard(params), grid, opts)
}

pub fn solve_model(d: usize, p: f64, grid: &Arc<RadialGrid>, opts: &SolverOptions) -> Result<GroundState> {
    solve(Equation::Model { d, p }, grid, opts)
}

/// Solves from the Gaussian initial guess `e^{-r²/2}`.
pub fn solve(equation: Equation, grid: &Arc<RadialGrid>, opts: &SolverOptions) -> Result<GroundState> {
    let guess: Vec<f64> = grid.nodes().iter().map(|r| (-0.5 * r * r).exp()).collect();
    solve_from(equation, grid, &guess, opts)
}

/// Solves from a caller-supplied nodal initial guess.
pub fn solve_from(
    equation: Equation,
    grid: &Arc<RadialGrid>,
    initial: &[f64],
    opts: &SolverOptions,
) -> Result<GroundState> {
    equation.check_window()?;
    if initial.len() != grid.len() {
        return Err(Error::InvalidArgument("initial guess has the wrong length".into()));
    }
    if opts.method == Method::Newton {
        return Err(Error::InvalidArgument("Newton steps are only available through continuation".into()));
    }
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidArgument("need tol > 0 and max_iter >= 1".into()));
    }
    let problem = Problem::new(Arc::clone(grid), equation)?;
    let mut start = initial.to_vec();
    *start.last_mut().unwrap() = 0.0;

    let first = iterate(&problem, &start, opts.method, opts.max_iter, opts);
    let (u, residual, iterations, method) = match first {
        Outcome::Converged { u, residual, iterations } => (u, residual, iterations, opts.method),
        Outcome::Failed { best, residual, iterations } => {
            let alternative = match opts.method {
                Method::GradientFlow => Method::Petviashvili,
                _ => Method::GradientFlow,
            };
            let budget = opts.max_iter.saturating_sub(iterations);
            if !opts.fallback || budget == 0 {
                return Err(Error::NonConvergence { iterations, residual });
            }
            let from = best.unwrap_or(start);
            match iterate(&problem, &from, alternative, budget, opts) {
                Outcome::Converged {
                    u,
                    residual,
                    iterations: more,
                } => (u, residual, iterations + more, alternative),
                Outcome::Failed {
                    residual: r2,
                    iterations: more,
                    ..
                } => {
                    return Err(Error::NonConvergence {
                        iterations: iterations + more,
                        residual: r2.min(residual),
                    })
                }
            }
        }
    };
    let field = RadialField::new(Arc::clone(grid), u)?;
    GroundState::assemble(&problem, field, residual, iterations, opts.tol, method)
        .map(|mut s| {
            s.decay = fit_decay(&s).ok();
            s
        })
}

enum Outcome {
    Converged {
        u: Vec<f64>,
        residual: f64,
        iterations: usize,
    },
    Failed {
        best: Option<Vec<f64>>,
        residual: f64,
        iterations: usize,
    },
}

/// Rescales `u` onto the discrete Nehari set `uᵀ(S+W)u = uᵀ W N(u)`.
pub(crate) fn nehari_project(problem: &Problem, u: &mut [f64]) -> bool {
    let (lhs, rhs) = problem.nehari_parts(u);
    if !(lhs > 0.0 && rhs > 0.0 && lhs.is_finite() && rhs.is_finite()) {
        return false;
    }
    let t = (lhs / rhs).powf(1.0 / (problem.homogeneity() - 1.0));
    u.iter_mut().for_each(|v| *v *= t);
    true
}

fn iterate(problem: &Problem, start: &[f64], method: Method, budget: usize, opts: &SolverOptions) -> Outcome {
    let sigma = problem.homogeneity();
    let gamma = (sigma + 1.0) / sigma;
    let w = problem.weights().to_vec();
    let mut u = start.to_vec();
    if !nehari_project(problem, &mut u) {
        return Outcome::Failed {
            best: None,
            residual: f64::INFINITY,
            iterations: 0,
        };
    }
    let mut best_res = f64::INFINITY;
    let mut best_u: Option<Vec<f64>> = None;
    let mut since_best = 0;
    for it in 0..budget {
        let res = problem.residual(&u);
        if !res.is_finite() {
            break;
        }
        if res <= opts.tol {
            return Outcome::Converged {
                u,
                residual: res,
                iterations: it,
            };
        }
        if res < best_res {
            best_res = res;
            best_u = Some(u.clone());
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > STALL_WINDOW {
                return Outcome::Failed {
                    best: best_u,
                    residual: best_res,
                    iterations: it,
                };
            }
        }
        let nu = problem.nonlinearity(&u);
        let rhs: Vec<f64> = nu.iter().zip(&w).map(|(a, b)| a * b).collect();
        let v = problem.solve_shifted(&rhs);
        match method {
            Method::Petviashvili | Method::Newton => {
                let (lhs, nl) = problem.nehari_parts(&u);
                let m = (lhs / nl).powf(gamma);
                if !m.is_finite() {
                    break;
                }
                u = v.into_iter().map(|x| m * x).collect();
            }
            Method::GradientFlow => {
                let tau = opts.flow_step;
                u = u.iter().zip(&v).map(|(a, b)| (1.0 - tau) * a + tau * b).collect();
                if !nehari_project(problem, &mut u) {
                    break;
                }
            }
        }
    }
    let res = problem.residual(&u);
    if res <= opts.tol {
        return Outcome::Converged {
            u,
            residual: res,
            iterations: budget,
        };
    }
    Outcome::Failed {
        best: best_u,
        residual: best_res.min(res),
        iterations: budget,
    }
}
