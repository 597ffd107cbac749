//! Newton continuation in `(α, p)` and parameter sweeps.
//!
//! The continued unknown is a root of the fixed-point map
//! `F(u) = u - (-Δ + 1)^{-1}[(|·|^{-α} * u^p) u^{p-1}]`, whose derivative is
//! `(-Δ + 1)^{-1} L₊`. Newton corrections therefore solve `L₊ δ = -(-Δ + 1) F`.

mod io;
mod sweep;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

pub use io::{read_manifest, run_sweep, write_sweep_csv, SweepManifest, SWEEP_CSV, SWEEP_MANIFEST};
pub use sweep::{
    distances, geometric_path, sweep, sweep_points, Distances, SpectralSummary, SweepMode, SweepOptions,
    SweepRecord,
};

use crate::error::{Error, Result};
use crate::grid::{ChoquardParams, RadialField};
use crate::solver::problem::Problem;
use crate::solver::{fit_decay, Equation, GroundState, Method};
use crate::spectrum::assemble_lplus_for;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContinuationOptions {
    /// Sup norm of the fixed-point map `F` accepted at each increment.
    pub newton_tol: f64,
    /// Strong-form residual the final state must reach.
    pub tol: f64,
    pub max_newton: usize,
    /// How often a failing increment may be halved.
    pub max_bisections: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            newton_tol: 1e-12,
            tol: 1e-10,
            max_newton: 30,
            max_bisections: 6,
        }
    }
}

/// Newton history of one accepted increment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub alpha: f64,
    pub p: f64,
    /// `‖F‖∞` before every Newton step and after the last one.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ContinuationTrace {
    pub steps: Vec<StepTrace>,
    pub bisections: usize,
}

impl ContinuationTrace {
    /// Largest ratio of consecutive residuals once the residual is below
    /// `entry` and the successor is above `floor`.
    pub fn worst_tail_ratio(&self, entry: f64, floor: f64) -> Option<f64> {
        self.steps
            .iter()
            .flat_map(|s| s.residuals.windows(2))
            .filter(|w| w[0] <= entry && w[1] > floor)
            .map(|w| w[1] / w[0])
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
    }
}

pub fn newton_continue(base: &GroundState, target: ChoquardParams, steps: usize) -> Result<GroundState> {
    newton_continue_traced(base, target, steps, &ContinuationOptions::default()).map(|(s, _)| s)
}

/// Follows the straight segment from `base`'s parameters to `target` in
/// `steps` equal increments; a failing increment is bisected.
pub fn newton_continue_traced(
    base: &GroundState,
    target: ChoquardParams,
    steps: usize,
    opts: &ContinuationOptions,
) -> Result<(GroundState, ContinuationTrace)> {
    let start = base
        .equation
        .params()
        .ok_or_else(|| Error::InvalidArgument("continuation needs a Choquard state".into()))?;
    if target.d != start.d {
        return Err(Error::InvalidArgument("target dimension differs from the base state".into()));
    }
    if !base.is_converged() {
        return Err(Error::InvalidArgument("base state is not converged".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    Equation::Choquard(target).check_window()?;
    if target == start {
        return Ok((base.clone(), ContinuationTrace::default()));
    }
    let grid = base.field.grid_arc();
    let mut trace = ContinuationTrace::default();
    let mut u = base.values().to_vec();
    let mut done = 0.0f64;
    let mut good = start;
    let mut increment = 1.0 / steps as f64;
    let mut depth = 0;
    let mut total_iterations = 0;
    while done < 1.0 {
        let next = (done + increment).min(1.0);
        let at = ChoquardParams {
            d: start.d,
            alpha: start.alpha + next * (target.alpha - start.alpha),
            p: start.p + next * (target.p - start.p),
        };
        let at = if next == 1.0 { target } else { at };
        match newton_solve(Equation::Choquard(at), &grid, &u, opts)? {
            Some((v, residuals)) => {
                total_iterations += residuals.len() - 1;
                trace.steps.push(StepTrace {
                    alpha: at.alpha,
                    p: at.p,
                    residuals,
                });
                u = v;
                done = next;
                good = at;
            }
            None => {
                if depth >= opts.max_bisections {
                    return Err(Error::NewtonDivergence {
                        alpha: at.alpha,
                        p: at.p,
                        good_alpha: good.alpha,
                        good_p: good.p,
                    });
                }
                depth += 1;
                trace.bisections += 1;
                increment *= 0.5;
            }
        }
    }
    let equation = Equation::Choquard(target);
    let problem = Problem::new(grid.clone(), equation)?;
    let residual = problem.residual(&u);
    let field = RadialField::new(grid, u)?;
    let mut state = GroundState::assemble(&problem, field, residual, total_iterations, opts.tol, Method::Newton)?;
    state.decay = fit_decay(&state).ok();
    Ok((state, trace))
}

/// `‖F(u)‖∞` over the free nodes.
pub fn fixed_point_residual(state: &GroundState) -> Result<f64> {
    let problem = Problem::new(state.field.grid_arc(), state.equation)?;
    Ok(fixed_point(&problem, state.values()).1)
}

/// `(S + W) u - W N(u)` on the free nodes and `‖F‖∞ = ‖(S + W)^{-1}(...)‖∞`.
fn fixed_point(problem: &Problem, u: &[f64]) -> (Vec<f64>, f64) {
    let au = problem.apply_shifted(u);
    let nl = problem.nonlinearity(u);
    let w = problem.weights();
    let g: Vec<f64> = au.iter().enumerate().map(|(i, a)| a - w[i] * nl[i]).collect();
    let f = problem.solve_shifted(&g);
    let sup = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (g, sup)
}

/// Damped Newton at fixed parameters; `None` when it fails to reach the tolerances.
fn newton_solve(
    equation: Equation,
    grid: &std::sync::Arc<crate::grid::RadialGrid>,
    start: &[f64],
    opts: &ContinuationOptions,
) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let problem = Problem::new(grid.clone(), equation)?;
    let nf = problem.nf();
    let mut u = start.to_vec();
    let (mut g, mut res) = fixed_point(&problem, &u);
    let mut history = vec![res];
    for _ in 0..opts.max_newton {
        if !res.is_finite() {
            return Ok(None);
        }
        if res <= opts.newton_tol && problem.residual(&u) <= opts.tol {
            return Ok(Some((u, history)));
        }
        let field = RadialField::new(grid.clone(), u.clone())?;
        let op = assemble_lplus_for(equation, &field, 0)?;
        let sw: Vec<f64> = grid.volume_weights()[..nf].iter().map(|w| w.sqrt()).collect();
        let rhs = DVector::from_iterator(nf, (0..nf).map(|i| -g[i] / sw[i]));
        let Some(y) = op.matrix.clone().lu().solve(&rhs) else {
            return Ok(None);
        };
        let delta: Vec<f64> = (0..nf).map(|i| y[i] / sw[i]).collect();
        // Halve the step while the residual grows.
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let mut trial = u.clone();
            for i in 0..nf {
                trial[i] += t * delta[i];
            }
            let (g_t, r_t) = fixed_point(&problem, &trial);
            if r_t.is_finite() && (r_t < res || r_t <= opts.newton_tol) {
                u = trial;
                g = g_t;
                res = r_t;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        history.push(res);
        if !accepted {
            let done = res <= opts.newton_tol && problem.residual(&u) <= opts.tol;
            return Ok(done.then_some((u, history)));
        }
    }
    let done = res <= opts.newton_tol && problem.residual(&u) <= opts.tol;
    Ok(done.then_some((u, history)))
}
