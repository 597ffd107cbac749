use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton_continue;
use crate::error::{Error, Result};
use crate::grid::{ChoquardParams, RadialField, RadialGrid};
use crate::solver::{norms_of, solve_choquard, Equation, GroundState, Norms, SolverOptions};
use crate::spectrum::{assemble_lplus, eig_smallest};

/// Distances between two profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distances {
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "H1")]
    pub h1: f64,
    #[serde(rename = "Linf")]
    pub linf: f64,
}

/// Distances after interpolating both profiles onto the grid with more nodes.
pub fn distances(a: &RadialField, b: &RadialField) -> Result<Distances> {
    if a.grid().d() != b.grid().d() {
        return Err(Error::GridMismatch);
    }
    let (fine, other) = if a.grid().len() >= b.grid().len() { (a, b) } else { (b, a) };
    let grid = fine.grid();
    let diff: Vec<f64> = if fine.grid().same_as(other.grid()) {
        fine.values().iter().zip(other.values()).map(|(x, y)| x - y).collect()
    } else {
        grid.nodes()
            .iter()
            .zip(fine.values())
            .map(|(r, x)| x - other.at(*r))
            .collect()
    };
    let n = norms_of(grid, &diff);
    Ok(Distances {
        l2: n.l2,
        h1: n.h1,
        linf: n.linf,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Eigenvalue closest to zero in the `ℓ = 0` and `ℓ = 1` sectors.
    pub ell0: f64,
    pub ell1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub params: ChoquardParams,
    pub converged: bool,
    pub norms: Option<Norms>,
    pub dist_to_newtonian: Option<Distances>,
    pub spectral_summary: Option<SpectralSummary>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    pub gamma: Option<f64>,
    pub error: Option<String>,
}

/// How each lattice point is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SweepMode {
    /// Solve from the default initial guess.
    Fresh,
    /// Newton continuation from the Newtonian state in `steps` increments.
    Continued { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    pub mode: SweepMode,
    pub spectra: bool,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            mode: SweepMode::Fresh,
            spectra: false,
            jobs: 1,
        }
    }
}

/// `(d - 2 + δ 2^{-k}, 2 + δ 2^{-k})` for `k = 0..count`.
pub fn geometric_path(d: usize, delta: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|k| {
            let s = delta * 0.5f64.powi(k as i32);
            (d as f64 - 2.0 + s, 2.0 + s)
        })
        .collect()
}

/// Lattice sweep, `alphas` outer and `ps` inner.
pub fn sweep(
    d: usize,
    alphas: &[f64],
    ps: &[f64],
    grid: &Arc<RadialGrid>,
    opts: &SweepOptions,
) -> Result<Vec<SweepRecord>> {
    let points: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| ps.iter().map(move |&p| (a, p))).collect();
    sweep_points(d, &points, grid, opts)
}

/// Sweep over explicit `(α, p)` points, returned in input order.
pub fn sweep_points(
    d: usize,
    points: &[(f64, f64)],
    grid: &Arc<RadialGrid>,
    opts: &SweepOptions,
) -> Result<Vec<SweepRecord>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty parameter lattice".into()));
    }
    if grid.d() != d {
        return Err(Error::GridMismatch);
    }
    let params: Vec<ChoquardParams> = points
        .iter()
        .map(|&(a, p)| {
            let q = ChoquardParams::new(d, a, p)?;
            Equation::Choquard(q).check_window()?;
            Ok(q)
        })
        .collect::<Result<_>>()?;
    let reference = solve_choquard(ChoquardParams::newtonian(d)?, grid, &opts.solver)?;
    let work = || -> Vec<SweepRecord> {
        params
            .par_iter()
            .map(|q| point(*q, &reference, grid, opts))
            .collect()
    };
    if opts.jobs == 0 {
        Ok(work())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(pool.install(work))
    }
}

fn point(q: ChoquardParams, reference: &GroundState, grid: &Arc<RadialGrid>, opts: &SweepOptions) -> SweepRecord {
    let solved = match opts.mode {
        SweepMode::Fresh => solve_choquard(q, grid, &opts.solver),
        SweepMode::Continued { steps } => newton_continue(reference, q, steps),
    };
    let state = match solved {
        Ok(s) => s,
        Err(e) => {
            return SweepRecord {
                params: q,
                converged: false,
                norms: None,
                dist_to_newtonian: None,
                spectral_summary: None,
                residual: None,
                iterations: None,
                gamma: None,
                error: Some(e.to_string()),
            }
        }
    };
    let mut error = None;
    let dist = distances(&state.field, &reference.field).map_err(|e| error = Some(e.to_string())).ok();
    let spectral_summary = if opts.spectra {
        match summary(&state) {
            Ok(s) => Some(s),
            Err(e) => {
                error = Some(e.to_string());
                None
            }
        }
    } else {
        None
    };
    SweepRecord {
        params: q,
        converged: state.is_converged(),
        norms: Some(state.norms),
        dist_to_newtonian: dist,
        spectral_summary,
        residual: Some(state.residual),
        iterations: Some(state.iterations),
        gamma: state.decay.map(|d| d.gamma),
        error,
    }
}

fn summary(state: &GroundState) -> Result<SpectralSummary> {
    let nearest = |ell| -> Result<f64> {
        let eig = eig_smallest(&assemble_lplus(state, ell)?, 4)?;
        Ok(eig
            .iter()
            .map(|e| e.value)
            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(f64::NAN))
    };
    Ok(SpectralSummary {
        ell0: nearest(0)?,
        ell1: nearest(1)?,
    })
}
