use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    assemble_lplus_for, correlation, eig_smallest, lplus_identity_error, nondegeneracy_verdict,
    translation_profile, Eigenpair, Nondegeneracy,
};
use crate::error::Result;
use crate::solver::GroundState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSummary {
    pub ell: i64,
    pub eigenvalues: Vec<f64>,
    pub nearest_zero: f64,
    /// Correlation of each listed eigenfield with `-∂_r Q`.
    pub correlations: Vec<f64>,
    pub asymmetry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub state_ref: String,
    pub sectors: Vec<SectorSummary>,
    /// Present only for converged states.
    pub verdict: Option<Nondegeneracy>,
    pub lplus_identity_error: Option<f64>,
}

/// Low spectrum of the requested sectors plus, for converged states, the
/// kernel verdict. Eigenpairs are returned alongside for optional export.
pub fn spectral_report(
    state: &GroundState,
    ells: &[i64],
    k: usize,
    gap_tol: f64,
) -> Result<(SpectralReport, Vec<(i64, Vec<Eigenpair>)>)> {
    let translation = translation_profile(&state.field);
    let mut sectors = Vec::new();
    let mut pairs = Vec::new();
    let mut state_ref = String::new();
    for &ell in ells {
        let op = assemble_lplus_for(state.equation, &state.field, ell)?;
        state_ref = op.state_ref.clone();
        let eig = eig_smallest(&op, k)?;
        let nearest_zero = eig
            .iter()
            .map(|e| e.value)
            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(f64::NAN);
        sectors.push(SectorSummary {
            ell,
            eigenvalues: eig.iter().map(|e| e.value).collect(),
            nearest_zero,
            correlations: eig
                .iter()
                .map(|e| correlation(state.grid(), e.field.values(), &translation))
                .collect(),
            asymmetry: op.asymmetry(),
        });
        pairs.push((ell, eig));
    }
    let converged = state.is_converged() && state.d() > 1;
    let verdict = if converged { Some(nondegeneracy_verdict(state, gap_tol)?) } else { None };
    let lplus_identity_error = if state.is_converged() { Some(lplus_identity_error(state)?) } else { None };
    Ok((
        SpectralReport {
            state_ref,
            sectors,
            verdict,
            lplus_identity_error,
        },
        pairs,
    ))
}

/// Columns `r, xi_0, ..., xi_{k-1}`.
pub fn write_eigenfields_csv(path: &Path, pairs: &[Eigenpair]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["r".to_string()];
    header.extend((0..pairs.len()).map(|i| format!("xi_{i}")));
    w.write_record(&header)?;
    if let Some(first) = pairs.first() {
        let grid = first.field.grid();
        for (i, r) in grid.nodes().iter().enumerate() {
            let mut row = vec![format!("{r:e}")];
            row.extend(pairs.iter().map(|p| format!("{:e}", p.field.values()[i])));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
