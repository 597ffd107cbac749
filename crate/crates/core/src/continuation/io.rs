use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::{sweep_points, SweepOptions, SweepRecord};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_MANIFEST: &str = "sweep_manifest.json";

/// Everything needed to reproduce or resume a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub d: usize,
    pub grid: GridSpec,
    pub options: SweepOptions,
    pub points: Vec<(f64, f64)>,
    /// Completed points, in lattice order.
    pub records: Vec<SweepRecord>,
    pub csv: String,
    pub complete: bool,
}

pub fn read_manifest(path: &Path) -> Result<SweepManifest> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

fn opt<T: std::fmt::LowerExp>(v: Option<T>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// One row per record.
pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "alpha", "p", "converged", "L2", "grad_L2", "H1", "Linf", "dist_L2", "dist_H1", "dist_Linf",
        "eig_ell0", "eig_ell1", "residual", "iterations", "gamma", "error",
    ])?;
    for r in records {
        let n = r.norms;
        let dist = r.dist_to_newtonian;
        let spec = r.spectral_summary;
        w.write_record([
            format!("{:e}", r.params.alpha),
            format!("{:e}", r.params.p),
            r.converged.to_string(),
            opt(n.map(|n| n.l2)),
            opt(n.map(|n| n.grad_l2)),
            opt(n.map(|n| n.h1)),
            opt(n.map(|n| n.linf)),
            opt(dist.map(|x| x.l2)),
            opt(dist.map(|x| x.h1)),
            opt(dist.map(|x| x.linf)),
            opt(spec.map(|s| s.ell0)),
            opt(spec.map(|s| s.ell1)),
            opt(r.residual),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            opt(r.gamma),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_manifest(dir: &Path, m: &SweepManifest) -> Result<PathBuf> {
    let path = dir.join(SWEEP_MANIFEST);
    let tmp = dir.join(format!("{SWEEP_MANIFEST}.tmp"));
    fs::write(&tmp, serde_json::to_vec_pretty(m)?)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Runs a sweep into `dir`, checkpointing the manifest after every batch of
/// `max(jobs, 1)` points. With `resume`, records of a compatible manifest are
/// reused and only missing points are computed.
pub fn run_sweep(
    dir: &Path,
    d: usize,
    points: &[(f64, f64)],
    grid: GridSpec,
    opts: &SweepOptions,
    resume: bool,
) -> Result<SweepManifest> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty parameter lattice".into()));
    }
    fs::create_dir_all(dir)?;
    let mut done: Vec<Option<SweepRecord>> = vec![None; points.len()];
    let manifest_path = dir.join(SWEEP_MANIFEST);
    if resume && manifest_path.exists() {
        let old = read_manifest(&manifest_path)?;
        let scheduling_free = |o: &SweepOptions| SweepOptions { jobs: 0, ..*o };
        if old.d != d
            || old.grid != grid
            || scheduling_free(&old.options) != scheduling_free(opts)
            || old.points != points
        {
            return Err(Error::InvalidArgument(
                "existing manifest was written for a different configuration".into(),
            ));
        }
        for rec in old.records {
            if let Some(i) = points.iter().position(|&(a, p)| a == rec.params.alpha && p == rec.params.p) {
                done[i] = Some(rec);
            }
        }
    }
    let built = grid.build()?;
    let mut manifest = SweepManifest {
        d,
        grid,
        options: *opts,
        points: points.to_vec(),
        records: done.iter().flatten().cloned().collect(),
        csv: SWEEP_CSV.into(),
        complete: false,
    };
    let todo: Vec<usize> = (0..points.len()).filter(|&i| done[i].is_none()).collect();
    for batch in todo.chunks(opts.jobs.max(1)) {
        let pts: Vec<(f64, f64)> = batch.iter().map(|&i| points[i]).collect();
        let recs = sweep_points(d, &pts, &built, opts)?;
        for (&i, r) in batch.iter().zip(recs) {
            done[i] = Some(r);
        }
        manifest.records = done.iter().flatten().cloned().collect();
        write_manifest(dir, &manifest)?;
    }
    manifest.complete = true;
    write_sweep_csv(&dir.join(SWEEP_CSV), &manifest.records)?;
    write_manifest(dir, &manifest)?;
    Ok(manifest)
}
