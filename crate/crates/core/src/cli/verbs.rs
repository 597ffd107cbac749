use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use super::{CommonArgs, ModeArg, RieszArgs, SolveArgs, SpectrumArgs, SweepArgs, VerifyArgs};
use super::{EXIT_NUMERICAL, EXIT_OK};
use crate::continuation::{geometric_path, run_sweep, SweepMode, SweepOptions, SWEEP_CSV};
use crate::diagnostics::{apriori_report, assumption12_feasible, fit_decay, pohozaev_report};
use crate::error::{Error, Result};
use crate::grid::RadialField;
use crate::riesz::{riesz_radial, sector_potential};
use crate::solver::problem::Problem;
use crate::solver::{self, norms_of, Equation, GroundState};
use crate::spectrum::{spectral_report, write_eigenfields_csv};

/// Loads the configuration file (if any) and applies flag overrides.
fn resolve(c: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let pr = &mut cfg.problem;
    if let Some(d) = c.d {
        pr.d = d;
    }
    if let Some(a) = c.alpha {
        pr.alpha = a;
    }
    if let Some(p) = c.p {
        pr.p = p;
    }
    if c.model {
        pr.model = true;
    }
    let g = &mut cfg.grid;
    if let Some(v) = c.r_max {
        g.r_max = v;
    }
    if let Some(v) = c.n {
        g.n = v;
    }
    if let Some(v) = c.stretch {
        g.stretch = v;
    }
    if let Some(v) = c.order {
        g.order = v;
    }
    if let Some(v) = c.tol {
        cfg.solver.tol = v;
    }
    if let Some(v) = c.max_iter {
        cfg.solver.max_iter = v;
    }
    if let Some(m) = c.method {
        cfg.solver.method = m.into();
    }
    if let Some(dir) = &c.out_dir {
        cfg.output.dir = dir.clone();
    }
    Ok(cfg)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_vec_pretty(value)?)?;
    Ok(path)
}

pub fn solve(a: SolveArgs) -> Result<i32> {
    let mut cfg = resolve(&a.common)?;
    if let Some(stem) = a.stem {
        cfg.output.stem = stem;
    }
    let equation = cfg.problem.equation()?;
    let grid = cfg.grid.spec(equation.d()).build()?;
    let state = solver::solve(equation, &grid, &cfg.solver)?;
    let (json, _) = state.save(&cfg.output.dir, &cfg.output.stem)?;
    write_json(&cfg.output.dir, &format!("{}.config.json", cfg.output.stem), &cfg)?;
    println!(
        "converged: residual {:.3e} after {} iterations ({:?}); H1 = {:.10}; wrote {}",
        state.residual,
        state.iterations,
        state.method,
        state.norms.h1,
        json.display()
    );
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    value: f64,
    limit: String,
    /// `None` when the check does not apply.
    pass: Option<bool>,
}

fn check(name: &str, value: f64, limit: &str, pass: Option<bool>) -> Check {
    Check {
        name: name.into(),
        value,
        limit: limit.into(),
        pass,
    }
}

const IDENTITY_TOL: f64 = 1e-4;
const RATIO_TOL: f64 = 1e-3;
const DECAY_FLOOR: f64 = 0.48;

pub fn verify(a: VerifyArgs) -> Result<i32> {
    let mut state = GroundState::load(&a.state)?;
    let problem = Problem::new(state.field.grid_arc(), state.equation)?;
    state.residual = problem.residual(state.values());
    state.norms = norms_of(state.grid(), state.values());
    let mut checks = vec![
        check("residual", state.residual, &format!("<= {:.0e}", state.tol), Some(state.is_converged())),
        check(
            "positive",
            state.values()[..state.values().len() - 1].iter().cloned().fold(f64::INFINITY, f64::min),
            "> 0",
            Some(state.is_positive()),
        ),
    ];
    let poh = pohozaev_report(&state)?;
    for (i, r) in poh.relative.iter().enumerate() {
        checks.push(check(&format!("identity func0{}", i + 1), *r, "<= 1e-4", Some(*r <= IDENTITY_TOL)));
    }
    let ratio_err = poh.ratio_error().unwrap_or(f64::INFINITY);
    checks.push(check("ratio grad/mass", ratio_err, "<= 1e-3", Some(ratio_err <= RATIO_TOL)));
    let choquard_p2 = matches!(state.equation, Equation::Choquard(q) if q.p >= 2.0);
    match fit_decay(&state) {
        Ok(fit) => {
            let (limit, ok) = if choquard_p2 {
                (">= 0.48", fit.gamma >= DECAY_FLOOR)
            } else {
                ("> 0", fit.gamma > 0.0)
            };
            checks.push(check("decay rate", fit.gamma, limit, Some(ok)));
        }
        Err(_) => checks.push(check("decay rate", f64::NAN, "fit reliable", Some(false))),
    }
    let ap = apriori_report(&state, &[2.0])?;
    checks.push(check(
        "decay certificate",
        ap.decay_certificate,
        "finite",
        Some(ap.decay_certificate.is_finite()),
    ));
    match state.equation {
        Equation::Choquard(q) if q.p >= 2.0 && q.in_window_para3() => {
            let rep = assumption12_feasible(&q);
            checks.push(check("symmetry exponents", rep.feasible as u8 as f64, "feasible", Some(rep.feasible)));
        }
        _ => checks.push(check("symmetry exponents", f64::NAN, "n/a", None)),
    }
    println!("{:<22} {:>12} {:>10}  result", "check", "value", "limit");
    for c in &checks {
        let tag = match c.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        println!("{:<22} {:>12.4e} {:>10}  {tag}", c.name, c.value, c.limit);
    }
    let all = checks.iter().all(|c| c.pass != Some(false));
    if let Some(dir) = &a.out_dir {
        write_json(dir, "verify.json", &checks)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_NUMERICAL })
}

pub fn spectrum(a: SpectrumArgs) -> Result<i32> {
    let cfg = resolve(&a.common)?;
    let state = if a.zero_field {
        let equation = cfg.problem.equation()?;
        let grid = cfg.grid.spec(equation.d()).build()?;
        GroundState {
            equation,
            field: RadialField::zeros(grid.clone()),
            residual: f64::INFINITY,
            iterations: 0,
            tol: cfg.solver.tol,
            method: cfg.solver.method,
            decay: None,
            norms: Default::default(),
        }
    } else {
        let path = a
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("need a state file or --zero-field".into()))?;
        GroundState::load(path)?
    };
    let (report, pairs) = spectral_report(&state, &a.ell, a.k, a.gap_tol)?;
    let dir = &cfg.output.dir;
    let path = write_json(dir, "spectrum.json", &report)?;
    if a.dump_eigenfields {
        for (ell, eig) in &pairs {
            write_eigenfields_csv(&dir.join(format!("spectrum_ell{ell}.csv")), eig)?;
        }
    }
    for s in &report.sectors {
        let shown: Vec<String> = s.eigenvalues.iter().map(|v| format!("{v:.6e}")).collect();
        println!("ell = {}: {}", s.ell, shown.join(" "));
    }
    if let Some(v) = &report.verdict {
        println!(
            "radial kernel trivial: {}; translation mode found: {}; negative ell=0 eigenvalues: {}",
            v.radial_kernel_trivial, v.translation_mode_found, v.negative_count_ell0
        );
    }
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

pub fn sweep(a: SweepArgs) -> Result<i32> {
    let cfg = resolve(&a.common)?;
    let d = cfg.problem.d;
    let sc = &cfg.sweep;
    let points: Vec<(f64, f64)> = if let Some(count) = a.geometric {
        geometric_path(d, a.delta, count)
    } else if !a.alphas.is_empty() || !a.ps.is_empty() {
        a.alphas.iter().flat_map(|&x| a.ps.iter().map(move |&p| (x, p))).collect()
    } else if let Some((count, delta)) = sc.geometric {
        geometric_path(d, delta, count)
    } else {
        sc.alphas.iter().flat_map(|&x| sc.ps.iter().map(move |&p| (x, p))).collect()
    };
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty parameter lattice".into()));
    }
    let mode = match a.mode {
        Some(ModeArg::Fresh) => SweepMode::Fresh,
        Some(ModeArg::Continued) => SweepMode::Continued { steps: a.steps },
        None => sc.mode,
    };
    let opts = SweepOptions {
        solver: cfg.solver,
        mode,
        spectra: a.spectra || sc.spectra,
        jobs: a.jobs.max(1),
    };
    let manifest = run_sweep(&cfg.output.dir, d, &points, cfg.grid.spec(d), &opts, a.resume)?;
    let failed = manifest.records.iter().filter(|r| !r.converged).count();
    println!(
        "{} points, {} not converged; wrote {}",
        manifest.records.len(),
        failed,
        cfg.output.dir.join(SWEEP_CSV).display()
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_NUMERICAL })
}

/// Reads `r,value` rows with a header line, sorted by `r`.
fn read_profile(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let get = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("row {i}: expected two numeric columns")))
        };
        rows.push((get(0)?, get(1)?));
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("profile has no rows".into()));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(rows)
}

/// Piecewise-linear interpolation; constant below the first sample, zero past the last.
fn interpolate(rows: &[(f64, f64)], r: f64) -> f64 {
    let k = rows.partition_point(|(x, _)| *x <= r);
    if k == 0 {
        return rows[0].1;
    }
    if k == rows.len() {
        let last = rows[rows.len() - 1];
        return if r == last.0 { last.1 } else { 0.0 };
    }
    let (x0, y0) = rows[k - 1];
    let (x1, y1) = rows[k];
    y0 + (y1 - y0) * (r - x0) / (x1 - x0)
}

pub fn riesz(a: RieszArgs) -> Result<i32> {
    let cfg = resolve(&a.common)?;
    let rows = read_profile(&a.profile)?;
    let grid = cfg.grid.spec(cfg.problem.d).build()?;
    let f = RadialField::from_fn(grid.clone(), |r| interpolate(&rows, r));
    let pot = match a.ell {
        0 => riesz_radial(&grid, &f, cfg.problem.alpha)?,
        ell => sector_potential(&grid, &f, cfg.problem.alpha, ell)?,
    };
    fs::create_dir_all(&cfg.output.dir)?;
    let path = cfg.output.dir.join("riesz.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["r", "f", "potential"])?;
    for ((r, x), y) in grid.nodes().iter().zip(f.values()).zip(pot.values()) {
        w.write_record([format!("{r:.17e}"), format!("{x:.17e}"), format!("{y:.17e}")])?;
    }
    w.flush()?;
    println!("potential at r = 0: {:.12e}; wrote {}", pot.values()[0], path.display());
    Ok(EXIT_OK)
}
