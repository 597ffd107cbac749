use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::problem::Problem;
use super::{Decay, Equation, Method};
use crate::error::{Error, Result};
use crate::grid::{sphere_area, GridSpec, RadialField, RadialGrid};

/// Norms of a radial function on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Norms {
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "grad_L2")]
    pub grad_l2: f64,
    #[serde(rename = "H1")]
    pub h1: f64,
    #[serde(rename = "Linf")]
    pub linf: f64,
}

/// `‖u‖_{L²}`, `‖∇u‖_{L²}`, `‖u‖_{H¹}`, `‖u‖_{L∞}` of the nodal interpolant.
pub fn norms_of(grid: &RadialGrid, values: &[f64]) -> Norms {
    let area = sphere_area(grid.d());
    let mass: f64 = grid
        .volume_weights()
        .iter()
        .zip(values)
        .map(|(w, v)| w * v * v)
        .sum::<f64>()
        * area;
    let grad = gradient_energy(grid, values) * area;
    Norms {
        l2: mass.sqrt(),
        grad_l2: grad.max(0.0).sqrt(),
        h1: (mass + grad).max(0.0).sqrt(),
        linf: values.iter().fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// `∫_0^{r_max} |u'|² r^{d-1} dr` of the interpolant.
pub(crate) fn gradient_energy(grid: &RadialGrid, values: &[f64]) -> f64 {
    let m = grid.order() + grid.d() / 2 + 2;
    let mut total = 0.0;
    for e in 0..grid.elements().len() {
        let (pts, wts) = grid.element_quadrature(e, m);
        for (r, w) in pts.iter().zip(&wts) {
            let du: f64 = grid
                .element_nodes(e)
                .zip(grid.basis_deriv_at(e, *r))
                .map(|(g, b)| values[g] * b)
                .sum();
            total += w * du * du;
        }
    }
    total
}

/// A converged radial profile with solver metadata.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub equation: Equation,
    pub field: RadialField,
    /// Strong-form residual at the free nodes (sup norm).
    pub residual: f64,
    pub iterations: usize,
    pub tol: f64,
    pub method: Method,
    pub decay: Option<Decay>,
    pub norms: Norms,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    #[serde(flatten)]
    equation: Equation,
    grid: GridSpec,
    residual: f64,
    iterations: usize,
    tol: f64,
    method: Method,
    decay: Option<Decay>,
    norms: Norms,
    profile: String,
}

impl GroundState {
    pub(crate) fn assemble(
        problem: &Problem,
        field: RadialField,
        residual: f64,
        iterations: usize,
        tol: f64,
        method: Method,
    ) -> Result<Self> {
        let norms = norms_of(&problem.grid, field.values());
        Ok(Self {
            equation: problem.equation,
            field,
            residual,
            iterations,
            tol,
            method,
            decay: None,
            norms,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        self.field.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.field.values()
    }

    pub fn d(&self) -> usize {
        self.equation.d()
    }

    /// Positive at every free node.
    pub fn is_positive(&self) -> bool {
        let v = self.values();
        v[..v.len() - 1].iter().all(|&x| x > 0.0)
    }

    pub fn is_converged(&self) -> bool {
        self.residual <= self.tol
    }

    /// Writes `<stem>.json` and `<stem>.csv` into `dir`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let csv_name = format!("{stem}.csv");
        let csv_path = dir.join(&csv_name);
        self.field.write_csv(&csv_path)?;
        let doc = StateDoc {
            equation: self.equation,
            grid: self.grid().spec(),
            residual: self.residual,
            iterations: self.iterations,
            tol: self.tol,
            method: self.method,
            decay: self.decay,
            norms: self.norms,
            profile: csv_name,
        };
        let json_path = dir.join(format!("{stem}.json"));
        fs::write(&json_path, serde_json::to_vec_pretty(&doc)?)?;
        Ok((json_path, csv_path))
    }

    /// Reads a state written by [`GroundState::save`]; the profile CSV is
    /// resolved relative to the JSON file.
    pub fn load(json_path: &Path) -> Result<Self> {
        let bytes = fs::read(json_path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read state {}: {e}", json_path.display())))?;
        let doc: StateDoc = serde_json::from_slice(&bytes)?;
        if doc.grid.d != doc.equation.d() {
            return Err(Error::GridMismatch);
        }
        let grid = doc.grid.build()?;
        let base = json_path.parent().unwrap_or_else(|| Path::new("."));
        let field = RadialField::read_csv(grid, &base.join(&doc.profile))?;
        Ok(Self {
            equation: doc.equation,
            field,
            residual: doc.residual,
            iterations: doc.iterations,
            tol: doc.tol,
            method: doc.method,
            decay: doc.decay,
            norms: doc.norms,
        })
    }
}
