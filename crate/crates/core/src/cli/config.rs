use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::continuation::SweepMode;
use crate::error::{Error, Result};
use crate::grid::{ChoquardParams, GridSpec, DEFAULT_ORDER, DEFAULT_R_MAX, DEFAULT_STRETCH};
use crate::solver::{Equation, SolverOptions};
use crate::spectrum::DEFAULT_GAP_TOL;

/// A complete, serializable description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub grid: GridConfig,
    pub solver: SolverOptions,
    pub sweep: SweepConfig,
    pub spectrum: SpectrumConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            grid: GridConfig::default(),
            solver: SolverOptions::default(),
            sweep: SweepConfig::default(),
            spectrum: SpectrumConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProblemConfig {
    pub d: usize,
    pub alpha: f64,
    pub p: f64,
    /// Solve the local model instead of the Choquard equation.
    pub model: bool,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            d: 3,
            alpha: 1.0,
            p: 2.0,
            model: false,
        }
    }
}

impl ProblemConfig {
    pub fn equation(&self) -> Result<Equation> {
        let eq = if self.model {
            Equation::Model { d: self.d, p: self.p }
        } else {
            Equation::Choquard(ChoquardParams::new(self.d, self.alpha, self.p)?)
        };
        eq.check_window()?;
        Ok(eq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub r_max: f64,
    pub n: usize,
    pub stretch: f64,
    pub order: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_max: DEFAULT_R_MAX,
            n: 201,
            stretch: DEFAULT_STRETCH,
            order: DEFAULT_ORDER,
        }
    }
}

impl GridConfig {
    pub fn spec(&self, d: usize) -> GridSpec {
        GridSpec::new(d, self.r_max, self.n, self.stretch).with_order(self.order)
    }
}

/// Either an explicit lattice or a geometric approach path to the Newtonian point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub ps: Vec<f64>,
    /// `(count, delta)`: points `(d-2+δ2^{-k}, 2+δ2^{-k})`, `k < count`.
    pub geometric: Option<(usize, f64)>,
    pub mode: SweepMode,
    pub spectra: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alphas: Vec::new(),
            ps: Vec::new(),
            geometric: None,
            mode: SweepMode::Fresh,
            spectra: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumConfig {
    pub ells: Vec<i64>,
    pub k: usize,
    pub gap_tol: f64,
    pub dump_eigenfields: bool,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            ells: vec![0, 1],
            k: 5,
            gap_tol: DEFAULT_GAP_TOL,
            dump_eigenfields: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub stem: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("."),
            stem: "Q".into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        Ok(serde_json::from_slice(&text)?)
    }
}
