use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GridSpec, RadialGrid};
use crate::error::{Error, Result};

/// Radial function sampled at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FieldEnvelope {
    d: usize,
    n: usize,
    r_max: f64,
    stretch: f64,
    order: usize,
    requested_n: usize,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values but the grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub(crate) fn check_grid(&self, grid: &RadialGrid) -> Result<()> {
        if self.grid.same_as(grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn at(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.values, r)
    }

    /// `values[i+1] <= values[i]` at every node.
    pub fn is_radially_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["r", "value"])?;
        for (r, v) in self.grid.nodes().iter().zip(&self.values) {
            w.write_record([format!("{r:.17e}"), format!("{v:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `(r, value)` rows; the radii must match the grid nodes.
    pub fn read_csv(grid: Arc<RadialGrid>, path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let mut values = Vec::with_capacity(grid.len());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| Error::InvalidArgument(format!("row {i}: missing column {k}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("row {i}: {e}")))
            };
            let r = parse(0)?;
            let node = *grid
                .nodes()
                .get(i)
                .ok_or_else(|| Error::InvalidArgument("more rows than grid nodes".into()))?;
            if (r - node).abs() > 1e-12 * node.max(1.0) {
                return Err(Error::GridMismatch);
            }
            values.push(parse(1)?);
        }
        Self::new(grid, values)
    }

    pub fn write_json(&self, mut out: impl Write) -> Result<()> {
        let spec = self.grid.spec();
        let env = FieldEnvelope {
            d: spec.d,
            n: self.grid.len(),
            r_max: spec.r_max,
            stretch: spec.stretch,
            order: spec.order,
            requested_n: spec.n,
            nodes: self.grid.nodes().to_vec(),
            values: self.values.clone(),
        };
        serde_json::to_writer_pretty(&mut out, &env)?;
        Ok(())
    }

    /// Rebuilds the grid from the envelope metadata.
    pub fn read_json(input: impl Read) -> Result<Self> {
        let env: FieldEnvelope = serde_json::from_reader(input)?;
        let grid = GridSpec {
            d: env.d,
            r_max: env.r_max,
            n: env.requested_n,
            stretch: env.stretch,
            order: env.order,
        }
        .build()?;
        if grid.len() != env.n {
            return Err(Error::GridMismatch);
        }
        Self::new(grid, env.values)
    }
}
