//! Numerical laboratory for radial ground states of the Choquard equation
//!
//! ```text
//! -Δu + u - (|·|^{-α} * |u|^p) |u|^{p-2} u = 0   in R^d
//! ```
//!
//! and of its local model `-Δu + u - |u|^{p-1} u = 0`.
//!
//! * [`grid`]: spectral-element radial grids, quadrature and sector Laplacians.
//! * [`riesz`]: radial Riesz potentials, harmonic-sector kernels, ball overlaps.
//! * [`solver`]: ground states by normalized fixed-point iteration.
//! * [`diagnostics`]: functional identities, a-priori norms, decay and
//!   parameter-condition checks.
//! * [`spectrum`]: the linearized operator `L₊` per harmonic sector.
//! * [`continuation`]: Newton continuation and sweeps in `(α, p)`.
//! * [`cli`]: the `choquard-lab` command line.

pub mod cli;
pub mod continuation;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub(crate) mod linalg;
pub mod quadrature;
pub mod riesz;
pub mod solver;
pub mod spectrum;

pub use error::{Error, Result};
pub use grid::{
    integrate_radial, laplacian_sector, make_grid, ChoquardParams, GridSpec, RadialField,
    RadialGrid,
};
