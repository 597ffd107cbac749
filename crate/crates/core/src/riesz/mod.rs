//! Radial Riesz potentials `|·|^{-α} * f`, harmonic-sector kernels and the
//! ball-overlap function.

mod kernel;
mod operator;
mod overlap;
mod radial;

use std::collections::HashMap;
use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use kernel::{KernelMethod, SectorKernelFn};
pub use overlap::overlap_psi;

use crate::error::{Error, Result};
use crate::grid::{sphere_area, GridSpec, RadialField, RadialGrid};
use crate::linalg::relative_asymmetry;
use operator::{collocation_matrix, galerkin_matrix, RowBuilder};
use radial::Cumulative;

/// Environment variable naming the on-disk kernel cache directory.
pub const CACHE_ENV: &str = "CHOQUARD_LAB_CACHE";

/// How a radial potential is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszPath {
    /// Newton's theorem when `α = d - 2`, angular quadrature otherwise.
    Auto,
    /// Always the angular kernel quadrature.
    Angular,
    /// Interior mass plus exterior tail; requires `α = d - 2`, `d >= 3`.
    Newton,
}

fn check_alpha(d: usize, alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < d as f64 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("alpha outside (0,d)".into()))
    }
}

fn check_ell(ell: i64) -> Result<usize> {
    match ell {
        0 | 1 => Ok(ell as usize),
        _ => Err(Error::UnsupportedSector(ell)),
    }
}

fn is_newtonian(d: usize, alpha: f64) -> bool {
    d >= 3 && alpha == d as f64 - 2.0
}

fn default_method(d: usize, alpha: f64) -> KernelMethod {
    if is_newtonian(d, alpha) {
        KernelMethod::Newton
    } else {
        KernelMethod::Angular
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    d: usize,
    r_max: u64,
    n: usize,
    stretch: u64,
    order: usize,
    alpha: u64,
    ell: usize,
    method: KernelMethod,
}

impl CacheKey {
    fn new(spec: GridSpec, alpha: f64, ell: usize, method: KernelMethod) -> Self {
        Self {
            d: spec.d,
            r_max: spec.r_max.to_bits(),
            n: spec.n,
            stretch: spec.stretch.to_bits(),
            order: spec.order,
            alpha: alpha.to_bits(),
            ell,
            method,
        }
    }

    fn file_stem(&self) -> String {
        format!(
            "kernel_d{}_a{:016x}_l{}_{}_n{}_r{:016x}_s{:016x}_q{}",
            self.d,
            self.alpha,
            self.ell,
            method_name(self.method),
            self.n,
            self.r_max,
            self.stretch,
            self.order
        )
    }
}

fn method_name(m: KernelMethod) -> &'static str {
    match m {
        KernelMethod::Angular => "angular",
        KernelMethod::Newton => "newton",
    }
}

type Memo<T> = Mutex<HashMap<CacheKey, Arc<T>>>;

fn kernel_memo() -> &'static Memo<SectorKernel> {
    static M: OnceLock<Memo<SectorKernel>> = OnceLock::new();
    M.get_or_init(Default::default)
}

fn collocation_memo() -> &'static Memo<DMatrix<f64>> {
    static M: OnceLock<Memo<DMatrix<f64>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// Directory named by [`CACHE_ENV`], if set and non-empty.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Sector `ℓ` of `|x - y|^{-α}` discretized on a grid.
///
/// `matrix()[(i, j)]` approximates `K_ℓ(r_i, r_j)` in the sense that
/// `Σ_j K_ij f_j W_j` is the sector potential of `f` at `r_i`, where
/// `W_j` are the lumped volume weights. The underlying symmetric Galerkin form
/// `H_ij = W_i K_ij W_j` is what the solver and the linearized operator use.
#[derive(Debug, Clone)]
pub struct SectorKernel {
    pub d: usize,
    pub alpha: f64,
    pub ell: usize,
    pub method: KernelMethod,
    spec: GridSpec,
    weights: Vec<f64>,
    kernel: DMatrix<f64>,
    galerkin: DMatrix<f64>,
    asymmetry: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct KernelSidecar {
    d: usize,
    alpha: f64,
    ell: usize,
    n: usize,
    r_max: f64,
    stretch: f64,
    order: usize,
    requested_n: usize,
    method: String,
    asymmetry: f64,
    layout: String,
}

const LAYOUT: &str = "row-major float64 little-endian, entry (i, j) = K(r_i, r_j)";

impl SectorKernel {
    fn from_kernel(
        grid: &RadialGrid,
        alpha: f64,
        ell: usize,
        method: KernelMethod,
        kernel: DMatrix<f64>,
        asymmetry: f64,
    ) -> Self {
        let w = grid.volume_weights().to_vec();
        let n = w.len();
        let galerkin = DMatrix::from_fn(n, n, |i, j| kernel[(i, j)] * (w[i] * w[j]));
        Self {
            d: grid.d(),
            alpha,
            ell,
            method,
            spec: grid.spec(),
            weights: w,
            kernel,
            galerkin,
            asymmetry,
        }
    }

    fn assemble(grid: &RadialGrid, alpha: f64, ell: usize, method: KernelMethod) -> Self {
        let kf = SectorKernelFn::new(grid.d(), alpha, ell, method);
        let mut h = galerkin_matrix(grid, kf);
        let asymmetry = relative_asymmetry(&h);
        let n = h.nrows();
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (h[(i, j)] + h[(j, i)]);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let w = grid.volume_weights();
        // Storing K and rebuilding H from it makes fresh and cached kernels
        // bit-identical.
        let kernel = DMatrix::from_fn(n, n, |i, j| h[(i, j)] / (w[i] * w[j]));
        Self::from_kernel(grid, alpha, ell, method, kernel, asymmetry)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `K_ij`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// `H_ij = W_i K_ij W_j`.
    pub fn galerkin(&self) -> &DMatrix<f64> {
        &self.galerkin
    }

    /// Relative asymmetry of the Galerkin form before it was symmetrized.
    pub fn assembly_asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn grid_spec(&self) -> GridSpec {
        self.spec
    }

    /// Sector potential at the nodes: `P_i = Σ_j K_ij W_j f_j`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        let wf: Vec<f64> = f.iter().zip(&self.weights).map(|(a, b)| a * b).collect();
        let mut out = vec![0.0; n];
        for (j, &x) in wf.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (o, k) in out.iter_mut().zip(self.kernel.column(j).iter()) {
                *o += k * x;
            }
        }
        out
    }

    /// Writes `<stem>.bin` (row-major `f64`) and `<stem>.json`.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let bin = dir.join(format!("{stem}.bin"));
        let json = dir.join(format!("{stem}.json"));
        let tmp = dir.join(format!("{stem}.bin.partial"));
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            let n = self.len();
            for i in 0..n {
                for j in 0..n {
                    out.write_all(&self.kernel[(i, j)].to_le_bytes())?;
                }
            }
            out.flush()?;
        }
        fs::rename(&tmp, &bin)?;
        let side = KernelSidecar {
            d: self.d,
            alpha: self.alpha,
            ell: self.ell,
            n: self.len(),
            r_max: self.spec.r_max,
            stretch: self.spec.stretch,
            order: self.spec.order,
            requested_n: self.spec.n,
            method: method_name(self.method).into(),
            asymmetry: self.asymmetry,
            layout: LAYOUT.into(),
        };
        fs::write(&json, serde_json::to_vec_pretty(&side)?)?;
        Ok((bin, json))
    }

    /// Reads a dump written by [`SectorKernel::export`] for this grid.
    pub fn import(grid: &RadialGrid, dir: &Path, stem: &str) -> Result<Self> {
        let side: KernelSidecar =
            serde_json::from_slice(&fs::read(dir.join(format!("{stem}.json")))?)?;
        let spec = grid.spec();
        if side.d != spec.d
            || side.n != grid.len()
            || side.r_max != spec.r_max
            || side.stretch != spec.stretch
            || side.order != spec.order
        {
            return Err(Error::GridMismatch);
        }
        let method = match side.method.as_str() {
            "angular" => KernelMethod::Angular,
            "newton" => KernelMethod::Newton,
            other => return Err(Error::InvalidArgument(format!("unknown kernel method {other}"))),
        };
        let n = side.n;
        let mut bytes = Vec::with_capacity(n * n * 8);
        BufReader::new(fs::File::open(dir.join(format!("{stem}.bin")))?).read_to_end(&mut bytes)?;
        if bytes.len() != n * n * 8 {
            return Err(Error::InvalidArgument("kernel dump has the wrong size".into()));
        }
        let kernel = DMatrix::from_fn(n, n, |i, j| {
            let k = 8 * (i * n + j);
            f64::from_le_bytes(bytes[k..k + 8].try_into().unwrap())
        });
        Ok(Self::from_kernel(grid, side.alpha, side.ell, method, kernel, side.asymmetry))
    }
}

/// Sector kernel for `(grid, α, ℓ)`, using Newton's closed form when
/// `α = d - 2`. Results are memoized and, when [`CACHE_ENV`] is set, persisted.
pub fn sector_kernel(grid: &RadialGrid, alpha: f64, ell: i64) -> Result<Arc<SectorKernel>> {
    sector_kernel_with(grid, alpha, ell, default_method(grid.d(), alpha))
}

pub fn sector_kernel_with(
    grid: &RadialGrid,
    alpha: f64,
    ell: i64,
    method: KernelMethod,
) -> Result<Arc<SectorKernel>> {
    check_alpha(grid.d(), alpha)?;
    let ell = check_ell(ell)?;
    if method == KernelMethod::Newton && !is_newtonian(grid.d(), alpha) {
        return Err(Error::InvalidArgument(
            "Newton kernel requires alpha = d - 2 and d >= 3".into(),
        ));
    }
    let key = CacheKey::new(grid.spec(), alpha, ell, method);
    if let Some(k) = kernel_memo().lock().unwrap().get(&key) {
        return Ok(Arc::clone(k));
    }
    let stem = key.file_stem();
    let dir = cache_dir();
    let loaded = dir
        .as_deref()
        .and_then(|d| SectorKernel::import(grid, d, &stem).ok());
    let kernel = match loaded {
        Some(k) => k,
        None => {
            let k = SectorKernel::assemble(grid, alpha, ell, method);
            if let Some(d) = dir.as_deref() {
                // A failed cache write only costs a recomputation later.
                let _ = k.export(d, &stem);
            }
            k
        }
    };
    let kernel = Arc::new(kernel);
    kernel_memo()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&kernel));
    Ok(kernel)
}

fn collocation(grid: &RadialGrid, alpha: f64, ell: usize, method: KernelMethod) -> Arc<DMatrix<f64>> {
    let key = CacheKey::new(grid.spec(), alpha, ell, method);
    if let Some(m) = collocation_memo().lock().unwrap().get(&key) {
        return Arc::clone(m);
    }
    let kf = SectorKernelFn::new(grid.d(), alpha, ell, method);
    let m = Arc::new(collocation_matrix(grid, kf));
    collocation_memo()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&m));
    m
}

/// Radial profile of `|·|^{-α} * f` at the nodes.
pub fn riesz_radial(grid: &RadialGrid, f: &RadialField, alpha: f64) -> Result<RadialField> {
    riesz_radial_with(grid, f, alpha, RieszPath::Auto)
}

pub fn riesz_radial_with(
    grid: &RadialGrid,
    f: &RadialField,
    alpha: f64,
    path: RieszPath,
) -> Result<RadialField> {
    f.check_grid(grid)?;
    check_alpha(grid.d(), alpha)?;
    let newton = match path {
        RieszPath::Auto => is_newtonian(grid.d(), alpha),
        RieszPath::Angular => false,
        RieszPath::Newton => {
            if !is_newtonian(grid.d(), alpha) {
                return Err(Error::InvalidArgument(
                    "Newton path requires alpha = d - 2 and d >= 3".into(),
                ));
            }
            true
        }
    };
    let values = if newton {
        newton_potential(grid, f.values())
    } else {
        let c = collocation(grid, alpha, 0, KernelMethod::Angular);
        let v = nalgebra::DVector::from_column_slice(f.values());
        (c.as_ref() * v).as_slice().to_vec()
    };
    RadialField::new(f.grid_arc(), values)
}

fn newton_potential(grid: &RadialGrid, f: &[f64]) -> Vec<f64> {
    let d = grid.d();
    let area = sphere_area(d);
    let inner = Cumulative::new(grid, f, (d - 1) as f64).at_nodes();
    let tail = Cumulative::new(grid, f, 1.0);
    let total = tail.total();
    let partial = tail.at_nodes();
    grid.nodes()
        .iter()
        .zip(inner.iter().zip(&partial))
        .map(|(&r, (a, b))| area * (a * r.powi(2 - d as i32) + (total - b)))
        .collect()
}

/// Sector-`ℓ` potential `∫ K_ℓ(r_i, s) f(s) s^{d-1} ds` at the nodes.
pub fn sector_potential(
    grid: &RadialGrid,
    f: &RadialField,
    alpha: f64,
    ell: i64,
) -> Result<RadialField> {
    f.check_grid(grid)?;
    check_alpha(grid.d(), alpha)?;
    let ell = check_ell(ell)?;
    if ell == 0 {
        return riesz_radial(grid, f, alpha);
    }
    let c = collocation(grid, alpha, ell, default_method(grid.d(), alpha));
    let v = nalgebra::DVector::from_column_slice(f.values());
    RadialField::new(f.grid_arc(), (c.as_ref() * v).as_slice().to_vec())
}

/// Sector-`ℓ` potential of the interpolant of `f` at any `r >= 0`,
/// including `r = 0` and `r > r_max`.
pub fn sector_potential_at(
    grid: &RadialGrid,
    f: &RadialField,
    alpha: f64,
    ell: i64,
    r: f64,
) -> Result<f64> {
    f.check_grid(grid)?;
    check_alpha(grid.d(), alpha)?;
    let ell = check_ell(ell)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be finite and >= 0".into()));
    }
    let method = default_method(grid.d(), alpha);
    if ell == 0 && method == KernelMethod::Newton {
        let d = grid.d();
        let inner = Cumulative::new(grid, f.values(), (d - 1) as f64);
        let tail = Cumulative::new(grid, f.values(), 1.0);
        let exterior = tail.total() - tail.at(r);
        let interior = if r > 0.0 { inner.at(r) * r.powi(2 - d as i32) } else { 0.0 };
        return Ok(sphere_area(d) * (interior + exterior));
    }
    let kf = SectorKernelFn::new(grid.d(), alpha, ell, method);
    let row = RowBuilder::new(grid, kf).row(r);
    Ok(row.iter().zip(f.values()).map(|(c, v)| c * v).sum())
}

/// `(|·|^{-α} * f)(r)` at a single radius.
pub fn riesz_at(grid: &RadialGrid, f: &RadialField, alpha: f64, r: f64) -> Result<f64> {
    sector_potential_at(grid, f, alpha, 0, r)
}

/// `r^{-α} ∫_0^r f s^{d-1} ds + ∫_r^∞ f s^{d-1-α} ds` at the nodes, for
/// nonnegative radially decreasing `f`.
pub fn riesz_bracket(grid: &RadialGrid, f: &RadialField, alpha: f64) -> Result<RadialField> {
    f.check_grid(grid)?;
    check_alpha(grid.d(), alpha)?;
    if !f.is_radially_decreasing() || !f.is_nonnegative() {
        return Err(Error::NotRadiallyDecreasing);
    }
    let d = grid.d() as f64;
    let inner = Cumulative::new(grid, f.values(), d - 1.0).at_nodes();
    let tail = Cumulative::new(grid, f.values(), d - 1.0 - alpha);
    let total = tail.total();
    let partial = tail.at_nodes();
    let values = grid
        .nodes()
        .iter()
        .zip(inner.iter().zip(&partial))
        .map(|(&r, (a, b))| a * r.powf(-alpha) + (total - b))
        .collect();
    RadialField::new(f.grid_arc(), values)
}

/// The bracket at a single radius; beyond `r_max` only the interior term remains.
pub fn riesz_bracket_at(grid: &RadialGrid, f: &RadialField, alpha: f64, r: f64) -> Result<f64> {
    f.check_grid(grid)?;
    check_alpha(grid.d(), alpha)?;
    if !f.is_radially_decreasing() || !f.is_nonnegative() {
        return Err(Error::NotRadiallyDecreasing);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be finite and > 0".into()));
    }
    let d = grid.d() as f64;
    let inner = Cumulative::new(grid, f.values(), d - 1.0).at(r);
    let tail = Cumulative::new(grid, f.values(), d - 1.0 - alpha);
    Ok(inner * r.powf(-alpha) + (tail.total() - tail.at(r)))
}
