//! Export and re-import of a discretized sector kernel.

use choquard_lab::grid::make_grid;
use choquard_lab::riesz::{sector_kernel, SectorKernel, CACHE_ENV};

fn main() -> choquard_lab::Result<()> {
    let grid = make_grid(3, 20.0, 81, 1.02)?;
    let kernel = sector_kernel(&grid, 1.5, 0)?;
    println!("assembly asymmetry before symmetrization: {:.2e}", kernel.assembly_asymmetry());
    let dir = std::env::temp_dir().join("choquard-lab-kernels");
    let (bin, json) = kernel.export(&dir, "k_alpha1.5")?;
    let back = SectorKernel::import(&grid, &dir, "k_alpha1.5")?;
    println!("{} + {}: bit-identical = {}", bin.display(), json.display(), back.matrix() == kernel.matrix());
    println!("set {CACHE_ENV} to cache kernels across runs");
    Ok(())
}
