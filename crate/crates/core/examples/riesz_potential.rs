//! Radial Riesz potentials: Newton fast path, angular quadrature, the `ℓ = 1`
//! sector, the two-ball bracket and ball overlaps.

use choquard_lab::grid::{make_grid, RadialField};
use choquard_lab::riesz::{
    overlap_psi, riesz_at, riesz_bracket, riesz_radial_with, sector_potential, RieszPath,
};

fn main() -> choquard_lab::Result<()> {
    let grid = make_grid(3, 12.0, 161, 1.02)?;
    let gauss = RadialField::from_fn(grid.clone(), |r| (-r * r).exp());
    let newton = riesz_radial_with(&grid, &gauss, 1.0, RieszPath::Newton)?;
    let angular = riesz_radial_with(&grid, &gauss, 1.0, RieszPath::Angular)?;
    let gap = newton
        .values()
        .iter()
        .zip(angular.values())
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max);
    println!("Newton vs angular at alpha = 1: max relative gap {gap:.2e}");
    println!("potential at r = 0: {:.12} (exact 2 pi = {:.12})", riesz_at(&grid, &gauss, 1.0, 0.0)?, std::f64::consts::TAU);

    let dipole = sector_potential(&grid, &gauss, 1.5, 1)?;
    println!("l = 1 sector, alpha = 1.5, at r = 1: {:.10}", dipole.at(1.0));

    let bracket = riesz_bracket(&grid, &gauss, 1.0)?;
    // The bracket omits the sphere area, so the ratio sits near 1 / (4 pi) = 0.0796.
    println!("bracket / potential at r = 1: {:.6}", bracket.at(1.0) / newton.at(1.0));

    for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
        println!("|B_1(0) ∩ B_1(x)|, |x| = {r}: {:.6}", overlap_psi(3, 1.0, 1.0, r)?);
    }
    Ok(())
}
