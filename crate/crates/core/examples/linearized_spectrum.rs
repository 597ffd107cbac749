//! Low spectrum of the linearized operator and the non-degeneracy verdict.

use choquard_lab::grid::{make_grid, ChoquardParams};
use choquard_lab::solver::{solve_choquard, SolverOptions};
use choquard_lab::spectrum::{
    assemble_lplus, eig_smallest, lplus_identity_error, nondegeneracy_verdict, DEFAULT_GAP_TOL,
};

fn main() -> choquard_lab::Result<()> {
    for (d, alpha, p) in [(3usize, 1.0, 2.0), (3, 1.02, 2.02), (4, 2.0, 2.0), (5, 3.0, 2.0)] {
        let grid = make_grid(d, 30.0, 201, 1.02)?;
        let state = solve_choquard(ChoquardParams::new(d, alpha, p)?, &grid, &SolverOptions::default())?;
        println!("({d}, {alpha}, {p}): L+Q identity error {:.1e}", lplus_identity_error(&state)?);
        for ell in [0, 1] {
            let eig = eig_smallest(&assemble_lplus(&state, ell)?, 4)?;
            let values: Vec<String> = eig.iter().map(|e| format!("{:.6}", e.value)).collect();
            println!("    ell = {ell}: {}", values.join(", "));
        }
        let v = nondegeneracy_verdict(&state, DEFAULT_GAP_TOL)?;
        println!(
            "    radial kernel trivial {}, translation mode {} (correlation {:.8})",
            v.radial_kernel_trivial, v.translation_mode_found, v.translation_correlation
        );
    }
    Ok(())
}
