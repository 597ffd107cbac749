//! Functional identities and a-priori norms of computed ground states.

use choquard_lab::diagnostics::{apriori_report, pohozaev_report};
use choquard_lab::grid::{make_grid, ChoquardParams};
use choquard_lab::solver::{solve_choquard, SolverOptions};

fn main() -> choquard_lab::Result<()> {
    for (d, alpha) in [(3usize, 1.0), (3, 2.0), (4, 2.0), (5, 3.0)] {
        let grid = make_grid(d, 30.0, 201, 1.02)?;
        let state = solve_choquard(ChoquardParams::new(d, alpha, 2.0)?, &grid, &SolverOptions::default())?;
        let rep = pohozaev_report(&state)?;
        println!(
            "d = {d}, alpha = {alpha}: residuals {:?}, G/M = {:.8} (predicted {:.8})",
            rep.relative.map(|r| format!("{r:.1e}")),
            rep.ratio_grad_mass.unwrap_or(f64::NAN),
            rep.predicted_ratio
        );
        let ap = apriori_report(&state, &[2.0, 4.0])?;
        println!(
            "    L2 {:.6}, L4 {:.6}, W2,2 {:.6}, decay certificate {:.4}",
            ap.lebesgue[0].value, ap.lebesgue[1].value, ap.sobolev2[0].value, ap.decay_certificate
        );
    }
    Ok(())
}
