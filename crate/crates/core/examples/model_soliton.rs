//! The local model in one dimension against its closed-form soliton family.

use choquard_lab::grid::make_grid;
use choquard_lab::solver::{solve_model, SolverOptions};

fn main() -> choquard_lab::Result<()> {
    let grid = make_grid(1, 40.0, 2000, 1.0)?;
    for p in [2.0f64, 3.0, 4.0] {
        let state = solve_model(1, p, &grid, &SolverOptions::default())?;
        let amp = ((p + 1.0) / 2.0).powf(1.0 / (p - 1.0));
        let err = grid
            .nodes()
            .iter()
            .zip(state.values())
            .filter(|(r, _)| **r <= 10.0)
            .map(|(r, u)| (u - amp / ((p - 1.0) * r / 2.0).cosh().powf(2.0 / (p - 1.0))).abs())
            .fold(0.0, f64::max);
        println!("p = {p}: max error {err:.2e}, iterations {}", state.iterations);
    }
    Ok(())
}
