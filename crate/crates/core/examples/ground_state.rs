//! Ground state of the Choquard equation at `(d, α, p) = (3, 1, 2)`.

use choquard_lab::grid::{make_grid, ChoquardParams};
use choquard_lab::solver::{solve_choquard, SolverOptions};

fn main() -> choquard_lab::Result<()> {
    let grid = make_grid(3, 30.0, 201, 1.02)?;
    let params = ChoquardParams::new(3, 1.0, 2.0)?;
    let state = solve_choquard(params, &grid, &SolverOptions::default())?;
    println!("residual {:.2e} after {} iterations", state.residual, state.iterations);
    println!("Q(0) = {:.10}", state.values()[0]);
    println!("{:?}", state.norms);
    if let Some(decay) = state.decay {
        println!("tail ~ {:.4} r^-{} e^(-{:.4} r)", decay.c, decay.beta, decay.gamma);
    }
    let dir = std::env::temp_dir().join("choquard-lab-example");
    let (json, csv) = state.save(&dir, "Q")?;
    println!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}
