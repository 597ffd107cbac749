//! Newton continuation off the Newtonian point and a geometric approach sweep.

use choquard_lab::continuation::{
    distances, geometric_path, newton_continue_traced, sweep_points, ContinuationOptions, SweepOptions,
};
use choquard_lab::grid::{make_grid, ChoquardParams};
use choquard_lab::solver::{solve_choquard, SolverOptions};

fn main() -> choquard_lab::Result<()> {
    let grid = make_grid(3, 30.0, 201, 1.02)?;
    let opts = SolverOptions::default();
    let base = solve_choquard(ChoquardParams::newtonian(3)?, &grid, &opts)?;
    let target = ChoquardParams::new(3, 1.02, 2.02)?;
    let (cont, trace) = newton_continue_traced(&base, target, 4, &ContinuationOptions::default())?;
    for s in &trace.steps {
        let r: Vec<String> = s.residuals.iter().map(|x| format!("{x:.1e}")).collect();
        println!("({:.3}, {:.3}): {}", s.alpha, s.p, r.join(" -> "));
    }
    let fresh = solve_choquard(target, &grid, &opts)?;
    println!("continued vs fresh: {:?}", distances(&cont.field, &fresh.field)?);

    for rec in sweep_points(3, &geometric_path(3, 0.04, 5), &grid, &SweepOptions::default())? {
        let d = rec.dist_to_newtonian.expect("converged");
        println!(
            "alpha = {:.4}, p = {:.4}: H1 distance {:.4e}, Linf distance {:.4e}",
            rec.params.alpha, rec.params.p, d.h1, d.linf
        );
    }
    Ok(())
}
