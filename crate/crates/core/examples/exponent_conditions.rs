//! Feasibility of the exponent system used for radial symmetry of positive solutions.

use choquard_lab::diagnostics::{assumption12_feasible, check_witness, explicit_witness};
use choquard_lab::grid::ChoquardParams;

fn main() -> choquard_lab::Result<()> {
    for (d, alpha) in [(3usize, 1.0), (4, 2.0)] {
        let q = ChoquardParams::new(d, alpha, 2.0)?;
        let w = explicit_witness(&q).expect("explicit tuple exists for d = 3, 4");
        let check = check_witness(&q, &w);
        println!("d = {d}: explicit tuple residuals {:?}, violations {:?}", check.equality_residuals, check.violations);
    }
    for (d, alpha, p) in [(3usize, 1.0, 2.0), (3, 2.5, 2.5), (5, 3.5, 2.0)] {
        let q = ChoquardParams::new(d, alpha, p)?;
        let rep = assumption12_feasible(&q);
        println!("({d}, {alpha}, {p}): feasible = {}, witness = {:?}", rep.feasible, rep.witness);
    }
    Ok(())
}
