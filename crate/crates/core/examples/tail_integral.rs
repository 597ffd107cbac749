//! `∫_R^∞ r^{-α} e^{-βr} dr` and its two-sided comparison with `R^{-α} e^{-βR}`.

use choquard_lab::diagnostics::{exp_tail_integral, tail_bracket_ratio, TAIL_BRACKET};

fn main() -> choquard_lab::Result<()> {
    println!("I(1; 1, 1) = {:.16}", exp_tail_integral(1.0, 1.0, 1.0)?);
    println!("I(3; 0, 1) = {:.16} vs e^-3 = {:.16}", exp_tail_integral(3.0, 0.0, 1.0)?, (-3.0f64).exp());
    for (r, a, b) in [(1.0, 3.0, 3.0), (1.0, -2.0, 0.5), (10.0, 1.0, 1.0), (20.0, 2.0, 2.0)] {
        println!("ratio at R = {r}, alpha = {a}, beta = {b}: {:.6}", tail_bracket_ratio(r, a, b)?);
    }
    println!("calibrated range {:?}", TAIL_BRACKET);
    Ok(())
}
