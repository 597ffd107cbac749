use crate::error::{Error, Result};
use crate::grid::ball_volume;

/// `∫_0^φ sin^k t dt` by the standard reduction formula.
fn sine_power_integral(k: usize, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    match k {
        0 => phi,
        1 => 1.0 - c,
        _ => {
            let kf = k as f64;
            -s.powi(k as i32 - 1) * c / kf + (kf - 1.0) / kf * sine_power_integral(k - 2, phi)
        }
    }
}

/// Volume of `{y ∈ B_R : y_1 > x}` for `-R <= x <= R`.
fn cap_volume(d: usize, radius: f64, x: f64) -> f64 {
    let phi = (x / radius).clamp(-1.0, 1.0).acos();
    ball_volume(d - 1) * radius.powi(d as i32) * sine_power_integral(d, phi)
}

/// `|B_{R1}(0) ∩ B_{R2}(x)|` with `|x| = r`, as a true `d`-dimensional volume.
pub fn overlap_psi(d: usize, r1: f64, r2: f64, r: f64) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension d must be >= 1".into()));
    }
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidArgument("ball radii must be positive".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument("center distance must be >= 0".into()));
    }
    if d == 1 {
        return Ok(((r1).min(r + r2) - (-r1).max(r - r2)).max(0.0));
    }
    if r >= r1 + r2 {
        return Ok(0.0);
    }
    if r <= (r1 - r2).abs() {
        return Ok(ball_volume(d) * r1.min(r2).powi(d as i32));
    }
    // Radical hyperplane at distance x1 from the first center.
    let x1 = (r * r + r1 * r1 - r2 * r2) / (2.0 * r);
    let x2 = r - x1;
    Ok(cap_volume(d, r1, x1) + cap_volume(d, r2, x2))
}
