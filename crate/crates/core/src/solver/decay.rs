use serde::{Deserialize, Serialize};

use super::GroundState;
use crate::error::{Error, Result};

/// `Q(r) ≈ C r^{-β} e^{-γ r}` on the tail window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    pub gamma: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub beta: f64,
    pub window: (f64, f64),
}

const WINDOW: (f64, f64) = (0.25, 0.6);
const FLOOR: f64 = 1e-13;

/// Least-squares fit of `log Q + β log r = log C - γ r` over
/// `[0.25 r_max, 0.6 r_max]`, with `β = 0` for `d <= 2` and `(d-1)/2` otherwise.
pub fn fit_decay(state: &GroundState) -> Result<Decay> {
    let grid = state.grid();
    let d = grid.d();
    let beta = if d <= 2 { 0.0 } else { (d as f64 - 1.0) / 2.0 };
    let (ra, rb) = (WINDOW.0 * grid.r_max(), WINDOW.1 * grid.r_max());
    let mut pts = Vec::new();
    for (&r, &q) in grid.nodes().iter().zip(state.values()) {
        if r < ra || r > rb {
            continue;
        }
        if !(q > FLOOR) {
            return Err(Error::FitUnreliable(format!(
                "tail value {q:.3e} at r = {r:.3} is below {FLOOR:e}"
            )));
        }
        pts.push((r, q.ln() + beta * r.ln()));
    }
    if pts.len() < 3 {
        return Err(Error::FitUnreliable("tail window holds fewer than 3 nodes".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(Decay {
        gamma: -slope,
        c: (my - slope * mx).exp(),
        beta,
        window: (ra, rb),
    })
}
