use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The exponent triple `(d, alpha, p)` of the Choquard equation
/// `-Δu + u = (|·|^{-alpha} * |u|^p) |u|^{p-2} u` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoquardParams {
    pub d: usize,
    pub alpha: f64,
    pub p: f64,
}

impl ChoquardParams {
    pub fn new(d: usize, alpha: f64, p: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidArgument("dimension d must be >= 1".into()));
        }
        if !(alpha.is_finite() && alpha > 0.0 && alpha < d as f64) {
            return Err(Error::InvalidArgument("alpha outside (0,d)".into()));
        }
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidArgument("p must be >= 1".into()));
        }
        Ok(Self { d, alpha, p })
    }

    /// The Newtonian point `(d - 2, 2)`; needs `d >= 3`.
    pub fn newtonian(d: usize) -> Result<Self> {
        Self::new(d, d as f64 - 2.0, 2.0)
    }

    /// `1/2 >= 1/p > (d-2)/(2d-alpha)`.
    pub fn in_window_para2(&self) -> bool {
        let d = self.d as f64;
        let inv_p = 1.0 / self.p;
        0.5 >= inv_p && inv_p > (d - 2.0) / (2.0 * d - self.alpha)
    }

    /// `d/(2d-alpha) > 1/p > (d-2)/(2d-alpha)`.
    pub fn in_window_para3(&self) -> bool {
        let d = self.d as f64;
        let inv_p = 1.0 / self.p;
        d / (2.0 * d - self.alpha) > inv_p && inv_p > (d - 2.0) / (2.0 * d - self.alpha)
    }

    pub fn near_newtonian(&self, delta: f64) -> bool {
        // Absorbs the rounding of decimal lattice points such as 2.02 - 2.
        const SLACK: f64 = 1e-12;
        let d = self.d as f64;
        (self.alpha - (d - 2.0)).abs() <= delta + SLACK
            && self.p - 2.0 >= 0.0
            && self.p - 2.0 <= delta + SLACK
    }

    pub fn is_newtonian_kernel(&self) -> bool {
        self.d >= 3 && self.alpha == self.d as f64 - 2.0
    }

    /// `(pd - (2d - alpha)) / ((2d - alpha) - p(d - 2))`, the gradient-to-mass
    /// ratio every solution must satisfy.
    pub fn predicted_ratio(&self) -> f64 {
        let d = self.d as f64;
        let hls = 2.0 * d - self.alpha;
        (self.p * d - hls) / (hls - self.p * (d - 2.0))
    }

    /// Max-norm distance in the `(alpha, p)` plane.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.alpha - other.alpha)
            .abs()
            .max((self.p - other.p).abs())
    }
}
