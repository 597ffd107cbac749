//! Harmonic-sector components of the Riesz kernel `|x - y|^{-alpha}`.
//!
//! For radial profiles, `|·|^{-α} * (g(|y|) Y_ℓ(y/|y|))` equals
//! `Y_ℓ(x/|x|) ∫_0^∞ K_ℓ(|x|, s) g(s) s^{d-1} ds` with
//!
//! ```text
//! K_ℓ(r, s) = |S^{d-2}| ∫_0^π (r² + s² - 2rs cos θ)^{-α/2} P_ℓ(cos θ) sin^{d-2}θ dθ
//! ```
//!
//! (`P_0 = 1`, `P_1(t) = t`). Writing `R = max(r, s)`, `ρ = min(r, s)/R`,
//! `K_ℓ(r, s) = R^{-α} k_ℓ(ρ)`. Near `ρ = 1` the integrand concentrates at
//! `θ = 0` on the scale `(1 - ρ)/√ρ`; the angular integral is graded
//! geometrically towards `θ = 0` and the innermost sliver is closed with the
//! small-angle power law.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::grid::sphere_area;
use crate::quadrature::{gauss_legendre, Rule};

const SMOOTH_RULE_POINTS: usize = 40;
const PANEL_POINTS: usize = 12;
const GRADING: f64 = 0.25;
/// Below this `ρ` the integrand is analytic in a wide strip around `[0, π]`.
const SMOOTH_RHO: f64 = 0.5;

fn smooth_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(SMOOTH_RULE_POINTS))
}

fn panel_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

/// Which formula evaluates the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelMethod {
    /// Angular quadrature, valid for every `0 < α < d`.
    Angular,
    /// Closed form of Newton's theorem; only for `α = d - 2`.
    Newton,
}

/// Sector kernel evaluator for fixed `(d, α, ℓ)`.
#[derive(Debug, Clone, Copy)]
pub struct SectorKernelFn {
    pub d: usize,
    pub alpha: f64,
    pub ell: usize,
    pub method: KernelMethod,
    angular_scale: f64,
}

impl SectorKernelFn {
    pub fn new(d: usize, alpha: f64, ell: usize, method: KernelMethod) -> Self {
        let angular_scale = if d >= 2 { sphere_area(d - 1) } else { 1.0 };
        Self {
            d,
            alpha,
            ell,
            method,
            angular_scale,
        }
    }

    /// `K_ℓ(r, s)`.
    pub fn eval(&self, r: f64, s: f64) -> f64 {
        let (big, small) = if r >= s { (r, s) } else { (s, r) };
        if self.d == 1 {
            let near = (big - small).powf(-self.alpha);
            let far = (big + small).powf(-self.alpha);
            return if self.ell == 0 { near + far } else { near - far };
        }
        if big == 0.0 {
            return f64::INFINITY;
        }
        let rho = small / big;
        let eps = (big - small) / big;
        big.powf(-self.alpha) * self.profile(rho, eps)
    }

    /// `k_ℓ(ρ)`, with `eps = 1 - ρ` supplied separately to keep its precision.
    pub fn profile(&self, rho: f64, eps: f64) -> f64 {
        match self.method {
            KernelMethod::Newton => self.newton_profile(rho),
            KernelMethod::Angular => self.angular_scale * self.angular_integral(rho, eps),
        }
    }

    fn newton_profile(&self, rho: f64) -> f64 {
        let d = self.d as f64;
        let area = sphere_area(self.d);
        match self.ell {
            0 => area,
            // Gegenbauer coefficient of the harmonic kernel for ℓ = 1.
            _ => area * (d - 2.0) / d * rho,
        }
    }

    #[inline]
    fn integrand(&self, theta: f64, rho: f64, eps: f64) -> f64 {
        let half = (0.5 * theta).sin();
        let base = eps * eps + 4.0 * rho * half * half;
        let mut v = base.powf(-0.5 * self.alpha);
        if self.d > 2 {
            v *= theta.sin().powi(self.d as i32 - 2);
        }
        if self.ell == 1 {
            v *= theta.cos();
        }
        v
    }

    fn gauss_on(&self, lo: f64, hi: f64, rule: &Rule, rho: f64, eps: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(t, w)| w * self.integrand(mid + half * t, rho, eps))
            .sum::<f64>()
            * half
    }

    /// `∫_0^π (1 + ρ² - 2ρ cos θ)^{-α/2} P_ℓ(cos θ) sin^{d-2}θ dθ`.
    pub fn angular_integral(&self, rho: f64, eps: f64) -> f64 {
        if rho <= SMOOTH_RHO {
            return self.gauss_on(0.0, PI, smooth_rule(), rho, eps);
        }
        let d = self.d as f64;
        let stop = if eps > 0.0 {
            1e-3 * eps / rho.sqrt()
        } else {
            1e-10
        };
        let rule = panel_rule();
        let mut total = 0.0;
        let mut hi = PI;
        while hi > stop {
            let lo = hi * GRADING;
            total += self.gauss_on(lo, hi, rule, rho, eps);
            hi = lo;
        }
        // Small-angle sliver [0, hi]: sin θ ≈ θ, 4ρ sin²(θ/2) ≈ ρθ², P_ℓ ≈ 1.
        let sliver = if eps > 0.0 {
            eps.powf(-self.alpha) * hi.powf(d - 1.0) / (d - 1.0)
        } else if self.alpha < d - 1.0 {
            rho.powf(-0.5 * self.alpha) * hi.powf(d - 1.0 - self.alpha) / (d - 1.0 - self.alpha)
        } else {
            f64::INFINITY
        };
        total + sliver
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson on the raw `t = cos θ` form; independent of the
    /// production grading.
    fn simpson_oracle(d: usize, alpha: f64, ell: usize, r: f64, s: f64) -> f64 {
        fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                    + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let f = |th: f64| {
            let base = r * r + s * s - 2.0 * r * s * th.cos();
            base.powf(-alpha / 2.0) * th.sin().powi(d as i32 - 2) * if ell == 1 { th.cos() } else { 1.0 }
        };
        let (a, b) = (0.0, PI);
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        sphere_area(d - 1) * adapt(&f, a, b, fa, fm, fb, whole, 1e-13, 40)
    }

    #[test]
    fn newtonian_exponent_reproduces_newton_theorem() {
        for d in 3..=5 {
            let generic = SectorKernelFn::new(d, d as f64 - 2.0, 0, KernelMethod::Angular);
            let exact = SectorKernelFn::new(d, d as f64 - 2.0, 0, KernelMethod::Newton);
            for (r, s) in [(1.0, 0.2), (1.0, 0.9), (1.0, 0.999999), (2.0, 2.0), (0.3, 5.0), (1.0, 1.0 + 1e-12)] {
                let a = generic.eval(r, s);
                let b = exact.eval(r, s);
                assert!((a / b - 1.0).abs() < 1e-11, "d={d} r={r} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dipole_sector_matches_newton_closed_form() {
        for d in 3..=5 {
            let generic = SectorKernelFn::new(d, d as f64 - 2.0, 1, KernelMethod::Angular);
            let exact = SectorKernelFn::new(d, d as f64 - 2.0, 1, KernelMethod::Newton);
            for (r, s) in [(1.0, 0.2), (1.0, 0.7), (1.0, 0.99999), (2.0, 2.0), (0.3, 5.0)] {
                let a = generic.eval(r, s);
                let b = exact.eval(r, s);
                assert!((a - b).abs() < 1e-11 * b.abs().max(1e-3), "d={d} r={r} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn three_dimensional_closed_form() {
        // 2π((r+s)^{2-α} - |r-s|^{2-α}) / (rs(2-α))
        for alpha in [0.5, 1.3, 1.7, 2.5] {
            let k = SectorKernelFn::new(3, alpha, 0, KernelMethod::Angular);
            for (r, s) in [(1.0_f64, 0.1_f64), (1.0, 0.8), (1.0, 0.99), (3.0, 2.9999)] {
                let exact = 2.0 * PI * ((r + s).powf(2.0 - alpha) - (r - s).abs().powf(2.0 - alpha))
                    / (r * s * (2.0 - alpha));
                let got = k.eval(r, s);
                assert!((got / exact - 1.0).abs() < 1e-10, "alpha={alpha} r={r} s={s}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn matches_simpson_oracle_off_diagonal() {
        for (d, alpha, ell) in [(2, 0.5, 0), (2, 0.7, 1), (4, 1.5, 0), (4, 2.3, 1), (5, 3.2, 0), (3, 1.02, 1)] {
            let k = SectorKernelFn::new(d, alpha, ell, KernelMethod::Angular);
            for (r, s) in [(1.0, 0.3), (1.0, 0.75), (1.0, 0.95), (2.0, 1.7)] {
                let a = k.eval(r, s);
                let b = simpson_oracle(d, alpha, ell, r, s);
                assert!((a - b).abs() < 1e-9 * b.abs(), "d={d} α={alpha} ℓ={ell} r={r} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn symmetric_and_positive() {
        let k = SectorKernelFn::new(4, 1.7, 0, KernelMethod::Angular);
        for (r, s) in [(0.5, 0.7), (1.0, 3.0), (2.0, 2.0001)] {
            assert_eq!(k.eval(r, s), k.eval(s, r));
            assert!(k.eval(r, s) > 0.0);
        }
    }

    #[test]
    fn one_dimensional_kernel() {
        let k0 = SectorKernelFn::new(1, 0.5, 0, KernelMethod::Angular);
        let k1 = SectorKernelFn::new(1, 0.5, 1, KernelMethod::Angular);
        let (r, s) = (1.0_f64, 0.25_f64);
        assert!((k0.eval(r, s) - (0.75f64.powf(-0.5) + 1.25f64.powf(-0.5))).abs() < 1e-15);
        assert!((k1.eval(r, s) - (0.75f64.powf(-0.5) - 1.25f64.powf(-0.5))).abs() < 1e-15);
    }

    #[test]
    fn origin_limit() {
        // K_0(0, s) = |S^{d-1}| s^{-α}, K_1(0, s) = 0.
        let k0 = SectorKernelFn::new(3, 1.0, 0, KernelMethod::Angular);
        assert!((k0.eval(0.0, 2.0) - 4.0 * PI / 2.0).abs() < 1e-13);
        let k1 = SectorKernelFn::new(3, 1.0, 1, KernelMethod::Angular);
        assert!(k1.eval(0.0, 2.0).abs() < 1e-14);
    }
}
