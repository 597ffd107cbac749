use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Unit panels in the substituted variable before the analytic remainder.
const PANELS: usize = 50;
const POINTS: usize = 20;

/// `I(R; α, β) = ∫_R^∞ r^{-α} e^{-βr} dr` for `R >= 1`, `β >= 1/2`.
///
/// Substituting `r = R + t/β` gives `β^{-1} e^{-βR} ∫_0^∞ (R + t/β)^{-α} e^{-t} dt`;
/// the `t`-integral is summed over `[0, 50]` by composite Gauss-Legendre and
/// closed with a first-order asymptotic tail.
pub fn exp_tail_integral(r: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("need R >= 1, got {r}")));
    }
    if !(beta >= 0.5 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("need beta >= 1/2, got {beta}")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument("alpha must be finite".into()));
    }
    Ok(tail(r, alpha, beta))
}

pub(crate) fn tail(r: f64, alpha: f64, beta: f64) -> f64 {
    let rule = gauss_legendre(POINTS);
    let f = |t: f64| (r + t / beta).powf(-alpha) * (-t).exp();
    let mut body = 0.0;
    for k in 0..PANELS {
        let (pts, wts) = rule.mapped(k as f64, k as f64 + 1.0);
        body += pts.iter().zip(&wts).map(|(t, w)| w * f(*t)).sum::<f64>();
    }
    let t0 = PANELS as f64;
    let rest = f(t0) / (1.0 + alpha / (beta * r + t0));
    (body + rest) * (-beta * r).exp() / beta
}

/// `I(R; α, β) / (R^{-α} e^{-βR})`.
pub fn tail_bracket_ratio(r: f64, alpha: f64, beta: f64) -> Result<f64> {
    Ok(exp_tail_integral(r, alpha, beta)? * r.powf(alpha) * (beta * r).exp())
}

/// Calibrated range of [`tail_bracket_ratio`] over `R ∈ [1, 20]`,
/// `α ∈ [-2, 3]`, `β ∈ [1/2, 3]`. The extremes sit at `R = 1` with
/// `(α, β) = (3, 3)` and `(-2, 1/2)`.
pub const TAIL_BRACKET: (f64, f64) = (0.1793, 26.0001);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_case() {
        for r in [1.0f64, 2.5, 7.0, 20.0] {
            let v = exp_tail_integral(r, 0.0, 1.0).unwrap();
            assert!((v - (-r).exp()).abs() <= 1e-12);
        }
    }

    #[test]
    fn high_precision_values() {
        let cases = [
            (1.0, 1.0, 1.0, 0.21938393439552027),
            (2.0, 1.5, 0.7, 0.0691639060376221946),
            (5.0, -1.0, 2.0, 0.000124849806846833342),
            (1.0, 3.0, 3.0, 0.00893064655602272538),
        ];
        for (r, a, b, want) in cases {
            let got = exp_tail_integral(r, a, b).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "{r} {a} {b}: {got} vs {want}");
        }
    }

    #[test]
    fn scaling() {
        for (r, a, b) in [(1.0, 1.0, 2.0), (3.0, -1.5, 0.5), (4.0, 2.5, 1.7), (2.0, 0.3, 3.0)] {
            let lhs = exp_tail_integral(r, a, b).unwrap();
            let rhs = f64::powf(b, a - 1.0) * exp_tail_integral(b * r, a, 1.0).unwrap();
            assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        }
    }

    #[test]
    fn calibrated_extremes() {
        let lo = tail_bracket_ratio(1.0, 3.0, 3.0).unwrap();
        let hi = tail_bracket_ratio(1.0, -2.0, 0.5).unwrap();
        assert!((lo - 0.17937683114893324).abs() < 1e-12);
        assert!((hi - 26.0).abs() < 1e-11);
        assert!(TAIL_BRACKET.0 < lo && hi < TAIL_BRACKET.1);
    }

    #[test]
    fn domain() {
        assert!(exp_tail_integral(0.5, 1.0, 1.0).is_err());
        assert!(exp_tail_integral(1.0, 1.0, 0.4).is_err());
        assert!(exp_tail_integral(1.0, f64::NAN, 1.0).is_err());
    }
}
