use super::*;
use crate::grid::make_grid;

fn sech_family(p: f64, r: f64) -> f64 {
    ((p + 1.0) / 2.0).powf(1.0 / (p - 1.0)) * (1.0 / ((p - 1.0) * r / 2.0).cosh()).powf(2.0 / (p - 1.0))
}

fn choquard(d: usize, alpha: f64, p: f64) -> Equation {
    Equation::Choquard(ChoquardParams::new(d, alpha, p).unwrap())
}

#[test]
fn one_dimensional_model_matches_sech_family() {
    let g = make_grid(1, 25.0, 2000, 1.0).unwrap();
    for p in [2.0, 3.0, 4.0] {
        let s = solve_model(1, p, &g, &SolverOptions::default()).unwrap();
        assert!(s.residual <= 1e-10);
        let err = g
            .nodes()
            .iter()
            .zip(s.values())
            .filter(|(r, _)| **r <= 10.0)
            .map(|(r, v)| (sech_family(p, *r) - v).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "p={p}: {err}");
    }
}

#[test]
fn model_ratio_in_three_dimensions() {
    let g = make_grid(3, 25.0, 201, 1.02).unwrap();
    let s = solve_model(3, 3.0, &g, &SolverOptions::default()).unwrap();
    let ratio = (s.norms.grad_l2 / s.norms.l2).powi(2);
    assert!((ratio - 3.0).abs() < 1e-3);
    assert!(s.is_positive() && s.field.is_radially_decreasing());
}

#[test]
fn choquard_gradient_mass_ratios() {
    for (d, alpha, p) in [(3, 1.0, 2.0), (4, 2.0, 2.0)] {
        let g = make_grid(d, 25.0, 201, 1.02).unwrap();
        let s = solve(choquard(d, alpha, p), &g, &SolverOptions::default()).unwrap();
        let ratio = (s.norms.grad_l2 / s.norms.l2).powi(2);
        let predicted = s.equation.params().unwrap().predicted_ratio();
        assert!((ratio - predicted).abs() < 1e-3, "{ratio} vs {predicted}");
        assert!(s.residual <= s.tol);
        assert!(s.is_positive() && s.field.is_radially_decreasing());
        assert!(s.norms.h1 >= 0.01);
        assert!(s.decay.unwrap().gamma >= 0.48);
    }
}

#[test]
fn refinement_and_truncation_stability() {
    let eq = choquard(3, 1.0, 2.0);
    let opts = SolverOptions::default();
    let base = solve(eq, &make_grid(3, 25.0, 201, 1.02).unwrap(), &opts).unwrap();
    let fine = solve(eq, &make_grid(3, 25.0, 401, 1.02).unwrap(), &opts).unwrap();
    let wide = solve(eq, &make_grid(3, 50.0, 401, 1.02).unwrap(), &opts).unwrap();
    let rel = |a: f64, b: f64| (a - b).abs() / a;
    assert!(rel(base.norms.l2, fine.norms.l2) <= 1e-3);
    assert!(rel(base.norms.l2, wide.norms.l2) <= 1e-6);
}

#[test]
fn window_violations_are_rejected() {
    let g = make_grid(3, 25.0, 65, 1.02).unwrap();
    let err = solve(choquard(3, 1.0, 1.5), &g, &SolverOptions::default()).unwrap_err();
    assert!(matches!(err, Error::ParameterWindow(_)));
    let err = solve_model(3, 5.0, &g, &SolverOptions::default()).unwrap_err();
    assert!(matches!(err, Error::ParameterWindow(_)));
    let g1 = make_grid(1, 25.0, 65, 1.0).unwrap();
    assert!(matches!(solve(choquard(3, 1.0, 2.0), &g1, &SolverOptions::default()), Err(Error::InvalidArgument(_))));
}

#[test]
fn non_convergence_reports_residual() {
    let g = make_grid(3, 25.0, 65, 1.02).unwrap();
    let opts = SolverOptions { max_iter: 3, fallback: false, ..Default::default() };
    match solve(choquard(3, 1.0, 2.0), &g, &opts) {
        Err(Error::NonConvergence { iterations, residual }) => {
            assert!(iterations <= 3);
            assert!(residual.is_finite() && residual > 1e-10);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn gradient_flow_reaches_the_same_state() {
    let g = make_grid(3, 25.0, 121, 1.02).unwrap();
    let eq = choquard(3, 1.0, 2.0);
    let a = solve(eq, &g, &SolverOptions::default()).unwrap();
    let opts = SolverOptions { method: Method::GradientFlow, max_iter: 5000, ..Default::default() };
    let b = solve(eq, &g, &opts).unwrap();
    let diff = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn decay_fit() {
    let g = make_grid(1, 25.0, 401, 1.0).unwrap();
    let s = solve_model(1, 3.0, &g, &SolverOptions::default()).unwrap();
    let fit = fit_decay(&s).unwrap();
    assert!((fit.gamma - 1.0).abs() < 0.01);
    assert!((fit.c - 2.0 * 2f64.sqrt()).abs() < 1e-2);
    let mut flat = s.clone();
    flat.field = crate::grid::RadialField::zeros(g);
    assert!(matches!(fit_decay(&flat), Err(Error::FitUnreliable(_))));
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = make_grid(3, 25.0, 81, 1.02).unwrap();
    let s = solve(choquard(3, 1.0, 2.0), &g, &SolverOptions::default()).unwrap();
    let (json, csv) = s.save(dir.path(), "Q").unwrap();
    assert!(csv.exists());
    let back = GroundState::load(&json).unwrap();
    assert_eq!(back.values(), s.values());
    assert_eq!(back.equation, s.equation);
    assert_eq!(back.norms, s.norms);
    assert_eq!(back.residual, s.residual);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(json).unwrap()).unwrap();
    assert_eq!(doc["equation"], "choquard");
    assert!(doc["norms"]["H1"].as_f64().unwrap() > 0.0);
}
