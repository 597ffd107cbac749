//! Feasibility of the exponent system behind the symmetry classification of
//! positive solutions.
//!
//! In reciprocal variables (`x_r = 1/r`, ...) the unknowns must satisfy
//!
//! ```text
//! x_r, x_r1, x_r2, x_r3 ∈ [(d-2)/(2d), 1/2]
//! x_t, x_t1            ∈ [p(d-2)/(2d) - (d-α)/d, α/d) ∩ (0, 1)
//! x_s                  ∈ [2/d, 1] ∩ [x_r, x_r + 2/d]
//! r1 >= p-2,  r2 >= p-1,  r3 >= p-1
//! x_t1 + (p-2) x_r1 + x_r = x_s
//! (p-1) x_r2 + x_t       = x_s
//! x_t + (d-α)/d          = (p-1) x_r3 + x_r
//! ```
//!
//! The last equation fixes `x_r3` from `(x_r, x_t)`; the remaining two leave a
//! one-parameter family that is an interval image, so after scanning
//! `(x_r, x_t)` on a lattice the rest is decided exactly.

use serde::{Deserialize, Serialize};

use crate::grid::ChoquardParams;

/// Exponents in their natural (non-reciprocal) form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub t: f64,
    pub t1: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    /// Residuals of the three equalities.
    pub equality_residuals: [f64; 3],
    /// Human-readable list of violated memberships.
    pub violations: Vec<String>,
}

impl WitnessCheck {
    pub fn max_residual(&self) -> f64 {
        self.equality_residuals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn accepted(&self, tol: f64) -> bool {
        self.violations.is_empty() && self.max_residual() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<Witness>,
    /// Why the search was skipped or failed.
    pub note: Option<String>,
}

/// Closed interval with optionally open ends.
#[derive(Debug, Clone, Copy)]
struct Span {
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl Span {
    fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    fn intersect(&self, o: &Span) -> Span {
        let (lo, lo_open) = if self.lo > o.lo {
            (self.lo, self.lo_open)
        } else if o.lo > self.lo {
            (o.lo, o.lo_open)
        } else {
            (self.lo, self.lo_open || o.lo_open)
        };
        let (hi, hi_open) = if self.hi < o.hi {
            (self.hi, self.hi_open)
        } else if o.hi < self.hi {
            (o.hi, o.hi_open)
        } else {
            (self.hi, self.hi_open || o.hi_open)
        };
        Span { lo, hi, lo_open, hi_open }
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    /// An interior point (the midpoint when the span has positive length).
    fn pick(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

struct System {
    d: f64,
    alpha: f64,
    p: f64,
}

impl System {
    fn lebesgue(&self) -> Span {
        // x = 1/r with r ∈ [2, 2d/(d-2)]; for d <= 2 the upper end is +∞ (open at 0).
        if self.d > 2.0 {
            Span::closed((self.d - 2.0) / (2.0 * self.d), 0.5)
        } else {
            Span { lo: 0.0, hi: 0.5, lo_open: true, hi_open: false }
        }
    }

    fn t_span(&self) -> Span {
        let lo = self.p * (self.d - 2.0) / (2.0 * self.d) - (self.d - self.alpha) / self.d;
        let base = Span { lo, hi: self.alpha / self.d, lo_open: false, hi_open: true };
        base.intersect(&Span { lo: 0.0, hi: 1.0, lo_open: true, hi_open: true })
    }

    /// `x ≤ 1/m` encodes `r ≥ m`.
    fn lower_bound_on_r(&self, m: f64) -> Span {
        if m <= 0.0 {
            Span::closed(f64::NEG_INFINITY, f64::INFINITY)
        } else {
            Span::closed(f64::NEG_INFINITY, 1.0 / m)
        }
    }

    fn s_span(&self, x_r: f64) -> Span {
        Span::closed(2.0 / self.d, 1.0).intersect(&Span::closed(x_r, x_r + 2.0 / self.d))
    }

    fn residuals(&self, w: &Witness) -> [f64; 3] {
        let p = self.p;
        [
            1.0 / w.t1 + (p - 2.0) / w.r1 + 1.0 / w.r - 1.0 / w.s,
            (p - 1.0) / w.r2 + 1.0 / w.t - 1.0 / w.s,
            1.0 / w.t + (self.d - self.alpha) / self.d - (p - 1.0) / w.r3 - 1.0 / w.r,
        ]
    }

    /// Completes `(x_r, x_t)` to a full witness when possible.
    fn complete(&self, x_r: f64, x_t: f64) -> Option<Witness> {
        let p = self.p;
        let leb = self.lebesgue();
        let x_r3 = (x_t + (self.d - self.alpha) / self.d - x_r) / (p - 1.0);
        if !leb.intersect(&self.lower_bound_on_r(p - 1.0)).contains(x_r3) {
            return None;
        }
        let r2_span = leb.intersect(&self.lower_bound_on_r(p - 1.0));
        let r1_span = leb.intersect(&self.lower_bound_on_r(p - 2.0));
        if r2_span.is_empty() || r1_span.is_empty() {
            return None;
        }
        // x_s = (p-1) x_r2 + x_t, restricted to its own span.
        let image = Span {
            lo: (p - 1.0) * r2_span.lo + x_t,
            hi: (p - 1.0) * r2_span.hi + x_t,
            lo_open: r2_span.lo_open,
            hi_open: r2_span.hi_open,
        };
        let js = image.intersect(&self.s_span(x_r));
        if js.is_empty() {
            return None;
        }
        // x_t1 = x_s - x_r - (p-2) x_r1 sweeps an interval as x_s rises and x_r1 falls.
        let (r1_lo, r1_hi) = (r1_span.lo, r1_span.hi);
        let lo = js.lo - x_r - (p - 2.0) * r1_hi;
        let hi = js.hi - x_r - (p - 2.0) * r1_lo;
        let reach = Span { lo, hi, lo_open: js.lo_open || r1_span.hi_open, hi_open: js.hi_open || r1_span.lo_open };
        let target = reach.intersect(&self.t_span());
        if target.is_empty() {
            return None;
        }
        let x_t1 = target.pick();
        let spread = hi - lo;
        let lambda = if spread > 0.0 { (x_t1 - lo) / spread } else { 0.5 };
        let x_s = js.lo + lambda * (js.hi - js.lo);
        let x_r1 = if p > 2.0 {
            (x_s - x_r - x_t1) / (p - 2.0)
        } else {
            r1_hi - lambda * (r1_hi - r1_lo)
        };
        let x_r2 = (x_s - x_t) / (p - 1.0);
        Some(Witness {
            r: 1.0 / x_r,
            r1: 1.0 / x_r1,
            r2: 1.0 / x_r2,
            r3: 1.0 / x_r3,
            t: 1.0 / x_t,
            t1: 1.0 / x_t1,
            s: 1.0 / x_s,
        })
    }

    fn check(&self, w: &Witness) -> WitnessCheck {
        let mut violations = Vec::new();
        let leb = self.lebesgue();
        for (name, v) in [("r", w.r), ("r1", w.r1), ("r2", w.r2), ("r3", w.r3)] {
            if !leb.contains(1.0 / v) {
                violations.push(format!("{name} = {v} outside [2, 2d/(d-2)]"));
            }
        }
        let ts = self.t_span();
        for (name, v) in [("t", w.t), ("t1", w.t1)] {
            if !ts.contains(1.0 / v) {
                violations.push(format!("1/{name} = {} outside the admissible range", 1.0 / v));
            }
        }
        if !self.s_span(1.0 / w.r).contains(1.0 / w.s) {
            violations.push(format!("1/s = {} outside [2/d, 1] ∩ [1/r, 1/r + 2/d]", 1.0 / w.s));
        }
        let p = self.p;
        if w.r1 < p - 2.0 {
            violations.push(format!("r1 = {} < p - 2", w.r1));
        }
        if w.r2 < p - 1.0 {
            violations.push(format!("r2 = {} < p - 1", w.r2));
        }
        if w.r3 < p - 1.0 {
            violations.push(format!("r3 = {} < p - 1", w.r3));
        }
        WitnessCheck {
            equality_residuals: self.residuals(w),
            violations,
        }
    }
}

fn system(params: &ChoquardParams) -> System {
    System {
        d: params.d as f64,
        alpha: params.alpha,
        p: params.p,
    }
}

/// Verifies every membership and equality for a proposed witness.
pub fn check_witness(params: &ChoquardParams, witness: &Witness) -> WitnessCheck {
    system(params).check(witness)
}

/// Lattice resolution per scanned reciprocal exponent.
const LATTICE: usize = 400;

/// Searches for a witness; requires `p >= 2` and the `d/(2d-α) > 1/p > (d-2)/(2d-α)` window.
pub fn assumption12_feasible(params: &ChoquardParams) -> FeasibilityReport {
    if params.p < 2.0 || !params.in_window_para3() {
        return FeasibilityReport {
            feasible: false,
            witness: None,
            note: Some("requires p >= 2 inside d/(2d-alpha) > 1/p > (d-2)/(2d-alpha)".into()),
        };
    }
    let sys = system(params);
    let leb = sys.lebesgue();
    let ts = sys.t_span();
    if ts.is_empty() {
        return FeasibilityReport {
            feasible: false,
            witness: None,
            note: Some("admissible range for 1/t is empty".into()),
        };
    }
    let interior = |span: &Span, k: usize| span.lo + (span.hi - span.lo) * (k as f64 + 0.5) / LATTICE as f64;
    // The witness with the smallest worst-case equality residual wins; ties go
    // to the first lattice point, which keeps the search deterministic.
    let mut best: Option<(f64, Witness)> = None;
    for i in 0..LATTICE {
        let x_r = interior(&leb, i);
        for j in 0..LATTICE {
            let x_t = interior(&ts, j);
            if let Some(w) = sys.complete(x_r, x_t) {
                let check = sys.check(&w);
                if check.violations.is_empty() {
                    let res = check.max_residual();
                    if best.as_ref().map_or(true, |(b, _)| res < *b) {
                        best = Some((res, w));
                    }
                }
            }
        }
        if matches!(best, Some((r, _)) if r == 0.0) {
            break;
        }
    }
    match best {
        Some((_, w)) => FeasibilityReport {
            feasible: true,
            witness: Some(w),
            note: None,
        },
        None => FeasibilityReport {
            feasible: false,
            witness: None,
            note: Some("no lattice point admits a completion".into()),
        },
    }
}

/// The explicit exponents proposed for the near-Newtonian cases `d ∈ {3, 4}`.
pub fn explicit_witness(params: &ChoquardParams) -> Option<Witness> {
    let (a, p) = (params.alpha, params.p);
    match params.d {
        3 => Some(Witness {
            r: 8.0 / 3.0,
            r1: 8.0 / 3.0,
            r2: 8.0 / 3.0 * (p - 1.0),
            r3: 12.0 * (p - 1.0) / (3.0 - 4.0 * (a - 1.0)),
            t: 24.0 / 7.0,
            t1: 24.0 / (7.0 - 9.0 * (p - 2.0)),
            s: 1.5,
        }),
        4 => Some(Witness {
            r: 8.0 / 3.0,
            r1: 8.0 / 3.0,
            r2: 8.0 * (p - 1.0) / 3.0,
            r3: 8.0 * (p - 1.0) / (3.0 - 2.0 * (a - 2.0)),
            t: 4.0,
            t1: 8.0 / (2.0 - 3.0 * (p - 2.0)),
            s: 1.6,
        }),
        _ => None,
    }
}
