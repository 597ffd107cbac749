//! Gauss-type quadrature rules on `[-1, 1]` and Lagrange bases on their nodes.
//!
//! Rules are built with the Golub-Welsch construction from the monic Jacobi
//! recurrence for the weight `(1 - x)^a (1 + x)^b`. Radau and Lobatto variants
//! modify the last recurrence coefficients so the prescribed endpoints become
//! nodes.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a rule on `[-1, 1]`, nodes sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Maps the rule onto `[lo, hi]`; the weights absorb the Jacobian only
    /// (any built-in weight function is not rescaled).
    pub fn mapped(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let x = self.nodes.iter().map(|t| mid + half * t).collect();
        let w = self.weights.iter().map(|w| w * half).collect();
        (x, w)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn jacobi_alpha(k: usize, a: f64, b: f64) -> f64 {
    let k = k as f64;
    if k == 0.0 {
        (b - a) / (a + b + 2.0)
    } else {
        let s = 2.0 * k + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }
}

fn jacobi_beta(k: usize, a: f64, b: f64) -> f64 {
    let kf = k as f64;
    if k == 1 {
        4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
    } else {
        let s = 2.0 * kf + a + b;
        4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    }
}

/// Total mass of `(1 - x)^a (1 + x)^b` on `[-1, 1]` for `a = 0`, integer-valued `b`
/// or general `b` via the closed form `2^{b+1} / (b + 1)`.
fn jacobi_mass(a: f64, b: f64) -> f64 {
    assert!(a == 0.0, "only a = 0 Jacobi weights are used");
    2f64.powf(b + 1.0) / (b + 1.0)
}

/// Monic orthogonal polynomials p_0..=p_n at `z`.
fn monic_values(n: usize, z: f64, alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = z - alpha[0];
    }
    for k in 1..n {
        p[k + 1] = (z - alpha[k]) * p[k] - beta[k] * p[k - 1];
    }
    p
}

fn golub_welsch(diag: &[f64], offdiag_sq: &[f64], mass: f64) -> Rule {
    let m = diag.len();
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        jac[(i, i)] = diag[i];
        if i + 1 < m {
            let e = offdiag_sq[i].sqrt();
            jac[(i, i + 1)] = e;
            jac[(i + 1, i)] = e;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|j| (eig.eigenvalues[j], mass * eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

fn recurrence(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let alpha: Vec<f64> = (0..m.max(1)).map(|k| jacobi_alpha(k, a, b)).collect();
    // beta[0] is unused by the recurrence.
    let beta: Vec<f64> = (0..m.max(1))
        .map(|k| if k == 0 { 0.0 } else { jacobi_beta(k, a, b) })
        .collect();
    (alpha, beta)
}

/// `m`-point Gauss rule for the weight `(1 + x)^b`.
pub fn gauss_jacobi(m: usize, b: f64) -> Rule {
    assert!(m >= 1);
    let (alpha, beta) = recurrence(m, 0.0, b);
    golub_welsch(&alpha[..m], &beta[1..m], jacobi_mass(0.0, b))
}

/// `m`-point Gauss-Legendre rule.
pub fn gauss_legendre(m: usize) -> Rule {
    let mut rule = gauss_jacobi(m, 0.0);
    // Exact symmetry removes the eigensolver's last-bit noise.
    let n = rule.len();
    for i in 0..n / 2 {
        let x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
    rule
}

/// `m`-point Gauss-Radau rule for the weight `(1 + x)^b` with `x = +1` as a node.
pub fn radau_right(m: usize, b: f64) -> Rule {
    assert!(m >= 2);
    let (alpha, beta) = recurrence(m, 0.0, b);
    let z = 1.0;
    let p = monic_values(m - 1, z, &alpha, &beta);
    let mut diag = alpha[..m].to_vec();
    diag[m - 1] = z - beta[m - 1] * p[m - 2] / p[m - 1];
    let mut rule = golub_welsch(&diag, &beta[1..m], jacobi_mass(0.0, b));
    rule.nodes[m - 1] = 1.0;
    rule
}

/// `m`-point Gauss-Lobatto-Legendre rule (both endpoints are nodes).
pub fn lobatto(m: usize) -> Rule {
    assert!(m >= 2);
    let (alpha, beta) = recurrence(m, 0.0, 0.0);
    let pp = monic_values(m - 1, 1.0, &alpha, &beta);
    let pm = monic_values(m - 1, -1.0, &alpha, &beta);
    // Solve x p_{m-1}(x) - a p_{m-1}(x) - b p_{m-2}(x) = 0 at x = +-1.
    let (a11, a12, r1) = (pp[m - 1], pp[m - 2], pp[m - 1]);
    let (a21, a22, r2) = (pm[m - 1], pm[m - 2], -pm[m - 1]);
    let det = a11 * a22 - a12 * a21;
    let new_alpha = (r1 * a22 - a12 * r2) / det;
    let new_beta = (a11 * r2 - a21 * r1) / det;
    let mut diag = alpha[..m].to_vec();
    diag[m - 1] = new_alpha;
    let mut off = beta[1..m].to_vec();
    off[m - 2] = new_beta;
    let mut rule = golub_welsch(&diag, &off, 2.0);
    rule.nodes[0] = -1.0;
    rule.nodes[m - 1] = 1.0;
    for i in 0..m / 2 {
        let x = 0.5 * (rule.nodes[m - 1 - i] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[m - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[m - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    rule
}

/// Lagrange interpolation basis on a fixed node set.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    bary: Vec<f64>,
    /// `diff[i][k]` = derivative of basis `k` at node `i`.
    diff: Vec<Vec<f64>>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Self {
        let n = nodes.len();
        let bary: Vec<f64> = (0..n)
            .map(|k| {
                let prod: f64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| nodes[k] - nodes[j])
                    .product();
                1.0 / prod
            })
            .collect();
        let mut diff = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for k in 0..n {
                if k != i {
                    let v = (bary[k] / bary[i]) / (nodes[i] - nodes[k]);
                    diff[i][k] = v;
                    row_sum += v;
                }
            }
            diff[i][i] = -row_sum;
        }
        Self {
            nodes: nodes.to_vec(),
            bary,
            diff,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Values of every basis function at `x`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        let mut out = vec![0.0; n];
        if let Some(hit) = self.nodes.iter().position(|&t| t == x) {
            out[hit] = 1.0;
            return out;
        }
        let mut denom = 0.0;
        for k in 0..n {
            let t = self.bary[k] / (x - self.nodes[k]);
            out[k] = t;
            denom += t;
        }
        for v in &mut out {
            *v /= denom;
        }
        out
    }

    /// Derivatives of every basis function at `x`.
    pub fn eval_deriv(&self, x: f64) -> Vec<f64> {
        let vals = self.eval(x);
        let n = self.nodes.len();
        let mut out = vec![0.0; n];
        for (i, vi) in vals.iter().enumerate() {
            if *vi == 0.0 {
                continue;
            }
            for k in 0..n {
                out[k] += vi * self.diff[i][k];
            }
        }
        out
    }

    /// Differentiation matrix row `i` (derivatives of all basis functions at node `i`).
    pub fn diff_row(&self, i: usize) -> &[f64] {
        &self.diff[i]
    }
}
