//! Small dense/banded helpers not covered by nalgebra.

use nalgebra::DMatrix;

/// Cholesky factor of a symmetric positive definite band matrix.
///
/// Row `i` of the factor stores `L[i][i-bw..=i]`.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Factors the leading `n x n` block of `a`, reading only the band.
    pub fn factor(a: &DMatrix<f64>, n: usize, bw: usize) -> Option<Self> {
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        // l[i*w + (j + bw - i)] = L[i][j] for i - bw <= j <= i
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut sum = a[(i, j)];
                let k0 = j0.max(j.saturating_sub(bw));
                for k in k0..j {
                    sum -= l[i * w + (k + bw - i)] * l[j * w + (k + bw - j)];
                }
                if j == i {
                    if sum <= 0.0 || !sum.is_finite() {
                        return None;
                    }
                    l[i * w + bw] = sum.sqrt();
                } else {
                    l[i * w + (j + bw - i)] = sum / l[j * w + bw];
                }
            }
        }
        Some(Self { n, bw, l })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + (k + bw - i)] * b[k];
            }
            b[i] = s / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..(i + 1 + bw).min(n) {
                s -= self.l[k * w + (i + bw - k)] * b[k];
            }
            b[i] = s / self.l[i * w + bw];
        }
    }
}

/// `max_{i != j} |A_ij - A_ji| / max |A_ij|`.
pub fn relative_asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut scale: f64 = 0.0;
    let mut diff: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(a[(i, j)].abs());
            if j < i {
                diff = diff.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}
