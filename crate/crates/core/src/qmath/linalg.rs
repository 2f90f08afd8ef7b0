//! Small dense factorizations used by the interior-point solver.

use super::eig::{jacobi_rotation, rotate_columns};
use super::matrix::{ComplexMatrix, C64, ZERO};

/// Lower Cholesky factor `L` with `A = L L^†`; `None` if `A` is not positive definite.
pub(crate) fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = C64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix.
pub(crate) fn lower_inverse(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = l[(j, j)].inv();
        for i in j + 1..n {
            let mut s = ZERO;
            for k in j..i {
                s += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// One-sided Jacobi SVD `B V = U diag(sigma)`; returns `(sigma, V)`.
///
/// Small singular values keep high relative accuracy, which the scaling
/// computation near convergence depends on.
pub(crate) fn svd_right(b: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = b.cols();
    let mut u = b.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..u.rows() {
                    alpha += u[(k, p)].norm_sqr();
                    beta += u[(k, q)].norm_sqr();
                    gamma += u[(k, p)].conj() * u[(k, q)];
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() < 1e-300 {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n)
        .map(|j| (0..u.rows()).map(|k| u[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    (sigma, v)
}

/// Cholesky factor of a symmetric positive definite matrix, kept with the
/// matrix for iterative refinement.
pub(crate) struct SpdFactor {
    a: Vec<f64>,
    l: Vec<f64>,
    n: usize,
}

impl SpdFactor {
    /// Factors `A` (row-major, n x n), retrying with a small diagonal shift when
    /// the factorization breaks down.
    pub(crate) fn new(a: &[f64], n: usize) -> Option<Self> {
        let max_diag = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
        for &shift in &[0.0, 1e-14, 1e-12, 1e-10] {
            if let Some(l) = real_cholesky(a, n, shift * max_diag) {
                return Some(Self { a: a.to_vec(), l, n });
            }
        }
        None
    }

    /// Solves with two steps of iterative refinement against the unshifted matrix.
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = real_chol_solve(&self.l, n, b);
        for _ in 0..2 {
            let r: Vec<f64> = (0..n)
                .map(|i| b[i] - (0..n).map(|j| self.a[i * n + j] * x[j]).sum::<f64>())
                .collect();
            let dx = real_chol_solve(&self.l, n, &r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x
    }
}

fn real_cholesky(a: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Some(l)
}

fn real_chol_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}
