//! Cyclic Jacobi diagonalization of complex Hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Inputs farther than this from Hermitian are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(values) V^†` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `V diag(f(values)) V^†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Rotation zeroing the off-diagonal entry of `[[app, apq], [conj(apq), aqq]]`.
///
/// Returns `(c, s, phase)` where the unitary acting on columns `(p, q)` is
/// `[[c, s], [-s conj(phase), c conj(phase)]]`.
pub(crate) fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let abs = apq.norm();
    let phase = apq / abs;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

/// Applies `M <- M J` on columns `p`, `q`.
pub(crate) fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let ph = phase.conj();
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * (s * ph);
        m[(k, q)] = mp * s + mq * (c * ph);
    }
}

/// Applies `M <- J^† M` on rows `p`, `q`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * (s * phase);
        m[(q, k)] = mp * s + mq * (c * phase);
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(hermitian_eig_unchecked(&a.symmetrize()))
}

pub(crate) fn hermitian_eig_unchecked(a: &ComplexMatrix) -> HermitianEig {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m) <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let (c, s, phase) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, apq);
                    rotate_columns(&mut m, p, q, c, s, phase);
                    rotate_rows(&mut m, p, q, c, s, phase);
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    m[(p, p)].im = 0.0;
                    m[(q, q)].im = 0.0;
                    rotate_columns(&mut v, p, q, c, s, phase);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag = m.diagonal_real();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEig { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::ONE;

    #[test]
    fn diagonal_input() {
        let e = hermitian_eig(&ComplexMatrix::diag(&[1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_gives_hadamard_columns() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eig(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vectors.column(0);
        let v1 = e.vectors.column(1);
        // columns equal (1,1)/√2 and (1,-1)/√2 up to phase
        assert!(((v0[0] * v0[1].conj()).re - 0.5).abs() < 1e-14);
        assert!(((v1[0] * v1[1].conj()).re + 0.5).abs() < 1e-14);
        assert!((v0[0].norm() - h).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = ComplexMatrix::identity(2);
        a[(0, 1)] = ONE;
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_entries_reconstruct() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                C64::new(i as f64, 0.0)
            } else if i < j {
                C64::new(0.3 * (i + j) as f64, 0.7)
            } else {
                C64::new(0.3 * (i + j) as f64, -0.7)
            }
        });
        let e = hermitian_eig(&a).unwrap();
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
