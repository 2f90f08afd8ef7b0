use std::sync::OnceLock;

use super::eig::{hermitian_eig, hermitian_eig_unchecked, HermitianEig};
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const PURITY_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        let eig = hermitian_eig(&matrix)?;
        let matrix = matrix.symmetrize();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace((tr - 1.0).abs()));
        }
        if eig.min() < -PSD_TOL {
            return Err(Error::NotPsd(eig.min()));
        }
        Ok(Self { matrix })
    }

    /// `|v><v|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::outer(&v, &v),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// Diagonal state from a probability vector.
    pub fn classical(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.re_inner(&self.matrix)
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= PURITY_TOL
    }

    /// Leading eigenvector; the state vector when the state is pure.
    pub fn principal_vector(&self) -> Vec<C64> {
        hermitian_eig_unchecked(&self.matrix).vectors.column(0)
    }

    /// `tr[A rho]` for Hermitian `A`.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        a.re_inner(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            matrix: super::matrix::kron(&self.matrix, &other.matrix),
        }
    }

    pub fn tensor_power(&self, n: usize) -> DensityMatrix {
        Self {
            matrix: super::matrix::kron_power(&self.matrix, n),
        }
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.symmetrize(),
        }
    }
}

/// Hermitian observable with spectrum in `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
    eig: OnceLock<HermitianEig>,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eig(&matrix)?;
        if eig.min() < -PSD_TOL || eig.max() > 1.0 + PSD_TOL {
            return Err(Error::ObservableOutOfRange(eig.min(), eig.max()));
        }
        let cell = OnceLock::new();
        let _ = cell.set(eig);
        Ok(Self {
            matrix: matrix.symmetrize(),
            eig: cell,
        })
    }

    pub fn projector(state: &DensityMatrix) -> Result<Self> {
        Self::new(state.matrix().clone())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigen(&self) -> &HermitianEig {
        self.eig.get_or_init(|| hermitian_eig_unchecked(&self.matrix))
    }
}

/// Trace norm: sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    if a.hermitian_deviation() <= 1e-12 * a.max_abs().max(1.0) {
        let e = hermitian_eig_unchecked(&a.symmetrize());
        return Ok(e.values.iter().map(|v| v.abs()).sum());
    }
    let gram = &a.adjoint() * a;
    let e = hermitian_eig_unchecked(&gram.symmetrize());
    Ok(e.values.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// `1/2 ||rho - sigma||_1`
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    Ok(0.5 * trace_norm(&rho.try_sub(sigma)?)?)
}

/// Square root of a PSD matrix, clamping negative round-off eigenvalues to zero.
pub fn psd_sqrt(a: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eig_unchecked(&a.symmetrize()).reconstruct_with(|x| x.max(0.0).sqrt())
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}-dim and {}-dim states",
            rho.dim(),
            sigma.dim()
        )));
    }
    let s = psd_sqrt(rho.matrix());
    let inner = &(&s * sigma.matrix()) * &s;
    let e = hermitian_eig_unchecked(&inner.symmetrize());
    let root: f64 = e.values.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of a `(dA dB) x (dA dB)` matrix on one tensor factor.
pub fn partial_transpose(
    a: &ComplexMatrix,
    dims: (usize, usize),
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !a.is_square() || a.rows() != da * db || da == 0 || db == 0 {
        return Err(Error::DimensionMismatch(format!(
            "dims ({da}, {db}) do not factor a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    Ok(partial_transpose_unchecked(a, dims, subsystem))
}

pub(crate) fn partial_transpose_unchecked(
    a: &ComplexMatrix,
    (da, db): (usize, usize),
    subsystem: Subsystem,
) -> ComplexMatrix {
    let _ = da;
    ComplexMatrix::from_fn(a.rows(), a.cols(), |r, c| {
        let (ia, ib) = (r / db, r % db);
        let (ja, jb) = (c / db, c % db);
        match subsystem {
            Subsystem::B => a[(ia * db + jb, ja * db + ib)],
            Subsystem::A => a[(ja * db + ib, ia * db + jb)],
        }
    })
}

/// `p psi + (1 - p) I / d`
pub fn isotropic_state(psi: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    if !psi.is_pure() {
        return Err(Error::NotPure(psi.purity()));
    }
    let d = psi.dim();
    let mut m = ComplexMatrix::identity(d).scale((1.0 - p) / d as f64);
    m.axpy(p, psi.matrix());
    Ok(DensityMatrix::from_trusted(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::kron;
    use crate::qmath::states;

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
        let rho = states::plus().into_matrix();
        assert!(trace_norm(&(&rho - &rho)).unwrap().abs() < 1e-15);
        let zero = ComplexMatrix::diag(&[1.0, 0.0]);
        let mixed = ComplexMatrix::identity(2).scale(0.5);
        assert!((trace_norm(&(&zero - &mixed)).unwrap() - 1.0).abs() < 1e-15);
        assert!(trace_norm(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let rho = isotropic_state(&states::bell(), 0.3).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let z0 = DensityMatrix::classical(&[1.0, 0.0]).unwrap();
        let z1 = DensityMatrix::classical(&[0.0, 1.0]).unwrap();
        assert!(fidelity(&z0, &z1).unwrap().abs() < 1e-15);
        let psi = states::bell();
        let v = psi.principal_vector();
        let direct = rho.matrix().expectation(&v);
        assert!((fidelity(&psi, &rho).unwrap() - direct).abs() < 1e-12);
        assert!(fidelity(&psi, &z0).is_err());
    }

    #[test]
    fn partial_transpose_examples() {
        let mixed = DensityMatrix::maximally_mixed(4);
        let pt = partial_transpose(mixed.matrix(), (2, 2), Subsystem::B).unwrap();
        assert!(pt.max_abs_diff(mixed.matrix()) < 1e-16);

        let bell = states::bell();
        let pt = partial_transpose(bell.matrix(), (2, 2), Subsystem::B).unwrap();
        let e = hermitian_eig(&pt).unwrap();
        assert!((e.min() + 0.5).abs() < 1e-14);

        let twice = partial_transpose(&pt, (2, 2), Subsystem::B).unwrap();
        assert_eq!(&twice, bell.matrix());
        assert!(partial_transpose(bell.matrix(), (3, 2), Subsystem::A).is_err());
    }

    #[test]
    fn partial_transpose_of_product_transposes_factor() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64 + 1.0));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i * j) as f64, i as f64 - j as f64));
        let ab = kron(&a, &b);
        let ptb = partial_transpose(&ab, (2, 3), Subsystem::B).unwrap();
        assert!(ptb.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);
        let pta = partial_transpose(&ab, (2, 3), Subsystem::A).unwrap();
        assert!(pta.max_abs_diff(&kron(&a.transpose(), &b)) < 1e-15);
    }

    #[test]
    fn isotropic_examples() {
        let psi = states::bell();
        let one = isotropic_state(&psi, 1.0).unwrap();
        assert!(one.matrix().max_abs_diff(psi.matrix()) < 1e-16);
        let zero = isotropic_state(&psi, 0.0).unwrap();
        assert!(zero.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-16);
        let half = isotropic_state(&psi, 0.5).unwrap();
        assert!((half.expectation(psi.matrix()) - 0.625).abs() < 1e-15);
        assert!(isotropic_state(&psi, 1.5).is_err());
        assert!(isotropic_state(&DensityMatrix::maximally_mixed(4), 0.5).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.6])),
            Err(Error::NotUnitTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])),
            Err(Error::NotPsd(_))
        ));
        let mut m = ComplexMatrix::diag(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn observable_range() {
        assert!(Observable::new(ComplexMatrix::diag(&[1.0, 0.0])).is_ok());
        assert!(matches!(
            Observable::new(ComplexMatrix::diag(&[1.2, 0.0])),
            Err(Error::ObservableOutOfRange(..))
        ));
    }
}
