use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, Observable};
use crate::error::{Error, Result};

pub const TP_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::DimensionMismatch("Kraus operators of differing shapes".into()));
        }
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self {
            kraus,
            dim_in,
            dim_out,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            dim_in: d,
            dim_out: d,
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `rho -> tr[rho] sigma` on a `dim_in`-dimensional input.
    pub fn replacement(dim_in: usize, sigma: &DensityMatrix) -> Self {
        let eig = super::eig::hermitian_eig_unchecked(sigma.matrix());
        let d_out = sigma.dim();
        let mut kraus = Vec::new();
        for (k, &w) in eig.values.iter().enumerate() {
            if w <= 1e-15 {
                continue;
            }
            let amp = w.sqrt();
            let u = eig.vectors.column(k);
            for j in 0..dim_in {
                let mut op = ComplexMatrix::zeros(d_out, dim_in);
                for (i, ui) in u.iter().enumerate() {
                    op[(i, j)] = ui * amp;
                }
                kraus.push(op);
            }
        }
        Self {
            kraus,
            dim_in,
            dim_out: d_out,
        }
    }

    /// `rho -> I / d`
    pub fn fully_depolarizing(d: usize) -> Self {
        Self::replacement(d, &DensityMatrix::maximally_mixed(d))
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `sum_k K_k rho K_k^†`
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects dimension {}, state has {}",
                self.dim_in,
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_trusted(self.apply_matrix(rho.matrix())))
    }

    pub(crate) fn apply_matrix(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * a) * &k.adjoint());
        }
        out
    }

    /// Heisenberg-picture action `sum_k K_k^† M K_k`; unital, so observables stay in `[0, I]`.
    pub fn adjoint_apply(&self, m: &Observable) -> Result<Observable> {
        if m.dim() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "observable of dimension {} after a channel with output {}",
                m.dim(),
                self.dim_out
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out = &out + &(&(&k.adjoint() * m.matrix()) * k);
        }
        Observable::new(out)
    }

    /// Sequential composition: `self` after `first`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<QuantumChannel> {
        if first.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch("channel composition".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                kraus.push(a * b);
            }
        }
        Ok(Self {
            kraus,
            dim_in: first.dim_in,
            dim_out: self.dim_out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{isotropic_state, states};

    #[test]
    fn identity_channel_is_noop() {
        let rho = isotropic_state(&states::bell(), 0.4).unwrap();
        let out = QuantumChannel::identity(4).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-16);
    }

    #[test]
    fn depolarizing_gives_maximally_mixed() {
        let rho = states::t_state();
        let out = QuantumChannel::fully_depolarizing(2).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn replacement_by_bell_complement() {
        let psi = states::bell();
        let target = DensityMatrix::new((&ComplexMatrix::identity(4) - psi.matrix()).scale(1.0 / 3.0)).unwrap();
        let ch = QuantumChannel::replacement(4, &target);
        assert!(QuantumChannel::new(ch.kraus_operators().to_vec()).is_ok());
        for p in [0.0, 0.3, 1.0] {
            let rho = isotropic_state(&psi, p).unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!(out.matrix().max_abs_diff(target.matrix()) < 1e-15);
        }
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = ComplexMatrix::diag(&[1.0, 0.5]);
        assert!(matches!(QuantumChannel::new(vec![k]), Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(QuantumChannel::identity(2).apply(&states::bell()).is_err());
    }
}
