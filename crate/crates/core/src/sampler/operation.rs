use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix, QuantumChannel};

pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// `sum_j w_j Lambda_j` with real weights summing to one.
#[derive(Clone, Debug)]
pub struct VirtualOperation {
    terms: Vec<(f64, QuantumChannel)>,
    lambda_plus: f64,
    lambda_minus: f64,
}

impl VirtualOperation {
    pub fn new(terms: Vec<(f64, QuantumChannel)>) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("virtual operation without terms".into()))?;
        let (din, dout) = (first.dim_in(), first.dim_out());
        if terms.iter().any(|(_, c)| c.dim_in() != din || c.dim_out() != dout) {
            return Err(Error::DimensionMismatch("channels of a virtual operation differ in shape".into()));
        }
        if let Some((w, _)) = terms.iter().find(|(w, _)| !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite weight {w}")));
        }
        let sum: f64 = terms.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!("weights sum to {sum}, not 1")));
        }
        let lambda_plus = terms.iter().map(|(w, _)| w.max(0.0)).sum();
        let lambda_minus = terms.iter().map(|(w, _)| (-w).max(0.0)).sum();
        Ok(Self {
            terms,
            lambda_plus,
            lambda_minus,
        })
    }

    /// `lambda_plus * plus - lambda_minus * minus` with `lambda_plus - lambda_minus = 1`.
    pub fn from_pair(lambda_plus: f64, plus: QuantumChannel, lambda_minus: f64, minus: QuantumChannel) -> Result<Self> {
        if lambda_plus < 0.0 || lambda_minus < 0.0 {
            return Err(Error::InvalidArgument("pair weights must be nonnegative".into()));
        }
        Self::new(vec![(lambda_plus, plus), (-lambda_minus, minus)])
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![(1.0, QuantumChannel::identity(d))]).expect("identity is a valid operation")
    }

    pub fn terms(&self) -> &[(f64, QuantumChannel)] {
        &self.terms
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// `C = sum_j |w_j|`
    pub fn overhead(&self) -> f64 {
        self.lambda_plus + self.lambda_minus
    }

    pub fn dim_in(&self) -> usize {
        self.terms[0].1.dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.terms[0].1.dim_out()
    }

    /// The (generally non-positive) output matrix `sum_j w_j Lambda_j(rho)`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim_in() {
            return Err(Error::DimensionMismatch(format!(
                "virtual operation expects dimension {}, state has {}",
                self.dim_in(),
                rho.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out(), self.dim_out());
        for (w, ch) in &self.terms {
            out.axpy(*w, &ch.apply_matrix(rho.matrix()));
        }
        Ok(out)
    }
}
