use crate::error::{Error, Result};
use crate::qmath::{states, ComplexMatrix, DensityMatrix, QuantumChannel};
use crate::sampler::VirtualOperation;

/// `4/(1+3p) id - (3-3p)/(1+3p) R`, where `R` replaces any input by `(I - Phi)/3`.
///
/// Maps the isotropic state of Bell fidelity `(1+3p)/4` exactly onto the Bell
/// state. Refuses `p < 1/3`, where the fidelity is already that of a free state.
pub fn build_virtual_operation_teleport(p: f64) -> Result<VirtualOperation> {
    if !(p >= 1.0 / 3.0 - 1e-15 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "teleportation operation needs p in [1/3, 1], got {p}"
        )));
    }
    let bell = states::bell();
    let sigma = DensityMatrix::new((&ComplexMatrix::identity(4) - bell.matrix()).scale(1.0 / 3.0))?;
    let lp = 4.0 / (1.0 + 3.0 * p);
    let lm = (3.0 - 3.0 * p) / (1.0 + 3.0 * p);
    VirtualOperation::from_pair(lp, QuantumChannel::identity(4), lm, QuantumChannel::replacement(4, &sigma))
}
