//! Dense complex linear algebra and quantum state/channel primitives.

mod channel;
mod eig;
pub(crate) mod linalg;
mod matrix;
mod state;
pub mod states;

pub use channel::QuantumChannel;
pub use eig::{hermitian_eig, HermitianEig, HERMITIAN_TOL};
pub(crate) use eig::hermitian_eig_unchecked;
pub use matrix::{kron, kron_power, kron_vec, ComplexMatrix, C64};
pub use state::{
    fidelity, isotropic_state, partial_transpose, psd_sqrt, trace_distance, trace_norm,
    DensityMatrix, Observable, Subsystem,
};
pub(crate) use state::partial_transpose_unchecked;
