//! Overheads and rates of virtual resource distillation.
//!
//! A virtual operation is a signed combination `l+ L+ - l- L-` of free
//! operations with `l+ - l- = 1`. It cannot be run as a channel but its
//! expectation values can be sampled with an overhead `C = l+ + l-`. This
//! crate computes the optimal overhead for coherence, two-qubit
//! entanglement and single-qubit magic through small semidefinite programs,
//! and simulates the sampling protocol.

pub mod cli;
pub mod error;
pub mod qmath;
pub mod resources;
pub mod sampler;
pub mod sdp;
pub mod vrd;

pub use error::{Error, Result};
