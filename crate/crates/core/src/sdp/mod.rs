//! Interior-point solver for small semidefinite programs over Hermitian matrices.

mod audit;
mod certificate;
mod dump;
mod problem;
mod reference;
mod solver;
mod sparse;

pub use audit::{audit_snapshot, start_audit, stop_audit, AuditSnapshot};
pub use certificate::{verify_certificate, CertificateReport};
pub use dump::{dump_problem, parse_problem};
pub use problem::{Block, Constraint, Free, LinExpr, MatTerm, Relation, SdpBuilder, SdpProblem, Sense};
pub use reference::{bell_ppt, coherent_overlap, reference_problems, trace_above_identity, ReferenceProblem};
pub use solver::{solve, SdpSolution, SdpStatus, SolverSettings};
pub use sparse::SparseHermitian;

#[cfg(test)]
mod tests;
