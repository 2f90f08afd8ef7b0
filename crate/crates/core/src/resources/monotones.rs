use super::{ConeVar, FreeSetSpec, Method, MonotoneCertificate, MonotoneValue};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;
use crate::sdp::{solve, LinExpr, MatTerm, Relation, SdpBuilder, SdpStatus, Sense, SolverSettings};

fn solver_error(what: &str, status: SdpStatus) -> Error {
    Error::Solver(format!("{what}: solver returned {status:?}"))
}

/// `R^g(rho) = min { tr X : X - Omega = rho, Omega >= 0, X in cone(F) } - 1`.
pub fn generalized_robustness(rho: &DensityMatrix, free: &FreeSetSpec) -> Result<MonotoneValue> {
    robustness(rho, free, false)
}

/// As [`generalized_robustness`] with the noise `Omega` restricted to `cone(F)`.
///
/// Infinite when `rho` is outside the span of `F` (e.g. any coherent state
/// against diagonal states).
pub fn standard_robustness(rho: &DensityMatrix, free: &FreeSetSpec) -> Result<MonotoneValue> {
    robustness(rho, free, true)
}

fn robustness(rho: &DensityMatrix, free: &FreeSetSpec, standard: bool) -> Result<MonotoneValue> {
    free.check_dim(rho.dim())?;
    let d = free.dim();
    let mut b = SdpBuilder::new(Sense::Minimize);
    let x = ConeVar::new(&mut b, free);
    let mut terms = x.terms(free, 1.0);
    if standard {
        let y = ConeVar::new(&mut b, free);
        terms.extend(y.terms(free, -1.0));
    } else {
        let omega = b.psd(d);
        terms.push(MatTerm::Block(omega, -1.0));
    }
    b.matrix_equality(d, &terms, rho.matrix());
    b.set_objective(x.add_trace(free, LinExpr::new(), 1.0));
    let sol = solve(&b.build(), &SolverSettings::default())?;
    match sol.status {
        SdpStatus::Optimal => Ok(MonotoneValue {
            value: (sol.primal_value - 1.0).max(0.0),
            certificate: Some(MonotoneCertificate {
                witness: x.value(free, &sol),
                dual_value: sol.dual_value - 1.0,
            }),
            method: Method::Sdp,
        }),
        SdpStatus::Infeasible if standard => Ok(MonotoneValue {
            value: f64::INFINITY,
            certificate: None,
            method: Method::Sdp,
        }),
        s => Err(solver_error("robustness", s)),
    }
}

/// `max_{sigma in F} <psi|sigma|psi>` for a pure `psi`.
pub fn free_fidelity(psi: &DensityMatrix, free: &FreeSetSpec) -> Result<MonotoneValue> {
    free.check_dim(psi.dim())?;
    if !psi.is_pure() {
        return Err(Error::NotPure(psi.purity()));
    }
    if let Some(overlaps) = free.vertex_overlaps(psi) {
        let (best, value) = overlaps
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let witness = match free.kind() {
            super::FreeSetKind::VertexPolytope(v) => v[best].matrix().clone(),
            _ => unreachable!(),
        };
        return Ok(MonotoneValue {
            value,
            certificate: Some(MonotoneCertificate {
                witness,
                dual_value: value,
            }),
            method: Method::VertexEnum,
        });
    }
    let mut b = SdpBuilder::new(Sense::Maximize);
    let x = ConeVar::new(&mut b, free);
    b.set_objective(x.add_inner(free, LinExpr::new(), psi.matrix()));
    b.constrain(x.add_trace(free, LinExpr::new(), 1.0), Relation::Eq, 1.0);
    let sol = solve(&b.build(), &SolverSettings::default())?;
    if !sol.is_optimal() {
        return Err(solver_error("free fidelity", sol.status));
    }
    Ok(MonotoneValue {
        value: sol.primal_value,
        certificate: Some(MonotoneCertificate {
            witness: x.value(free, &sol),
            dual_value: sol.dual_value,
        }),
        method: Method::Sdp,
    })
}
