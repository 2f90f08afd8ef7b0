use super::problem::{Relation, SdpProblem, Sense};
use super::solver::{SdpSolution, SolverSettings};
use crate::qmath::{hermitian_eig_unchecked, ComplexMatrix};

/// Residuals recomputed from a solution, independent of the solver's own bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    /// Largest constraint violation, relative to `1 + |rhs|`.
    pub primal_residual: f64,
    /// Largest violation of dual feasibility: free-scalar stationarity and
    /// multiplier signs on inequality rows.
    pub dual_residual: f64,
    /// `|primal - dual| / max(1, |primal|)`
    pub gap: f64,
    /// Smallest eigenvalue of each primal block.
    pub primal_psd_margins: Vec<f64>,
    /// Smallest eigenvalue of each dual slack `C_b - sum_i y_i A_ib`.
    pub dual_psd_margins: Vec<f64>,
    pub accepted: bool,
}

impl CertificateReport {
    pub fn min_psd_margin(&self) -> f64 {
        self.primal_psd_margins
            .iter()
            .chain(&self.dual_psd_margins)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn min_eig(m: &ComplexMatrix) -> f64 {
    if m.rows() == 1 {
        m[(0, 0)].re
    } else {
        hermitian_eig_unchecked(&m.symmetrize()).min()
    }
}

/// Checks primal feasibility, dual feasibility and the gap of `solution`.
///
/// A solution is accepted when every residual is within ten times the
/// corresponding tolerance in `settings`.
pub fn verify_certificate(problem: &SdpProblem, solution: &SdpSolution, settings: &SolverSettings) -> CertificateReport {
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let nblocks = problem.block_dims.len();
    let shape_ok = solution.primal_blocks.len() == nblocks
        && solution.scalars.len() == problem.free_scalars
        && solution.dual_multipliers.len() == problem.constraints.len()
        && solution
            .primal_blocks
            .iter()
            .zip(&problem.block_dims)
            .all(|(b, &d)| b.rows() == d && b.cols() == d);
    if !shape_ok {
        return CertificateReport {
            primal_residual: f64::INFINITY,
            dual_residual: f64::INFINITY,
            gap: f64::INFINITY,
            primal_psd_margins: Vec::new(),
            dual_psd_margins: Vec::new(),
            accepted: false,
        };
    }

    let mut primal_residual: f64 = 0.0;
    for con in &problem.constraints {
        let lhs: f64 = con
            .blocks
            .iter()
            .map(|(b, a)| a.inner(&solution.primal_blocks[*b]))
            .sum::<f64>()
            + con.free.iter().map(|&(f, a)| a * solution.scalars[f]).sum::<f64>();
        let viol = match con.relation {
            Relation::Eq => (lhs - con.rhs).abs(),
            Relation::Le => (lhs - con.rhs).max(0.0),
        };
        primal_residual = primal_residual.max(viol / (1.0 + con.rhs.abs()));
    }

    let y = &solution.dual_multipliers;
    let mut slack: Vec<ComplexMatrix> = problem.objective.iter().map(|c| c.to_dense().scale(sign)).collect();
    let mut free_res: Vec<f64> = problem.free_objective.iter().map(|c| sign * c).collect();
    let mut dual_residual: f64 = 0.0;
    for (con, &yi) in problem.constraints.iter().zip(y) {
        for (b, a) in &con.blocks {
            a.add_to(&mut slack[*b], -yi);
        }
        for &(f, a) in &con.free {
            free_res[f] -= a * yi;
        }
        if con.relation == Relation::Le {
            dual_residual = dual_residual.max(yi);
        }
    }
    for r in &free_res {
        dual_residual = dual_residual.max(r.abs());
    }

    let primal_psd_margins: Vec<f64> = solution.primal_blocks.iter().map(min_eig).collect();
    let dual_psd_margins: Vec<f64> = slack.iter().map(min_eig).collect();

    let primal_value: f64 = problem
        .objective
        .iter()
        .zip(&solution.primal_blocks)
        .map(|(c, x)| c.inner(x))
        .sum::<f64>()
        + problem.free_objective.iter().zip(&solution.scalars).map(|(c, z)| c * z).sum::<f64>();
    let dual_value: f64 = sign * problem.constraints.iter().zip(y).map(|(c, yi)| c.rhs * yi).sum::<f64>();
    let gap = (primal_value - dual_value).abs() / primal_value.abs().max(1.0);

    let ptol = 10.0 * settings.feas_tol;
    let accepted = primal_residual <= ptol
        && dual_residual <= ptol
        && gap <= 10.0 * settings.gap_tol
        && primal_psd_margins.iter().all(|&m| m >= -ptol)
        && dual_psd_margins.iter().all(|&m| m >= -ptol);
    CertificateReport {
        primal_residual,
        dual_residual,
        gap,
        primal_psd_margins,
        dual_psd_margins,
        accepted,
    }
}
