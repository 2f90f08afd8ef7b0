//! Small programs with known optimal values, used for solver self-checks.

use super::problem::{Block, LinExpr, MatTerm, Relation, SdpBuilder, SdpProblem, Sense};
use super::sparse::SparseHermitian;
use crate::qmath::{states, ComplexMatrix};

#[derive(Clone, Debug)]
pub struct ReferenceProblem {
    pub name: &'static str,
    pub problem: SdpProblem,
    pub optimum: f64,
}

/// minimize tr X  s.t.  X - S = I, optimum 2.
pub fn trace_above_identity() -> SdpProblem {
    let mut b = SdpBuilder::new(Sense::Minimize);
    let x = b.psd(2);
    let s = b.psd(2);
    b.set_objective(LinExpr::new().block(x, SparseHermitian::identity(2)));
    b.matrix_equality(2, &[MatTerm::Block(x, 1.0), MatTerm::Block(s, -1.0)], &ComplexMatrix::identity(2));
    b.build()
}

/// max <psi|sigma|psi> over diagonal density matrices, optimum 1/d.
pub fn coherent_overlap(d: usize) -> SdpProblem {
    let psi = states::max_coherent(d);
    let mut b = SdpBuilder::new(Sense::Maximize);
    let diag: Vec<Block> = (0..d).map(|_| b.nonneg()).collect();
    let mut obj = LinExpr::new();
    let mut norm = LinExpr::new();
    for (i, &v) in diag.iter().enumerate() {
        obj = obj.scalar(v, psi.matrix()[(i, i)].re);
        norm = norm.scalar(v, 1.0);
    }
    b.set_objective(obj);
    b.constrain(norm, Relation::Eq, 1.0);
    b.build()
}

/// max tr[Phi sigma] over PPT two-qubit states, optimum 1/2.
pub fn bell_ppt() -> SdpProblem {
    let mut b = SdpBuilder::new(Sense::Maximize);
    let sigma = b.psd(4);
    let pt = b.psd(4);
    b.set_objective(LinExpr::new().block(sigma, SparseHermitian::from_dense(states::bell().matrix())));
    b.constrain(LinExpr::new().block(sigma, SparseHermitian::identity(4)), Relation::Eq, 1.0);
    b.matrix_equality(
        4,
        &[MatTerm::BlockPartialTranspose(sigma, 1.0, (2, 2)), MatTerm::Block(pt, -1.0)],
        &ComplexMatrix::zeros(4, 4),
    );
    b.build()
}

pub fn reference_problems() -> Vec<ReferenceProblem> {
    vec![
        ReferenceProblem {
            name: "trace above identity",
            problem: trace_above_identity(),
            optimum: 2.0,
        },
        ReferenceProblem {
            name: "diagonal overlap with uniform superposition",
            problem: coherent_overlap(4),
            optimum: 0.25,
        },
        ReferenceProblem {
            name: "Bell overlap over PPT states",
            problem: bell_ppt(),
            optimum: 0.5,
        },
    ]
}
