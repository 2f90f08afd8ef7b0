//! SDP encodings of "X lies in the cone over F" and "tr(Q sigma) <= level for all sigma in F".

use super::{FreeSetKind, FreeSetSpec};
use crate::qmath::{ComplexMatrix, C64};
use crate::sdp::{Block, LinExpr, MatTerm, Relation, SdpBuilder, SdpSolution, SparseHermitian};

/// A variable ranging over `cone(F) = { t sigma : t >= 0, sigma in F }`.
pub(crate) enum ConeVar {
    /// Nonnegative weight per basis state.
    Diag(Vec<Block>),
    /// Nonnegative weight per vertex.
    Poly(Vec<Block>),
    /// PSD block whose partial transpose is PSD.
    Ppt(Block),
}

fn basis_projector(d: usize, i: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, i)] = C64::new(1.0, 0.0);
    m
}

impl ConeVar {
    pub(crate) fn new(b: &mut SdpBuilder, free: &FreeSetSpec) -> Self {
        match free.kind() {
            FreeSetKind::DiagonalStates(d) => ConeVar::Diag((0..*d).map(|_| b.nonneg()).collect()),
            FreeSetKind::VertexPolytope(v) => ConeVar::Poly(v.iter().map(|_| b.nonneg()).collect()),
            FreeSetKind::PptStates(da, db) => {
                let d = da * db;
                let x = b.psd(d);
                let pt = b.psd(d);
                b.matrix_equality(
                    d,
                    &[MatTerm::BlockPartialTranspose(x, 1.0, (*da, *db)), MatTerm::Block(pt, -1.0)],
                    &ComplexMatrix::zeros(d, d),
                );
                ConeVar::Ppt(x)
            }
        }
    }

    /// Matrix terms for `coef * X`.
    pub(crate) fn terms(&self, free: &FreeSetSpec, coef: f64) -> Vec<MatTerm> {
        match (self, free.kind()) {
            (ConeVar::Diag(w), FreeSetKind::DiagonalStates(d)) => w
                .iter()
                .enumerate()
                .map(|(i, &b)| MatTerm::ScalarTimes(b, basis_projector(*d, i).scale(coef)))
                .collect(),
            (ConeVar::Poly(w), FreeSetKind::VertexPolytope(v)) => w
                .iter()
                .zip(v)
                .map(|(&b, s)| MatTerm::ScalarTimes(b, s.matrix().scale(coef)))
                .collect(),
            (ConeVar::Ppt(x), _) => vec![MatTerm::Block(*x, coef)],
            _ => unreachable!("cone variable built for another free set"),
        }
    }

    /// `expr + coef * tr X`
    pub(crate) fn add_trace(&self, free: &FreeSetSpec, mut expr: LinExpr, coef: f64) -> LinExpr {
        match self {
            ConeVar::Diag(w) | ConeVar::Poly(w) => {
                for &b in w {
                    expr = expr.scalar(b, coef);
                }
                expr
            }
            ConeVar::Ppt(x) => expr.block(*x, SparseHermitian::identity(free.dim()).scaled(coef)),
        }
    }

    /// `expr + <M, X>`
    pub(crate) fn add_inner(&self, free: &FreeSetSpec, mut expr: LinExpr, m: &ComplexMatrix) -> LinExpr {
        match (self, free.kind()) {
            (ConeVar::Diag(w), _) => {
                for (i, &b) in w.iter().enumerate() {
                    expr = expr.scalar(b, m[(i, i)].re);
                }
                expr
            }
            (ConeVar::Poly(w), FreeSetKind::VertexPolytope(v)) => {
                for (&b, s) in w.iter().zip(v) {
                    expr = expr.scalar(b, s.matrix().re_inner(m));
                }
                expr
            }
            (ConeVar::Ppt(x), _) => expr.block(*x, SparseHermitian::from_dense(m)),
            _ => unreachable!("cone variable built for another free set"),
        }
    }

    pub(crate) fn value(&self, free: &FreeSetSpec, sol: &SdpSolution) -> ComplexMatrix {
        let d = free.dim();
        match (self, free.kind()) {
            (ConeVar::Diag(w), _) => {
                let diag: Vec<f64> = w.iter().map(|&b| sol.scalar_block(b)).collect();
                ComplexMatrix::diag(&diag)
            }
            (ConeVar::Poly(w), FreeSetKind::VertexPolytope(v)) => {
                let mut m = ComplexMatrix::zeros(d, d);
                for (&b, s) in w.iter().zip(v) {
                    m.axpy(sol.scalar_block(b), s.matrix());
                }
                m
            }
            (ConeVar::Ppt(x), _) => sol.block(*x).clone(),
            _ => unreachable!("cone variable built for another free set"),
        }
    }
}

/// `coef * mu + constant`, with `mu` a scalar block.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Level {
    pub scalar: Option<(Block, f64)>,
    pub constant: f64,
}

impl Level {
    pub(crate) fn constant(c: f64) -> Self {
        Self {
            scalar: None,
            constant: c,
        }
    }

    pub(crate) fn scaled(b: Block, coef: f64) -> Self {
        Self {
            scalar: Some((b, coef)),
            constant: 0.0,
        }
    }
}

/// Imposes `tr(Q sigma) <= level` (or `= level`) for every `sigma` in `F`, with
/// `Q` a PSD block on the space of `F`.
///
/// For PPT states the inequality says `level I - Q` lies in the dual cone
/// `{ P + R^{T_B} : P, R >= 0 }`; the equality forces `Q = level I` because
/// PPT states span all Hermitian matrices.
pub(crate) fn bound_free_overlap(b: &mut SdpBuilder, free: &FreeSetSpec, q: Block, level: Level, relation: Relation) {
    let d = free.dim();
    let with_level = |expr: LinExpr| match level.scalar {
        Some((mu, c)) => expr.scalar(mu, -c),
        None => expr,
    };
    match free.kind() {
        FreeSetKind::DiagonalStates(_) => {
            for i in 0..d {
                let e = SparseHermitian::real_part(d, i, i);
                b.constrain(with_level(LinExpr::new().block(q, e)), relation, level.constant);
            }
        }
        FreeSetKind::VertexPolytope(v) => {
            for s in v {
                let e = SparseHermitian::from_dense(s.matrix());
                b.constrain(with_level(LinExpr::new().block(q, e)), relation, level.constant);
            }
        }
        FreeSetKind::PptStates(da, db) => {
            let id = ComplexMatrix::identity(d);
            let mut terms = vec![MatTerm::Block(q, 1.0)];
            if let Some((mu, c)) = level.scalar {
                terms.push(MatTerm::ScalarTimes(mu, id.scale(-c)));
            }
            if relation == Relation::Le {
                let p = b.psd(d);
                let r = b.psd(d);
                terms.push(MatTerm::Block(p, 1.0));
                terms.push(MatTerm::BlockPartialTranspose(r, 1.0, (*da, *db)));
            }
            b.matrix_equality(d, &terms, &id.scale(level.constant));
        }
    }
}
