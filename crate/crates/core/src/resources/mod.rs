//! Free-state sets and the resource monotones computed over them.

mod encode;
mod monotones;
mod stabilizer;
mod twirling;

pub(crate) use encode::{bound_free_overlap, ConeVar, Level};
pub use monotones::{free_fidelity, generalized_robustness, standard_robustness};
pub use stabilizer::{stabilizer_product_states, stabilizer_states};
pub use twirling::{coincidence_check, max_overlap_fo, CoincidenceReport, OverlapContext, TwirlingSpec};

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eig_unchecked, partial_transpose_unchecked, ComplexMatrix, DensityMatrix, Subsystem};

#[derive(Clone, Debug)]
pub enum FreeSetKind {
    /// States diagonal in the computational basis of `C^d`.
    DiagonalStates(usize),
    /// Convex hull of the given pure states.
    VertexPolytope(Vec<DensityMatrix>),
    /// States with positive partial transpose on `C^dA (x) C^dB`.
    PptStates(usize, usize),
}

#[derive(Clone, Debug)]
pub struct FreeSetSpec {
    kind: FreeSetKind,
    label: String,
    relaxation: bool,
}

impl FreeSetSpec {
    pub fn diagonal(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("diagonal free set needs d >= 2, got {d}")));
        }
        Ok(Self {
            kind: FreeSetKind::DiagonalStates(d),
            label: format!("diagonal({d})"),
            relaxation: false,
        })
    }

    /// PPT states; exact (equal to separable) only for `dA * dB <= 6`.
    pub fn ppt(da: usize, db: usize) -> Result<Self> {
        if da < 2 || db < 2 {
            return Err(Error::InvalidArgument(format!("PPT set needs both dimensions >= 2, got ({da}, {db})")));
        }
        let relaxation = da * db > 6;
        let label = if relaxation {
            format!("PPT relaxation({da}x{db})")
        } else {
            format!("PPT({da}x{db})")
        };
        Ok(Self {
            kind: FreeSetKind::PptStates(da, db),
            label,
            relaxation,
        })
    }

    pub fn polytope(vertices: Vec<DensityMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidArgument("polytope without vertices".into()))?;
        let d = first.dim();
        if vertices.iter().any(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch("polytope vertices of differing dimension".into()));
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_pure()) {
            return Err(Error::NotPure(v.purity()));
        }
        Ok(Self {
            kind: FreeSetKind::VertexPolytope(vertices),
            label: label.into(),
            relaxation: false,
        })
    }

    /// Convex hull of all `n`-qubit stabilizer states.
    pub fn stabilizer(n: usize) -> Result<Self> {
        Self::polytope(stabilizer_states(n)?, format!("stabilizer({n})"))
    }

    /// Convex hull of products of single-qubit stabilizer states; smaller than
    /// the stabilizer polytope for `n >= 2`.
    pub fn stabilizer_products(n: usize) -> Result<Self> {
        let mut s = Self::polytope(stabilizer_product_states(n)?, format!("stabilizer products({n})"))?;
        s.relaxation = n >= 2;
        Ok(s)
    }

    pub fn kind(&self) -> &FreeSetKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when the set only approximates the intended free set.
    pub fn is_relaxation(&self) -> bool {
        self.relaxation
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            FreeSetKind::DiagonalStates(d) => *d,
            FreeSetKind::VertexPolytope(v) => v[0].dim(),
            FreeSetKind::PptStates(a, b) => a * b,
        }
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {d} against free set {} of dimension {}",
                self.label,
                self.dim()
            )));
        }
        Ok(())
    }

    /// Distance-like margin of `rho` from the set; zero (up to solver noise) iff `rho` is free.
    ///
    /// Diagonal: largest off-diagonal modulus. PPT: negativity of the smallest
    /// partial-transpose eigenvalue. Polytope: generalized robustness.
    pub fn membership_violation(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check_dim(rho.dim())?;
        Ok(match &self.kind {
            FreeSetKind::DiagonalStates(d) => {
                let m = rho.matrix();
                let mut worst: f64 = 0.0;
                for i in 0..*d {
                    for j in 0..*d {
                        if i != j {
                            worst = worst.max(m[(i, j)].norm());
                        }
                    }
                }
                worst
            }
            FreeSetKind::PptStates(a, b) => {
                let pt = partial_transpose_unchecked(rho.matrix(), (*a, *b), Subsystem::B);
                (-hermitian_eig_unchecked(&pt).min()).max(0.0)
            }
            FreeSetKind::VertexPolytope(_) => generalized_robustness(rho, self)?.value,
        })
    }

    pub fn contains(&self, rho: &DensityMatrix, tol: f64) -> Result<bool> {
        Ok(self.membership_violation(rho)? <= tol)
    }

    /// `<psi|sigma|psi>` for every vertex of a polytope.
    pub(crate) fn vertex_overlaps(&self, psi: &DensityMatrix) -> Option<Vec<f64>> {
        match &self.kind {
            FreeSetKind::VertexPolytope(v) => Some(v.iter().map(|s| s.matrix().re_inner(psi.matrix())).collect()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sdp,
    VertexEnum,
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct MonotoneCertificate {
    pub witness: ComplexMatrix,
    pub dual_value: f64,
}

#[derive(Clone, Debug)]
pub struct MonotoneValue {
    pub value: f64,
    pub certificate: Option<MonotoneCertificate>,
    pub method: Method,
}
