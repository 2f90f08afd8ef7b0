use super::{bound_free_overlap, free_fidelity, generalized_robustness, standard_robustness, FreeSetKind, FreeSetSpec};
use super::{Level, Method, MonotoneCertificate, MonotoneValue};
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix};
use crate::sdp::{solve, LinExpr, MatTerm, Relation, SdpBuilder, Sense, SolverSettings, SparseHermitian};

pub const MEMBERSHIP_TOL: f64 = 1e-8;
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// Free map `rho -> tr[psi rho] psi + tr[(I - psi) rho] sigma*` onto the line
/// through the target `psi` and a free state `sigma*` orthogonal to it.
#[derive(Clone, Debug)]
pub struct TwirlingSpec {
    target: DensityMatrix,
    residual_free_state: DensityMatrix,
    target_fidelity: f64,
}

impl TwirlingSpec {
    /// Validates that `sigma*` is free, orthogonal to the target, and that the
    /// map sends every free state back into `free`.
    pub fn new(target: DensityMatrix, residual_free_state: DensityMatrix, free: &FreeSetSpec) -> Result<Self> {
        if !target.is_pure() {
            return Err(Error::NotPure(target.purity()));
        }
        free.check_dim(target.dim())?;
        free.check_dim(residual_free_state.dim())?;
        let viol = free.membership_violation(&residual_free_state)?;
        if viol > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "residual state is not free (violation {viol:.3e})"
            )));
        }
        let overlap = residual_free_state.expectation(target.matrix());
        if overlap.abs() > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "residual state overlaps the target ({overlap:.3e})"
            )));
        }
        let f = free_fidelity(&target, free)?.value;
        let mut edge = residual_free_state.matrix().scale(1.0 - f);
        edge.axpy(f, target.matrix());
        let viol = free.membership_violation(&DensityMatrix::new(edge)?)?;
        if viol > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "twirling maps a free state outside the free set (violation {viol:.3e})"
            )));
        }
        Ok(Self {
            target,
            residual_free_state,
            target_fidelity: f,
        })
    }

    /// Twirling with `sigma* = (I - psi) / (d - 1)`.
    pub fn complement(target: DensityMatrix, free: &FreeSetSpec) -> Result<Self> {
        let d = target.dim();
        let m = (&ComplexMatrix::identity(d) - target.matrix()).scale(1.0 / (d as f64 - 1.0));
        Self::new(target, DensityMatrix::new(m)?, free)
    }

    pub fn target(&self) -> &DensityMatrix {
        &self.target
    }

    pub fn residual_free_state(&self) -> &DensityMatrix {
        &self.residual_free_state
    }

    pub fn target_fidelity(&self) -> f64 {
        self.target_fidelity
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.target.dim() {
            return Err(Error::DimensionMismatch("twirling input".into()));
        }
        let t = rho.expectation(self.target.matrix());
        let mut m = self.residual_free_state.matrix().scale(1.0 - t);
        m.axpy(t, self.target.matrix());
        DensityMatrix::new(m)
    }
}

/// What `f_O` needs to know about a theory and a number of copies.
#[derive(Clone, Copy, Debug)]
pub struct OverlapContext<'a> {
    /// Free set on the input space.
    pub input_free: &'a FreeSetSpec,
    /// `psi^{(x) m}`
    pub target: &'a DensityMatrix,
    /// `F_F(psi^{(x) m})`
    pub target_fidelity: f64,
    pub twirling: Option<&'a TwirlingSpec>,
    /// No free operation raises the fidelity of isotropic inputs with the target.
    pub fidelity_non_improvable: bool,
}

/// `rho = p psi + (1 - p) I / d` for some real `p`.
fn is_isotropic_about(rho: &DensityMatrix, psi: &DensityMatrix) -> bool {
    if rho.dim() != psi.dim() {
        return false;
    }
    let d = rho.dim() as f64;
    let p = (d * rho.expectation(psi.matrix()) - 1.0) / (d - 1.0);
    let mut iso = ComplexMatrix::identity(rho.dim()).scale((1.0 - p) / d);
    iso.axpy(p, psi.matrix());
    iso.max_abs_diff(rho.matrix()) <= 1e-9
}

/// `f_O(rho, m) = max over free operations of tr[Lambda(rho) psi^{(x) m}]`.
///
/// Closed form `max{tr[rho psi], F_F(psi)}` for isotropic inputs at `m = 1` in
/// theories where the fidelity cannot be improved; otherwise, when a free
/// twirling exists, the program `max tr[rho Q]` over `0 <= Q <= I` with
/// `tr[Q sigma] <= F_F(psi^{(x) m})` on free inputs.
pub fn max_overlap_fo(rho: &DensityMatrix, m: usize, ctx: &OverlapContext) -> Result<MonotoneValue> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    ctx.input_free.check_dim(rho.dim())?;
    if m == 1 && ctx.fidelity_non_improvable && is_isotropic_about(rho, ctx.target) {
        let value = rho.expectation(ctx.target.matrix()).max(ctx.target_fidelity);
        return Ok(MonotoneValue {
            value,
            certificate: None,
            method: Method::ClosedForm,
        });
    }
    if ctx.twirling.is_none() {
        return Err(Error::Unsupported(
            "max overlap needs a free twirling for this input; use the zeta bounds instead".into(),
        ));
    }
    overlap_program(rho, ctx.input_free, ctx.target_fidelity)
}

/// `max tr[rho Q]` over `0 <= Q <= I` with `tr[Q sigma] <= level` for every free `sigma`.
fn overlap_program(rho: &DensityMatrix, free: &FreeSetSpec, level: f64) -> Result<MonotoneValue> {
    free.check_dim(rho.dim())?;
    let d = rho.dim();
    let mut b = SdpBuilder::new(Sense::Maximize);
    let q = b.psd(d);
    let s = b.psd(d);
    b.matrix_equality(d, &[MatTerm::Block(q, 1.0), MatTerm::Block(s, 1.0)], &ComplexMatrix::identity(d));
    bound_free_overlap(&mut b, free, q, Level::constant(level), Relation::Le);
    b.set_objective(LinExpr::new().block(q, SparseHermitian::from_dense(rho.matrix())));
    let sol = solve(&b.build(), &SolverSettings::default())?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!("max overlap: solver returned {:?}", sol.status)));
    }
    Ok(MonotoneValue {
        value: sol.primal_value,
        certificate: Some(MonotoneCertificate {
            witness: sol.block(q).clone(),
            dual_value: sol.dual_value,
        }),
        method: Method::Sdp,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceReport {
    /// `F_F(psi)^{-1}`
    pub fs_inv: f64,
    /// `1 + R^s(psi)`, possibly infinite.
    pub rs_plus_1: f64,
    pub rg_plus_1: f64,
    /// `<psi|sigma|psi>` takes the same value on all of `F`.
    pub constant_overlap: bool,
    pub coincide_s: bool,
    pub coincide_g: bool,
}

fn constant_overlap(psi: &DensityMatrix, free: &FreeSetSpec) -> bool {
    match free.kind() {
        FreeSetKind::DiagonalStates(_) => {
            let diag = psi.matrix().diagonal_real();
            let first = diag[0];
            diag.iter().all(|x| (x - first).abs() <= COINCIDENCE_TOL)
        }
        FreeSetKind::VertexPolytope(_) => {
            let ov = free.vertex_overlaps(psi).unwrap_or_default();
            let lo = ov.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ov.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo <= COINCIDENCE_TOL
        }
        // PPT states span every Hermitian matrix, so only a multiple of the
        // identity has constant overlap, and no pure state of dimension > 1 is one.
        FreeSetKind::PptStates(..) => false,
    }
}

/// Compares `F_F(psi)^{-1}` with `1 + R^s(psi)` and `1 + R^g(psi)` for a pure target `psi`.
pub fn coincidence_check(psi: &DensityMatrix, free: &FreeSetSpec) -> Result<CoincidenceReport> {
    if !psi.is_pure() {
        return Err(Error::NotPure(psi.purity()));
    }
    let fs_inv = 1.0 / free_fidelity(psi, free)?.value;
    let rs_plus_1 = 1.0 + standard_robustness(psi, free)?.value;
    let rg_plus_1 = 1.0 + generalized_robustness(psi, free)?.value;
    let constant_overlap = constant_overlap(psi, free);
    Ok(CoincidenceReport {
        fs_inv,
        rs_plus_1,
        rg_plus_1,
        constant_overlap,
        coincide_s: (fs_inv - rs_plus_1).abs() <= COINCIDENCE_TOL,
        coincide_g: constant_overlap && (fs_inv - rg_plus_1).abs() <= COINCIDENCE_TOL,
    })
}
