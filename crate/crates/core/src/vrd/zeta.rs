use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix};
use crate::resources::{bound_free_overlap, FreeSetSpec, Level};
use crate::sdp::{solve, Block, LinExpr, MatTerm, Relation, SdpBuilder, SdpStatus, Sense, SolverSettings, SparseHermitian};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `tr[Q sigma] <= mu / k` on free states.
    S,
    /// `tr[Q sigma] = mu / k` on free states.
    G,
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub value: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub q_plus: ComplexMatrix,
    pub q_minus: ComplexMatrix,
    pub variant: Variant,
    pub k: f64,
}

fn check_args(k: f64, eps: f64) -> Result<()> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("k = {k} must be finite and >= 1")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside [0, 1)")));
    }
    Ok(())
}

fn free_relation(variant: Variant) -> Relation {
    match variant {
        Variant::S => Relation::Le,
        Variant::G => Relation::Eq,
    }
}

/// `min mu+ + mu-` over `0 <= Q+- <= mu+- I` with `mu+ - mu- = 1`,
/// `tr[rho (Q+ - Q-)] >= 1 - eps` and the free-state condition of `variant`.
///
/// Fails with [`Error::Infeasible`] when no signed test reaches `1 - eps`.
pub fn zeta(rho: &DensityMatrix, k: f64, eps: f64, variant: Variant, free: &FreeSetSpec) -> Result<ZetaResult> {
    check_args(k, eps)?;
    free.check_dim(rho.dim())?;
    let d = rho.dim();
    let id = ComplexMatrix::identity(d);
    let mut b = SdpBuilder::new(Sense::Minimize);
    let mu_p = b.nonneg();
    let mu_m = b.nonneg();
    let side = |b: &mut SdpBuilder, mu: Block| {
        let q = b.psd(d);
        let s = b.psd(d);
        b.matrix_equality(
            d,
            &[MatTerm::Block(q, 1.0), MatTerm::Block(s, 1.0), MatTerm::ScalarTimes(mu, id.scale(-1.0))],
            &ComplexMatrix::zeros(d, d),
        );
        bound_free_overlap(b, free, q, Level::scaled(mu, 1.0 / k), free_relation(variant));
        q
    };
    let q_p = side(&mut b, mu_p);
    let q_m = side(&mut b, mu_m);
    let r = SparseHermitian::from_dense(rho.matrix());
    b.constrain(LinExpr::new().scalar(mu_p, 1.0).scalar(mu_m, -1.0), Relation::Eq, 1.0);
    b.constrain(
        LinExpr::new().block(q_p, r.scaled(-1.0)).block(q_m, r),
        Relation::Le,
        -(1.0 - eps),
    );
    b.set_objective(LinExpr::new().scalar(mu_p, 1.0).scalar(mu_m, 1.0));
    let sol = solve(&b.build(), &SolverSettings::default())?;
    match sol.status {
        SdpStatus::Optimal => Ok(ZetaResult {
            value: sol.primal_value.max(1.0),
            mu_plus: sol.scalar_block(mu_p),
            mu_minus: sol.scalar_block(mu_m),
            q_plus: sol.block(q_p).clone(),
            q_minus: sol.block(q_m).clone(),
            variant,
            k,
        }),
        SdpStatus::Infeasible => Err(Error::Infeasible(format!(
            "no signed test reaches overlap {} at k = {k}",
            1.0 - eps
        ))),
        s => Err(Error::Solver(format!("zeta: solver returned {s:?}"))),
    }
}

/// Added to `eps` when testing whether a single free operation suffices.
pub(crate) const FEASIBILITY_SLACK: f64 = 1e-9;

/// Largest `tr[rho Q]` over `0 <= Q <= I` with the free-state condition at level `1/k`:
/// the `mu- = 0` restriction of [`zeta`].
pub(crate) fn positive_test_overlap(rho: &DensityMatrix, k: f64, variant: Variant, free: &FreeSetSpec) -> Result<f64> {
    check_args(k, 0.0)?;
    free.check_dim(rho.dim())?;
    let d = rho.dim();
    let mut b = SdpBuilder::new(Sense::Maximize);
    let q = b.psd(d);
    let s = b.psd(d);
    b.matrix_equality(d, &[MatTerm::Block(q, 1.0), MatTerm::Block(s, 1.0)], &ComplexMatrix::identity(d));
    bound_free_overlap(&mut b, free, q, Level::constant(1.0 / k), free_relation(variant));
    b.set_objective(LinExpr::new().block(q, SparseHermitian::from_dense(rho.matrix())));
    let sol = solve(&b.build(), &SolverSettings::default())?;
    match sol.status {
        SdpStatus::Optimal => Ok(sol.primal_value),
        // Equality variant with no admissible test at all.
        SdpStatus::Infeasible => Ok(f64::NEG_INFINITY),
        s => Err(Error::Solver(format!("positive test: solver returned {s:?}"))),
    }
}
