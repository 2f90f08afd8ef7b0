//! Primal-dual interior-point method on the homogeneous self-dual embedding.
//!
//! Internally every problem is brought to
//!
//! ```text
//! minimize <c, x>  subject to  A x = b,  x in K
//! ```
//!
//! where `K` is a product of complex Hermitian PSD cones and a nonnegative
//! orthant (scalar blocks, split free scalars and inequality slacks). Search
//! directions use Nesterov-Todd scaling and Mehrotra's predictor-corrector.

use log::{debug, trace};

use super::problem::{Relation, SdpProblem, Sense};
use super::sparse::SparseHermitian;
use crate::error::Result;
use crate::qmath::linalg::{cholesky, lower_inverse, svd_right, SpdFactor};
use crate::qmath::{hermitian_eig_unchecked, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Objective at the primal point, in the problem's own sense.
    pub primal_value: f64,
    /// Objective bound from the dual point, in the problem's own sense.
    pub dual_value: f64,
    pub primal_blocks: Vec<ComplexMatrix>,
    /// Dual slack `S_b = C_b - sum_i y_i A_ib` of the minimization form.
    pub dual_blocks: Vec<ComplexMatrix>,
    pub scalars: Vec<f64>,
    /// Multipliers `y` of the minimization form, one per constraint.
    pub dual_multipliers: Vec<f64>,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// Value of a scalar (1x1) block.
    pub fn scalar_block(&self, b: super::Block) -> f64 {
        self.primal_blocks[b.0][(0, 0)].re
    }

    pub fn block(&self, b: super::Block) -> &ComplexMatrix {
        &self.primal_blocks[b.0]
    }
}

const STEP_FRACTION: f64 = 0.98;
const TAU_KAPPA_INFEASIBLE: f64 = 1e-10;
/// A stalled run still counts as optimal if its best iterate is within this factor of the tolerances.
const STALL_ACCEPT: f64 = 10.0;

#[derive(Clone, Copy, Debug)]
enum Loc {
    Psd(usize),
    Lp(usize),
}

struct Row {
    psd: Vec<(usize, SparseHermitian)>,
    lp: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
struct ConeVec {
    psd: Vec<ComplexMatrix>,
    lp: Vec<f64>,
}

impl ConeVec {
    fn zeros(dims: &[usize], n_lp: usize) -> Self {
        Self {
            psd: dims.iter().map(|&d| ComplexMatrix::zeros(d, d)).collect(),
            lp: vec![0.0; n_lp],
        }
    }

    fn identity(dims: &[usize], n_lp: usize) -> Self {
        Self {
            psd: dims.iter().map(|&d| ComplexMatrix::identity(d)).collect(),
            lp: vec![1.0; n_lp],
        }
    }

    fn dot(&self, other: &Self) -> f64 {
        let p: f64 = self.psd.iter().zip(&other.psd).map(|(a, b)| a.re_inner(b)).sum();
        let l: f64 = self.lp.iter().zip(&other.lp).map(|(a, b)| a * b).sum();
        p + l
    }

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.psd.iter_mut().zip(&other.psd) {
            a.axpy(s, b);
        }
        for (a, b) in self.lp.iter_mut().zip(&other.lp) {
            *a += s * b;
        }
    }

    fn combine(&self, s: f64, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(s, other);
        out
    }

    fn symmetrize(&mut self) {
        for m in &mut self.psd {
            *m = m.symmetrize();
        }
    }
}

/// Internal minimization form.
struct StdForm {
    psd_dims: Vec<usize>,
    n_lp: usize,
    rows: Vec<Row>,
    b: Vec<f64>,
    c: ConeVec,
    psd_touch: Vec<Vec<(usize, usize)>>,
    lp_touch: Vec<Vec<(usize, f64)>>,
    locs: Vec<Loc>,
    free_split: Vec<(usize, usize)>,
    /// Position of each user constraint among the kept rows.
    row_of: Vec<Option<usize>>,
}

enum Presolve {
    Ready(StdForm),
    Infeasible,
}

impl StdForm {
    fn build(p: &SdpProblem) -> Presolve {
        let sign = match p.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut psd_dims = Vec::new();
        let mut n_lp = 0;
        let mut locs = Vec::with_capacity(p.block_dims.len());
        for &d in &p.block_dims {
            if d == 1 {
                locs.push(Loc::Lp(n_lp));
                n_lp += 1;
            } else {
                locs.push(Loc::Psd(psd_dims.len()));
                psd_dims.push(d);
            }
        }
        let free_split: Vec<(usize, usize)> = (0..p.free_scalars)
            .map(|i| (n_lp + 2 * i, n_lp + 2 * i + 1))
            .collect();
        n_lp += 2 * p.free_scalars;

        let mut rows = Vec::new();
        let mut b = Vec::new();
        let mut row_of = Vec::with_capacity(p.constraints.len());
        for con in &p.constraints {
            let mut row = Row {
                psd: Vec::new(),
                lp: Vec::new(),
            };
            for (blk, a) in &con.blocks {
                match locs[*blk] {
                    Loc::Psd(k) => row.psd.push((k, a.clone())),
                    Loc::Lp(j) => {
                        let v = a.entries().iter().map(|e| e.2.re).sum::<f64>();
                        if v != 0.0 {
                            row.lp.push((j, v));
                        }
                    }
                }
            }
            for &(f, a) in &con.free {
                let (pos, neg) = free_split[f];
                row.lp.push((pos, a));
                row.lp.push((neg, -a));
            }
            let empty = row.psd.is_empty() && row.lp.is_empty();
            if empty {
                let violated = match con.relation {
                    Relation::Eq => con.rhs.abs() > 1e-12,
                    Relation::Le => con.rhs < -1e-12,
                };
                if violated {
                    return Presolve::Infeasible;
                }
                row_of.push(None);
                continue;
            }
            if con.relation == Relation::Le {
                row.lp.push((n_lp, 1.0));
                n_lp += 1;
            }
            row_of.push(Some(rows.len()));
            rows.push(row);
            b.push(con.rhs);
        }

        let mut c = ConeVec::zeros(&psd_dims, n_lp);
        for (blk, obj) in p.objective.iter().enumerate() {
            match locs[blk] {
                Loc::Psd(k) => obj.add_to(&mut c.psd[k], sign),
                Loc::Lp(j) => c.lp[j] = sign * obj.entries().iter().map(|e| e.2.re).sum::<f64>(),
            }
        }
        for (f, &(pos, neg)) in free_split.iter().enumerate() {
            c.lp[pos] = sign * p.free_objective[f];
            c.lp[neg] = -sign * p.free_objective[f];
        }

        let mut psd_touch = vec![Vec::new(); psd_dims.len()];
        let mut lp_touch = vec![Vec::new(); n_lp];
        for (i, row) in rows.iter().enumerate() {
            for (idx, (k, _)) in row.psd.iter().enumerate() {
                psd_touch[*k].push((i, idx));
            }
            for &(j, v) in &row.lp {
                lp_touch[j].push((i, v));
            }
        }
        Presolve::Ready(StdForm {
            psd_dims,
            n_lp,
            rows,
            b,
            c,
            psd_touch,
            lp_touch,
            locs,
            free_split,
            row_of,
        })
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn degree(&self) -> f64 {
        (self.psd_dims.iter().sum::<usize>() + self.n_lp) as f64
    }

    fn a_mul(&self, x: &ConeVec) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                let p: f64 = row.psd.iter().map(|(k, a)| a.inner(&x.psd[*k])).sum();
                let l: f64 = row.lp.iter().map(|&(j, v)| v * x.lp[j]).sum();
                p + l
            })
            .collect()
    }

    fn at_mul(&self, y: &[f64]) -> ConeVec {
        let mut out = ConeVec::zeros(&self.psd_dims, self.n_lp);
        for (row, &yi) in self.rows.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (k, a) in &row.psd {
                a.add_to(&mut out.psd[*k], yi);
            }
            for &(j, v) in &row.lp {
                out.lp[j] += v * yi;
            }
        }
        out
    }
}

struct PsdScaling {
    r: ComplexMatrix,
    r_adj: ComplexMatrix,
    r_inv: ComplexMatrix,
    r_inv_adj: ComplexMatrix,
    w: ComplexMatrix,
    lambda: Vec<f64>,
}

impl PsdScaling {
    /// Nesterov-Todd scaling `W = R R^†` with `R^{-1} X R^{-†} = R^† S R = diag(lambda)`.
    fn new(x: &ComplexMatrix, s: &ComplexMatrix) -> Option<Self> {
        let lx = cholesky(x)?;
        let ls = cholesky(s)?;
        let bmat = &ls.adjoint() * &lx;
        let (sigma, v) = svd_right(&bmat);
        if sigma.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return None;
        }
        let n = x.rows();
        let inv_sqrt: Vec<f64> = sigma.iter().map(|s| 1.0 / s.sqrt()).collect();
        let sqrt: Vec<f64> = sigma.iter().map(|s| s.sqrt()).collect();
        let lv = &lx * &v;
        let r = ComplexMatrix::from_fn(n, n, |i, j| lv[(i, j)] * inv_sqrt[j]);
        let vh_lxinv = &v.adjoint() * &lower_inverse(&lx);
        let r_inv = ComplexMatrix::from_fn(n, n, |i, j| vh_lxinv[(i, j)] * sqrt[i]);
        let r_adj = r.adjoint();
        let r_inv_adj = r_inv.adjoint();
        let w = (&r * &r_adj).symmetrize();
        Some(Self {
            r,
            r_adj,
            r_inv,
            r_inv_adj,
            w,
            lambda: sigma,
        })
    }
}

struct Scaling {
    psd: Vec<PsdScaling>,
    lp_d: Vec<f64>,
    lp_lambda: Vec<f64>,
}

impl Scaling {
    fn new(x: &ConeVec, s: &ConeVec) -> Option<Self> {
        let psd = x
            .psd
            .iter()
            .zip(&s.psd)
            .map(|(x, s)| PsdScaling::new(x, s))
            .collect::<Option<Vec<_>>>()?;
        let lp_d = x.lp.iter().zip(&s.lp).map(|(x, s)| (x / s).sqrt()).collect();
        let lp_lambda = x.lp.iter().zip(&s.lp).map(|(x, s)| (x * s).sqrt()).collect();
        Some(Self { psd, lp_d, lp_lambda })
    }

    /// `W v W`
    fn apply_w(&self, v: &ConeVec) -> ConeVec {
        ConeVec {
            psd: v.psd.iter().zip(&self.psd).map(|(m, sc)| (&(&sc.w * m) * &sc.w).symmetrize()).collect(),
            lp: v.lp.iter().zip(&self.lp_d).map(|(x, d)| x * d * d).collect(),
        }
    }

    fn scale_x(&self, v: &ConeVec) -> ConeVec {
        ConeVec {
            psd: v.psd.iter().zip(&self.psd).map(|(m, sc)| &(&sc.r_inv * m) * &sc.r_inv_adj).collect(),
            lp: v.lp.iter().zip(&self.lp_d).map(|(x, d)| x / d).collect(),
        }
    }

    fn scale_s(&self, v: &ConeVec) -> ConeVec {
        ConeVec {
            psd: v.psd.iter().zip(&self.psd).map(|(m, sc)| &(&sc.r_adj * m) * &sc.r).collect(),
            lp: v.lp.iter().zip(&self.lp_d).map(|(x, d)| x * d).collect(),
        }
    }

    fn unscale_x(&self, v: &ConeVec) -> ConeVec {
        ConeVec {
            psd: v.psd.iter().zip(&self.psd).map(|(m, sc)| (&(&sc.r * m) * &sc.r_adj).symmetrize()).collect(),
            lp: v.lp.iter().zip(&self.lp_d).map(|(x, d)| x * d).collect(),
        }
    }
}

fn schur_complement(form: &StdForm, sc: &Scaling) -> Vec<f64> {
    let m = form.m();
    let mut mat = vec![0.0; m * m];
    for (k, touch) in form.psd_touch.iter().enumerate() {
        let w = &sc.psd[k].w;
        for (tj, &(j, idx_j)) in touch.iter().enumerate() {
            let g = form.rows[j].psd[idx_j].1.congruence(w);
            for &(i, idx_i) in &touch[..=tj] {
                let v = form.rows[i].psd[idx_i].1.inner(&g);
                mat[i * m + j] += v;
                if i != j {
                    mat[j * m + i] += v;
                }
            }
        }
    }
    for (l, touch) in form.lp_touch.iter().enumerate() {
        let d2 = sc.lp_d[l] * sc.lp_d[l];
        for &(i, a) in touch {
            for &(j, b) in touch {
                mat[i * m + j] += a * b * d2;
            }
        }
    }
    mat
}

/// Largest `alpha` with `lambda + alpha * dz` in the cone, for a scaled direction `dz`.
fn max_step(sc: &Scaling, dz: &ConeVec) -> f64 {
    let mut alpha = f64::INFINITY;
    for (p, m) in sc.psd.iter().zip(&dz.psd) {
        let n = p.lambda.len();
        let inv: Vec<f64> = p.lambda.iter().map(|l| 1.0 / l.sqrt()).collect();
        let t = ComplexMatrix::from_fn(n, n, |i, j| m[(i, j)] * (inv[i] * inv[j]));
        let e = hermitian_eig_unchecked(&t.symmetrize()).min();
        if e < 0.0 {
            alpha = alpha.min(-1.0 / e);
        }
    }
    for (l, d) in sc.lp_lambda.iter().zip(&dz.lp) {
        if *d < 0.0 {
            alpha = alpha.min(-l / d);
        }
    }
    alpha
}

struct Direction {
    dx: ConeVec,
    ds: ConeVec,
    dy: Vec<f64>,
    dtau: f64,
    dkappa: f64,
}

#[derive(Clone)]
struct Iterate {
    x: ConeVec,
    s: ConeVec,
    y: Vec<f64>,
    tau: f64,
    kappa: f64,
}

struct Residuals {
    rp: Vec<f64>,
    rd: ConeVec,
    rg: f64,
}

/// Per-iteration data shared by predictor and corrector solves.
struct Newton<'a> {
    form: &'a StdForm,
    sc: &'a Scaling,
    mchol: SpdFactor,
    v: Vec<f64>,
    dx_v: ConeVec,
    bv: f64,
    c_dx_v: f64,
}

impl<'a> Newton<'a> {
    fn new(form: &'a StdForm, sc: &'a Scaling) -> Option<Self> {
        let mchol = SpdFactor::new(&schur_complement(form, sc), form.m())?;
        let wc = sc.apply_w(&form.c);
        let awc = form.a_mul(&wc);
        let rhs2: Vec<f64> = awc.iter().zip(&form.b).map(|(a, b)| a + b).collect();
        let v = mchol.solve(&rhs2);
        let atv = form.at_mul(&v);
        let dx_v = sc.apply_w(&atv.combine(-1.0, &form.c));
        let bv = dot(&form.b, &v);
        let c_dx_v = form.c.dot(&dx_v);
        Some(Self {
            form,
            sc,
            mchol,
            v,
            dx_v,
            bv,
            c_dx_v,
        })
    }

    /// Solves the linearized system with complementarity target `rc`
    /// (unscaled, `dx + W ds W = rc`) and `kappa dtau + tau dkappa = rtau`.
    fn solve(&self, it: &Iterate, res: &Residuals, eta: f64, rc: &ConeVec, rtau: f64) -> Option<Direction> {
        let form = self.form;
        let mut inner = self.sc.apply_w(&res.rd);
        for m in &mut inner.psd {
            *m = m.scale(eta);
        }
        for x in &mut inner.lp {
            *x *= eta;
        }
        inner.axpy(1.0, rc);
        let a_inner = form.a_mul(&inner);
        let rhs1: Vec<f64> = res.rp.iter().zip(&a_inner).map(|(p, a)| -eta * p - a).collect();
        let u = self.mchol.solve(&rhs1);
        let mut dx_u = self.sc.apply_w(&form.at_mul(&u).combine(eta, &res.rd));
        dx_u.axpy(1.0, rc);
        let num = -eta * res.rg - rtau / it.tau + dot(&form.b, &u) - form.c.dot(&dx_u);
        let den = self.c_dx_v - self.bv - it.kappa / it.tau;
        let dtau = num / den;
        let dy: Vec<f64> = u.iter().zip(&self.v).map(|(u, v)| u + v * dtau).collect();
        let mut dx = dx_u;
        dx.axpy(dtau, &self.dx_v);
        dx.symmetrize();
        // From the dual equation `A^T dy + ds - c dtau = -eta rd`, which keeps
        // dual feasibility exact even when the Schur solve is inaccurate.
        let mut ds = form.at_mul(&dy);
        for m in &mut ds.psd {
            *m = m.scale(-1.0);
        }
        for x in &mut ds.lp {
            *x = -*x;
        }
        ds.axpy(dtau, &form.c);
        ds.axpy(-eta, &res.rd);
        let dkappa = (rtau - it.kappa * dtau) / it.tau;
        if !dtau.is_finite() || !dkappa.is_finite() {
            return None;
        }
        Some(Direction {
            dx,
            ds,
            dy,
            dtau,
            dkappa,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Maps a scaled complementarity right-hand side `T` to `Z` with `lambda o Z = T`,
/// then unscales it.
fn complementarity_rhs(sc: &Scaling, t: &ConeVec) -> ConeVec {
    let z = ConeVec {
        psd: t
            .psd
            .iter()
            .zip(&sc.psd)
            .map(|(tm, p)| {
                let n = p.lambda.len();
                ComplexMatrix::from_fn(n, n, |i, j| tm[(i, j)] * (2.0 / (p.lambda[i] + p.lambda[j])))
            })
            .collect(),
        lp: t.lp.iter().zip(&sc.lp_lambda).map(|(t, l)| t / l).collect(),
    };
    sc.unscale_x(&z)
}

/// `sigma mu e - lambda o lambda - corr` in scaled coordinates.
fn complementarity_target(sc: &Scaling, sigma_mu: f64, corr: Option<&ConeVec>) -> ConeVec {
    let mut t = ConeVec {
        psd: sc
            .psd
            .iter()
            .map(|p| {
                let d: Vec<f64> = p.lambda.iter().map(|l| sigma_mu - l * l).collect();
                ComplexMatrix::diag(&d)
            })
            .collect(),
        lp: sc.lp_lambda.iter().map(|l| sigma_mu - l * l).collect(),
    };
    if let Some(c) = corr {
        t.axpy(-1.0, c);
    }
    t
}

/// Symmetrized Jordan product `(a b + b a) / 2` in scaled space.
fn jordan(a: &ConeVec, b: &ConeVec) -> ConeVec {
    ConeVec {
        psd: a
            .psd
            .iter()
            .zip(&b.psd)
            .map(|(x, y)| (&(x * y) + &(y * x)).scale(0.5))
            .collect(),
        lp: a.lp.iter().zip(&b.lp).map(|(x, y)| x * y).collect(),
    }
}

fn step_length(sc: &Scaling, it: &Iterate, d: &Direction) -> f64 {
    let ax = max_step(sc, &sc.scale_x(&d.dx));
    let as_ = max_step(sc, &sc.scale_s(&d.ds));
    let mut alpha = ax.min(as_);
    if d.dtau < 0.0 {
        alpha = alpha.min(-it.tau / d.dtau);
    }
    if d.dkappa < 0.0 {
        alpha = alpha.min(-it.kappa / d.dkappa);
    }
    alpha
}

/// Solves `problem`; never fails for a well-formed problem, reporting trouble via the status.
pub fn solve(problem: &SdpProblem, settings: &SolverSettings) -> Result<SdpSolution> {
    problem.validate()?;
    let form = match StdForm::build(problem) {
        Presolve::Ready(f) => f,
        Presolve::Infeasible => return Ok(empty_solution(problem, SdpStatus::Infeasible, 0)),
    };
    let nu = form.degree();
    let mut it = Iterate {
        x: ConeVec::identity(&form.psd_dims, form.n_lp),
        s: ConeVec::identity(&form.psd_dims, form.n_lp),
        y: vec![0.0; form.m()],
        tau: 1.0,
        kappa: 1.0,
    };
    let bnorm = 1.0 + norm(&form.b);
    let cnorm = 1.0 + form.c.norm();

    let mut status = SdpStatus::NumericalFailure;
    let mut iterations = 0;
    let mut best: Option<(f64, Iterate)> = None;
    for iter in 0..=settings.max_iter {
        iterations = iter;
        let ax = form.a_mul(&it.x);
        let rp: Vec<f64> = ax.iter().zip(&form.b).map(|(a, b)| a - b * it.tau).collect();
        let aty = form.at_mul(&it.y);
        let mut rd = aty.combine(1.0, &it.s);
        rd.axpy(-it.tau, &form.c);
        let cx = form.c.dot(&it.x);
        let by = dot(&form.b, &it.y);
        let rg = cx - by + it.kappa;
        let mu = (it.x.dot(&it.s) + it.tau * it.kappa) / (nu + 1.0);

        let pobj = cx / it.tau;
        let dobj = by / it.tau;
        let pres = norm(&rp) / it.tau / bnorm;
        let dres = rd.norm() / it.tau / cnorm;
        let gap = (pobj - dobj).abs();
        trace!("iter {iter}: pobj {pobj:.10e} dobj {dobj:.10e} pres {pres:.2e} dres {dres:.2e} tau {:.2e} kappa {:.2e}", it.tau, it.kappa);

        if pres <= settings.feas_tol && dres <= settings.feas_tol && gap <= settings.gap_tol * pobj.abs().max(1.0) {
            status = SdpStatus::Optimal;
            break;
        }
        let score = (pres / settings.feas_tol)
            .max(dres / settings.feas_tol)
            .max(gap / (settings.gap_tol * pobj.abs().max(1.0)));
        if score.is_finite() && best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, it.clone()));
        }
        // Farkas-type certificates.
        let aty_s = aty.combine(1.0, &it.s).norm();
        if by > 0.0 && aty_s / by <= settings.feas_tol {
            status = SdpStatus::Infeasible;
            break;
        }
        let ax_norm = norm(&ax);
        if cx < 0.0 && ax_norm / -cx <= settings.feas_tol {
            status = SdpStatus::Unbounded;
            break;
        }
        if it.tau < TAU_KAPPA_INFEASIBLE * it.kappa {
            status = if by > 0.0 && aty_s / by <= settings.feas_tol.sqrt() {
                SdpStatus::Infeasible
            } else if cx < 0.0 && ax_norm / -cx <= settings.feas_tol.sqrt() {
                SdpStatus::Unbounded
            } else {
                SdpStatus::NumericalFailure
            };
            break;
        }
        if iter == settings.max_iter {
            break;
        }

        let Some(sc) = Scaling::new(&it.x, &it.s) else {
            debug!("scaling breakdown at iteration {iter}");
            break;
        };
        let Some(newton) = Newton::new(&form, &sc) else {
            debug!("Schur complement breakdown at iteration {iter}");
            break;
        };
        let res = Residuals { rp, rd, rg };

        // predictor
        let t_aff = complementarity_target(&sc, 0.0, None);
        let rc_aff = complementarity_rhs(&sc, &t_aff);
        let Some(aff) = newton.solve(&it, &res, 1.0, &rc_aff, -it.tau * it.kappa) else {
            break;
        };
        let alpha_aff = step_length(&sc, &it, &aff).min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

        // corrector
        let corr = jordan(&sc.scale_x(&aff.dx), &sc.scale_s(&aff.ds));
        let t = complementarity_target(&sc, sigma * mu, Some(&corr));
        let rc = complementarity_rhs(&sc, &t);
        let rtau = sigma * mu - it.tau * it.kappa - aff.dtau * aff.dkappa;
        let Some(dir) = newton.solve(&it, &res, 1.0 - sigma, &rc, rtau) else {
            break;
        };
        let alpha = (STEP_FRACTION * step_length(&sc, &it, &dir)).min(1.0);
        if !(alpha > 1e-14) {
            debug!("step length collapsed at iteration {iter}");
            break;
        }

        it.x.axpy(alpha, &dir.dx);
        it.s.axpy(alpha, &dir.ds);
        it.x.symmetrize();
        it.s.symmetrize();
        for (y, d) in it.y.iter_mut().zip(&dir.dy) {
            *y += alpha * d;
        }
        it.tau += alpha * dir.dtau;
        it.kappa += alpha * dir.dkappa;
    }
    if status == SdpStatus::NumericalFailure {
        if let Some((score, b)) = best.filter(|(score, _)| *score <= STALL_ACCEPT) {
            debug!("stalled; accepting best iterate (score {score:.2})");
            status = SdpStatus::Optimal;
            it = b;
        }
    }
    let sol = extract(problem, &form, &it, status, iterations);
    if status == SdpStatus::Optimal && super::audit::enabled() {
        super::audit::record(&super::certificate::verify_certificate(problem, &sol, settings));
    }
    Ok(sol)
}

fn empty_solution(problem: &SdpProblem, status: SdpStatus, iterations: usize) -> SdpSolution {
    SdpSolution {
        status,
        primal_value: f64::NAN,
        dual_value: f64::NAN,
        primal_blocks: problem.block_dims.iter().map(|&d| ComplexMatrix::zeros(d, d)).collect(),
        dual_blocks: problem.block_dims.iter().map(|&d| ComplexMatrix::zeros(d, d)).collect(),
        scalars: vec![0.0; problem.free_scalars],
        dual_multipliers: vec![0.0; problem.constraints.len()],
        iterations,
    }
}

fn extract(problem: &SdpProblem, form: &StdForm, it: &Iterate, status: SdpStatus, iterations: usize) -> SdpSolution {
    // Infeasibility certificates are reported unnormalized.
    let scale = if status == SdpStatus::Optimal || status == SdpStatus::NumericalFailure {
        1.0 / it.tau
    } else {
        1.0
    };
    let to_user = |v: &ConeVec, b: usize| -> ComplexMatrix {
        match form.locs[b] {
            Loc::Psd(k) => v.psd[k].scale(scale),
            Loc::Lp(j) => ComplexMatrix::diag(&[v.lp[j] * scale]),
        }
    };
    let primal_blocks: Vec<ComplexMatrix> = (0..problem.block_dims.len()).map(|b| to_user(&it.x, b)).collect();
    let dual_blocks: Vec<ComplexMatrix> = (0..problem.block_dims.len()).map(|b| to_user(&it.s, b)).collect();
    let scalars: Vec<f64> = form
        .free_split
        .iter()
        .map(|&(p, n)| (it.x.lp[p] - it.x.lp[n]) * scale)
        .collect();
    let dual_multipliers: Vec<f64> = form
        .row_of
        .iter()
        .map(|r| r.map_or(0.0, |i| it.y[i] * scale))
        .collect();
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let (primal_value, dual_value) = match status {
        SdpStatus::Optimal | SdpStatus::NumericalFailure => {
            let cx = form.c.dot(&it.x) / it.tau;
            let by = dot(&form.b, &it.y) / it.tau;
            (sign * cx, sign * by)
        }
        SdpStatus::Infeasible => (sign * f64::INFINITY, f64::NAN),
        SdpStatus::Unbounded => (-sign * f64::INFINITY, f64::NAN),
    };
    SdpSolution {
        status,
        primal_value,
        dual_value,
        primal_blocks,
        dual_blocks,
        scalars,
        dual_multipliers,
        iterations,
    }
}
