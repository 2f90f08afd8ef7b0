use super::sparse::{hermitian_basis, SparseHermitian};
use crate::error::{Error, Result};
use crate::qmath::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// `sum_b <A_b, X_b> + sum_f a_f z_f  (= | <=)  rhs`
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub blocks: Vec<(usize, SparseHermitian)>,
    pub free: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Standard-form SDP over Hermitian PSD blocks plus unconstrained real scalars.
///
/// Blocks of dimension one are ordinary nonnegative scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub sense: Sense,
    pub block_dims: Vec<usize>,
    pub objective: Vec<SparseHermitian>,
    pub free_scalars: usize,
    pub free_objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        if self.block_dims.is_empty() && self.free_scalars == 0 {
            return Err(Error::InvalidArgument("SDP without variables".into()));
        }
        if self.block_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("zero-dimensional block".into()));
        }
        if self.objective.len() != self.block_dims.len() || self.free_objective.len() != self.free_scalars {
            return Err(Error::InvalidArgument("objective does not match variables".into()));
        }
        let check = |b: usize, a: &SparseHermitian| -> Result<()> {
            let d = *self
                .block_dims
                .get(b)
                .ok_or_else(|| Error::InvalidArgument(format!("block index {b} out of range")))?;
            if a.dim() != d {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient of dimension {} on block {b} of dimension {d}",
                    a.dim()
                )));
            }
            let dev = a.hermitian_deviation();
            if dev > 1e-12 {
                return Err(Error::NotHermitian(dev));
            }
            Ok(())
        };
        for (b, a) in self.objective.iter().enumerate() {
            check(b, a)?;
        }
        for c in &self.constraints {
            for (b, a) in &c.blocks {
                check(*b, a)?;
            }
            if c.free.iter().any(|&(f, _)| f >= self.free_scalars) {
                return Err(Error::InvalidArgument("free scalar index out of range".into()));
            }
            if !c.rhs.is_finite() {
                return Err(Error::InvalidArgument("non-finite right-hand side".into()));
            }
        }
        Ok(())
    }
}

/// Handle to a PSD block (or a nonnegative scalar when its dimension is one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block(pub usize);

/// Handle to an unconstrained real scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Free(pub usize);

/// Affine combination of variables.
#[derive(Clone, Debug, Default)]
pub struct LinExpr {
    blocks: Vec<(usize, SparseHermitian)>,
    free: Vec<(usize, f64)>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// `+ <A, X_b>`
    pub fn block(mut self, b: Block, a: SparseHermitian) -> Self {
        if !a.is_zero() {
            self.blocks.push((b.0, a));
        }
        self
    }

    /// `+ coef * x` for a scalar (1x1) block.
    pub fn scalar(self, b: Block, coef: f64) -> Self {
        if coef == 0.0 {
            return self;
        }
        self.block(b, SparseHermitian::scalar(coef))
    }

    pub fn free(mut self, f: Free, coef: f64) -> Self {
        if coef != 0.0 {
            self.free.push((f.0, coef));
        }
        self
    }

    fn merged(self) -> (Vec<(usize, SparseHermitian)>, Vec<(usize, f64)>) {
        let mut blocks: Vec<(usize, SparseHermitian)> = Vec::new();
        for (b, a) in self.blocks {
            if let Some(pos) = blocks.iter().position(|(x, _)| *x == b) {
                let prev = &blocks[pos].1;
                let entries = prev.entries().iter().chain(a.entries()).copied();
                blocks[pos].1 = SparseHermitian::from_entries(a.dim(), entries);
            } else {
                blocks.push((b, a));
            }
        }
        blocks.retain(|(_, a)| !a.is_zero());
        let mut free: Vec<(usize, f64)> = Vec::new();
        for (f, c) in self.free {
            match free.iter_mut().find(|(x, _)| *x == f) {
                Some(e) => e.1 += c,
                None => free.push((f, c)),
            }
        }
        free.retain(|(_, c)| *c != 0.0);
        (blocks, free)
    }
}

/// Term of a matrix-valued linear expression.
#[derive(Clone, Debug)]
pub enum MatTerm {
    /// `coef * X_b`
    Block(Block, f64),
    /// `coef * X_b^{T_B}` with the given bipartition.
    BlockPartialTranspose(Block, f64, (usize, usize)),
    /// `x * M` for a scalar block `x`.
    ScalarTimes(Block, ComplexMatrix),
}

#[derive(Clone, Debug)]
pub struct SdpBuilder {
    sense: Sense,
    block_dims: Vec<usize>,
    objective: Vec<SparseHermitian>,
    free_objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl SdpBuilder {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            block_dims: Vec::new(),
            objective: Vec::new(),
            free_objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn psd(&mut self, dim: usize) -> Block {
        self.block_dims.push(dim);
        self.objective.push(SparseHermitian::zero(dim));
        Block(self.block_dims.len() - 1)
    }

    pub fn nonneg(&mut self) -> Block {
        self.psd(1)
    }

    pub fn free(&mut self) -> Free {
        self.free_objective.push(0.0);
        Free(self.free_objective.len() - 1)
    }

    pub fn dim(&self, b: Block) -> usize {
        self.block_dims[b.0]
    }

    pub fn set_objective(&mut self, expr: LinExpr) {
        let (blocks, free) = expr.merged();
        for (b, a) in blocks {
            self.objective[b] = a;
        }
        for (f, c) in free {
            self.free_objective[f] = c;
        }
    }

    pub fn constrain(&mut self, expr: LinExpr, relation: Relation, rhs: f64) {
        let (blocks, free) = expr.merged();
        self.constraints.push(Constraint {
            blocks,
            free,
            relation,
            rhs,
        });
    }

    /// Imposes `sum terms = rhs` entrywise on `dim x dim` Hermitian matrices.
    pub fn matrix_equality(&mut self, dim: usize, terms: &[MatTerm], rhs: &ComplexMatrix) {
        for e in hermitian_basis(dim) {
            let mut expr = LinExpr::new();
            for t in terms {
                expr = match t {
                    MatTerm::Block(b, c) => expr.block(*b, e.scaled(*c)),
                    MatTerm::BlockPartialTranspose(b, c, dims) => {
                        expr.block(*b, e.partial_transpose_b(*dims).scaled(*c))
                    }
                    MatTerm::ScalarTimes(b, m) => expr.scalar(*b, e.inner(m)),
                };
            }
            self.constrain(expr, Relation::Eq, e.inner(rhs));
        }
    }

    pub fn build(self) -> SdpProblem {
        SdpProblem {
            sense: self.sense,
            free_scalars: self.free_objective.len(),
            block_dims: self.block_dims,
            objective: self.objective,
            free_objective: self.free_objective,
            constraints: self.constraints,
        }
    }
}
