use std::collections::BTreeMap;

use crate::qmath::{ComplexMatrix, C64};

/// Hermitian coefficient matrix stored as its nonzero entries (both triangles).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseHermitian {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    /// Merges duplicate positions and drops exact zeros.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (i, j, v) in entries {
            assert!(i < dim && j < dim, "sparse entry ({i}, {j}) outside dimension {dim}");
            *map.entry((i, j)).or_default() += v;
        }
        Self {
            dim,
            entries: map
                .into_iter()
                .filter(|(_, v)| *v != C64::new(0.0, 0.0))
                .map(|((i, j), v)| (i, j, v))
                .collect(),
        }
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        Self::from_entries(
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, m[(i, j)])),
        )
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_entries(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))))
    }

    /// 1x1 coefficient, used for scalar (nonnegative) variables.
    pub fn scalar(v: f64) -> Self {
        Self::from_entries(1, [(0, 0, C64::new(v, 0.0))])
    }

    /// Functional `X -> Re X_ij` (or `X_ii`).
    pub fn real_part(dim: usize, i: usize, j: usize) -> Self {
        if i == j {
            Self::from_entries(dim, [(i, i, C64::new(1.0, 0.0))])
        } else {
            Self::from_entries(dim, [(i, j, C64::new(0.5, 0.0)), (j, i, C64::new(0.5, 0.0))])
        }
    }

    /// Functional `X -> Im X_ij`, `i != j`.
    pub fn imag_part(dim: usize, i: usize, j: usize) -> Self {
        Self::from_entries(dim, [(i, j, C64::new(0.0, 0.5)), (j, i, C64::new(0.0, -0.5))])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: if s == 0.0 {
                Vec::new()
            } else {
                self.entries.iter().map(|&(i, j, v)| (i, j, v * s + C64::new(0.0, 0.0))).collect()
            },
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// `Re tr(A X)`
    pub fn inner(&self, x: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, a)| {
                let b = x[(j, i)];
                a.re * b.re - a.im * b.im
            })
            .sum()
    }

    /// `X += s A`
    pub fn add_to(&self, x: &mut ComplexMatrix, s: f64) {
        for &(i, j, v) in &self.entries {
            x[(i, j)] += v * s;
        }
    }

    /// `W A W` for Hermitian `W`.
    pub(crate) fn congruence(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n, n);
        for &(r, c, a) in &self.entries {
            for p in 0..n {
                let wpr = w[(p, r)] * a;
                if wpr == C64::new(0.0, 0.0) {
                    continue;
                }
                for q in 0..n {
                    out[(p, q)] += wpr * w[(c, q)];
                }
            }
        }
        out
    }

    /// Partial transpose on the second factor of `dims`.
    pub fn partial_transpose_b(&self, (da, db): (usize, usize)) -> Self {
        assert_eq!(da * db, self.dim);
        Self::from_entries(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| {
                let (ia, ib) = (r / db, r % db);
                let (ja, jb) = (c / db, c % db);
                (ia * db + jb, ja * db + ib, v)
            }),
        )
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.to_dense().hermitian_deviation()
    }
}

/// Real basis of Hermitian functionals: diagonal, then real and imaginary parts of the upper triangle.
pub(crate) fn hermitian_basis(dim: usize) -> Vec<SparseHermitian> {
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        out.push(SparseHermitian::real_part(dim, i, i));
    }
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(SparseHermitian::real_part(dim, i, j));
            out.push(SparseHermitian::imag_part(dim, i, j));
        }
    }
    out
}
