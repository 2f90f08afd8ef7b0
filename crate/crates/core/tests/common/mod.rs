#![allow(dead_code)]

use proptest::prelude::*;
use vrd_core::qmath::{hermitian_eig, ComplexMatrix, DensityMatrix, QuantumChannel, C64};

/// `d x d` complex matrix from `2 d^2` reals.
pub fn complex_matrix(d: usize, cols: usize, re_im: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(re_im[k], re_im[k + 1])
    })
}

/// `G G^† / tr`, full rank with probability one.
pub fn density_from(d: usize, re_im: &[f64]) -> DensityMatrix {
    let g = complex_matrix(d, d, re_im);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr)).unwrap()
}

pub fn pure_from(d: usize, re_im: &[f64]) -> DensityMatrix {
    let v: Vec<C64> = (0..d).map(|i| C64::new(re_im[2 * i], re_im[2 * i + 1])).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.iter().map(|z| z / n).collect();
    DensityMatrix::pure(&v).unwrap()
}

pub fn density(d: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| density_from(d, &v))
}

pub fn pure(d: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(move |v| pure_from(d, &v))
}

/// Kraus operators `G_i S^{-1/2}` with `S = sum_i G_i^† G_i`.
pub fn channel(d: usize, n_kraus: usize) -> impl Strategy<Value = QuantumChannel> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d * n_kraus).prop_map(move |v| {
        let gs: Vec<ComplexMatrix> = v.chunks(2 * d * d).map(|c| complex_matrix(d, d, c)).collect();
        let mut s = ComplexMatrix::zeros(d, d);
        for g in &gs {
            s = &s + &(&g.adjoint() * g);
        }
        let inv_sqrt = hermitian_eig(&s.symmetrize()).unwrap().reconstruct_with(|x| 1.0 / x.max(1e-12).sqrt());
        QuantumChannel::new(gs.iter().map(|g| g * &inv_sqrt).collect()).unwrap()
    })
}
