use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qmath::{kron_vec, states, DensityMatrix, C64};

const MAX_QUBITS: usize = 3;

fn h(v: &mut [C64], q: usize, n: usize) {
    let bit = 1 << (n - 1 - q);
    for i in 0..v.len() {
        if i & bit == 0 {
            let (a, b) = (v[i], v[i | bit]);
            v[i] = (a + b) * FRAC_1_SQRT_2;
            v[i | bit] = (a - b) * FRAC_1_SQRT_2;
        }
    }
}

fn s(v: &mut [C64], q: usize, n: usize) {
    let bit = 1 << (n - 1 - q);
    for (i, x) in v.iter_mut().enumerate() {
        if i & bit != 0 {
            *x *= C64::new(0.0, 1.0);
        }
    }
}

fn cnot(v: &mut [C64], c: usize, t: usize, n: usize) {
    let cb = 1 << (n - 1 - c);
    let tb = 1 << (n - 1 - t);
    for i in 0..v.len() {
        if i & cb != 0 && i & tb == 0 {
            v.swap(i, i | tb);
        }
    }
}

/// Key of a state vector up to global phase.
fn key(v: &[C64]) -> Vec<(i64, i64)> {
    let lead = v.iter().find(|z| z.norm() > 1e-9).copied().unwrap_or(C64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    v.iter()
        .map(|z| {
            let w = z * phase;
            ((w.re * 1e8).round() as i64, (w.im * 1e8).round() as i64)
        })
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Unsupported(format!(
            "stabilizer states are enumerated for 1 to {MAX_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

/// All `n`-qubit stabilizer states (6, 60 and 1080 for n = 1, 2, 3), as the
/// orbit of `|0...0>` under Hadamard, phase and CNOT gates.
pub fn stabilizer_states(n: usize) -> Result<Vec<DensityMatrix>> {
    check_n(n)?;
    let dim = 1 << n;
    let mut start = vec![C64::new(0.0, 0.0); dim];
    start[0] = C64::new(1.0, 0.0);
    let mut seen = HashSet::new();
    seen.insert(key(&start));
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let v = order[head].clone();
        head += 1;
        let mut next = Vec::new();
        for q in 0..n {
            let mut a = v.clone();
            h(&mut a, q, n);
            next.push(a);
            let mut b = v.clone();
            s(&mut b, q, n);
            next.push(b);
            for t in 0..n {
                if t != q {
                    let mut c = v.clone();
                    cnot(&mut c, q, t, n);
                    next.push(c);
                }
            }
        }
        for w in next {
            if seen.insert(key(&w)) {
                order.push(w);
            }
        }
    }
    order.iter().map(|v| DensityMatrix::pure(v)).collect()
}

/// Tensor products of single-qubit stabilizer states (`6^n` of them).
pub fn stabilizer_product_states(n: usize) -> Result<Vec<DensityMatrix>> {
    check_n(n)?;
    let single = states::single_qubit_stabilizer_vectors();
    let mut vecs: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]];
    for _ in 0..n {
        vecs = vecs.iter().flat_map(|v| single.iter().map(move |s| kron_vec(v, s))).collect();
    }
    vecs.iter().map(|v| DensityMatrix::pure(v)).collect()
}
