//! Named states and operators used throughout the crate.

use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use super::state::DensityMatrix;

const I: C64 = C64::new(0.0, 1.0);

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// Uniform superposition over `d` basis states (maximally coherent).
pub fn max_coherent_vector(d: usize) -> Vec<C64> {
    let a = 1.0 / (d as f64).sqrt();
    vec![C64::new(a, 0.0); d]
}

pub fn max_coherent(d: usize) -> DensityMatrix {
    DensityMatrix::pure(&max_coherent_vector(d)).unwrap()
}

pub fn plus() -> DensityMatrix {
    max_coherent(2)
}

/// `sum_i |ii> / sqrt(d)` on `C^d (x) C^d`.
pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let a = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = C64::new(a, 0.0);
    }
    v
}

pub fn max_entangled(d: usize) -> DensityMatrix {
    DensityMatrix::pure(&max_entangled_vector(d)).unwrap()
}

/// `(|00> + |11>) / sqrt(2)`
pub fn bell() -> DensityMatrix {
    max_entangled(2)
}

/// `(|0> + e^{i pi/4}|1>) / sqrt(2)`, i.e. `(I + (X + Y)/sqrt(2)) / 2`.
pub fn t_state_vector() -> Vec<C64> {
    vec![
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::from_polar(FRAC_1_SQRT_2, std::f64::consts::FRAC_PI_4),
    ]
}

pub fn t_state() -> DensityMatrix {
    DensityMatrix::pure(&t_state_vector()).unwrap()
}

/// Eigenstates of X, Y and Z: `|+>, |->, |+i>, |-i>, |0>, |1>`.
pub fn single_qubit_stabilizer_vectors() -> Vec<Vec<C64>> {
    let h = FRAC_1_SQRT_2;
    let hc = C64::new(h, 0.0);
    vec![
        vec![hc, hc],
        vec![hc, -hc],
        vec![hc, I * h],
        vec![hc, -I * h],
        vec![ONE, ZERO],
        vec![ZERO, ONE],
    ]
}
