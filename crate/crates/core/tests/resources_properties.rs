mod common;

use common::{density, pure};
use proptest::prelude::*;
use vrd_core::qmath::{states, ComplexMatrix, DensityMatrix, C64};
use vrd_core::resources::{
    coincidence_check, free_fidelity, generalized_robustness, max_overlap_fo, standard_robustness, FreeSetSpec,
    OverlapContext, TwirlingSpec,
};

fn conj(u: &ComplexMatrix, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(&(u * rho.matrix()) * &u.adjoint()).unwrap()
}

fn free_sets() -> Vec<FreeSetSpec> {
    vec![FreeSetSpec::diagonal(2).unwrap(), FreeSetSpec::stabilizer(1).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generalized_below_standard_qubit(rho in density(2)) {
        for free in free_sets() {
            let g = generalized_robustness(&rho, &free).unwrap().value;
            let s = standard_robustness(&rho, &free).unwrap().value;
            prop_assert!(g >= -1e-8 && g <= s + 1e-7, "{}: {g} {s}", free.label());
        }
    }

    #[test]
    fn generalized_below_standard_two_qubit(rho in density(4)) {
        let free = FreeSetSpec::ppt(2, 2).unwrap();
        let g = generalized_robustness(&rho, &free).unwrap().value;
        let s = standard_robustness(&rho, &free).unwrap().value;
        prop_assert!(g >= -1e-8 && g <= s + 1e-7, "{g} {s}");
    }

    #[test]
    fn fidelity_robustness_product(psi in pure(2), psi4 in pure(4)) {
        for (psi, free) in [
            (&psi, FreeSetSpec::diagonal(2).unwrap()),
            (&psi, FreeSetSpec::stabilizer(1).unwrap()),
            (&psi4, FreeSetSpec::diagonal(4).unwrap()),
            (&psi4, FreeSetSpec::ppt(2, 2).unwrap()),
        ] {
            let f = free_fidelity(psi, &free).unwrap().value;
            let rg = generalized_robustness(psi, &free).unwrap().value;
            prop_assert!(f * (1.0 + rg) >= 1.0 - 1e-6, "{}: {f} {rg}", free.label());
            let c = coincidence_check(psi, &free).unwrap();
            if c.coincide_g {
                prop_assert!((f * (1.0 + rg) - 1.0).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn coherence_monotones_ignore_basis_order(rho in density(4), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let u = ComplexMatrix::from_fn(4, 4, |i, j| if perm[j] == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let free = FreeSetSpec::diagonal(4).unwrap();
        let a = generalized_robustness(&rho, &free).unwrap().value;
        let b = generalized_robustness(&conj(&u, &rho), &free).unwrap().value;
        prop_assert!((a - b).abs() < 1e-8 * a.max(1.0), "{a} {b}");
    }

    #[test]
    fn magic_monotones_ignore_cliffords(rho in density(2)) {
        let h = 1.0 / 2f64.sqrt();
        let had = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
        let phase = ComplexMatrix::from_vec(2, 2, vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0)]).unwrap();
        let free = FreeSetSpec::stabilizer(1).unwrap();
        let a = generalized_robustness(&rho, &free).unwrap().value;
        let s = standard_robustness(&rho, &free).unwrap().value;
        for u in [&had, &phase] {
            let r = conj(u, &rho);
            prop_assert!((generalized_robustness(&r, &free).unwrap().value - a).abs() < 1e-8 * a.max(1.0));
            prop_assert!((standard_robustness(&r, &free).unwrap().value - s).abs() < 1e-8 * s.max(1.0));
        }
    }

    #[test]
    fn max_overlap_bounds(rho in density(4)) {
        let bell = states::bell();
        let free = FreeSetSpec::ppt(2, 2).unwrap();
        let tw = TwirlingSpec::complement(bell.clone(), &free).unwrap();
        let ctx = OverlapContext {
            input_free: &free,
            target: &bell,
            target_fidelity: 0.5,
            twirling: Some(&tw),
            fidelity_non_improvable: true,
        };
        let f = max_overlap_fo(&rho, 1, &ctx).unwrap().value;
        prop_assert!(f >= rho.expectation(bell.matrix()) - 1e-7);
        prop_assert!(f >= 0.5 - 1e-7 && f <= 1.0 + 1e-7, "{f}");
    }
}
