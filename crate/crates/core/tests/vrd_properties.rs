mod common;

use common::density;
use proptest::prelude::*;
use vrd_core::qmath::DensityMatrix;
use vrd_core::vrd::{conventional_rate, overhead_bounds, virtual_rate, Theory};

fn instance() -> impl Strategy<Value = (Theory, DensityMatrix, f64)> {
    let eps = prop_oneof![Just(0.0), 0.0f64..0.1];
    prop_oneof![
        (density(4), eps.clone()).prop_map(|(r, e)| (Theory::Coherence, r, e)),
        (density(4), eps.clone()).prop_map(|(r, e)| (Theory::Entanglement, r, e)),
        (density(2), eps.clone()).prop_map(|(r, e)| (Theory::Magic, r, e)),
        // Noisy resource states, where the rates are mostly nonzero.
        (0usize..3, 0.0f64..=1.0, eps).prop_map(|(t, p, e)| {
            let th = Theory::ALL[t];
            (th, th.noisy_state(p).unwrap(), e)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn conventional_never_beats_virtual((th, rho, eps) in instance()) {
        let m_max = th.default_m_max();
        let d = conventional_rate(&rho, eps, th, m_max).unwrap();
        let v = virtual_rate(&rho, eps, th, m_max).unwrap();
        prop_assert!(d as f64 <= v.rate, "{th} eps={eps}: D={d} V={}", v.rate);
        for o in &v.overheads {
            prop_assert!(o.lower >= 1.0 && o.lower <= o.upper + 1e-7, "{o:?}");
            if o.m <= d {
                prop_assert_eq!(o.value(), 1.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coinciding_bounds_agree((th, rho, eps) in instance()) {
        for m in 1..=th.default_m_max() {
            let o = overhead_bounds(&rho, m, eps, th).unwrap();
            if o.exact.is_some() && o.lower.is_finite() {
                prop_assert!((o.upper - o.lower).abs() <= 1e-6 * o.lower, "{o:?}");
            }
        }
    }
}
