use super::*;
use crate::error::Error;
use crate::qmath::{states, trace_distance, DensityMatrix};
use crate::resources::FreeSetSpec;

/// Equality-constrained program on `p psi_4 + (1-p) I/4` over diagonal states,
/// solved by hand: the optimum puts `Q_+` on the target direction and pays for
/// the leftover overlap with the mixed part.
fn coherence_zeta_g(p: f64, k: f64, eps: f64) -> f64 {
    let mu_plus = (1.0 - eps - (1.0 - p) / k) / (p * (4.0 / k).min(1.0));
    (2.0 * mu_plus - 1.0).max(1.0)
}

/// Isotropic Bell family; `d2` is the dimension of the m-copy target.
fn entanglement_overhead(p: f64, m: usize, eps: f64) -> f64 {
    let d = 2f64.powi(m as i32);
    let f = ((1.0 + 3.0 * p) / (2.0 * d)).max(1.0 / d);
    (2.0 * (1.0 - eps) / f - 1.0).max(1.0)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn zeta_target_is_input() {
    let r = zeta(&states::max_coherent(4), 4.0, 0.0, Variant::G, &FreeSetSpec::diagonal(4).unwrap()).unwrap();
    assert!(close(r.value, 1.0, 1e-7), "{}", r.value);
    assert!((r.mu_plus - r.mu_minus - 1.0).abs() < 1e-8);
}

#[test]
fn zeta_free_input() {
    let rho = DensityMatrix::maximally_mixed(4);
    let free = FreeSetSpec::diagonal(4).unwrap();
    let g = zeta(&rho, 4.0, 0.0, Variant::G, &free);
    assert!(matches!(g, Err(Error::Infeasible(_))), "{g:?}");
    // Q_+ = I, mu_+ = k: the inequality program pays 2k - 1.
    let s = zeta(&rho, 4.0, 0.0, Variant::S, &free).unwrap();
    assert!(close(s.value, 7.0, 1e-6), "{}", s.value);
}

#[test]
fn zeta_coherence_matches_hand_solution() {
    let free = FreeSetSpec::diagonal(4).unwrap();
    let mut prev = f64::INFINITY;
    for p in [0.25, 0.5, 0.75, 1.0] {
        let rho = Theory::Coherence.noisy_state(p).unwrap();
        for (k, eps) in [(2.0, 0.0), (4.0, 0.0), (4.0, 0.04), (8.0, 0.08)] {
            let r = zeta(&rho, k, eps, Variant::G, &free).unwrap();
            let want = coherence_zeta_g(p, k, eps);
            assert!(close(r.value, want, 1e-6), "p={p} k={k} eps={eps}: {} vs {want}", r.value);
            assert!(r.value >= 1.0 - 1e-9);
        }
        let v = zeta(&rho, 4.0, 0.0, Variant::G, &free).unwrap().value;
        assert!((1.0..=7.0).contains(&v) && v <= prev + 1e-7);
        prev = v;
    }
}

#[test]
fn zeta_witness_invariants() {
    let rho = Theory::Coherence.noisy_state(0.5).unwrap();
    let eps = 0.04;
    let r = zeta(&rho, 4.0, eps, Variant::G, &FreeSetSpec::diagonal(4).unwrap()).unwrap();
    assert!((r.mu_plus - r.mu_minus - 1.0).abs() < 1e-8);
    let overlap = rho.expectation(&(&r.q_plus - &r.q_minus));
    assert!(overlap >= 1.0 - eps - 1e-8, "{overlap}");
    for (q, mu) in [(&r.q_plus, r.mu_plus), (&r.q_minus, r.mu_minus)] {
        let e = crate::qmath::hermitian_eig(q).unwrap();
        assert!(e.min() >= -1e-7 && e.max() <= mu + 1e-7, "{:?} vs {mu}", e.values);
    }
}

#[test]
fn zeta_rejects_bad_arguments() {
    let rho = states::max_coherent(4);
    let free = FreeSetSpec::diagonal(4).unwrap();
    assert!(zeta(&rho, 0.5, 0.0, Variant::G, &free).is_err());
    assert!(zeta(&rho, 4.0, 1.0, Variant::G, &free).is_err());
    assert!(zeta(&rho, f64::INFINITY, 0.0, Variant::G, &free).is_err());
    assert!(zeta(&rho, 4.0, 0.0, Variant::G, &FreeSetSpec::diagonal(2).unwrap()).is_err());
}

#[test]
fn closed_form_examples() {
    assert_eq!(overhead_closed_form(1.0, 0.0).unwrap(), 1.0);
    assert!((overhead_closed_form(0.625, 0.0).unwrap() - 2.2).abs() < 1e-12);
    assert!((overhead_closed_form(0.5, 0.0).unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(overhead_closed_form(0.5, 0.9).unwrap(), 1.0);
    assert!(overhead_closed_form(0.0, 0.0).is_err());
    assert!(overhead_closed_form(-0.1, 0.0).is_err());
}

#[test]
fn coherence_overhead_examples() {
    let pure = overhead_bounds(&Theory::Coherence.noisy_state(1.0).unwrap(), 1, 0.0, Theory::Coherence).unwrap();
    assert!(close(pure.exact.unwrap(), 1.0, 1e-6));
    for (m, k) in [(1, 2.0), (2, 4.0), (3, 8.0)] {
        for p in [0.3, 0.6] {
            let o = overhead_bounds(&Theory::Coherence.noisy_state(p).unwrap(), m, 0.0, Theory::Coherence).unwrap();
            let want = coherence_zeta_g(p, k, 0.0);
            assert_eq!(o.method, OverheadMethod::EqualityProgram);
            assert!(close(o.exact.unwrap(), want, 1e-6), "m={m} p={p}: {o:?}");
            assert!(close(o.lower, o.upper, 1e-6));
        }
    }
}

#[test]
fn coherence_overhead_of_free_state_is_infinite() {
    let o = overhead_bounds(&DensityMatrix::maximally_mixed(4), 1, 0.0, Theory::Coherence).unwrap();
    assert!(o.lower.is_infinite() && o.value().is_infinite());
}

#[test]
fn entanglement_overhead_examples() {
    let th = Theory::Entanglement;
    for (p, want) in [(0.5, 2.2), (0.2, 3.0), (0.0, 3.0), (1.0, 1.0)] {
        let o = overhead_bounds(&th.noisy_state(p).unwrap(), 1, 0.0, th).unwrap();
        assert!(close(o.value(), want, 1e-6), "p={p}: {o:?}");
        assert_eq!(o.method, OverheadMethod::Both);
    }
    let o = overhead_bounds(&th.noisy_state(0.5).unwrap(), 2, 0.0, th).unwrap();
    assert!(close(o.value(), entanglement_overhead(0.5, 2, 0.0), 1e-6), "{o:?}");
    assert!(o.relaxation);
    assert!(overhead_bounds(&th.noisy_state(0.5).unwrap(), 3, 0.0, th).is_err());
}

#[test]
fn closed_form_agrees_with_program_under_twirling() {
    let th = Theory::Entanglement;
    for p in [1.0 / 3.0, 0.4, 0.5, 0.7, 0.9, 1.0] {
        for eps in [0.0, 0.04] {
            let o = overhead_bounds(&th.noisy_state(p).unwrap(), 1, eps, th).unwrap();
            let cf = o.closed_form.unwrap();
            assert!((cf - o.lower).abs() <= 1e-5, "p={p} eps={eps}: {o:?}");
            assert!((cf - entanglement_overhead(p, 1, eps)).abs() <= 1e-9);
        }
    }
}

#[test]
fn magic_lower_bound_is_closed_form() {
    let th = Theory::Magic;
    let f_free = (2.0 + 2f64.sqrt()) / 4.0;
    for p in [0.0, 0.5, 0.8, 1.0] {
        let o = overhead_bounds(&th.noisy_state(p).unwrap(), 1, 0.0, th).unwrap();
        let f = ((1.0 + p) / 2.0).max(f_free);
        let want = (2.0 / f - 1.0).max(1.0);
        assert!(close(o.lower, want, 1e-6), "p={p}: {o:?}");
        assert!(o.lower <= o.upper + 1e-7);
        assert!(o.exact.is_none());
    }
}

#[test]
fn overhead_monotone_in_eps_and_m() {
    let th = Theory::Coherence;
    let rho = th.noisy_state(0.5).unwrap();
    let mut by_m = Vec::new();
    for m in 1..=3 {
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.02, 0.04, 0.08] {
            let c = overhead_bounds(&rho, m, eps, th).unwrap().value();
            assert!(c <= prev + 1e-7);
            prev = c;
        }
        by_m.push(overhead_bounds(&rho, m, 0.0, th).unwrap().value());
    }
    assert!(by_m.windows(2).all(|w| w[0] <= w[1] + 1e-7), "{by_m:?}");
}

#[test]
fn teleport_operation() {
    let bell = states::bell();
    for (p, c) in [(1.0, 1.0), (1.0 / 3.0, 3.0), (0.5, 2.2), (0.7, 4.9 / 3.1)] {
        let vop = build_virtual_operation_teleport(p).unwrap();
        assert!((vop.overhead() - c).abs() < 1e-12, "p={p}");
        let rho = Theory::Entanglement.noisy_state(p).unwrap();
        let out = vop.apply(&rho).unwrap();
        assert!(trace_distance(&out, bell.matrix()).unwrap() <= 1e-10);
    }
    let v = build_virtual_operation_teleport(1.0 / 3.0).unwrap();
    assert!((v.lambda_plus() - 2.0).abs() < 1e-12 && (v.lambda_minus() - 1.0).abs() < 1e-12);
    assert!(build_virtual_operation_teleport(0.3).is_err());
    assert!(build_virtual_operation_teleport(1.1).is_err());
}

#[test]
fn conventional_rate_examples() {
    assert!(conventional_rate(&Theory::Coherence.noisy_state(1.0).unwrap(), 0.0, Theory::Coherence, 3).unwrap() >= 1);
    assert_eq!(conventional_rate(&Theory::Entanglement.noisy_state(1.0).unwrap(), 0.0, Theory::Entanglement, 1).unwrap(), 1);
    for p in [0.0, 0.2, 0.3] {
        let rho = Theory::Entanglement.noisy_state(p).unwrap();
        assert_eq!(conventional_rate(&rho, 0.0, Theory::Entanglement, 1).unwrap(), 0);
    }
    assert_eq!(conventional_rate(&Theory::Coherence.noisy_state(0.1).unwrap(), 0.0, Theory::Coherence, 3).unwrap(), 0);
    assert!(conventional_rate(&states::bell(), 0.0, Theory::Entanglement, 0).is_err());
    assert!(conventional_rate(&states::bell(), 0.0, Theory::Entanglement, 3).is_err());
}

#[test]
fn conventional_rate_means_unit_overhead() {
    for th in Theory::ALL {
        for p in [0.5, 0.9, 1.0] {
            let rho = th.noisy_state(p).unwrap();
            let m_max = th.default_m_max();
            let d = conventional_rate(&rho, 0.04, th, m_max).unwrap();
            let v = virtual_rate(&rho, 0.04, th, m_max).unwrap();
            for e in &v.per_m {
                assert_eq!(e.m <= d, (e.overhead - 1.0).abs() < 1e-6, "{th} p={p} m={}: {e:?}", e.m);
            }
            assert!(d as f64 <= v.rate + 1e-9);
        }
    }
}

#[test]
fn virtual_rate_examples() {
    let r = virtual_rate(&states::max_coherent(4), 0.0, Theory::Coherence, 3).unwrap();
    assert!(r.rate >= 1.0 - 1e-6 && r.m_star >= 1);
    let best = r.per_m.iter().map(|e| e.rate).fold(0.0, f64::max);
    assert!((r.rate - best).abs() <= 1e-9);

    let r = virtual_rate(&Theory::Coherence.noisy_state(0.5).unwrap(), 0.0, Theory::Coherence, 3).unwrap();
    assert_eq!(r.m_star, 2, "{:?}", r.per_m);
    let r = virtual_rate(&Theory::Coherence.noisy_state(0.1).unwrap(), 0.0, Theory::Coherence, 3).unwrap();
    assert_eq!(r.m_star, 1, "{:?}", r.per_m);

    let r = virtual_rate(&Theory::Entanglement.noisy_state(0.2).unwrap(), 0.0, Theory::Entanglement, 1).unwrap();
    assert_eq!(r.m_star, 1);
    assert!((r.rate - 1.0 / 9.0).abs() < 1e-6);
    let r = virtual_rate(&Theory::Magic.noisy_state(0.3).unwrap(), 0.0, Theory::Magic, 1).unwrap();
    assert!(r.rate > 0.0 && r.m_star == 1);
}

#[test]
fn virtual_rate_of_resourceless_coherence_is_zero() {
    let r = virtual_rate(&Theory::Coherence.noisy_state(0.0).unwrap(), 0.0, Theory::Coherence, 2).unwrap();
    assert_eq!(r.m_star, 0);
    assert_eq!(r.rate, 0.0);
}
