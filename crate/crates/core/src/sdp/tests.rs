use super::*;
use crate::qmath::ComplexMatrix;

fn solved(p: &SdpProblem) -> SdpSolution {
    let sol = solve(p, &SolverSettings::default()).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal, "{sol:?}");
    sol
}

#[test]
fn trace_above_identity_is_two() {
    let p = trace_above_identity();
    let sol = solved(&p);
    assert!((sol.primal_value - 2.0).abs() < 1e-8, "{}", sol.primal_value);
    let rep = verify_certificate(&p, &sol, &SolverSettings::default());
    assert!(rep.accepted, "{rep:?}");
    assert!(rep.primal_residual <= 1e-8 && rep.dual_residual <= 1e-8 && rep.gap <= 1e-8);
}

#[test]
fn diagonal_overlap_with_coherent_state() {
    let sol = solved(&coherent_overlap(4));
    assert!((sol.primal_value - 0.25).abs() < 1e-8);
}

#[test]
fn bell_overlap_over_ppt() {
    let p = bell_ppt();
    let sol = solved(&p);
    assert!((sol.primal_value - 0.5).abs() < 1e-8, "{}", sol.primal_value);
    assert!(verify_certificate(&p, &sol, &SolverSettings::default()).accepted);
}

#[test]
fn perturbed_certificate_is_flagged() {
    let p = trace_above_identity();
    let mut sol = solved(&p);
    sol.primal_blocks[0][(0, 0)] += crate::qmath::C64::new(1e-3, 0.0);
    let rep = verify_certificate(&p, &sol, &SolverSettings::default());
    assert!(rep.primal_residual > 1e-4);
    assert!(!rep.accepted);
}

#[test]
fn weak_duality_and_determinism() {
    for p in [trace_above_identity(), bell_ppt(), coherent_overlap(3)] {
        let a = solved(&p);
        let b = solved(&p);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.primal_value.to_bits(), b.primal_value.to_bits());
        match p.sense {
            Sense::Minimize => assert!(a.dual_value <= a.primal_value + 1e-8),
            Sense::Maximize => assert!(a.dual_value >= a.primal_value - 1e-8),
        }
    }
}

#[test]
fn objective_scaling() {
    let p = bell_ppt();
    let base = solved(&p).primal_value;
    let mut scaled = p.clone();
    scaled.objective = scaled.objective.iter().map(|o| o.scaled(3.5)).collect();
    assert!((solved(&scaled).primal_value - 3.5 * base).abs() < 1e-7);
}

#[test]
fn detects_infeasible() {
    // X psd 2x2 with tr X = -1
    let mut b = SdpBuilder::new(Sense::Minimize);
    let x = b.psd(2);
    b.set_objective(LinExpr::new().block(x, SparseHermitian::identity(2)));
    b.constrain(LinExpr::new().block(x, SparseHermitian::identity(2)), Relation::Eq, -1.0);
    let sol = solve(&b.build(), &SolverSettings::default()).unwrap();
    assert_eq!(sol.status, SdpStatus::Infeasible);
}

#[test]
fn detects_unbounded() {
    // minimize z over a free scalar z with z <= 1
    let mut b = SdpBuilder::new(Sense::Minimize);
    let z = b.free();
    b.set_objective(LinExpr::new().free(z, 1.0));
    b.constrain(LinExpr::new().free(z, 1.0), Relation::Le, 1.0);
    let sol = solve(&b.build(), &SolverSettings::default()).unwrap();
    assert_eq!(sol.status, SdpStatus::Unbounded);
}

#[test]
fn empty_row_presolve() {
    let mut b = SdpBuilder::new(Sense::Minimize);
    let x = b.psd(2);
    b.set_objective(LinExpr::new().block(x, SparseHermitian::identity(2)));
    b.constrain(LinExpr::new(), Relation::Eq, 1.0);
    assert_eq!(solve(&b.build(), &SolverSettings::default()).unwrap().status, SdpStatus::Infeasible);
}

#[test]
fn free_scalars_and_inequalities() {
    // maximize z  s.t.  z <= tr X / 2, X <= I  ->  1
    let mut b = SdpBuilder::new(Sense::Maximize);
    let x = b.psd(2);
    let s = b.psd(2);
    let z = b.free();
    b.set_objective(LinExpr::new().free(z, 1.0));
    b.constrain(
        LinExpr::new().free(z, 1.0).block(x, SparseHermitian::identity(2).scaled(-0.5)),
        Relation::Le,
        0.0,
    );
    b.matrix_equality(2, &[MatTerm::Block(x, 1.0), MatTerm::Block(s, 1.0)], &ComplexMatrix::identity(2));
    let p = b.build();
    let sol = solved(&p);
    assert!((sol.primal_value - 1.0).abs() < 1e-8);
    assert!((sol.scalars[0] - 1.0).abs() < 1e-7);
    assert!(verify_certificate(&p, &sol, &SolverSettings::default()).accepted);
}

#[test]
fn dump_round_trip() {
    for p in [trace_above_identity(), bell_ppt(), coherent_overlap(3)] {
        let text = dump_problem(&p);
        let back = parse_problem(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(dump_problem(&back), text);
    }
    assert!(parse_problem("sdp 2\n").is_err());
}

#[test]
fn reference_problems_hit_their_optimum() {
    for r in reference_problems() {
        let sol = solved(&r.problem);
        assert!((sol.primal_value - r.optimum).abs() < 1e-8, "{}: {}", r.name, sol.primal_value);
        assert!(verify_certificate(&r.problem, &sol, &SolverSettings::default()).accepted, "{}", r.name);
    }
}
