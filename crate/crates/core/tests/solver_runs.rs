use std::time::Instant;

use fkdv::branch_solver::{solve, Assignment, BranchStatus, SolveConfig, SolveOutcome};
use fkdv::equation::EquationSpec;
use fkdv::exactpoly::{frac, int, MPoly, Rat, Sym};
use fkdv::pre_method::{build_pre_ansatz, extract_pre_system, pre_ode_residual, PreAnsatzSpec};
use fkdv::tanh_method::{build_ansatz, extract_system, ode_residual};

fn tanh_system() -> Vec<MPoly> {
    extract_system(&ode_residual(&EquationSpec::ito(), &build_ansatz(2)))
        .into_iter()
        .map(|e| e.poly)
        .collect()
}

fn pre_system() -> Vec<MPoly> {
    let v = build_pre_ansatz(PreAnsatzSpec::new(1).unwrap());
    extract_pre_system(&pre_ode_residual(&EquationSpec::ito(), &v))
        .into_iter()
        .map(|e| e.poly)
        .collect()
}

fn run_tanh(lambda: Rat) -> SolveOutcome {
    let cfg = SolveConfig::new(
        vec![Sym::A(2), Sym::A(1), Sym::A(0), Sym::K],
        Assignment::new().with(Sym::Lambda, lambda),
    );
    solve(&tanh_system(), &cfg).unwrap()
}

fn run_pre(lambda: Rat, e: i64, rho: i64) -> SolveOutcome {
    let cfg = SolveConfig::new(
        vec![Sym::A(0), Sym::A(1), Sym::B(1), Sym::Mu, Sym::R],
        Assignment::new()
            .with(Sym::Lambda, lambda)
            .with(Sym::E, int(e))
            .with(Sym::Rho, int(rho)),
    )
    .nonzero(Sym::R);
    solve(&pre_system(), &cfg).unwrap()
}

fn solved(out: &SolveOutcome) -> Vec<&Assignment> {
    out.branches
        .iter()
        .filter(|b| b.status == BranchStatus::Solved)
        .map(|b| &b.assignment)
        .collect()
}

#[test]
fn tanh_branches_at_lambda_minus_six() {
    let start = Instant::now();
    let out = run_tanh(int(-6));
    for b in &out.branches {
        println!("{} {} {:?}", b.status, b.assignment, b.path);
    }
    let sol = |a0: i64, k: Rat| {
        Assignment::new()
            .with(Sym::A(0), int(a0))
            .with(Sym::A(1), int(0))
            .with(Sym::A(2), int(-30))
            .with(Sym::K, k)
    };
    let found = solved(&out);
    assert!(found.contains(&&sol(-5, frac(1, 4))));
    assert!(found.contains(&&sol(5, frac(-1, 4))));
    assert!(out.branches.iter().any(|b| b.rooted_at("a2 = -6")
        && matches!(b.status, BranchStatus::Contradiction(_))));
    assert!(out.branches.iter().any(|b| {
        b.status == BranchStatus::SolvedWithFreeSymbols(vec![Sym::A(0), Sym::K])
            && b.assignment == Assignment::new().with(Sym::A(1), int(0)).with(Sym::A(2), int(0))
    }));
    assert_eq!(out.leaves, out.branches.len());
    assert!(start.elapsed().as_secs() < 10);
}

#[test]
fn pre_branches_at_lambda_minus_six() {
    let start = Instant::now();
    let out = run_pre(int(-6), 1, -1);
    for b in &out.branches {
        println!("{} {} {:?}", b.status, b.assignment, b.path);
    }
    println!("explored {}", out.nodes_explored);
    let sol = |a0: Rat, a1: i64, mu: i64, r: i64| {
        Assignment::new()
            .with(Sym::A(0), a0)
            .with(Sym::A(1), int(a1))
            .with(Sym::B(1), int(0))
            .with(Sym::Mu, int(mu))
            .with(Sym::R, int(r))
    };
    let found = solved(&out);
    for want in [
        sol(frac(5, 2), 15, -1, 1),
        sol(frac(5, 2), -15, 1, 1),
        sol(frac(-5, 2), -15, 1, -1),
        sol(frac(-5, 2), 15, -1, -1),
    ] {
        assert!(found.contains(&&want), "missing {want}");
    }
    assert!(start.elapsed().as_secs() < 10);
}
