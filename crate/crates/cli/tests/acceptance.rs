//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use fkdv::branch_solver::{
    rational_lambda_grid, solve, verify_assignment, Assignment, BranchStatus, SolveConfig, SolveOutcome,
};
use fkdv::closedform::{
    catalog, compare_pointwise, sample_report, Method, SamplePlan, SolutionId, Verdict, IDENTITY_TOLERANCE,
    MIN_ACCEPTED, RESIDUAL_TOLERANCE,
};
use fkdv::equation::EquationSpec;
use fkdv::exactpoly::{frac, int, MPoly, Rat, Sym};
use fkdv::fixtures::{compare_pre, compare_tanh, Fixture};
use fkdv::pre_method::derive_pre_system;
use fkdv::selfcheck;
use fkdv::tanh_method::{balance_m, derive_system, ode_balance_terms};

const SEED: u64 = 7;
const SOLVER_LIMIT: Duration = Duration::from_secs(10);
const SUITE_LIMIT: Duration = Duration::from_secs(60);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tanh_system() -> Vec<MPoly> {
    derive_system(&EquationSpec::ito(), 2).into_iter().map(|e| e.poly).collect()
}

fn pre_system() -> Vec<MPoly> {
    derive_pre_system(&EquationSpec::ito(), 1).unwrap().into_iter().map(|e| e.poly).collect()
}

fn cli(args: &[&str]) -> fkdv_cli::Outcome {
    fkdv_cli::run(std::iter::once("fkdv").chain(args.iter().copied()))
}

fn criterion_1() -> Check {
    let m = balance_m(&ode_balance_terms(&EquationSpec::ito()));
    let out = cli(&["balance", "--preset", "ito"]);
    ensure(m == Ok(2) && out.code == 0 && out.stdout.contains("M = 2"), format!("balance gives {m:?}"))
}

fn criterion_2() -> Check {
    let derived = derive_system(&EquationSpec::ito(), 2);
    let cmp = compare_tanh(&derived, &Fixture::tanh_ito().map_err(|e| e.to_string())?);
    let out = cli(&["derive", "--method", "tanh", "--preset", "ito", "--check-fixture"]);
    ensure(
        cmp.is_match() && cmp.set_equal && derived.len() == 8 && out.code == 0,
        format!("{} of 8 normalized equations equal{}", cmp.matched, cmp.diff_text()),
    )
}

fn criterion_3() -> Check {
    let derived = derive_pre_system(&EquationSpec::ito(), 1).map_err(|e| e.to_string())?;
    let cmp = compare_pre(&derived, &Fixture::pre_ito().map_err(|e| e.to_string())?);
    let out = cli(&["derive", "--method", "pre", "--preset", "ito", "--m", "1", "--check-fixture"]);
    ensure(
        cmp.is_match() && cmp.set_equal && derived.len() == 13 && out.code == 0,
        format!("{} of 13 equations equal up to rational multiples and powers of r{}", cmp.matched, cmp.diff_text()),
    )
}

fn criterion_4() -> Check {
    let (tanh, pre) = (tanh_system(), pre_system());
    let grid = rational_lambda_grid(3);
    if grid != [int(-6), int(-96), int(-486)] {
        return Err(format!("unexpected grid {grid:?}"));
    }
    let mut failures = Vec::new();
    let mut count = 0;
    for (m, lambda) in (1i64..).zip(&grid) {
        for rec in catalog() {
            let asg = rec.specialize(m);
            let system = match rec.method {
                Method::Tanh => &tanh,
                Method::Pre => {
                    if asg.get(Sym::E) != Some(&int(1)) || asg.get(Sym::Rho) != Some(&int(-1)) {
                        failures.push(format!("{} does not use e = 1, rho = -1", rec.id));
                    }
                    &pre
                }
            };
            count += 1;
            if !verify_assignment(system, &asg).map_err(|e| e.to_string())?.ok {
                failures.push(format!("{} at lambda = {lambda}", rec.id));
            }
        }
    }
    ensure(failures.is_empty(), format!("{count} specialized tuples annihilate their systems; failures {failures:?}"))
}

fn timed_solve(system: &[MPoly], cfg: &SolveConfig) -> Result<(SolveOutcome, Duration), String> {
    let start = Instant::now();
    let out = solve(system, cfg).map_err(|e| e.to_string())?;
    Ok((out, start.elapsed()))
}

fn solved_set(out: &SolveOutcome) -> BTreeSet<Assignment> {
    out.branches.iter().filter(|b| b.status == BranchStatus::Solved).map(|b| b.assignment.clone()).collect()
}

fn tuple(syms: &[Sym], vals: &[Rat]) -> Assignment {
    syms.iter().copied().zip(vals.iter().cloned()).collect()
}

fn criterion_5() -> Check {
    let tanh_cfg = SolveConfig::new(
        vec![Sym::A(2), Sym::A(1), Sym::A(0), Sym::K],
        Assignment::new().with(Sym::Lambda, int(-6)),
    );
    let (t, t_time) = timed_solve(&tanh_system(), &tanh_cfg)?;
    let tk = [Sym::A(0), Sym::A(1), Sym::A(2), Sym::K];
    let want_t = [
        tuple(&tk, &[int(-5), int(0), int(-30), frac(1, 4)]),
        tuple(&tk, &[int(5), int(0), int(-30), frac(-1, 4)]),
    ];
    let got_t = solved_set(&t);
    let free = t.branches.iter().any(|b| {
        matches!(b.status, BranchStatus::SolvedWithFreeSymbols(_))
            && b.assignment.get(Sym::A(1)) == Some(&int(0))
            && b.assignment.get(Sym::A(2)) == Some(&int(0))
    });
    let contra = t.branches.iter().any(|b| matches!(b.status, BranchStatus::Contradiction(_)) && b.rooted_at("a2 = -6"));

    let pre_cfg = SolveConfig::new(
        vec![Sym::A(0), Sym::A(1), Sym::B(1), Sym::Mu, Sym::R],
        Assignment::new().with(Sym::Lambda, int(-6)).with(Sym::E, int(1)).with(Sym::Rho, int(-1)),
    )
    .nonzero(Sym::R);
    let (p, p_time) = timed_solve(&pre_system(), &pre_cfg)?;
    let pk = [Sym::A(0), Sym::A(1), Sym::B(1), Sym::Mu, Sym::R];
    let h = frac(5, 2);
    let want_p = [
        tuple(&pk, &[h.clone(), int(15), int(0), int(-1), int(1)]),
        tuple(&pk, &[h.clone(), int(-15), int(0), int(1), int(1)]),
        tuple(&pk, &[-h.clone(), int(-15), int(0), int(1), int(-1)]),
        tuple(&pk, &[-h, int(15), int(0), int(-1), int(-1)]),
    ];
    let got_p = solved_set(&p);
    let ok = want_t.iter().all(|w| got_t.contains(w))
        && free
        && contra
        && want_p.iter().all(|w| got_p.contains(w))
        && t_time < SOLVER_LIMIT
        && p_time < SOLVER_LIMIT;
    ensure(
        ok,
        format!(
            "tanh {} solved + free {free} + contradiction via a2 = -6 {contra} in {t_time:.2?}; pre {} solved in {p_time:.2?}",
            got_t.len(),
            got_p.len()
        ),
    )
}

fn criterion_6() -> Check {
    let plan = SamplePlan::with_seed(SEED);
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for lambda in [-6.0, -2.5] {
        for id in SolutionId::all() {
            let r = sample_report(id, lambda, &plan).map_err(|e| e.to_string())?;
            worst = worst.max(r.max_relative_residual);
            if r.verdict != Verdict::Pass || r.samples.len() < MIN_ACCEPTED || r.max_relative_residual > RESIDUAL_TOLERANCE {
                bad.push(format!("{id}@{lambda}: {} ({} samples)", r.verdict, r.samples.len()));
            }
        }
    }
    ensure(bad.is_empty(), format!("20 reports, worst relative residual {worst:.2e} (tolerance 1e-6) {bad:?}"))
}

fn criterion_7() -> Check {
    let plan = SamplePlan::with_seed(SEED);
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (l, r) in [(7, 1), (8, 2), (9, 3), (10, 4)] {
        let (l, r) = (SolutionId::new(l).unwrap(), SolutionId::new(r).unwrap());
        let c = compare_pointwise(l, r, -6.0, &plan).map_err(|e| e.to_string())?;
        worst = worst.max(c.max_relative_difference);
        if c.verdict != Verdict::Pass || c.samples.len() < 20 || c.max_relative_difference > IDENTITY_TOLERANCE {
            bad.push(format!("{l} vs {r}: {}", c.verdict));
        }
    }
    ensure(bad.is_empty(), format!("u7=u1, u8=u2, u9=u3, u10=u4; worst relative difference {worst:.2e} {bad:?}"))
}

fn checks(list: &[selfcheck::CheckOutcome]) -> Check {
    let text = list
        .iter()
        .map(|c| format!("{} {}/{}", c.name, c.cases - c.failures.len(), c.cases))
        .collect::<Vec<_>>()
        .join(", ");
    let failures: Vec<&String> = list.iter().flat_map(|c| &c.failures).take(3).collect();
    ensure(list.iter().all(|c| c.ok()), format!("{text} {failures:?}"))
}

fn criterion_8() -> Check {
    checks(&[selfcheck::riccati_forms(SEED, 500), selfcheck::projective_forms(SEED, 500)])
}

fn criterion_9() -> Check {
    let mut list = vec![
        selfcheck::leibniz_phi(SEED, 100),
        selfcheck::leibniz_st(SEED, 100),
        selfcheck::substitution_homomorphism(SEED, 200),
        selfcheck::roots_against_grid(SEED, 200),
    ];
    // Solver soundness: every solved branch on the grid re-verifies exactly.
    let mut sound = 0;
    let mut unsound = Vec::new();
    for lambda in rational_lambda_grid(3) {
        let runs = [
            (tanh_system(), SolveConfig::new(vec![Sym::A(2), Sym::A(1), Sym::A(0), Sym::K], Assignment::new().with(Sym::Lambda, lambda.clone()))),
            (
                pre_system(),
                SolveConfig::new(
                    vec![Sym::A(0), Sym::A(1), Sym::B(1), Sym::Mu, Sym::R],
                    Assignment::new().with(Sym::Lambda, lambda.clone()).with(Sym::E, int(1)).with(Sym::Rho, int(-1)),
                )
                .nonzero(Sym::R),
            ),
        ];
        for (system, cfg) in runs {
            let out = solve(&system, &cfg).map_err(|e| e.to_string())?;
            for b in out.branches.iter().filter(|b| b.status == BranchStatus::Solved) {
                let mut full = b.assignment.clone();
                full.extend(&cfg.presets);
                if verify_assignment(&system, &full).map_err(|e| e.to_string())?.ok {
                    sound += 1;
                } else {
                    unsound.push(full.to_string());
                }
            }
        }
    }
    let mut soundness = selfcheck::CheckOutcome { name: "solver_soundness", cases: sound + unsound.len(), failures: unsound };
    if soundness.cases == 0 {
        soundness.failures.push("no solved branches".into());
    }
    list.push(soundness);
    checks(&list)
}

fn criterion_10() -> Check {
    let exe = env!("CARGO_BIN_EXE_fkdv");
    let once = || Command::new(exe).args(["reproduce", "--seed", "7", "--json", "-"]).output();
    let (a, b) = (once().map_err(|e| e.to_string())?, once().map_err(|e| e.to_string())?);
    let parsed: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    let all_ok = parsed["criteria"].as_array().is_some_and(|c| c.iter().all(|c| c["ok"] == true));
    ensure(
        a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty() && all_ok,
        format!("two runs, {} bytes each, identical: {}", a.stdout.len(), a.stdout == b.stdout),
    )
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("balancing gives M = 2 for the Ito preset", criterion_1),
        ("tanh system equals the printed system", criterion_2),
        ("projective Riccati system equals the printed system", criterion_3),
        ("published tuples annihilate both systems on the lambda grid", criterion_4),
        ("solver reproduces the published branches at lambda = -6", criterion_5),
        ("all ten solutions pass residual sampling", criterion_6),
        ("cross-method identities hold pointwise", criterion_7),
        ("auxiliary equation forms satisfy their ODEs", criterion_8),
        ("algebraic property suites", criterion_9),
        ("reproduce output is byte-stable", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if result.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {tag}: {name} [{:.2?}] {}", n + 1, t.elapsed(), detail.trim());
    }
    let total = start.elapsed();
    let within = total < SUITE_LIMIT;
    println!("acceptance: {} of 10 criteria pass; total runtime {total:.2?} (limit 60s: {})", 10 - failed, if within { "ok" } else { "exceeded" });
    if failed > 0 || !within {
        std::process::exit(1);
    }
}
