use std::collections::BTreeSet;

use fkdv::branch_solver::{solve, Assignment, BranchStatus, SolveConfig, SolveOutcome};
use fkdv::closedform::{catalog, compare_pointwise, sample_report, SamplePlan, SolutionId, Verdict, VerificationReport};
use fkdv::equation::EquationSpec;
use fkdv::exactpoly::{int, parse_rat, MPoly, Rat, Sym};
use fkdv::fixtures::{compare_pre, compare_tanh, Fixture};
use fkdv::pre_method::{derive_pre_system, PreEquation};
use fkdv::tanh_method::{balance_m, derive_system, ode_balance_terms, TanhEquation};

use crate::args::{
    BalanceArgs, Command, DeriveArgs, MethodArg, OutputArgs, Preset, SolveArgs, SpecArgs, VerifyArgs,
};
use crate::report::{
    pre_entries, tanh_entries, BalanceEntry, BalanceTermEntry, BranchEntry, Document, Manifest,
};
use crate::{exit, latex, reproduce, CliError, Ctx};

pub(crate) fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32, CliError> {
    match cmd {
        Command::Balance(a) => balance(a, ctx),
        Command::Derive(a) => derive(a, ctx),
        Command::Solve(a) => solve_cmd(a, ctx),
        Command::Verify(a) => verify(a, ctx),
        Command::Reproduce(a) => reproduce::run(a, ctx),
    }
}

pub(crate) fn build_spec(a: &SpecArgs) -> Result<EquationSpec, CliError> {
    if a.preset == Some(Preset::Ito) {
        return Ok(EquationSpec::ito());
    }
    let ito = EquationSpec::ito();
    let coef = |name: &str, v: &Option<String>, default: &Rat| -> Result<Rat, CliError> {
        match v {
            None => Ok(default.clone()),
            Some(s) => parse_rat(s).map_err(|e| CliError::usage(format!("--{name}: {e}"))),
        }
    };
    EquationSpec::new(
        coef("alpha", &a.alpha, &ito.alpha)?,
        coef("beta", &a.beta, &ito.beta)?,
        coef("gamma", &a.gamma, &ito.gamma)?,
        coef("omega", &a.omega, &ito.omega)?,
    )
    .map_err(|e| CliError::usage(e.to_string()))
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Tanh => "tanh",
        MethodArg::Pre => "pre",
    }
}

/// Emits the JSON document and LaTeX per the output flags.
pub(crate) fn emit(out: &OutputArgs, doc: &Document, tex: Option<String>, ctx: &mut Ctx) -> Result<(), CliError> {
    let dir = out.out_dir.as_deref();
    if let Some(path) = &out.json {
        ctx.write(dir, path, &doc.to_json())?;
    }
    if let (Some(path), Some(tex)) = (&out.latex, tex) {
        ctx.write(dir, path, &tex)?;
    }
    Ok(())
}

pub(crate) fn set_quiet(out: &OutputArgs, ctx: &mut Ctx) {
    let dash = |p: &Option<std::path::PathBuf>| p.as_deref().is_some_and(|p| p.as_os_str() == "-");
    ctx.quiet = dash(&out.json) || dash(&out.latex);
}

fn tanh_degree(spec: &EquationSpec, m: Option<u8>) -> Result<u8, CliError> {
    match m {
        Some(0) => Err(CliError::usage("ansatz degree must be at least 1")),
        Some(m) => Ok(m),
        None => {
            let m = balance_m(&ode_balance_terms(spec)).map_err(|e| CliError::usage(e.to_string()))?;
            u8::try_from(m).map_err(|_| CliError::usage(format!("balanced degree {m} is too large")))
        }
    }
}

fn pre_system(spec: &EquationSpec, m: Option<u8>) -> Result<(u8, Vec<PreEquation>), CliError> {
    let m = m.unwrap_or(1);
    let system = derive_pre_system(spec, m).map_err(|e| CliError::usage(e.to_string()))?;
    Ok((m, system))
}

fn balance(a: BalanceArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    set_quiet(&a.output, ctx);
    let spec = build_spec(&a.spec)?;
    let terms = ode_balance_terms(&spec);
    let result = balance_m(&terms);
    ctx.say(format!("equation: {spec}"));
    for t in &terms {
        ctx.say(format!("  {:<10} order {}", t.describe(), t.order()));
    }
    let entry = BalanceEntry {
        terms: terms
            .iter()
            .map(|t| BalanceTermEntry { term: t.describe(), order: t.order(), rendered: t.order().to_string() })
            .collect(),
        m: result.as_ref().ok().copied(),
        error: result.as_ref().err().map(ToString::to_string),
    };
    let mut doc = Document::new(Manifest::new("balance", &spec, "tanh", &a.output.timestamp));
    doc.balance = Some(entry);
    emit(&a.output, &doc, None, ctx)?;
    match result {
        Ok(m) => {
            ctx.say(format!("M = {m}"));
            Ok(exit::OK)
        }
        Err(e) => {
            ctx.warn(format!("error: {e}"));
            Ok(exit::USAGE)
        }
    }
}

fn derive(a: DeriveArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    set_quiet(&a.output, ctx);
    let spec = build_spec(&a.spec)?;
    let method = method_name(a.method);
    let mut doc = Document::new(Manifest::new("derive", &spec, method, &a.output.timestamp));
    let (tex, comparison) = match a.method {
        MethodArg::Tanh => {
            let m = tanh_degree(&spec, a.m)?;
            let system = derive_system(&spec, m);
            ctx.say(format!("tanh system, M = {m}: {} equations", system.len()));
            for (n, e) in system.iter().enumerate() {
                ctx.say(format!("  ({}) [phi^{}] {} = 0", n + 1, e.power, e.poly));
            }
            doc.systems = tanh_entries(&system);
            let cmp = if a.check_fixture {
                if !(spec.is_ito() && m == 2) {
                    return Err(CliError::usage("the shipped fixture covers only the Ito equation with M = 2"));
                }
                let fx = Fixture::tanh_ito().map_err(|e| CliError::internal(e.to_string()))?;
                Some(compare_tanh(&system, &fx))
            } else {
                None
            };
            (latex::tanh_system(&system), cmp)
        }
        MethodArg::Pre => {
            let (m, system) = pre_system(&spec, a.m)?;
            ctx.say(format!("projective Riccati system, m = {m}: {} equations", system.len()));
            for (n, e) in system.iter().enumerate() {
                ctx.say(format!(
                    "  ({}) [sigma^{} tau^{}, r^{}] {} = 0",
                    n + 1,
                    e.sigma_power,
                    e.tau_power,
                    e.r_power,
                    e.poly
                ));
            }
            doc.systems = pre_entries(&system);
            let cmp = if a.check_fixture {
                if !(spec.is_ito() && m == 1) {
                    return Err(CliError::usage("the shipped fixture covers only the Ito equation with m = 1"));
                }
                let fx = Fixture::pre_ito().map_err(|e| CliError::internal(e.to_string()))?;
                Some(compare_pre(&system, &fx))
            } else {
                None
            };
            (latex::pre_system(&system), cmp)
        }
    };
    emit(&a.output, &doc, Some(tex), ctx)?;
    match comparison {
        Some(c) if !c.is_match() => {
            ctx.warn("fixture mismatch:");
            ctx.warn(c.diff_text());
            Ok(exit::FIXTURE_MISMATCH)
        }
        Some(c) => {
            ctx.say(format!("fixture: all {} equations match", c.matched));
            Ok(exit::OK)
        }
        None => Ok(exit::OK),
    }
}

pub(crate) struct SolveRun {
    pub presets: Assignment,
    pub system: Vec<MPoly>,
    pub outcome: SolveOutcome,
}

impl SolveRun {
    pub fn entries(&self, method: &'static str) -> Vec<BranchEntry> {
        self.outcome
            .branches
            .iter()
            .map(|b| {
                let verified = b.status.is_solved().then(|| {
                    let mut bind = self.presets.as_polys();
                    bind.extend(b.assignment.as_polys());
                    bind.extend(b.relations.clone());
                    self.system.iter().all(|p| p.substitute(&bind).is_zero())
                });
                BranchEntry::new(method, &self.presets, b, verified)
            })
            .collect()
    }

    pub fn solved(&self) -> impl Iterator<Item = &Assignment> {
        self.outcome.branches.iter().filter(|b| b.status == BranchStatus::Solved).map(|b| &b.assignment)
    }
}

fn run_solver(system: Vec<MPoly>, unknowns: Vec<Sym>, presets: Assignment, budget: usize, nonzero_r: bool)
    -> Result<SolveRun, CliError> {
    let mut cfg = SolveConfig::new(unknowns, presets.clone()).budget(budget);
    if nonzero_r {
        cfg = cfg.nonzero(Sym::R);
    }
    let outcome = solve(&system, &cfg).map_err(|e| CliError::internal(e.to_string()))?;
    Ok(SolveRun { presets, system, outcome })
}

pub(crate) fn solve_tanh(spec: &EquationSpec, m: Option<u8>, lambda: &Rat, budget: usize) -> Result<SolveRun, CliError> {
    let m = tanh_degree(spec, m)?;
    let system: Vec<MPoly> = derive_system(spec, m).into_iter().map(|e: TanhEquation| e.poly).collect();
    let mut unknowns: Vec<Sym> = (0..=m).rev().map(Sym::A).collect();
    unknowns.push(Sym::K);
    run_solver(system, unknowns, Assignment::new().with(Sym::Lambda, lambda.clone()), budget, false)
}

pub(crate) fn solve_pre(
    spec: &EquationSpec,
    m: Option<u8>,
    lambda: &Rat,
    e: i64,
    rho: i64,
    budget: usize,
) -> Result<SolveRun, CliError> {
    let (_, system) = pre_system(spec, m)?;
    let system: Vec<MPoly> = system.into_iter().map(|e| e.poly).collect();
    let fixed = [Sym::Lambda, Sym::E, Sym::Rho];
    let unknowns: Vec<Sym> = system
        .iter()
        .flat_map(MPoly::symbols)
        .filter(|s| !fixed.contains(s))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let presets = Assignment::new().with(Sym::Lambda, lambda.clone()).with(Sym::E, int(e)).with(Sym::Rho, int(rho));
    run_solver(system, unknowns, presets, budget, true)
}

fn sign(name: &str, v: Option<i64>) -> Result<Vec<i64>, CliError> {
    match v {
        None => Ok(vec![-1, 1]),
        Some(s @ (1 | -1)) => Ok(vec![s]),
        Some(s) => Err(CliError::usage(format!("--{name} must be 1 or -1, got {s}"))),
    }
}

fn solve_cmd(a: SolveArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    set_quiet(&a.output, ctx);
    let spec = build_spec(&a.spec)?;
    let lambda = parse_rat(&a.lambda).map_err(|e| CliError::usage(format!("--lambda: {e}")))?;
    let method = method_name(a.method);
    let mut manifest = Manifest::new("solve", &spec, method, &a.output.timestamp);
    manifest.lambdas = vec![lambda.to_string()];
    let mut doc = Document::new(manifest);
    let runs = match a.method {
        MethodArg::Tanh => {
            if a.e.is_some() || a.rho.is_some() {
                return Err(CliError::usage("--e and --rho apply only to --method pre"));
            }
            vec![solve_tanh(&spec, a.m, &lambda, a.budget)?]
        }
        MethodArg::Pre => {
            let mut runs = Vec::new();
            for e in sign("e", a.e)? {
                for rho in sign("rho", a.rho)? {
                    runs.push(solve_pre(&spec, a.m, &lambda, e, rho, a.budget)?);
                }
            }
            runs
        }
    };
    for run in &runs {
        ctx.say(format!(
            "presets {}: {} leaves, {} nodes explored",
            run.presets, run.outcome.leaves, run.outcome.nodes_explored
        ));
        for entry in run.entries(method) {
            let detail = entry.detail.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default();
            let relations = if entry.relations.is_empty() {
                String::new()
            } else {
                format!(" with {:?}", entry.relations)
            };
            ctx.say(format!(
                "  {}{} {}{}  via {}",
                entry.status,
                detail,
                entry.bindings,
                relations,
                if entry.path.is_empty() { "-".to_string() } else { entry.path.join("; ") }
            ));
            doc.branches.push(entry);
        }
    }
    if doc.branches.iter().any(|b| b.verified == Some(false)) {
        return Err(CliError::internal("a solved branch failed re-verification"));
    }
    emit(&a.output, &doc, None, ctx)?;
    Ok(exit::OK)
}

pub(crate) fn verdict_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let v: Vec<Verdict> = verdicts.into_iter().collect();
    if v.contains(&Verdict::Inconclusive) {
        exit::INCONCLUSIVE
    } else if v.contains(&Verdict::Fail) {
        exit::FAILED
    } else {
        exit::OK
    }
}

fn verify(a: VerifyArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    set_quiet(&a.output, ctx);
    let ids: Vec<SolutionId> = if a.all { SolutionId::all().collect() } else { a.ids.clone() };
    if let Some(l) = a.lambda.iter().find(|l| l.is_nan() || **l >= 0.0) {
        return Err(CliError::usage(format!("verification needs lambda < 0, got {l}")));
    }
    if a.samples < fkdv::closedform::MIN_ACCEPTED {
        return Err(CliError::usage(format!("--samples must be at least {}", fkdv::closedform::MIN_ACCEPTED)));
    }
    if a.z_half_width.is_nan() || a.z_half_width <= 0.0 {
        return Err(CliError::usage("--z-half-width must be positive"));
    }
    let plan = SamplePlan { samples: a.samples, seed: a.seed, z_half_width: a.z_half_width, ..SamplePlan::default() };
    let mut manifest = Manifest::new("verify", &EquationSpec::ito(), "closed-form", &a.output.timestamp);
    manifest.lambdas = a.lambda.iter().map(|l| l.to_string()).collect();
    manifest.seed = Some(a.seed);
    let mut doc = Document::new(manifest);
    let code = if a.compare {
        let [left, right] = ids.as_slice() else {
            return Err(CliError::usage("--compare takes exactly two solution ids"));
        };
        for &lambda in &a.lambda {
            let rep = compare_pointwise(*left, *right, lambda, &plan).map_err(|e| CliError::usage(e.to_string()))?;
            let relation = match rep.verdict {
                Verdict::Pass => "agree pointwise",
                Verdict::Fail => "differ",
                Verdict::Inconclusive => "could not be compared",
            };
            ctx.say(format!(
                "{left} and {right} {relation} at lambda = {lambda}: max relative difference {:.3e} over {} samples (tolerance {:e})",
                rep.max_relative_difference,
                rep.samples.len(),
                rep.tolerance
            ));
            doc.comparisons.push(rep);
        }
        verdict_code(doc.comparisons.iter().map(|c| c.verdict))
    } else {
        ctx.say(VerificationReport::table_header());
        for &lambda in &a.lambda {
            for &id in &ids {
                let rep = sample_report(id, lambda, &plan).map_err(|e| CliError::usage(e.to_string()))?;
                ctx.say(rep.table_row());
                doc.reports.push(rep);
            }
        }
        verdict_code(doc.reports.iter().map(|r| r.verdict))
    };
    emit(&a.output, &doc, Some(latex::solutions(&catalog())), ctx)?;
    Ok(code)
}
