//! Rational solving of the extracted systems by substitution and case
//! splitting.
//!
//! Each node of the search substitutes its decisions, drops vanished
//! equations and then takes the first applicable step:
//!
//! 1. a nonzero constant closes the branch as a contradiction;
//! 2. the lowest-degree univariate equation (ties: fewer terms, then symbol
//!    order) branches on its rational roots;
//! 3. an equation linear in some unknown with a constant coefficient
//!    eliminates that unknown;
//! 4. an equation with a monomial factor splits into "a factor variable is
//!    zero" cases and the cofactor case;
//! 5. otherwise the branch is stuck.
//!
//! Every leaf is reported; nothing is discarded silently.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{as_univariate, int, rational_roots, MPoly, Rat, Sym};

/// Rational values for symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub BTreeMap<Sym, Rat>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, s: Sym, v: Rat) -> Self {
        self.0.insert(s, v);
        self
    }

    pub fn get(&self, s: Sym) -> Option<&Rat> {
        self.0.get(&s)
    }

    pub fn extend(&mut self, other: &Assignment) {
        self.0.extend(other.0.iter().map(|(k, v)| (*k, v.clone())));
    }

    pub fn as_polys(&self) -> BTreeMap<Sym, MPoly> {
        self.0.iter().map(|(s, v)| (*s, MPoly::constant(v.clone()))).collect()
    }
}

impl FromIterator<(Sym, Rat)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Sym, Rat)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (s, v)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}: {v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (s, v) in &self.0 {
            map.serialize_entry(&s.name(), &v.to_string())?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchStatus {
    Solved,
    SolvedWithFreeSymbols(Vec<Sym>),
    Contradiction(MPoly),
    Stuck(MPoly),
}

impl BranchStatus {
    fn rank(&self) -> u8 {
        match self {
            BranchStatus::Solved => 0,
            BranchStatus::SolvedWithFreeSymbols(_) => 1,
            BranchStatus::Contradiction(_) => 2,
            BranchStatus::Stuck(_) => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BranchStatus::Solved => "solved",
            BranchStatus::SolvedWithFreeSymbols(_) => "solved_with_free_symbols",
            BranchStatus::Contradiction(_) => "contradiction",
            BranchStatus::Stuck(_) => "stuck",
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, BranchStatus::Solved | BranchStatus::SolvedWithFreeSymbols(_))
    }
}

impl fmt::Display for BranchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchStatus::Solved => f.write_str("solved"),
            BranchStatus::SolvedWithFreeSymbols(free) => {
                let names: Vec<String> = free.iter().map(Sym::name).collect();
                write!(f, "solved_with_free_symbols([{}])", names.join(", "))
            }
            BranchStatus::Contradiction(w) => write!(f, "contradiction({w})"),
            BranchStatus::Stuck(w) => write!(f, "stuck({w})"),
        }
    }
}

/// One leaf of the case tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    /// Unknowns fixed to rational values (presets excluded).
    pub assignment: Assignment,
    /// Unknowns expressed through free unknowns.
    pub relations: BTreeMap<Sym, MPoly>,
    pub remaining: Vec<MPoly>,
    pub status: BranchStatus,
    /// Decisions taken from the root, e.g. `a2 = -6`.
    pub path: Vec<String>,
}

impl Branch {
    fn sort_key(&self) -> (u8, String, String, String) {
        (
            self.status.rank(),
            self.assignment.to_string(),
            self.status.to_string(),
            self.path.join("; "),
        )
    }

    /// Whether the decision trail starts with `decision`.
    pub fn rooted_at(&self, decision: &str) -> bool {
        self.path.first().map(String::as_str) == Some(decision)
    }
}

impl Ord for Branch {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Branch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub unknowns: Vec<Sym>,
    pub presets: Assignment,
    /// Unknowns excluded from the value zero.
    pub nonzero: BTreeSet<Sym>,
    pub branch_budget: usize,
}

impl SolveConfig {
    pub const DEFAULT_BUDGET: usize = 10_000;

    pub fn new(unknowns: Vec<Sym>, presets: Assignment) -> Self {
        SolveConfig {
            unknowns,
            presets,
            nonzero: BTreeSet::new(),
            branch_budget: Self::DEFAULT_BUDGET,
        }
    }

    pub fn nonzero(mut self, s: Sym) -> Self {
        self.nonzero.insert(s);
        self
    }

    pub fn budget(mut self, n: usize) -> Self {
        self.branch_budget = n;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("the system is empty")]
    EmptySystem,
    #[error("symbol {0} is both preset and unknown")]
    PresetIsUnknown(Sym),
    #[error("symbol {0} is neither an unknown nor preset")]
    Unbound(Sym),
    #[error("solved branch {0} does not annihilate the system")]
    Unsound(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    /// Canonically sorted leaves.
    pub branches: Vec<Branch>,
    pub nodes_explored: usize,
    pub leaves: usize,
}

impl SolveOutcome {
    pub fn count(&self, pred: impl Fn(&BranchStatus) -> bool) -> usize {
        self.branches.iter().filter(|b| pred(&b.status)).count()
    }
}

#[derive(Clone)]
struct Node {
    bindings: BTreeMap<Sym, MPoly>,
    system: Vec<MPoly>,
    nonzero: BTreeSet<Sym>,
    path: Vec<String>,
}

impl Node {
    fn bind(&self, s: Sym, value: MPoly, decision: String) -> Node {
        let b = BTreeMap::from([(s, value.clone())]);
        let mut bindings: BTreeMap<Sym, MPoly> =
            self.bindings.iter().map(|(k, v)| (*k, v.substitute(&b))).collect();
        bindings.insert(s, value);
        let mut path = self.path.clone();
        path.push(decision);
        Node {
            bindings,
            system: self.system.iter().map(|p| p.substitute(&b)).collect(),
            nonzero: self.nonzero.clone(),
            path,
        }
    }
}

/// Polynomial tie order: degree, then term count, then rendering.
fn poly_key(p: &MPoly) -> (u32, usize, String) {
    (p.total_degree(), p.len(), p.to_string())
}

/// Drops zero equations, strips powers of nonzero symbols and merges
/// equations equal up to a rational factor.
fn tidy(system: &[MPoly], nonzero: &BTreeSet<Sym>) -> Vec<MPoly> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in system {
        if p.is_zero() {
            continue;
        }
        let mut q = p.clone();
        for &s in nonzero {
            q = q.strip_power(s).0;
        }
        if seen.insert(q.normalize().to_string()) {
            out.push(q);
        }
    }
    out
}

enum Step {
    Leaf(BranchStatus, Vec<MPoly>),
    Children(Vec<Node>),
}

fn step(node: &mut Node, unknowns: &[Sym]) -> Step {
    for (s, v) in &node.bindings {
        if node.nonzero.contains(s) && v.is_zero() {
            return Step::Leaf(BranchStatus::Contradiction(MPoly::var(*s)), node.system.clone());
        }
    }
    node.system = tidy(&node.system, &node.nonzero);
    if let Some(c) = node.system.iter().find(|p| p.is_constant()) {
        return Step::Leaf(BranchStatus::Contradiction(c.clone()), node.system.clone());
    }
    if node.system.is_empty() {
        let mut free: Vec<Sym> = unknowns
            .iter()
            .copied()
            .filter(|s| !node.bindings.get(s).is_some_and(MPoly::is_constant))
            .filter(|s| !node.bindings.contains_key(s))
            .collect();
        free.sort();
        let status = if free.is_empty() {
            BranchStatus::Solved
        } else {
            BranchStatus::SolvedWithFreeSymbols(free)
        };
        return Step::Leaf(status, Vec::new());
    }

    let univariate = node
        .system
        .iter()
        .filter_map(|p| {
            let syms = p.symbols();
            (syms.len() == 1).then(|| (*syms.iter().next().unwrap(), p))
        })
        .min_by(|(s, p), (t, q)| poly_key(p).cmp(&poly_key(q)).then(s.cmp(t)));
    if let Some((x, p)) = univariate {
        let coeffs = as_univariate(p, x).expect("single symbol");
        let roots = rational_roots(&coeffs).expect("nonzero after tidy");
        if roots.is_empty() {
            return Step::Leaf(BranchStatus::Stuck(p.clone()), node.system.clone());
        }
        let children = roots
            .into_iter()
            .map(|root| node.bind(x, MPoly::constant(root.clone()), format!("{x} = {root}")))
            .collect();
        return Step::Children(children);
    }

    let linear = node
        .system
        .iter()
        .flat_map(|p| {
            p.symbols().into_iter().filter_map(move |s| {
                let c = p.coefficients_in(s);
                (c.len() == 2 && c[1].is_constant()).then_some((p, s, c))
            })
        })
        .min_by(|(p, s, _), (q, t, _)| poly_key(p).cmp(&poly_key(q)).then(s.cmp(t)));
    if let Some((_, x, c)) = linear {
        let lead = c[1].as_constant().expect("constant coefficient");
        let value = c[0].scale(&(-lead.recip()));
        let decision = format!("{x} = {value}");
        return Step::Children(vec![node.bind(x, value, decision)]);
    }

    let factored = node
        .system
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.monomial_content().is_one())
        .min_by(|(_, p), (_, q)| poly_key(p).cmp(&poly_key(q)));
    if let Some((idx, p)) = factored {
        let m = p.monomial_content();
        let vars: Vec<Sym> = m.factors().iter().map(|&(s, _)| s).collect();
        let mut children = Vec::new();
        for (n, &x) in vars.iter().enumerate() {
            let mut child = node.bind(x, MPoly::zero(), format!("{x} = 0"));
            child.nonzero.extend(vars[..n].iter().copied());
            children.push(child);
        }
        let mut rest = node.clone();
        rest.system[idx] = p.div_mono(&m).expect("monomial content divides");
        rest.nonzero.extend(vars.iter().copied());
        let names: Vec<String> = vars.iter().map(|s| format!("{s} != 0")).collect();
        rest.path.push(names.join(", "));
        children.push(rest);
        return Step::Children(children);
    }

    let witness = node
        .system
        .iter()
        .min_by(|p, q| poly_key(p).cmp(&poly_key(q)))
        .cloned()
        .expect("nonempty system");
    Step::Leaf(BranchStatus::Stuck(witness), node.system.clone())
}

fn annihilates(system: &[MPoly], bind: &BTreeMap<Sym, MPoly>) -> Option<MPoly> {
    system.iter().map(|p| p.substitute(bind)).find(|q| !q.is_zero())
}

/// Solves `system` for `cfg.unknowns` with `cfg.presets` substituted.
pub fn solve(system: &[MPoly], cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    if system.is_empty() {
        return Err(SolveError::EmptySystem);
    }
    if let Some(s) = cfg.unknowns.iter().find(|s| cfg.presets.0.contains_key(s)) {
        return Err(SolveError::PresetIsUnknown(*s));
    }
    let symbols: BTreeSet<Sym> = system.iter().flat_map(MPoly::symbols).collect();
    if let Some(s) = symbols
        .iter()
        .find(|s| !cfg.unknowns.contains(s) && !cfg.presets.0.contains_key(s))
    {
        return Err(SolveError::Unbound(*s));
    }

    let presets = cfg.presets.as_polys();
    let root = Node {
        bindings: BTreeMap::new(),
        system: system.iter().map(|p| p.substitute(&presets)).collect(),
        nonzero: cfg.nonzero.clone(),
        path: Vec::new(),
    };
    let mut stack = vec![root];
    let mut explored = 0usize;
    let mut branches = Vec::new();
    while let Some(mut node) = stack.pop() {
        explored += 1;
        let outcome = if explored > cfg.branch_budget {
            let witness = node.system.first().cloned().unwrap_or_else(MPoly::zero);
            Step::Leaf(BranchStatus::Stuck(witness), node.system.clone())
        } else {
            step(&mut node, &cfg.unknowns)
        };
        match outcome {
            Step::Children(children) => stack.extend(children.into_iter().rev()),
            Step::Leaf(status, remaining) => {
                let mut assignment = Assignment::new();
                let mut relations = BTreeMap::new();
                for (s, v) in &node.bindings {
                    match v.as_constant() {
                        Some(c) => {
                            assignment.0.insert(*s, c);
                        }
                        None => {
                            relations.insert(*s, v.clone());
                        }
                    }
                }
                branches.push(Branch { assignment, relations, remaining, status, path: node.path });
            }
        }
    }

    for b in branches.iter().filter(|b| b.status.is_solved()) {
        let mut bind = presets.clone();
        bind.extend(b.assignment.as_polys());
        bind.extend(b.relations.clone());
        if annihilates(system, &bind).is_some() {
            return Err(SolveError::Unsound(b.assignment.to_string()));
        }
    }

    let leaves = branches.len();
    branches.sort();
    Ok(SolveOutcome { branches, nodes_explored: explored, leaves })
}

/// Result of checking a full assignment against a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    /// Index and text of the first equation that does not vanish.
    pub failing: Option<(usize, MPoly)>,
}

/// Exact check that `asg` annihilates every equation.
pub fn verify_assignment(system: &[MPoly], asg: &Assignment) -> Result<Verification, SolveError> {
    for p in system {
        if let Some(s) = p.symbols().into_iter().find(|s| !asg.0.contains_key(s)) {
            return Err(SolveError::Unbound(s));
        }
    }
    for (n, p) in system.iter().enumerate() {
        let v = p.eval(&asg.0).expect("all symbols bound");
        if !v.is_zero() {
            return Ok(Verification { ok: false, failing: Some((n, p.clone())) });
        }
    }
    Ok(Verification { ok: true, failing: None })
}

/// `λ = −6 m⁴` for `m = 1..=depth`, where `√(−λ/6) = m²` is rational.
pub fn rational_lambda_grid(depth: u32) -> Vec<Rat> {
    (1..=depth as i64).map(|m| int(-6 * m.pow(4))).collect()
}

/// The `m` with `λ = −6 m⁴`, if `λ` is on the grid.
pub fn grid_index(lambda: &Rat) -> Option<u32> {
    if !lambda.is_integer() {
        return None;
    }
    (1..=64u32).find(|&m| *lambda == int(-6 * (m as i64).pow(4)))
}
