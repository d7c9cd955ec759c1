use std::collections::BTreeMap;

use fkdv::branch_solver::{Assignment, Branch, BranchStatus};
use fkdv::closedform::{ComparisonReport, VerificationReport};
use fkdv::equation::{EquationSpec, SpecSummary};
use fkdv::pre_method::PreEquation;
use fkdv::selfcheck::CheckOutcome;
use fkdv::tanh_method::{Order, TanhEquation};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub equation: SpecSummary,
    pub method: String,
    pub lambdas: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &str, spec: &EquationSpec, method: &str, timestamp: &str) -> Self {
        Manifest {
            command: command.into(),
            equation: spec.into(),
            method: method.into(),
            lambdas: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: timestamp.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceTermEntry {
    pub term: String,
    pub order: Order,
    pub rendered: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceEntry {
    pub terms: Vec<BalanceTermEntry>,
    pub m: Option<u32>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemEntry {
    pub method: &'static str,
    pub label: usize,
    pub power: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_power: Option<i32>,
    pub poly: String,
}

pub fn tanh_entries(system: &[TanhEquation]) -> Vec<SystemEntry> {
    system
        .iter()
        .enumerate()
        .map(|(n, e)| SystemEntry {
            method: "tanh",
            label: n + 1,
            power: e.power as u32,
            tau_degree: None,
            r_power: None,
            poly: e.poly.to_string(),
        })
        .collect()
}

pub fn pre_entries(system: &[PreEquation]) -> Vec<SystemEntry> {
    system
        .iter()
        .enumerate()
        .map(|(n, e)| SystemEntry {
            method: "pre",
            label: n + 1,
            power: e.sigma_power,
            tau_degree: Some(e.tau_power),
            r_power: Some(e.r_power),
            poly: e.poly.to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchEntry {
    pub method: &'static str,
    pub presets: Assignment,
    pub bindings: Assignment,
    pub relations: BTreeMap<String, String>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

impl BranchEntry {
    pub fn new(method: &'static str, presets: &Assignment, b: &Branch, verified: Option<bool>) -> Self {
        let detail = match &b.status {
            BranchStatus::Solved => None,
            BranchStatus::SolvedWithFreeSymbols(free) => {
                Some(free.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))
            }
            BranchStatus::Contradiction(w) | BranchStatus::Stuck(w) => Some(w.to_string()),
        };
        BranchEntry {
            method,
            presets: presets.clone(),
            bindings: b.assignment.clone(),
            relations: b.relations.iter().map(|(s, p)| (s.to_string(), p.to_string())).collect(),
            status: b.status.label(),
            detail,
            path: b.path.clone(),
            verified,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Document {
    pub schema: u32,
    pub manifest: Option<Manifest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance: Option<BalanceEntry>,
    pub systems: Vec<SystemEntry>,
    pub branches: Vec<BranchEntry>,
    pub reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<ComparisonReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<Criterion>,
}

impl Document {
    pub fn new(manifest: Manifest) -> Self {
        Document { schema: SCHEMA, manifest: Some(manifest), ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}
