//! Transcriptions of the two published Ito systems, shipped as data files.
//!
//! Each row carries the printed label and the residual coefficient it is
//! expected to match (φ-power for the tanh system, `(σ, τ)` powers for the
//! projective one). Files are checksummed; derivation never reads them.

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactpoly::{MPoly, PolyError, Sym};
use crate::pre_method::PreEquation;
use crate::tanh_method::TanhEquation;

const TANH_ITO_M2: &str = include_str!("../fixtures/tanh_ito_m2.txt");
const TANH_ITO_M2_SHA: &str = include_str!("../fixtures/tanh_ito_m2.sha256");
const PRE_ITO_M1: &str = include_str!("../fixtures/pre_ito_m1.txt");
const PRE_ITO_M1_SHA: &str = include_str!("../fixtures/pre_ito_m1.sha256");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("fixture {name}: checksum mismatch (expected {expected}, found {found})")]
    Checksum { name: &'static str, expected: String, found: String },
    #[error("fixture {name}, line {line}: {msg}")]
    Malformed { name: &'static str, line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureEntry {
    pub label: u32,
    /// `(φ-power, 0)` or `(σ-power, τ-power)`.
    pub key: (u32, u32),
    pub poly: MPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub entries: Vec<FixtureEntry>,
}

fn sha256_hex(data: &str) -> String {
    Sha256::digest(data.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn load(name: &'static str, text: &str, sum: &str, key_cols: usize) -> Result<Fixture, FixtureError> {
    let expected = sum.split_whitespace().next().unwrap_or_default().to_string();
    let found = sha256_hex(text);
    if expected != found {
        return Err(FixtureError::Checksum { name, expected, found });
    }
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| FixtureError::Malformed { name, line: n + 1, msg };
        let mut cols = line.splitn(key_cols + 2, ' ');
        let mut num = || -> Result<u32, FixtureError> {
            cols.next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| bad("expected an integer column".into()))
        };
        let label = num()?;
        let first = num()?;
        let second = if key_cols == 2 { num()? } else { 0 };
        let poly: MPoly = cols
            .next()
            .ok_or_else(|| bad("missing polynomial".into()))?
            .parse()
            .map_err(|e: PolyError| bad(e.to_string()))?;
        entries.push(FixtureEntry { label, key: (first, second), poly });
    }
    Ok(Fixture { name, entries })
}

impl Fixture {
    pub fn tanh_ito() -> Result<Fixture, FixtureError> {
        load("tanh_ito_m2", TANH_ITO_M2, TANH_ITO_M2_SHA, 1)
    }

    pub fn pre_ito() -> Result<Fixture, FixtureError> {
        load("pre_ito_m1", PRE_ITO_M1, PRE_ITO_M1_SHA, 2)
    }
}

/// One printed equation that failed to match its derived counterpart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub label: u32,
    pub key: (u32, u32),
    pub expected: MPoly,
    pub derived: Option<MPoly>,
    /// `expected − derived` after normalization.
    pub difference: Option<MPoly>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixtureComparison {
    pub matched: usize,
    pub set_equal: bool,
    pub mismatches: Vec<Mismatch>,
    /// Derived keys with no printed counterpart.
    pub unexpected: Vec<(u32, u32)>,
}

impl FixtureComparison {
    pub fn is_match(&self) -> bool {
        self.set_equal && self.mismatches.is_empty() && self.unexpected.is_empty()
    }

    /// Human-readable term-level diff.
    pub fn diff_text(&self) -> String {
        let mut out = String::new();
        for m in &self.mismatches {
            out.push_str(&format!("equation ({}) at {:?}\n  expected: {}\n", m.label, m.key, m.expected));
            match (&m.derived, &m.difference) {
                (Some(d), Some(diff)) => {
                    out.push_str(&format!("  derived:  {d}\n  expected - derived: {diff}\n"))
                }
                _ => out.push_str("  derived:  (no coefficient at this key)\n"),
            }
        }
        for k in &self.unexpected {
            out.push_str(&format!("derived coefficient at {k:?} has no printed counterpart\n"));
        }
        out
    }
}

fn compare(
    derived: &[((u32, u32), MPoly)],
    fixture: &Fixture,
    canon: impl Fn(&MPoly) -> MPoly,
) -> FixtureComparison {
    let derived: Vec<((u32, u32), MPoly)> =
        derived.iter().map(|(k, p)| (*k, canon(p))).collect();
    let expected: Vec<(&FixtureEntry, MPoly)> =
        fixture.entries.iter().map(|e| (e, canon(&e.poly))).collect();
    let lhs: BTreeSet<String> = derived.iter().map(|(_, p)| p.to_string()).collect();
    let rhs: BTreeSet<String> = expected.iter().map(|(_, p)| p.to_string()).collect();
    let mut cmp = FixtureComparison {
        set_equal: lhs == rhs && derived.len() == expected.len(),
        ..Default::default()
    };
    for (entry, want) in &expected {
        let got = derived.iter().find(|(k, _)| *k == entry.key).map(|(_, p)| p.clone());
        if got.as_ref() == Some(want) {
            cmp.matched += 1;
        } else {
            cmp.mismatches.push(Mismatch {
                label: entry.label,
                key: entry.key,
                expected: want.clone(),
                difference: got.as_ref().map(|g| want - g),
                derived: got,
            });
        }
    }
    cmp.unexpected = derived
        .iter()
        .map(|(k, _)| *k)
        .filter(|k| !fixture.entries.iter().any(|e| e.key == *k))
        .collect();
    cmp
}

/// Exact equality after normalization, per φ-power.
pub fn compare_tanh(system: &[TanhEquation], fixture: &Fixture) -> FixtureComparison {
    let derived: Vec<_> = system.iter().map(|e| ((e.power as u32, 0), e.poly.clone())).collect();
    compare(&derived, fixture, MPoly::normalize)
}

/// Equality up to a nonzero rational multiple times a power of `r`.
pub fn compare_pre(system: &[PreEquation], fixture: &Fixture) -> FixtureComparison {
    let derived: Vec<_> = system
        .iter()
        .map(|e| ((e.sigma_power, e.tau_power), e.poly.clone()))
        .collect();
    compare(&derived, fixture, |p| p.strip_power(Sym::R).0.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load_with_valid_checksums() {
        let t = Fixture::tanh_ito().unwrap();
        assert_eq!(t.entries.len(), 8);
        assert_eq!(t.entries[6].poly, "4*a2^3+144*a2^2+720*a2".parse().unwrap());
        let p = Fixture::pre_ito().unwrap();
        assert_eq!(p.entries.len(), 13);
        assert_eq!(p.entries[0].key, (5, 1));
    }

    #[test]
    fn tampered_fixture_is_rejected() {
        let tampered = TANH_ITO_M2.replace("720*a2", "721*a2");
        let err = load("tanh_ito_m2", &tampered, TANH_ITO_M2_SHA, 1).unwrap_err();
        assert!(matches!(err, FixtureError::Checksum { .. }));
    }

    #[test]
    fn mismatch_reports_term_difference() {
        let fixture = Fixture {
            name: "toy",
            entries: vec![FixtureEntry { label: 1, key: (0, 0), poly: "a1 + 2".parse().unwrap() }],
        };
        let derived = vec![TanhEquation { power: 0, poly: "a1 + 3".parse().unwrap() }];
        let cmp = compare_tanh(&derived, &fixture);
        assert!(!cmp.is_match());
        assert_eq!(cmp.mismatches[0].difference, Some(MPoly::int(-1)));
        assert!(cmp.diff_text().contains("expected - derived: -1"));
    }
}
