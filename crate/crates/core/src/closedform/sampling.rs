use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::catalog::{record, SolutionId, SolutionRecord};
use super::eval::{Bindings, Evaluator};
use super::pde::pde_residual;
use crate::equation::EquationSpec;
use crate::exactpoly::Sym;

pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const MIN_ACCEPTED: usize = 20;
pub const OVERSAMPLING: usize = 50;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("lambda must be negative for real evaluation, got {0}")]
    NonNegativeLambda(f64),
    #[error("sample count must be at least {MIN_ACCEPTED}, got {0}")]
    TooFewSamples(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplePlan {
    pub samples: usize,
    pub seed: u64,
    /// Half-width of the window for `z = xi * (-lambda/6)^(1/4)`.
    pub z_half_width: f64,
    /// Exclusion radius around `z = 0` for templates singular there.
    pub z_exclusion: f64,
    pub t_range: (f64, f64),
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan { samples: 40, seed: 7, z_half_width: 1.2, z_exclusion: 0.05, t_range: (-1.0, 1.0) }
    }
}

impl SamplePlan {
    pub fn with_seed(seed: u64) -> Self {
        SamplePlan { seed, ..Self::default() }
    }

    fn rng(&self, salt: u64, lambda: f64) -> ChaCha8Rng {
        let mixed = self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ lambda.to_bits().rotate_left(17);
        ChaCha8Rng::seed_from_u64(mixed)
    }

    /// Draws a candidate `(x, t)`; `None` when it falls inside the exclusion zone.
    fn draw(&self, rng: &mut ChaCha8Rng, lambda: f64, singular: bool) -> Option<(f64, f64)> {
        let z = rng.gen_range(-self.z_half_width..=self.z_half_width);
        let t = rng.gen_range(self.t_range.0..=self.t_range.1);
        if singular && z.abs() < self.z_exclusion {
            return None;
        }
        let xi = z / (-lambda / 6.0).powf(0.25);
        Some((xi - lambda * t, t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub x: f64,
    pub t: f64,
    pub residual: f64,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: SolutionId,
    pub lambda: f64,
    pub tolerance: f64,
    pub samples: Vec<Sample>,
    pub max_relative_residual: f64,
    pub rejected_samples: usize,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn table_header() -> String {
        format!("{:<5} {:>10} {:>8} {:>9} {:>14}  {}", "id", "lambda", "accepted", "rejected", "max rel resid", "verdict")
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:<5} {:>10} {:>8} {:>9} {:>14.3e}  {}",
            self.id.to_string(),
            self.lambda,
            self.samples.len(),
            self.rejected_samples,
            self.max_relative_residual,
            self.verdict
        )
    }
}

fn check(lambda: f64, plan: &SamplePlan) -> Result<(), SampleError> {
    if lambda.is_nan() || lambda >= 0.0 {
        return Err(SampleError::NonNegativeLambda(lambda));
    }
    if plan.samples < MIN_ACCEPTED {
        return Err(SampleError::TooFewSamples(plan.samples));
    }
    Ok(())
}

/// Samples the Ito residual of a catalog solution at random valid points.
pub fn sample_report(id: SolutionId, lambda: f64, plan: &SamplePlan) -> Result<VerificationReport, SampleError> {
    sample_record(&record(id), &EquationSpec::ito(), lambda, plan)
}

pub fn sample_record(
    rec: &SolutionRecord,
    spec: &EquationSpec,
    lambda: f64,
    plan: &SamplePlan,
) -> Result<VerificationReport, SampleError> {
    check(lambda, plan)?;
    let residual = pde_residual(spec, &rec.template);
    let mut rng = plan.rng(rec.id.index() as u64, lambda);
    let mut samples = Vec::new();
    let mut rejected = 0;
    let mut attempts = 0;
    while samples.len() < plan.samples && attempts < plan.samples * OVERSAMPLING {
        attempts += 1;
        let Some((x, t)) = plan.draw(&mut rng, lambda, rec.singular_at_origin) else {
            rejected += 1;
            continue;
        };
        let at = Bindings::new(x, t).param(Sym::Lambda, lambda);
        match residual.eval(&mut Evaluator::new(&at)) {
            Ok((sum, scale)) => samples.push(Sample { x, t, residual: sum, scale }),
            Err(_) => rejected += 1,
        }
    }
    let max_rel = samples.iter().map(|s| s.residual.abs() / s.scale).fold(0.0, f64::max);
    let verdict = if samples.len() < MIN_ACCEPTED {
        Verdict::Inconclusive
    } else if max_rel <= RESIDUAL_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport {
        id: rec.id,
        lambda,
        tolerance: RESIDUAL_TOLERANCE,
        samples,
        max_relative_residual: max_rel,
        rejected_samples: rejected,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointPair {
    pub x: f64,
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub left: SolutionId,
    pub right: SolutionId,
    pub lambda: f64,
    pub tolerance: f64,
    pub samples: Vec<PointPair>,
    pub max_relative_difference: f64,
    pub rejected_samples: usize,
    pub verdict: Verdict,
}

/// Pointwise comparison of two catalog templates at shared valid samples.
/// The difference is measured relative to `max(1, |left|, |right|)`.
pub fn compare_pointwise(
    left: SolutionId,
    right: SolutionId,
    lambda: f64,
    plan: &SamplePlan,
) -> Result<ComparisonReport, SampleError> {
    check(lambda, plan)?;
    let (a, b) = (record(left), record(right));
    let singular = a.singular_at_origin || b.singular_at_origin;
    let salt = 0x100 + 0x10 * left.index() as u64 + right.index() as u64;
    let mut rng = plan.rng(salt, lambda);
    let mut samples = Vec::new();
    let mut rejected = 0;
    let mut attempts = 0;
    while samples.len() < plan.samples && attempts < plan.samples * OVERSAMPLING {
        attempts += 1;
        let Some((x, t)) = plan.draw(&mut rng, lambda, singular) else {
            rejected += 1;
            continue;
        };
        let at = Bindings::new(x, t).param(Sym::Lambda, lambda);
        let mut ev = Evaluator::new(&at);
        match (ev.eval(&a.template), ev.eval(&b.template)) {
            (Ok(l), Ok(r)) => samples.push(PointPair { x, t, left: l, right: r }),
            _ => rejected += 1,
        }
    }
    let max_rel = samples
        .iter()
        .map(|p| (p.left - p.right).abs() / 1f64.max(p.left.abs()).max(p.right.abs()))
        .fold(0.0, f64::max);
    let verdict = if samples.len() < MIN_ACCEPTED {
        Verdict::Inconclusive
    } else if max_rel <= IDENTITY_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ComparisonReport {
        left,
        right,
        lambda,
        tolerance: IDENTITY_TOLERANCE,
        samples,
        max_relative_difference: max_rel,
        rejected_samples: rejected,
        verdict,
    })
}
