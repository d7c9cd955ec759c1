//! The fKdV coefficient family and its traveling-wave ODE.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{int, MPoly, Rat, Sym};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("omega must be nonzero: the fifth-order term defines the family")]
    ZeroOmega,
}

/// Coefficients of `u_t + ω u_xxxxx + α u² u_x + β u_x u_xx + γ u u_xxx = 0`.
///
/// `lambda` is the wave speed of `ξ = x + λt`; `None` keeps it symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSpec {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub omega: Rat,
    pub lambda: Option<Rat>,
}

impl EquationSpec {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat, omega: Rat) -> Result<Self, SpecError> {
        if omega.is_zero() {
            return Err(SpecError::ZeroOmega);
        }
        Ok(EquationSpec { alpha, beta, gamma, omega, lambda: None })
    }

    /// The Ito equation: `(α, β, γ, ω) = (2, 6, 3, 1)`.
    pub fn ito() -> Self {
        EquationSpec::new(int(2), int(6), int(3), int(1)).expect("omega = 1")
    }

    pub fn with_lambda(mut self, lambda: Rat) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn lambda_poly(&self) -> MPoly {
        match &self.lambda {
            Some(l) => MPoly::constant(l.clone()),
            None => MPoly::var(Sym::Lambda),
        }
    }

    pub fn is_ito(&self) -> bool {
        let ito = EquationSpec::ito();
        (&self.alpha, &self.beta, &self.gamma, &self.omega)
            == (&ito.alpha, &ito.beta, &ito.gamma, &ito.omega)
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} gamma={} omega={}",
            self.alpha, self.beta, self.gamma, self.omega
        )?;
        if let Some(l) = &self.lambda {
            write!(f, " lambda={l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpecSummary {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub omega: String,
}

impl From<&EquationSpec> for SpecSummary {
    fn from(s: &EquationSpec) -> Self {
        SpecSummary {
            alpha: s.alpha.to_string(),
            beta: s.beta.to_string(),
            gamma: s.gamma.to_string(),
            omega: s.omega.to_string(),
        }
    }
}

/// A polynomial ring over [`MPoly`] with a derivation `d/dξ`.
pub trait DiffRing: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &MPoly) -> Self;
    fn derive(&self) -> Self;
}

/// `λ v' + α v² v' + β v' v'' + γ v v''' + ω v⁽⁵⁾` for the traveling-wave
/// reduction `u(x, t) = v(x + λt)`.
pub fn ode_combination<T: DiffRing>(spec: &EquationSpec, v: &T) -> T {
    let mut d = vec![v.clone()];
    for n in 0..5 {
        let next = d[n].derive();
        d.push(next);
    }
    let c = |q: &Rat| MPoly::constant(q.clone());
    let mut out = d[1].scale(&spec.lambda_poly());
    if !spec.alpha.is_zero() {
        out = out.add(&v.mul(v).mul(&d[1]).scale(&c(&spec.alpha)));
    }
    if !spec.beta.is_zero() {
        out = out.add(&d[1].mul(&d[2]).scale(&c(&spec.beta)));
    }
    if !spec.gamma.is_zero() {
        out = out.add(&v.mul(&d[3]).scale(&c(&spec.gamma)));
    }
    out.add(&d[5].scale(&c(&spec.omega)))
}
