//! Tanh-method ansatz `v = Σ a_j φ^j` with the Riccati rule `φ' = k + φ²`.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::equation::{ode_combination, DiffRing, EquationSpec};
use crate::exactpoly::{MPoly, Rat, Sym};

/// A residual term whose φ-degree is linear in the ansatz degree `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalanceTerm {
    /// `v^(p)`, degree `M + p`.
    Derivative(u32),
    /// `v^(p) v^(q)`, degree `2M + p + q`.
    Product(u32, u32),
    /// `v^p v^(q)`, degree `(p + 1)M + q`.
    PowerDerivative(u32, u32),
}

/// `slope * M + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Order {
    pub slope: u32,
    pub intercept: u32,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slope {
            1 => write!(f, "M+{}", self.intercept),
            s => write!(f, "{s}M+{}", self.intercept),
        }
    }
}

impl BalanceTerm {
    pub fn order(&self) -> Order {
        let (slope, intercept) = match *self {
            BalanceTerm::Derivative(p) => (1, p),
            BalanceTerm::Product(p, q) => (2, p + q),
            BalanceTerm::PowerDerivative(p, q) => (p + 1, q),
        };
        Order { slope, intercept }
    }

    pub fn describe(&self) -> String {
        let d = |n: u32| match n {
            0 => "v".to_string(),
            1 => "v'".to_string(),
            2 => "v''".to_string(),
            n => format!("v^({n})"),
        };
        match *self {
            BalanceTerm::Derivative(p) => d(p),
            BalanceTerm::Product(p, q) => format!("{} {}", d(p), d(q)),
            BalanceTerm::PowerDerivative(p, q) => format!("v^{p} {}", d(q)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BalanceError {
    #[error("balancing needs a linear term and a nonlinear term with distinct orders")]
    Degenerate,
    #[error("balancing {nonlinear} = {linear} has no positive integer solution")]
    NotPositiveInteger { nonlinear: Order, linear: Order },
}

/// Balances the highest linear term against the highest nonlinear term.
pub fn balance_m(terms: &[BalanceTerm]) -> Result<u32, BalanceError> {
    let orders: Vec<Order> = terms.iter().map(BalanceTerm::order).collect();
    let linear = orders.iter().filter(|o| o.slope == 1).max();
    let nonlinear = orders.iter().filter(|o| o.slope > 1).max();
    let (Some(&linear), Some(&nonlinear)) = (linear, nonlinear) else {
        return Err(BalanceError::Degenerate);
    };
    let fail = BalanceError::NotPositiveInteger { nonlinear, linear };
    if linear.intercept <= nonlinear.intercept {
        return Err(fail);
    }
    let gap = linear.intercept - nonlinear.intercept;
    let slope = nonlinear.slope - 1;
    if gap % slope != 0 {
        return Err(fail);
    }
    Ok(gap / slope)
}

/// The balance terms present in the traveling-wave ODE of `spec`.
pub fn ode_balance_terms(spec: &EquationSpec) -> Vec<BalanceTerm> {
    let mut out = Vec::new();
    if spec.lambda.as_ref().is_none_or(|l| !l.is_zero()) {
        out.push(BalanceTerm::Derivative(1));
    }
    if !spec.alpha.is_zero() {
        out.push(BalanceTerm::PowerDerivative(2, 1));
    }
    if !spec.beta.is_zero() {
        out.push(BalanceTerm::Product(1, 2));
    }
    if !spec.gamma.is_zero() {
        out.push(BalanceTerm::Product(0, 3));
    }
    if !spec.omega.is_zero() {
        out.push(BalanceTerm::Derivative(5));
    }
    out
}

/// Polynomial in φ with [`MPoly`] coefficients; index = power of φ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiPoly {
    coeffs: Vec<MPoly>,
}

impl PhiPoly {
    pub fn new(mut coeffs: Vec<MPoly>) -> Self {
        while coeffs.last().is_some_and(MPoly::is_zero) {
            coeffs.pop();
        }
        PhiPoly { coeffs }
    }

    pub fn phi() -> Self {
        PhiPoly::new(vec![MPoly::zero(), MPoly::one()])
    }

    pub fn constant(c: MPoly) -> Self {
        PhiPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> MPoly {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of φ; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        PhiPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn substitute(&self, bind: &std::collections::BTreeMap<Sym, MPoly>) -> Self {
        self.map_coeffs(|c| c.substitute(bind))
    }

    /// Numeric value at a φ value, with rational parameter values.
    pub fn eval_f64(&self, bind: &std::collections::BTreeMap<Sym, Rat>, phi: f64) -> Option<f64> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * phi + crate::exactpoly::to_f64(&c.eval(bind)?);
        }
        Some(acc)
    }
}

/// `d/dξ` under `φ' = k + φ²`: `(φⁿ)' = n k φⁿ⁻¹ + n φⁿ⁺¹`.
pub fn phi_diff(p: &PhiPoly) -> PhiPoly {
    let k = MPoly::var(Sym::K);
    let mut out = vec![MPoly::zero(); p.coeffs.len() + 1];
    for (n, c) in p.coeffs.iter().enumerate().skip(1) {
        let nc = c.scale(&crate::exactpoly::int(n as i64));
        out[n - 1] = &out[n - 1] + &(&nc * &k);
        out[n + 1] = &out[n + 1] + &nc;
    }
    PhiPoly::new(out)
}

impl DiffRing for PhiPoly {
    fn zero() -> Self {
        PhiPoly::default()
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PhiPoly::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PhiPoly::default();
        }
        let mut out = vec![MPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PhiPoly::new(out)
    }

    fn scale(&self, c: &MPoly) -> Self {
        self.map_coeffs(|a| a * c)
    }

    fn derive(&self) -> Self {
        phi_diff(self)
    }
}

/// `a0 + a1 φ + … + aM φ^M`.
pub fn build_ansatz(m: u8) -> PhiPoly {
    assert!(m >= 1, "ansatz degree must be positive");
    PhiPoly::new((0..=m).map(|j| MPoly::var(Sym::A(j))).collect())
}

pub fn ode_residual(spec: &EquationSpec, v: &PhiPoly) -> PhiPoly {
    ode_combination(spec, v)
}

/// One coefficient of the residual, set to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TanhEquation {
    pub power: usize,
    pub poly: MPoly,
}

/// Normalized nonzero φ-coefficients in ascending power.
pub fn extract_system(residual: &PhiPoly) -> Vec<TanhEquation> {
    residual
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(power, c)| TanhEquation { power, poly: c.normalize() })
        .collect()
}

/// Ansatz, residual and extraction in one step.
pub fn derive_system(spec: &EquationSpec, m: u8) -> Vec<TanhEquation> {
    extract_system(&ode_residual(spec, &build_ansatz(m)))
}

/// Closed-form solutions of `φ' = k + φ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiForm {
    /// `√k tan(√k ξ)`, k > 0
    Tan,
    /// `−√k cot(√k ξ)`, k > 0
    Cot,
    /// `−√(−k) tanh(√(−k) ξ)`, k < 0
    Tanh,
    /// `−√(−k) coth(√(−k) ξ)`, k < 0
    Coth,
    /// `−1/ξ`, k = 0
    Rational,
}

impl PhiForm {
    pub const ALL: [PhiForm; 5] =
        [PhiForm::Tan, PhiForm::Cot, PhiForm::Tanh, PhiForm::Coth, PhiForm::Rational];

    /// Whether the form is real for the sign of `k`.
    pub fn admits(&self, k: f64) -> bool {
        match self {
            PhiForm::Tan | PhiForm::Cot => k > 0.0,
            PhiForm::Tanh | PhiForm::Coth => k < 0.0,
            PhiForm::Rational => k == 0.0,
        }
    }

    pub fn eval(&self, k: f64, xi: f64) -> f64 {
        match self {
            PhiForm::Tan => k.sqrt() * (k.sqrt() * xi).tan(),
            PhiForm::Cot => -k.sqrt() / (k.sqrt() * xi).tan(),
            PhiForm::Tanh => -(-k).sqrt() * ((-k).sqrt() * xi).tanh(),
            PhiForm::Coth => -(-k).sqrt() / ((-k).sqrt() * xi).tanh(),
            PhiForm::Rational => -1.0 / xi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{frac, int};
    use std::collections::BTreeMap;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn balance_examples() {
        use BalanceTerm::*;
        assert_eq!(balance_m(&[PowerDerivative(2, 1), Derivative(5)]), Ok(2));
        assert_eq!(balance_m(&[Product(0, 3), Derivative(5)]), Ok(2));
        assert_eq!(balance_m(&[PowerDerivative(2, 1), Derivative(3)]), Ok(1));
        assert_eq!(balance_m(&ode_balance_terms(&EquationSpec::ito())), Ok(2));
    }

    #[test]
    fn balance_failures() {
        use BalanceTerm::*;
        assert!(matches!(
            balance_m(&[PowerDerivative(2, 1), Derivative(4)]),
            Err(BalanceError::NotPositiveInteger { .. })
        ));
        assert!(matches!(
            balance_m(&[PowerDerivative(2, 5), Derivative(1)]),
            Err(BalanceError::NotPositiveInteger { .. })
        ));
        assert_eq!(balance_m(&[Derivative(1), Derivative(5)]), Err(BalanceError::Degenerate));
        let err = balance_m(&[PowerDerivative(2, 1), Derivative(4)]).unwrap_err();
        assert_eq!(err.to_string(), "balancing 3M+1 = M+4 has no positive integer solution");
    }

    #[test]
    fn phi_diff_examples() {
        assert_eq!(phi_diff(&PhiPoly::phi()), PhiPoly::new(vec![p("k"), p("0"), p("1")]));
        assert!(phi_diff(&PhiPoly::constant(MPoly::int(1))).is_zero());
        let phi2 = PhiPoly::new(vec![p("0"), p("0"), p("1")]);
        assert_eq!(phi_diff(&phi2), PhiPoly::new(vec![p("0"), p("2*k"), p("0"), p("2")]));
    }

    #[test]
    fn ansatz_shapes() {
        assert_eq!(build_ansatz(2), PhiPoly::new(vec![p("a0"), p("a1"), p("a2")]));
        assert_eq!(build_ansatz(1).degree(), Some(1));
        assert_eq!(build_ansatz(3).coeff(3), p("a3"));
    }

    #[test]
    fn residual_examples() {
        let ito = EquationSpec::ito();
        assert!(ode_residual(&ito, &PhiPoly::constant(p("a0"))).is_zero());
        assert_eq!(ode_residual(&ito, &build_ansatz(2)).degree(), Some(7));

        let spec = EquationSpec::ito().with_lambda(int(-6));
        let v = PhiPoly::new(vec![p("-5"), p("0"), p("-30")]);
        let res = ode_residual(&spec, &v);
        let k = BTreeMap::from([(Sym::K, MPoly::constant(frac(1, 4)))]);
        assert!(res.substitute(&k).is_zero());
    }

    #[test]
    fn extracted_system_contains_printed_equations() {
        let sys = extract_system(&ode_residual(&EquationSpec::ito(), &build_ansatz(2)));
        assert_eq!(sys.len(), 8);
        let polys: Vec<&MPoly> = sys.iter().map(|e| &e.poly).collect();
        assert!(polys.contains(&&p("4*a2^3+144*a2^2+720*a2").normalize()));
        assert!(polys.contains(&&p("10*a1*a2^2+150*a1*a2+120*a1").normalize()));
        assert_eq!(sys.iter().map(|e| e.power).collect::<Vec<_>>(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn phi_forms_satisfy_riccati() {
        let h = 1e-5;
        for form in PhiForm::ALL {
            for k in [-2.0, -0.25, 0.0, 0.25, 2.0] {
                if !form.admits(k) {
                    continue;
                }
                for i in 0..20 {
                    let xi = 0.1 + 0.04 * i as f64;
                    let f = |x: f64| form.eval(k, x);
                    let d = (-f(xi + 2.0 * h) + 8.0 * f(xi + h) - 8.0 * f(xi - h) + f(xi - 2.0 * h))
                        / (12.0 * h);
                    let rhs = k + f(xi) * f(xi);
                    let rel = (d - rhs).abs() / rhs.abs().max(1.0);
                    assert!(rel < 1e-8, "{form:?} k={k} xi={xi} rel={rel:e}");
                }
            }
        }
    }
}
