//! Projective Riccati ansatz `v = a0 + Σ σ^{j-1}(a_j σ + b_j τ)` over the
//! system `σ' = e σ τ`, `τ' = e τ² − μ σ + r`, with the first integral
//! `τ² = −e [r − 2μσ + ((μ² + ρ)/r) σ²]` used to eliminate `τ²`.
//!
//! The first integral divides by `r`. Polynomials carry a global
//! denominator `r^s` (`r_power`) so every coefficient stays an [`MPoly`].
//! `e` and `ρ` are never simplified through `e² = 1` or `ρ² = 1`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::equation::{ode_combination, DiffRing, EquationSpec};
use crate::exactpoly::{int, MPoly, Mono, Rat, Sym};

fn r_pow(n: u32) -> MPoly {
    MPoly::term(Mono::power(Sym::R, n), int(1))
}

/// Unreduced polynomial in `σ, τ` (any τ-power) over the denominator `r^r_power`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaTauPoly {
    terms: BTreeMap<(u32, u32), MPoly>,
    r_power: u32,
}

impl SigmaTauPoly {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), MPoly)>) -> Self {
        let mut out = SigmaTauPoly::default();
        for (key, c) in terms {
            out.add_term(key, c);
        }
        out
    }

    pub fn sigma() -> Self {
        Self::from_terms([((1, 0), MPoly::one())])
    }

    pub fn tau() -> Self {
        Self::from_terms([((0, 1), MPoly::one())])
    }

    pub fn constant(c: MPoly) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    fn add_term(&mut self, key: (u32, u32), c: MPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), MPoly> {
        &self.terms
    }

    pub fn r_power(&self) -> u32 {
        self.r_power
    }

    pub fn max_tau_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    fn rescaled(&self, r_power: u32) -> Self {
        debug_assert!(r_power >= self.r_power);
        let f = r_pow(r_power - self.r_power);
        SigmaTauPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * &f)).collect(),
            r_power,
        }
    }

    /// Plain differentiation with the two rewrite rules and no τ² elimination.
    pub fn raw_diff(&self) -> Self {
        let e = MPoly::var(Sym::E);
        let mu = MPoly::var(Sym::Mu);
        let r = MPoly::var(Sym::R);
        let mut out = SigmaTauPoly { terms: BTreeMap::new(), r_power: self.r_power };
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                // i σ^{i-1} σ' = i e σ^i τ
                out.add_term((i, j + 1), &c.scale(&int(i as i64)) * &e);
            }
            if j > 0 {
                // j τ^{j-1} τ' = j τ^{j-1} (e τ² − μ σ + r)
                let jc = c.scale(&int(j as i64));
                out.add_term((i, j + 1), &jc * &e);
                out.add_term((i + 1, j - 1), -(&jc * &mu));
                out.add_term((i, j - 1), &jc * &r);
            }
        }
        out
    }

    pub fn substitute(&self, bind: &BTreeMap<Sym, MPoly>) -> Self {
        let mut out = SigmaTauPoly { terms: BTreeMap::new(), r_power: self.r_power };
        for (&k, c) in &self.terms {
            out.add_term(k, c.substitute(bind));
        }
        out
    }
}

impl DiffRing for SigmaTauPoly {
    fn zero() -> Self {
        SigmaTauPoly::default()
    }

    fn add(&self, other: &Self) -> Self {
        let s = self.r_power.max(other.r_power);
        let mut out = self.rescaled(s);
        for (&k, c) in &other.rescaled(s).terms {
            out.add_term(k, c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = SigmaTauPoly {
            terms: BTreeMap::new(),
            r_power: self.r_power + other.r_power,
        };
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }

    fn scale(&self, c: &MPoly) -> Self {
        let mut out = SigmaTauPoly { terms: BTreeMap::new(), r_power: self.r_power };
        for (&k, a) in &self.terms {
            out.add_term(k, a * c);
        }
        out
    }

    fn derive(&self) -> Self {
        self.raw_diff()
    }
}

/// Polynomial in `σ, τ` with τ-degree at most one, over the denominator
/// `r^r_power`. The representation is canonical: `r_power` is minimal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StPoly {
    terms: BTreeMap<(u32, u32), MPoly>,
    r_power: u32,
}

impl StPoly {
    pub fn terms(&self) -> &BTreeMap<(u32, u32), MPoly> {
        &self.terms
    }

    pub fn r_power(&self) -> u32 {
        self.r_power
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> MPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Highest σ-power carrying τ-degree `j`.
    pub fn max_sigma_power(&self, j: u32) -> Option<u32> {
        self.terms.keys().filter(|k| k.1 == j).map(|k| k.0).max()
    }

    pub fn lift(&self) -> SigmaTauPoly {
        SigmaTauPoly { terms: self.terms.clone(), r_power: self.r_power }
    }

    fn canonical(terms: BTreeMap<(u32, u32), MPoly>, r_power: u32) -> Self {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return StPoly::default();
        }
        let common = terms
            .values()
            .map(|c| c.strip_power(Sym::R).1)
            .min()
            .unwrap_or(0)
            .min(r_power);
        if common == 0 {
            return StPoly { terms, r_power };
        }
        let d = Mono::power(Sym::R, common);
        StPoly {
            terms: terms
                .into_iter()
                .map(|(k, c)| (k, c.div_mono(&d).expect("common r power")))
                .collect(),
            r_power: r_power - common,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        tau2_reduce(&self.lift().add(&other.lift()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        tau2_reduce(&self.lift().mul(&other.lift()))
    }

    pub fn scale(&self, c: &MPoly) -> Self {
        tau2_reduce(&self.lift().scale(c))
    }

    pub fn substitute(&self, bind: &BTreeMap<Sym, MPoly>) -> Self {
        tau2_reduce(&self.lift().substitute(bind))
    }
}

/// `r·τ² = −e (r² − 2μrσ + (μ² + ρ)σ²)`, as σ-coefficients of the bracket.
fn first_integral_bracket() -> Vec<MPoly> {
    let r = MPoly::var(Sym::R);
    let mu = MPoly::var(Sym::Mu);
    vec![
        &r * &r,
        (&mu * &r).scale(&int(-2)),
        &(&mu * &mu) + &MPoly::var(Sym::Rho),
    ]
}

fn sigma_poly_mul(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut out = vec![MPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Rewrites every `τ^j`, `j ≥ 2`, through the first integral.
pub fn tau2_reduce(p: &SigmaTauPoly) -> StPoly {
    let qmax = p.terms.keys().map(|&(_, j)| j / 2).max().unwrap_or(0);
    let bracket = first_integral_bracket();
    let minus_e = -MPoly::var(Sym::E);
    // (−e)^q · bracket^q as σ-polynomials
    let mut powers = vec![vec![MPoly::one()]];
    for q in 1..=qmax as usize {
        let prev = sigma_poly_mul(&powers[q - 1], &bracket);
        powers.push(prev.iter().map(|c| c * &minus_e).collect());
    }
    let mut terms: BTreeMap<(u32, u32), MPoly> = BTreeMap::new();
    for (&(i, j), c) in &p.terms {
        let q = j / 2;
        let c = c * &r_pow(qmax - q);
        for (d, g) in powers[q as usize].iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let slot = terms.entry((i + d as u32, j % 2)).or_default();
            *slot = &*slot + &(&c * g);
        }
    }
    StPoly::canonical(terms, p.r_power + qmax)
}

/// `d/dξ` followed by τ² elimination.
pub fn st_diff(p: &StPoly) -> StPoly {
    tau2_reduce(&p.lift().raw_diff())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreError {
    #[error("ansatz depth must be at least 1")]
    ZeroDepth,
    #[error("{0}")]
    InvalidCase(String),
    #[error("closed form has a pole near xi = {0}")]
    Pole(f64),
}

/// Ansatz depth `m` of the projective expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreAnsatzSpec {
    m: u8,
}

impl PreAnsatzSpec {
    pub fn new(m: u8) -> Result<Self, PreError> {
        if m == 0 {
            return Err(PreError::ZeroDepth);
        }
        Ok(PreAnsatzSpec { m })
    }

    pub fn m(&self) -> u8 {
        self.m
    }
}

pub fn build_pre_ansatz(spec: PreAnsatzSpec) -> StPoly {
    let mut terms = vec![((0, 0), MPoly::var(Sym::A(0)))];
    for j in 1..=spec.m {
        let s = j as u32 - 1;
        terms.push(((s + 1, 0), MPoly::var(Sym::A(j))));
        terms.push(((s, 1), MPoly::var(Sym::B(j))));
    }
    tau2_reduce(&SigmaTauPoly::from_terms(terms))
}

/// σ-degrees of the leading residual terms as `(slope, intercept)` in `m`:
/// linear `m + 5`, and the nonlinear `2m + 3` and `3m + 1`.
pub const LINEAR_DEGREE: (u32, u32) = (1, 5);
pub const NONLINEAR_DEGREES: [(u32, u32); 2] = [(2, 3), (3, 1)];

/// Positive integer solution of `s1·m + c1 = s2·m + c2`, if any.
pub fn pairwise_balance(a: (u32, u32), b: (u32, u32)) -> Option<u32> {
    let (ds, dc) = (a.0 as i64 - b.0 as i64, b.1 as i64 - a.1 as i64);
    if ds == 0 || dc % ds != 0 || dc / ds < 1 {
        return None;
    }
    Some((dc / ds) as u32)
}

/// Ansatz depths for which no nonlinear degree exceeds the linear degree, so
/// the leading coefficients can cancel. The bound is the largest pairwise
/// balance point.
pub fn pre_degree_candidates() -> BTreeSet<u32> {
    let mut all = vec![LINEAR_DEGREE];
    all.extend(NONLINEAR_DEGREES);
    let bound = all
        .iter()
        .enumerate()
        .flat_map(|(n, &a)| all[n + 1..].iter().filter_map(move |&b| pairwise_balance(a, b)))
        .max()
        .unwrap_or(0);
    let deg = |(s, c): (u32, u32), m: u32| s * m + c;
    (1..=bound)
        .filter(|&m| NONLINEAR_DEGREES.iter().all(|&n| deg(n, m) <= deg(LINEAR_DEGREE, m)))
        .collect()
}

/// The traveling-wave ODE residual, differentiated without intermediate
/// elimination and reduced once at the end.
pub fn pre_ode_residual(spec: &EquationSpec, v: &StPoly) -> StPoly {
    tau2_reduce(&ode_combination(spec, &v.lift()))
}

pub fn derive_pre_system(spec: &EquationSpec, m: u8) -> Result<Vec<PreEquation>, PreError> {
    let v = build_pre_ansatz(PreAnsatzSpec::new(m)?);
    Ok(extract_pre_system(&pre_ode_residual(spec, &v)))
}

/// One coefficient of the reduced residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreEquation {
    pub sigma_power: u32,
    pub tau_power: u32,
    /// `poly` equals the true coefficient times `r^r_power` (up to the
    /// normalizing rational factor).
    pub r_power: i32,
    pub poly: MPoly,
}

pub fn extract_pre_system(residual: &StPoly) -> Vec<PreEquation> {
    residual
        .terms
        .iter()
        .map(|(&(i, j), c)| {
            let (stripped, t) = c.strip_power(Sym::R);
            PreEquation {
                sigma_power: i,
                tau_power: j,
                r_power: residual.r_power as i32 - t as i32,
                poly: stripped.normalize(),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CaseId {
    I,
    IISec,
    IICsc,
    III,
    IV,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::I, CaseId::IISec, CaseId::IICsc, CaseId::III, CaseId::IV];

    /// `(e, ρ)` attached to the case; Case I only fixes `e` by the caller.
    pub fn signs(&self) -> Option<(i8, i8)> {
        match self {
            CaseId::I => None,
            CaseId::IISec | CaseId::IICsc => Some((1, -1)),
            CaseId::III => Some((-1, -1)),
            CaseId::IV => Some((-1, 1)),
        }
    }
}

/// A closed-form solution of the σ–τ system.
#[derive(Clone, Debug, PartialEq)]
pub struct StClosedForm {
    pub case: CaseId,
    pub e: i8,
    pub rho: i8,
    pub mu: Rat,
    pub r: Rat,
    pub c: Rat,
}

impl StClosedForm {
    /// Case I: `r = μ = 0`, `σ = C/ξ`, `τ = −1/(eξ)`.
    pub fn case_one(e: i8, c: Rat) -> Result<Self, PreError> {
        if e != 1 && e != -1 {
            return Err(PreError::InvalidCase("e must be +1 or -1".into()));
        }
        Ok(StClosedForm { case: CaseId::I, e, rho: 1, mu: int(0), r: int(0), c })
    }

    /// Cases II–IV with their fixed `(e, ρ)` and `r > 0`.
    pub fn new(case: CaseId, mu: Rat, r: Rat) -> Result<Self, PreError> {
        let Some((e, rho)) = case.signs() else {
            return Err(PreError::InvalidCase("use case_one for Case I".into()));
        };
        if r <= int(0) {
            return Err(PreError::InvalidCase(format!("{case:?} requires r > 0")));
        }
        Ok(StClosedForm { case, e, rho, mu, r, c: int(0) })
    }

    /// Numeric `(σ, τ)` at `ξ`.
    pub fn eval(&self, xi: f64) -> Result<(f64, f64), PreError> {
        const POLE: f64 = 1e-6;
        let pole = |d: f64| d.abs() < POLE;
        let mu = crate::exactpoly::to_f64(&self.mu);
        let r = crate::exactpoly::to_f64(&self.r);
        let sr = r.sqrt();
        let z = sr * xi;
        let (s, t) = match self.case {
            CaseId::I => {
                if pole(xi) {
                    return Err(PreError::Pole(xi));
                }
                let c = crate::exactpoly::to_f64(&self.c);
                (c / xi, -1.0 / (self.e as f64 * xi))
            }
            CaseId::IISec | CaseId::IICsc => {
                let (base, other) = if self.case == CaseId::IISec {
                    (z.cos(), z.sin())
                } else {
                    (z.sin(), z.cos())
                };
                if pole(base) {
                    return Err(PreError::Pole(xi));
                }
                let f = 1.0 / base;
                let den = 1.0 + mu * f;
                if pole(den) {
                    return Err(PreError::Pole(xi));
                }
                let ratio = other / base;
                let tau = if self.case == CaseId::IISec { sr * ratio } else { -sr * ratio };
                (r * f / den, tau / den)
            }
            CaseId::III => {
                let f = 1.0 / z.cosh();
                let den = 1.0 + mu * f;
                if pole(den) {
                    return Err(PreError::Pole(xi));
                }
                (r * f / den, sr * z.tanh() / den)
            }
            CaseId::IV => {
                let sh = z.sinh();
                if pole(sh) {
                    return Err(PreError::Pole(xi));
                }
                let f = 1.0 / sh;
                let den = 1.0 + mu * f;
                if pole(den) {
                    return Err(PreError::Pole(xi));
                }
                (r * f / den, sr * (z.cosh() / sh) / den)
            }
        };
        Ok((s, t))
    }

    /// `τ² + e [r − 2μσ + ((μ² + ρ)/r) σ²]`, zero along Cases II–IV.
    pub fn first_integral_defect(&self, sigma: f64, tau: f64) -> f64 {
        let mu = crate::exactpoly::to_f64(&self.mu);
        let r = crate::exactpoly::to_f64(&self.r);
        let (e, rho) = (self.e as f64, self.rho as f64);
        tau * tau + e * (r - 2.0 * mu * sigma + (mu * mu + rho) / r * sigma * sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::frac;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn st(terms: &[((u32, u32), &str)]) -> SigmaTauPoly {
        SigmaTauPoly::from_terms(terms.iter().map(|&(k, c)| (k, p(c))))
    }

    #[test]
    fn tau_squared_reduces_through_first_integral() {
        let red = tau2_reduce(&st(&[((0, 2), "1")]));
        assert_eq!(red.r_power(), 1);
        assert_eq!(red.coefficient(0, 0), p("-e*r^2"));
        assert_eq!(red.coefficient(1, 0), p("2*e*mu*r"));
        assert_eq!(red.coefficient(2, 0), p("-e*mu^2 - e*rho"));
        assert_eq!(red.coefficient(0, 1), MPoly::zero());

        let tau = tau2_reduce(&SigmaTauPoly::tau());
        assert_eq!(tau.lift(), SigmaTauPoly::tau());

        let bind = BTreeMap::from([(Sym::E, p("1")), (Sym::Mu, p("1")), (Sym::Rho, p("-1"))]);
        let special = red.substitute(&bind);
        assert_eq!(special.r_power(), 0);
        assert_eq!(special, tau2_reduce(&st(&[((0, 0), "-r"), ((1, 0), "2")])));
    }

    #[test]
    fn st_diff_examples() {
        let sigma = tau2_reduce(&SigmaTauPoly::sigma());
        assert_eq!(st_diff(&sigma), tau2_reduce(&st(&[((1, 1), "e")])));
        assert!(st_diff(&tau2_reduce(&SigmaTauPoly::constant(p("a0")))).is_zero());
        let dtau = st_diff(&tau2_reduce(&SigmaTauPoly::tau()));
        // (−e²r² + 2e²μrσ − e²(μ²+ρ)σ² − μrσ + r²) / r
        assert_eq!(dtau.r_power(), 1);
        assert_eq!(dtau.coefficient(0, 0), p("-e^2*r^2 + r^2"));
        assert_eq!(dtau.coefficient(1, 0), p("2*e^2*mu*r - mu*r"));
        assert_eq!(dtau.coefficient(2, 0), p("-e^2*mu^2 - e^2*rho"));
    }

    #[test]
    fn ansatz_shapes() {
        let one = build_pre_ansatz(PreAnsatzSpec::new(1).unwrap());
        assert_eq!(one.lift(), st(&[((0, 0), "a0"), ((1, 0), "a1"), ((0, 1), "b1")]));
        let two = build_pre_ansatz(PreAnsatzSpec::new(2).unwrap());
        assert_eq!(
            two.lift(),
            st(&[((0, 0), "a0"), ((1, 0), "a1"), ((0, 1), "b1"), ((2, 0), "a2"), ((1, 1), "b2")])
        );
        let bind = BTreeMap::from([(Sym::A(1), p("0")), (Sym::B(1), p("0"))]);
        assert_eq!(one.substitute(&bind).lift(), st(&[((0, 0), "a0")]));
        assert_eq!(PreAnsatzSpec::new(0), Err(PreError::ZeroDepth));
    }

    #[test]
    fn degree_candidates() {
        assert_eq!(pre_degree_candidates(), BTreeSet::from([1, 2]));
        assert_eq!(pairwise_balance((2, 3), (1, 5)), Some(2));
        assert_eq!(pairwise_balance((3, 1), (2, 3)), Some(2));
        assert_eq!(pairwise_balance((3, 1), (1, 5)), Some(2));
        assert_eq!(pairwise_balance((2, 1), (2, 3)), None);
    }

    #[test]
    fn residual_degrees_and_size() {
        let ito = EquationSpec::ito();
        let v = build_pre_ansatz(PreAnsatzSpec::new(1).unwrap());
        assert!(pre_ode_residual(&ito, &tau2_reduce(&SigmaTauPoly::constant(p("a0")))).is_zero());
        let res = pre_ode_residual(&ito, &v);
        assert_eq!(res.max_sigma_power(0), Some(6));
        assert_eq!(res.max_sigma_power(1), Some(5));
        let sys = extract_pre_system(&res);
        assert_eq!(sys.len(), 13);
        let polys: Vec<&MPoly> = sys.iter().map(|e| &e.poly).collect();
        assert!(polys.contains(&&p("e^7*(mu^2+rho)^2*a1").normalize()));
        assert!(polys.contains(&&p("e^8*(mu^2+rho)^3*b1").normalize()));
    }

    #[test]
    fn solution_i_annihilates_residual() {
        let spec = EquationSpec::ito().with_lambda(int(-6));
        let v = build_pre_ansatz(PreAnsatzSpec::new(1).unwrap());
        let bind: BTreeMap<Sym, MPoly> = [
            (Sym::A(0), frac(5, 2)),
            (Sym::A(1), int(15)),
            (Sym::B(1), int(0)),
            (Sym::Mu, int(-1)),
            (Sym::R, int(1)),
            (Sym::E, int(1)),
            (Sym::Rho, int(-1)),
        ]
        .into_iter()
        .map(|(s, v)| (s, MPoly::constant(v)))
        .collect();
        assert!(pre_ode_residual(&spec, &v).substitute(&bind).is_zero());
    }

    #[test]
    fn closed_form_examples() {
        let sec = StClosedForm::new(CaseId::IISec, int(0), int(1)).unwrap();
        assert_eq!(sec.eval(0.0).unwrap(), (1.0, 0.0));
        let one = StClosedForm::case_one(1, int(3)).unwrap();
        assert_eq!(one.eval(2.0).unwrap(), (1.5, -0.5));
        let three = StClosedForm::new(CaseId::III, int(0), int(1)).unwrap();
        assert_eq!(three.eval(0.0).unwrap(), (1.0, 0.0));
        assert!(matches!(one.eval(0.0), Err(PreError::Pole(_))));
        let csc = StClosedForm::new(CaseId::IICsc, int(0), int(1)).unwrap();
        assert!(matches!(csc.eval(0.0), Err(PreError::Pole(_))));
        assert!(StClosedForm::new(CaseId::IV, int(0), int(-1)).is_err());
    }
}
