//! Seeded algebraic and numeric self-checks, runnable outside the test
//! harness so that a reproduction run can report them.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equation::DiffRing;
use crate::exactpoly::{frac, int, rational_roots, to_f64, MPoly, Mono, Rat, Sym};
use crate::pre_method::{st_diff, tau2_reduce, CaseId, SigmaTauPoly, StClosedForm, StPoly};
use crate::tanh_method::{phi_diff, PhiForm, PhiPoly};

pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;
pub const FIRST_INTEGRAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }
}

/// Fourth-order central difference `f'(x)`.
pub fn central_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

const SYMS: [Sym; 5] = [Sym::A(0), Sym::B(1), Sym::Mu, Sym::R, Sym::K];

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn random_coeff(rng: &mut ChaCha8Rng) -> MPoly {
    let n = rng.gen_range(0..3);
    MPoly::from_terms((0..n).map(|_| {
        let m = Mono::from_pairs((0..rng.gen_range(0..3)).map(|_| (SYMS[rng.gen_range(0..SYMS.len())], 1)));
        (m, random_rat(rng))
    }))
}

fn random_phi(rng: &mut ChaCha8Rng) -> PhiPoly {
    PhiPoly::new((0..rng.gen_range(0..4)).map(|_| random_coeff(rng)).collect())
}

fn random_st(rng: &mut ChaCha8Rng) -> StPoly {
    let terms: Vec<_> = (0..rng.gen_range(0..4))
        .map(|_| ((rng.gen_range(0..=2), rng.gen_range(0..=2)), random_coeff(rng)))
        .collect();
    tau2_reduce(&SigmaTauPoly::from_terms(terms))
}

/// `(pq)' = p'q + pq'` for `phi_diff`, exactly.
pub fn leibniz_phi(seed: u64, pairs: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("leibniz_phi_diff");
    for _ in 0..pairs {
        let (p, q) = (random_phi(&mut rng), random_phi(&mut rng));
        let lhs = phi_diff(&p.mul(&q));
        let rhs = phi_diff(&p).mul(&q).add(&p.mul(&phi_diff(&q)));
        out.record(lhs == rhs, || format!("p={:?} q={:?}", p.coeffs(), q.coeffs()));
    }
    out
}

/// Leibniz law for `st_diff` on reduced polynomials, exactly, once the
/// unit sign `e = ±1` is substituted.
pub fn leibniz_st(seed: u64, pairs: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("leibniz_st_diff");
    for n in 0..pairs {
        let (p, q) = (random_st(&mut rng), random_st(&mut rng));
        let e = if n % 2 == 0 { 1 } else { -1 };
        let lhs = st_diff(&p.mul(&q));
        let rhs = st_diff(&p).mul(&q).add(&p.mul(&st_diff(&q)));
        let defect = lhs.add(&rhs.scale(&MPoly::int(-1)));
        let bind = BTreeMap::from([(Sym::E, MPoly::int(e))]);
        out.record(defect.substitute(&bind).is_zero(), || format!("pair {n} with e={e}"));
    }
    out
}

/// `(p∘s)(q∘s) = (pq)∘s` and `(p+q)∘s = p∘s + q∘s` for random substitutions.
pub fn substitution_homomorphism(seed: u64, cases: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("substitution_homomorphism");
    for _ in 0..cases {
        let (p, q) = (random_coeff(&mut rng), random_coeff(&mut rng));
        let bind: BTreeMap<Sym, MPoly> =
            (0..rng.gen_range(1..3)).map(|_| (SYMS[rng.gen_range(0..SYMS.len())], random_coeff(&mut rng))).collect();
        let mul_ok = (&p * &q).substitute(&bind) == &p.substitute(&bind) * &q.substitute(&bind);
        let add_ok = (&p + &q).substitute(&bind) == &p.substitute(&bind) + &q.substitute(&bind);
        out.record(mul_ok && add_ok, || format!("p={p} q={q}"));
    }
    out
}

/// `rational_roots` against exhaustive search over `n/d`, `|n| ≤ 200`, `1 ≤ d ≤ 20`.
pub fn roots_against_grid(seed: u64, cases: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("rational_roots_vs_grid");
    for _ in 0..cases {
        // Planted linear factors times a small random cofactor.
        let mut coeffs: Vec<i128> = vec![rng.gen_range(1..=5)];
        if rng.gen_bool(0.5) {
            coeffs.insert(0, rng.gen_range(-5..=5));
        }
        for _ in 0..rng.gen_range(0..=3) {
            let (n, d): (i128, i128) = (rng.gen_range(-200..=200), rng.gen_range(1..=20));
            let mut next = vec![0; coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i] -= a * n;
                next[i + 1] += a * d;
            }
            coeffs = next;
        }
        // d^deg f(n/d), exact in integers.
        let scaled = |n: i128, d: i128| -> i128 {
            coeffs.iter().rev().fold((0i128, 1i128), |(acc, dp), c| (acc * n + c * dp, dp * d)).0
        };
        let mut brute = BTreeSet::new();
        for d in 1..=20i128 {
            for n in -200..=200i128 {
                if num_integer::gcd(n, d) == 1 && scaled(n, d) == 0 {
                    brute.insert(frac(n as i64, d as i64));
                }
            }
        }
        let dense: Vec<Rat> = coeffs.iter().map(|&c| int(c as i64)).collect();
        let found = rational_roots(&dense).expect("nonzero polynomial");
        let horner = |x: &Rat| dense.iter().rev().fold(int(0), |acc, c| acc * x + c);
        let in_grid: BTreeSet<Rat> = found
            .iter()
            .filter(|q| *q.denom() <= 20.into() && q.numer().magnitude() <= &200u32.into())
            .cloned()
            .collect();
        let sound = found.iter().all(|q| horner(q) == int(0));
        out.record(sound && in_grid == brute, || format!("coeffs {coeffs:?}"));
    }
    out
}

/// Every Riccati form satisfies `φ' = k + φ²` at random points.
pub fn riccati_forms(seed: u64, points: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("riccati_forms");
    let ks = [frac(1, 4), int(1), int(3), frac(-1, 4), int(-2), int(0)];
    for _ in 0..points {
        let k = to_f64(&ks[rng.gen_range(0..ks.len())]);
        let xi: f64 = rng.gen_range(0.05..0.7);
        for form in PhiForm::ALL.iter().filter(|f| f.admits(k)) {
            let fd = central_derivative(|s| form.eval(k, s), xi, 1e-4);
            let want = k + form.eval(k, xi).powi(2);
            out.record(rel_close(fd, want, DERIVATIVE_TOLERANCE), || format!("{form:?} k={k} xi={xi}"));
        }
    }
    out
}

/// Cases I–IV satisfy `σ' = eστ`, `τ' = eτ² − μσ + r`; Cases II–IV also
/// satisfy the first integral.
pub fn projective_forms(seed: u64, points: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new("projective_riccati_forms");
    let mus = [int(-1), int(1), frac(1, 2), int(2), frac(-3, 2), int(0)];
    let rs = [int(1), frac(1, 4), int(2), int(9)];
    let mut done = 0;
    let mut attempts = 0;
    while done < points && attempts < 50 * points {
        attempts += 1;
        let (mu, r) = (mus[rng.gen_range(0..mus.len())].clone(), rs[rng.gen_range(0..rs.len())].clone());
        let xi: f64 = rng.gen_range(-1.0..1.0);
        let mut forms: Vec<StClosedForm> = [CaseId::IISec, CaseId::IICsc, CaseId::III, CaseId::IV]
            .into_iter()
            .map(|c| StClosedForm::new(c, mu.clone(), r.clone()).expect("r > 0"))
            .collect();
        forms.push(StClosedForm::case_one(1, frac(3, 2)).expect("unit e"));
        forms.push(StClosedForm::case_one(-1, int(-2)).expect("unit e"));
        for form in forms {
            // Near a pole the natural length scale shrinks like 1/|value|.
            let Ok((s0, t0)) = form.eval(xi) else { continue };
            let h = 1e-3 / s0.abs().max(t0.abs()).max(1.0);
            let Ok(stencil) = [-2.0, -1.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|d| form.eval(xi + d * h))
                .collect::<Result<Vec<_>, _>>()
            else {
                continue;
            };
            if stencil.iter().any(|(s, t)| s.abs() > 1e3 || t.abs() > 1e3) {
                continue;
            }
            let d = |pick: fn(&(f64, f64)) -> f64| {
                (-pick(&stencil[4]) + 8.0 * pick(&stencil[3]) - 8.0 * pick(&stencil[1]) + pick(&stencil[0])) / (12.0 * h)
            };
            let (s, t) = stencil[2];
            let e = form.e as f64;
            let (mu_f, r_f) = (to_f64(&form.mu), to_f64(&form.r));
            let sigma_ok = rel_close(d(|p| p.0), e * s * t, DERIVATIVE_TOLERANCE);
            let tau_ok = rel_close(d(|p| p.1), e * t * t - mu_f * s + r_f, DERIVATIVE_TOLERANCE);
            let integral_ok =
                form.case == CaseId::I || form.first_integral_defect(s, t).abs() <= FIRST_INTEGRAL_TOLERANCE;
            out.record(sigma_ok && tau_ok && integral_ok, || {
                format!("{:?} mu={} r={} xi={xi}", form.case, form.mu, form.r)
            });
        }
        done += 1;
    }
    out
}
