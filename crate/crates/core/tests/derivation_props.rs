use std::collections::BTreeMap;

use fkdv::equation::DiffRing;
use fkdv::exactpoly::{frac, int, to_f64, MPoly, Mono, Rat, Sym};
use fkdv::pre_method::{st_diff, tau2_reduce, CaseId, SigmaTauPoly, StClosedForm, StPoly};
use fkdv::tanh_method::{phi_diff, PhiForm, PhiPoly};
use proptest::prelude::*;

const SYMS: [Sym; 5] = [Sym::A(0), Sym::B(1), Sym::Mu, Sym::R, Sym::K];

fn rat() -> impl Strategy<Value = Rat> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn coeff() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec((0usize..SYMS.len(), 0u32..=1), 0..2), rat()), 0..3).prop_map(
        |terms| {
            MPoly::from_terms(
                terms
                    .into_iter()
                    .map(|(m, c)| (Mono::from_pairs(m.into_iter().map(|(i, e)| (SYMS[i], e))), c)),
            )
        },
    )
}

fn phi_poly() -> impl Strategy<Value = PhiPoly> {
    prop::collection::vec(coeff(), 0..4).prop_map(PhiPoly::new)
}

fn st_raw() -> impl Strategy<Value = SigmaTauPoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2), coeff()), 0..4).prop_map(SigmaTauPoly::from_terms)
}

fn st_reduced() -> impl Strategy<Value = StPoly> {
    st_raw().prop_map(|p| tau2_reduce(&p))
}

fn bind_e(e: i64) -> BTreeMap<Sym, MPoly> {
    BTreeMap::from([(Sym::E, MPoly::int(e))])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phi_diff_leibniz(p in phi_poly(), q in phi_poly()) {
        let lhs = phi_diff(&p.mul(&q));
        let rhs = phi_diff(&p).mul(&q).add(&p.mul(&phi_diff(&q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_diff_is_additive(p in phi_poly(), q in phi_poly()) {
        prop_assert_eq!(phi_diff(&p.add(&q)), phi_diff(&p).add(&phi_diff(&q)));
    }

    #[test]
    fn raw_diff_leibniz(p in st_raw(), q in st_raw()) {
        let lhs = p.mul(&q).raw_diff();
        let rhs = p.raw_diff().mul(&q).add(&p.mul(&q.raw_diff()));
        prop_assert_eq!(lhs, rhs);
    }

    /// The reduced derivation obeys Leibniz once `e² = 1` is imposed.
    #[test]
    fn st_diff_leibniz_on_unit_e(p in st_reduced(), q in st_reduced(), e in prop::sample::select(vec![-1i64, 1])) {
        let lhs = st_diff(&p.mul(&q));
        let rhs = st_diff(&p).mul(&q).add(&p.mul(&st_diff(&q)));
        let defect = lhs.add(&rhs.scale(&MPoly::int(-1)));
        prop_assert!(defect.substitute(&bind_e(e)).is_zero());
    }

    #[test]
    fn reduction_bounds_tau_degree(p in st_raw(), q in st_raw()) {
        for s in [tau2_reduce(&p), tau2_reduce(&p.mul(&q)), st_diff(&tau2_reduce(&p))] {
            prop_assert!(s.terms().keys().all(|&(_, j)| j <= 1));
        }
    }

    #[test]
    fn reduction_is_a_ring_map(p in st_raw(), q in st_raw()) {
        let lhs = tau2_reduce(&p.mul(&q));
        let rhs = tau2_reduce(&p).mul(&tau2_reduce(&q));
        prop_assert_eq!(lhs, rhs);
    }

    /// d/dξ of a numeric φ-polynomial along φ = √k tan(√k ξ) agrees with phi_diff.
    #[test]
    fn phi_diff_matches_finite_differences(
        c in prop::collection::vec(-4i64..=4, 1..5),
        k in prop::sample::select(vec![frac(1, 4), int(1), int(2), frac(-1, 4), int(-1)]),
        xi in 0.1f64..0.6,
    ) {
        let p = PhiPoly::new(c.iter().map(|&n| MPoly::int(n)).collect());
        let bind = BTreeMap::from([(Sym::K, k.clone())]);
        let kf = to_f64(&k);
        let form = if kf > 0.0 { PhiForm::Tan } else { PhiForm::Tanh };
        let f = |s: f64| p.eval_f64(&bind, form.eval(kf, s)).unwrap();
        let h = 1e-4;
        let fd = (-f(xi + 2.0 * h) + 8.0 * f(xi + h) - 8.0 * f(xi - h) + f(xi - 2.0 * h)) / (12.0 * h);
        let sym = phi_diff(&p).eval_f64(&bind, form.eval(kf, xi)).unwrap();
        prop_assert!((fd - sym).abs() <= 1e-6 * sym.abs().max(1.0), "{} vs {}", fd, sym);
    }

    #[test]
    fn riccati_forms(k in prop::sample::select(vec![frac(1, 4), int(1), int(3), frac(-1, 4), int(-2), int(0)]), xi in 0.05f64..0.7) {
        let kf = to_f64(&k);
        for form in PhiForm::ALL {
            if !form.admits(kf) {
                continue;
            }
            let h = 1e-4;
            let f = |s: f64| form.eval(kf, s);
            let fd = (-f(xi + 2.0 * h) + 8.0 * f(xi + h) - 8.0 * f(xi - h) + f(xi - 2.0 * h)) / (12.0 * h);
            let rhs = kf + f(xi).powi(2);
            prop_assert!((fd - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "{:?} k={} xi={}", form, kf, xi);
        }
    }

    /// σ' = eστ and τ' = eτ² − μσ + r, plus the first integral for Cases II–IV.
    #[test]
    fn projective_riccati_forms(
        mu in prop::sample::select(vec![int(-1), int(1), frac(1, 2), int(2), frac(-3, 2), int(0)]),
        r in prop::sample::select(vec![int(1), frac(1, 4), int(2), int(9)]),
        xi in -1.0f64..1.0,
    ) {
        let mut forms: Vec<StClosedForm> = [CaseId::IISec, CaseId::IICsc, CaseId::III, CaseId::IV]
            .into_iter()
            .map(|c| StClosedForm::new(c, mu.clone(), r.clone()).unwrap())
            .collect();
        forms.push(StClosedForm::case_one(1, frac(3, 2)).unwrap());
        forms.push(StClosedForm::case_one(-1, int(-2)).unwrap());
        for form in forms {
            let Ok((s0, t0)) = form.eval(xi) else { continue };
            let h = 1e-3 / s0.abs().max(t0.abs()).max(1.0);
            let pts: Result<Vec<_>, _> = [-2.0, -1.0, 0.0, 1.0, 2.0].iter().map(|d| form.eval(xi + d * h)).collect();
            let Ok(pts) = pts else { continue };
            if pts.iter().any(|(s, t)| s.abs() > 1e3 || t.abs() > 1e3) {
                continue;
            }
            let d = |f: &dyn Fn(&(f64, f64)) -> f64| {
                (-f(&pts[4]) + 8.0 * f(&pts[3]) - 8.0 * f(&pts[1]) + f(&pts[0])) / (12.0 * h)
            };
            let (s, t) = pts[2];
            let e = form.e as f64;
            let (mu_f, r_f) = (to_f64(&form.mu), to_f64(&form.r));
            let ds = d(&|p| p.0);
            let dt = d(&|p| p.1);
            let want_s = e * s * t;
            let want_t = e * t * t - mu_f * s + r_f;
            prop_assert!((ds - want_s).abs() <= 1e-6 * want_s.abs().max(1.0), "{:?} sigma", form.case);
            prop_assert!((dt - want_t).abs() <= 1e-6 * want_t.abs().max(1.0), "{:?} tau", form.case);
            if form.case != CaseId::I {
                prop_assert!(form.first_integral_defect(s, t).abs() <= 1e-8, "{:?} integral", form.case);
            }
        }
    }
}
