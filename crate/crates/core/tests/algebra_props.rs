use std::collections::{BTreeMap, BTreeSet};

use fkdv::exactpoly::{frac, int, rational_roots, MPoly, Mono, Rat, Sym};
use num_traits::{One, Zero};
use proptest::prelude::*;

const SYMS: [Sym; 5] = [Sym::A(0), Sym::A(1), Sym::K, Sym::Mu, Sym::R];

fn rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn mono() -> impl Strategy<Value = Mono> {
    prop::collection::vec((0usize..SYMS.len(), 0u32..=2), 0..3)
        .prop_map(|v| Mono::from_pairs(v.into_iter().map(|(i, e)| (SYMS[i], e))))
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((mono(), rat()), 0..5).prop_map(MPoly::from_terms)
}

fn binding() -> impl Strategy<Value = BTreeMap<Sym, MPoly>> {
    prop::collection::vec((0usize..SYMS.len(), poly()), 0..3)
        .prop_map(|v| v.into_iter().map(|(i, p)| (SYMS[i], p)).collect())
}

fn point() -> impl Strategy<Value = BTreeMap<Sym, Rat>> {
    prop::collection::vec(rat(), SYMS.len()).prop_map(|v| SYMS.iter().copied().zip(v).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), s in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &MPoly::one(), p.clone());
        prop_assert!((&p * &MPoly::zero()).is_zero());
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly(), q in poly(), b in binding()) {
        prop_assert_eq!((&p + &q).substitute(&b), &p.substitute(&b) + &q.substitute(&b));
        prop_assert_eq!((&p * &q).substitute(&b), &p.substitute(&b) * &q.substitute(&b));
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), at in point()) {
        let (a, b) = (p.eval(&at).unwrap(), q.eval(&at).unwrap());
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), &a * &b);
        prop_assert_eq!((&p + &q).eval(&at).unwrap(), a + b);
    }

    #[test]
    fn normalize_properties(p in poly(), c in rat(), at in point()) {
        let n = p.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        if p.is_zero() {
            prop_assert!(n.is_zero());
        } else {
            prop_assert!(n.lead().unwrap().1 > &Rat::zero());
            let (m, pc) = p.lead().unwrap();
            let factor = pc / n.coefficient(m);
            prop_assert_eq!(n.scale(&factor), p.clone());
            if !c.is_zero() {
                prop_assert_eq!(p.scale(&c).normalize(), n.clone());
            }
            prop_assert_eq!(p.eval(&at).unwrap().is_zero(), n.eval(&at).unwrap().is_zero());
        }
    }

    #[test]
    fn display_round_trips_through_the_parser(p in poly()) {
        let back: MPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

/// Exact integer evaluation of `Σ c_i x^i` at `x = n/d`, scaled by `d^deg`.
fn vanishes_at(coeffs: &[i64], n: i64, d: i64) -> bool {
    let deg = coeffs.len() - 1;
    let mut acc: i128 = 0;
    for (i, &c) in coeffs.iter().enumerate() {
        acc += c as i128 * (n as i128).pow(i as u32) * (d as i128).pow((deg - i) as u32);
    }
    acc == 0
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn brute_force_roots(coeffs: &[i64]) -> BTreeSet<Rat> {
    let mut out = BTreeSet::new();
    for d in 1..=20 {
        for n in -200..=200 {
            if gcd(n, d) == 1 && vanishes_at(coeffs, n, d) {
                out.insert(frac(n, d));
            }
        }
    }
    out
}

fn in_grid(q: &Rat) -> bool {
    let (n, d) = (q.numer(), q.denom());
    *d <= 20.into() && *n >= (-200).into() && *n <= 200.into()
}

fn expand(factors: &[(i64, i64)], extra: &[i64]) -> Vec<i64> {
    // Product of (d x - n) factors times `extra`, dense ascending.
    let mut c = extra.to_vec();
    for &(n, d) in factors {
        let mut next = vec![0i64; c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i] -= a * n;
            next[i + 1] += a * d;
        }
        c = next;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rational_roots_match_brute_force(
        factors in prop::collection::vec((-200i64..=200, 1i64..=20), 0..=3),
        extra in prop::collection::vec(-9i64..=9, 1..=2),
    ) {
        prop_assume!(extra.iter().any(|&c| c != 0));
        let mut coeffs = expand(&factors, &extra);
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let dense: Vec<Rat> = coeffs.iter().map(|&c| int(c)).collect();
        let found = rational_roots(&dense).unwrap();
        for q in &found {
            let mut acc = Rat::zero();
            let mut pw = Rat::one();
            for c in &dense {
                acc += c * &pw;
                pw *= q;
            }
            prop_assert!(acc.is_zero(), "{} is not a root", q);
        }
        let in_range: BTreeSet<Rat> = found.into_iter().filter(in_grid).collect();
        prop_assert_eq!(in_range, brute_force_roots(&coeffs));
    }
}
