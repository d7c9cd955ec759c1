use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::expr::{Coord, Expr, Func};
use crate::branch_solver::Assignment;
use crate::exactpoly::{frac, int, Rat, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionId(u8);

impl SolutionId {
    pub fn new(n: u8) -> Option<Self> {
        (1..=10).contains(&n).then_some(SolutionId(n))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = SolutionId> {
        (1..=10).map(SolutionId)
    }
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

impl FromStr for SolutionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('u')
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(SolutionId::new)
            .ok_or_else(|| format!("unknown solution id `{s}` (expected u1..u10)"))
    }
}

impl Serialize for SolutionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tanh,
    Pre,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Tanh => "tanh",
            Method::Pre => "pre",
        })
    }
}

/// A printed parameter value: either a rational constant or a rational
/// multiple of `sqrt(-lambda/6)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Fixed(Rat),
    Scaled(Rat),
}

impl ParamValue {
    /// Value at `lambda = -6 m^4`, where `sqrt(-lambda/6) = m^2`.
    pub fn at_grid(&self, m: i64) -> Rat {
        match self {
            ParamValue::Fixed(c) => c.clone(),
            ParamValue::Scaled(c) => c * int(m * m),
        }
    }

    pub fn at_f64(&self, lambda: f64) -> f64 {
        match self {
            ParamValue::Fixed(c) => crate::exactpoly::to_f64(c),
            ParamValue::Scaled(c) => crate::exactpoly::to_f64(c) * (-lambda / 6.0).sqrt(),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Fixed(c) => write!(f, "{c}"),
            ParamValue::Scaled(c) if *c == int(1) => f.write_str("sqrt(-lambda/6)"),
            ParamValue::Scaled(c) if *c == int(-1) => f.write_str("-sqrt(-lambda/6)"),
            ParamValue::Scaled(c) => write!(f, "{c}*sqrt(-lambda/6)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub id: SolutionId,
    pub method: Method,
    pub anchor: &'static str,
    pub template: Expr,
    pub params: Vec<(Sym, ParamValue)>,
    /// Whether the template has a pole at the wave origin.
    pub singular_at_origin: bool,
}

impl SolutionRecord {
    /// The parameter tuple at `lambda = -6 m^4`.
    pub fn specialize(&self, m: i64) -> Assignment {
        let mut a: Assignment = self.params.iter().map(|(s, v)| (*s, v.at_grid(m))).collect();
        a.0.insert(Sym::Lambda, int(-6 * m.pow(4)));
        a
    }

    pub fn params_text(&self) -> String {
        self.params.iter().map(|(s, v)| format!("{s} = {v}")).collect::<Vec<_>>().join(", ")
    }
}

struct Parts {
    s: Expr,
    q: Expr,
    xi: Expr,
}

impl Parts {
    fn new() -> Self {
        let lambda = Expr::param(Sym::Lambda);
        let inner = Expr::mul([Expr::frac(-1, 6), lambda.clone()]);
        Parts {
            s: Expr::root(inner.clone(), 2),
            q: Expr::root(inner, 4),
            xi: Expr::add([Expr::coord(Coord::X), Expr::mul([lambda, Expr::coord(Coord::T)])]),
        }
    }

    fn half_arg(&self) -> Expr {
        Expr::mul([Expr::frac(1, 2), self.q.clone(), self.xi.clone()])
    }

    fn full_arg(&self) -> Expr {
        Expr::mul([self.q.clone(), self.xi.clone()])
    }

    /// `c * S * (a + b * f(arg)^2)`
    fn squared(&self, c: Rat, a: i64, b: i64, f: Func) -> Expr {
        let sq = Expr::pow(Expr::func(f, self.half_arg()), 2);
        Expr::mul([
            Expr::constant(c),
            self.s.clone(),
            Expr::add([Expr::int(a), Expr::mul([Expr::int(b), sq])]),
        ])
    }

    /// `(5/2) * S * (1 + 5 s csc) / (1 - s csc)` with `s = ±1`.
    fn csc_ratio(&self, s: i64) -> Expr {
        let csc = Expr::func(Func::Csc, self.full_arg());
        Expr::mul([
            Expr::frac(5, 2),
            self.s.clone(),
            Expr::quotient(
                Expr::add([Expr::one(), Expr::mul([Expr::int(5 * s), csc.clone()])]),
                Expr::add([Expr::one(), Expr::mul([Expr::int(-s), csc])]),
            ),
        ])
    }
}

fn tanh_params(a0: Rat, k: Rat) -> Vec<(Sym, ParamValue)> {
    vec![
        (Sym::A(0), ParamValue::Scaled(a0)),
        (Sym::A(1), ParamValue::Fixed(int(0))),
        (Sym::A(2), ParamValue::Fixed(int(-30))),
        (Sym::K, ParamValue::Scaled(k)),
    ]
}

fn pre_params(a0: Rat, a1: i64, mu: i64, r: i64) -> Vec<(Sym, ParamValue)> {
    vec![
        (Sym::A(0), ParamValue::Scaled(a0)),
        (Sym::A(1), ParamValue::Fixed(int(a1))),
        (Sym::B(1), ParamValue::Fixed(int(0))),
        (Sym::Mu, ParamValue::Fixed(int(mu))),
        (Sym::R, ParamValue::Scaled(int(r))),
        (Sym::E, ParamValue::Fixed(int(1))),
        (Sym::Rho, ParamValue::Fixed(int(-1))),
    ]
}

/// The ten closed-form solutions of the Ito equation, in publication order.
pub fn catalog() -> Vec<SolutionRecord> {
    let p = Parts::new();
    let rec = |n, method, anchor, template, params, singular_at_origin| SolutionRecord {
        id: SolutionId(n),
        method,
        anchor,
        template,
        params,
        singular_at_origin,
    };
    let m52 = frac(-5, 2);
    let p52 = frac(5, 2);
    vec![
        rec(1, Method::Tanh, "a", p.squared(m52.clone(), 2, 3, Func::Tan), tanh_params(int(-5), frac(1, 4)), false),
        rec(2, Method::Tanh, "b", p.squared(m52.clone(), 2, 3, Func::Cot), tanh_params(int(-5), frac(1, 4)), true),
        rec(3, Method::Tanh, "c", p.squared(p52.clone(), 2, -3, Func::Tanh), tanh_params(int(5), frac(-1, 4)), false),
        rec(4, Method::Tanh, "d", p.squared(p52.clone(), 2, -3, Func::Coth), tanh_params(int(5), frac(-1, 4)), true),
        rec(5, Method::Pre, "i", p.csc_ratio(1), pre_params(p52.clone(), 15, -1, 1), true),
        rec(6, Method::Pre, "ii", p.csc_ratio(-1), pre_params(p52.clone(), -15, 1, 1), true),
        rec(7, Method::Pre, "iii", p.squared(p52.clone(), 1, -3, Func::Sec), pre_params(p52.clone(), -15, 1, 1), false),
        rec(8, Method::Pre, "iv", p.squared(p52.clone(), 1, -3, Func::Csc), pre_params(p52, 15, -1, 1), true),
        rec(9, Method::Pre, "V", p.squared(m52.clone(), 1, -3, Func::Sech), pre_params(frac(-5, 2), -15, 1, -1), false),
        rec(10, Method::Pre, "Vi", p.squared(m52, 1, 3, Func::Csch), pre_params(frac(-5, 2), 15, -1, -1), true),
    ]
}

pub fn record(id: SolutionId) -> SolutionRecord {
    catalog().into_iter().nth(id.0 as usize - 1).expect("catalog holds ten records")
}
