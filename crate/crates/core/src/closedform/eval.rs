use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::expr::{Coord, Expr, Node};
use crate::exactpoly::{to_f64, Sym};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("pole: intermediate magnitude {0:e} exceeds the guard")]
    Pole(f64),
    #[error("root of negative radicand {0}")]
    Domain(f64),
    #[error("parameter {0} is unbound")]
    Unbound(Sym),
}

pub const MAGNITUDE_GUARD: f64 = 1e6;

#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub params: BTreeMap<Sym, f64>,
}

impl Bindings {
    pub fn new(x: f64, t: f64) -> Self {
        Bindings { x, t, xi: 0.0, params: BTreeMap::new() }
    }

    pub fn param(mut self, s: Sym, v: f64) -> Self {
        self.params.insert(s, v);
        self
    }
}

/// Evaluator with a per-point memo keyed by node identity, so one DAG of
/// derivatives is evaluated once per point.
pub struct Evaluator<'a> {
    at: &'a Bindings,
    guard: f64,
    memo: HashMap<usize, f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(at: &'a Bindings) -> Self {
        Evaluator { at, guard: MAGNITUDE_GUARD, memo: HashMap::new() }
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn eval(&mut self, e: &Expr) -> Result<f64, EvalError> {
        if let Some(v) = self.memo.get(&e.id()) {
            return Ok(*v);
        }
        let v = self.compute(e)?;
        if !v.is_finite() || v.abs() > self.guard {
            return Err(EvalError::Pole(v.abs()));
        }
        self.memo.insert(e.id(), v);
        Ok(v)
    }

    fn compute(&mut self, e: &Expr) -> Result<f64, EvalError> {
        Ok(match e.node() {
            Node::Const(c) => to_f64(c),
            Node::Coord(Coord::X) => self.at.x,
            Node::Coord(Coord::T) => self.at.t,
            Node::Coord(Coord::Xi) => self.at.xi,
            Node::Param(s) => *self.at.params.get(s).ok_or(EvalError::Unbound(*s))?,
            Node::Neg(a) => -self.eval(a)?,
            Node::Add(v) => {
                let mut acc = 0.0;
                for a in v {
                    acc += self.eval(a)?;
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = 1.0;
                for a in v {
                    acc *= self.eval(a)?;
                }
                acc
            }
            Node::Div(a, b) => {
                let den = self.eval(b)?;
                let num = self.eval(a)?;
                if den == 0.0 {
                    return Err(EvalError::Pole(f64::INFINITY));
                }
                num / den
            }
            Node::IntPow(a, n) => self.eval(a)?.powi(*n),
            Node::Root(a, d) => {
                let b = self.eval(a)?;
                if b < 0.0 {
                    return Err(EvalError::Domain(b));
                }
                b.powf(1.0 / *d as f64)
            }
            Node::Fn(f, a) => f.apply(self.eval(a)?),
        })
    }
}

pub fn eval(e: &Expr, at: &Bindings) -> Result<f64, EvalError> {
    Evaluator::new(at).eval(e)
}
