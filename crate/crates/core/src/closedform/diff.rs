use std::collections::HashMap;

use super::expr::{Coord, Expr, Func, Node};

/// Differentiation with respect to one coordinate, memoized per node so
/// that shared subtrees are differentiated once.
pub struct Differentiator {
    var: Coord,
    memo: HashMap<usize, (Expr, Expr)>,
}

impl Differentiator {
    pub fn new(var: Coord) -> Self {
        Differentiator { var, memo: HashMap::new() }
    }

    pub fn diff(&mut self, e: &Expr) -> Expr {
        if let Some((_, d)) = self.memo.get(&e.id()) {
            return d.clone();
        }
        let d = self.compute(e);
        // Keeping `e` alive pins its address for the lifetime of the memo.
        self.memo.insert(e.id(), (e.clone(), d.clone()));
        d
    }

    fn compute(&mut self, e: &Expr) -> Expr {
        match e.node() {
            Node::Const(_) | Node::Param(_) => Expr::zero(),
            Node::Coord(c) => {
                if *c == self.var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => self.diff(a).neg(),
            Node::Add(v) => Expr::add(v.iter().map(|a| self.diff(a)).collect::<Vec<_>>()),
            Node::Mul(v) => {
                let mut terms = Vec::new();
                for i in 0..v.len() {
                    let di = self.diff(&v[i]);
                    if di.is_zero() {
                        continue;
                    }
                    let mut factors = v.clone();
                    factors[i] = di;
                    terms.push(Expr::mul(factors));
                }
                Expr::add(terms)
            }
            Node::Div(a, b) => {
                let da = self.diff(a);
                let db = self.diff(b);
                if db.is_zero() {
                    return Expr::quotient(da, b.clone());
                }
                let num = Expr::difference(Expr::mul([da, b.clone()]), Expr::mul([a.clone(), db]));
                Expr::quotient(num, Expr::pow(b.clone(), 2))
            }
            Node::IntPow(a, n) => {
                let da = self.diff(a);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::mul([Expr::int(*n as i64), Expr::pow(a.clone(), n - 1), da])
            }
            Node::Root(a, d) => {
                let da = self.diff(a);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::quotient(Expr::mul([da, e.clone()]), Expr::mul([Expr::int(*d as i64), a.clone()]))
            }
            Node::Fn(f, a) => {
                let da = self.diff(a);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::mul([outer_derivative(*f, a), da])
            }
        }
    }
}

fn outer_derivative(f: Func, arg: &Expr) -> Expr {
    let same = Expr::func(f, arg.clone());
    let sq = |g: Func| Expr::pow(Expr::func(g, arg.clone()), 2);
    match f {
        Func::Tan => Expr::add([Expr::one(), sq(Func::Tan)]),
        Func::Cot => Expr::add([Expr::one(), sq(Func::Cot)]).neg(),
        Func::Sec => Expr::mul([same, Expr::func(Func::Tan, arg.clone())]),
        Func::Csc => Expr::mul([same, Expr::func(Func::Cot, arg.clone())]).neg(),
        Func::Tanh => Expr::difference(Expr::one(), sq(Func::Tanh)),
        Func::Coth => Expr::difference(Expr::one(), sq(Func::Coth)),
        Func::Sech => Expr::mul([same, Expr::func(Func::Tanh, arg.clone())]).neg(),
        Func::Csch => Expr::mul([same, Expr::func(Func::Coth, arg.clone())]).neg(),
    }
}

pub fn differentiate(e: &Expr, var: Coord) -> Expr {
    Differentiator::new(var).diff(e)
}

/// Successive derivatives `[e, e', e'', ...]` up to `order`, sharing one memo.
pub fn derivative_chain(e: &Expr, var: Coord, order: usize) -> Vec<Expr> {
    let mut d = Differentiator::new(var);
    let mut out = vec![e.clone()];
    for _ in 0..order {
        let next = d.diff(out.last().unwrap());
        out.push(next);
    }
    out
}
