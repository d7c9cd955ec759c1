use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::exactpoly::{latex_rat, Rat, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    X,
    T,
    Xi,
}

impl Coord {
    pub fn name(&self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::T => "t",
            Coord::Xi => "xi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Tan,
    Cot,
    Sec,
    Csc,
    Tanh,
    Coth,
    Sech,
    Csch,
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sec => "sec",
            Func::Csc => "csc",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Sech => "sech",
            Func::Csch => "csch",
        }
    }

    fn latex(&self) -> &'static str {
        match self {
            Func::Tan => "\\tan",
            Func::Cot => "\\cot",
            Func::Sec => "\\sec",
            Func::Csc => "\\csc",
            Func::Tanh => "\\tanh",
            Func::Coth => "\\coth",
            Func::Sech => "\\operatorname{sech}",
            Func::Csch => "\\operatorname{csch}",
        }
    }

    pub fn apply(&self, z: f64) -> f64 {
        match self {
            Func::Tan => z.tan(),
            Func::Cot => z.cos() / z.sin(),
            Func::Sec => 1.0 / z.cos(),
            Func::Csc => 1.0 / z.sin(),
            Func::Tanh => z.tanh(),
            Func::Coth => z.cosh() / z.sinh(),
            Func::Sech => 1.0 / z.cosh(),
            Func::Csch => 1.0 / z.sinh(),
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(Rat),
    Coord(Coord),
    Param(Sym),
    Neg(Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    IntPow(Expr, i32),
    /// Principal `degree`-th root of a non-negative base.
    Root(Expr, u32),
    Fn(Func, Expr),
}

/// Shared, immutable expression node. Subtrees are reference counted so
/// repeated differentiation builds a DAG rather than copying.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr(pub(crate) Arc<Node>);

impl Expr {
    fn wrap(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: Rat) -> Expr {
        Expr::wrap(Node::Const(c))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(crate::exactpoly::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::constant(crate::exactpoly::frac(n, d))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::wrap(Node::Coord(c))
    }

    pub fn param(s: Sym) -> Expr {
        Expr::wrap(Node::Param(s))
    }

    pub fn as_const(&self) -> Option<&Rat> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::wrap(Node::Neg(self.clone())),
        }
    }

    /// Flattened sum with constants folded and zeros dropped.
    pub fn add(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut konst = Rat::zero();
        let mut rest = Vec::new();
        for e in items {
            match e.node() {
                Node::Const(c) => konst += c,
                Node::Add(inner) => {
                    for i in inner {
                        match i.as_const() {
                            Some(c) => konst += c,
                            None => rest.push(i.clone()),
                        }
                    }
                }
                _ => rest.push(e),
            }
        }
        if !konst.is_zero() {
            rest.push(Expr::constant(konst));
        }
        match rest.len() {
            0 => Expr::zero(),
            1 => rest.pop().unwrap(),
            _ => Expr::wrap(Node::Add(rest)),
        }
    }

    /// Flattened product with constants folded; any zero factor gives zero.
    pub fn mul(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut konst = Rat::one();
        let mut rest = Vec::new();
        for e in items {
            match e.node() {
                Node::Const(c) => konst *= c,
                Node::Mul(inner) => {
                    for i in inner {
                        match i.as_const() {
                            Some(c) => konst *= c,
                            None => rest.push(i.clone()),
                        }
                    }
                }
                _ => rest.push(e),
            }
        }
        if konst.is_zero() {
            return Expr::zero();
        }
        if rest.is_empty() {
            return Expr::constant(konst);
        }
        if !konst.is_one() {
            rest.insert(0, Expr::constant(konst));
        }
        if rest.len() == 1 {
            return rest.pop().unwrap();
        }
        Expr::wrap(Node::Mul(rest))
    }

    pub fn difference(a: Expr, b: Expr) -> Expr {
        Expr::add([a, b.neg()])
    }

    pub fn quotient(num: Expr, den: Expr) -> Expr {
        assert!(!den.is_zero(), "syntactic division by zero");
        if num.is_zero() || den.is_one() {
            return num;
        }
        if let (Some(a), Some(b)) = (num.as_const(), den.as_const()) {
            return Expr::constant(a / b);
        }
        Expr::wrap(Node::Div(num, den))
    }

    pub fn pow(base: Expr, n: i32) -> Expr {
        match n {
            0 => return Expr::one(),
            1 => return base,
            _ => {}
        }
        if let Some(c) = base.as_const() {
            if !(c.is_zero() && n < 0) {
                return Expr::constant(num_traits::Pow::pow(c, n));
            }
        }
        Expr::wrap(Node::IntPow(base, n))
    }

    pub fn root(base: Expr, degree: u32) -> Expr {
        assert!(degree >= 2, "root degree must be at least 2");
        Expr::wrap(Node::Root(base, degree))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::wrap(Node::Fn(f, arg))
    }

    /// Number of distinct nodes reachable from `self`.
    pub fn dag_size(&self) -> usize {
        fn walk(e: &Expr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(e.id()) {
                return;
            }
            match e.node() {
                Node::Const(_) | Node::Coord(_) | Node::Param(_) => {}
                Node::Neg(a) | Node::IntPow(a, _) | Node::Root(a, _) | Node::Fn(_, a) => walk(a, seen),
                Node::Add(v) | Node::Mul(v) => v.iter().for_each(|a| walk(a, seen)),
                Node::Div(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(_) => 1,
            Node::Neg(_) => 2,
            Node::Mul(_) | Node::Div(..) => 3,
            Node::Const(c) if !c.is_integer() || c.is_negative() => 3,
            Node::IntPow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, child: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }

    pub fn latex(&self) -> String {
        let wrap = |e: &Expr, min: u8| {
            if e.precedence() < min {
                format!("\\left({}\\right)", e.latex())
            } else {
                e.latex()
            }
        };
        match self.node() {
            Node::Const(c) => latex_rat(c),
            Node::Coord(Coord::Xi) => "\\xi".into(),
            Node::Coord(c) => c.name().into(),
            Node::Param(s) => s.latex(),
            Node::Neg(a) => format!("-{}", wrap(a, 3)),
            Node::Add(v) => {
                let mut out = String::new();
                for (n, a) in v.iter().enumerate() {
                    let s = a.latex();
                    if n > 0 && !s.starts_with('-') {
                        out.push_str(" + ");
                    } else if n > 0 {
                        out.push(' ');
                    }
                    out.push_str(&s);
                }
                out
            }
            Node::Mul(v) => v.iter().map(|a| wrap(a, 3)).collect::<Vec<_>>().join(" \\, "),
            Node::Div(a, b) => format!("\\dfrac{{{}}}{{{}}}", a.latex(), b.latex()),
            Node::IntPow(a, n) => match a.node() {
                Node::Fn(func, arg) => format!("{}^{{{n}}}\\left({}\\right)", func.latex(), arg.latex()),
                _ => format!("{}^{{{n}}}", wrap(a, 5)),
            },
            Node::Root(a, 2) => format!("\\sqrt{{{}}}", a.latex()),
            Node::Root(a, d) => format!("\\sqrt[{d}]{{{}}}", a.latex()),
            Node::Fn(func, arg) => format!("{}\\left({}\\right)", func.latex(), arg.latex()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write!(f, "{c}"),
            Node::Coord(c) => f.write_str(c.name()),
            Node::Param(s) => write!(f, "{s}"),
            Node::Neg(a) => {
                f.write_str("-")?;
                self.fmt_child(a, 3, f)
            }
            Node::Add(v) => {
                for (n, a) in v.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" + ")?;
                    }
                    self.fmt_child(a, 2, f)?;
                }
                Ok(())
            }
            Node::Mul(v) => {
                for (n, a) in v.iter().enumerate() {
                    if n > 0 {
                        f.write_str("*")?;
                    }
                    self.fmt_child(a, 3, f)?;
                }
                Ok(())
            }
            Node::Div(a, b) => {
                self.fmt_child(a, 3, f)?;
                f.write_str("/")?;
                self.fmt_child(b, 4, f)
            }
            Node::IntPow(a, n) => {
                self.fmt_child(a, 5, f)?;
                write!(f, "^{n}")
            }
            Node::Root(a, 2) => write!(f, "sqrt({a})"),
            Node::Root(a, d) => write!(f, "root{d}({a})"),
            Node::Fn(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
