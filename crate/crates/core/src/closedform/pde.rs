use super::diff::derivative_chain;
use super::expr::{Coord, Expr};
use super::eval::{EvalError, Evaluator};
use crate::equation::EquationSpec;

pub const TERM_NAMES: [&str; 5] = ["u_t", "omega*u_xxxxx", "alpha*u^2*u_x", "beta*u_x*u_xx", "gamma*u*u_xxx"];

/// The five fKdV terms of a candidate `u`, kept separate so that the
/// magnitude scale of a sample can be computed from them.
#[derive(Clone, Debug)]
pub struct PdeResidual {
    pub terms: [Expr; 5],
}

impl PdeResidual {
    pub fn total(&self) -> Expr {
        Expr::add(self.terms.iter().cloned())
    }

    /// Evaluates the terms with one shared memo; returns `(sum, scale)`.
    pub fn eval(&self, ev: &mut Evaluator<'_>) -> Result<(f64, f64), EvalError> {
        let mut sum = 0.0;
        let mut biggest: f64 = 0.0;
        for t in &self.terms {
            let v = ev.eval(t)?;
            sum += v;
            biggest = biggest.max(v.abs());
        }
        Ok((sum, 1.0 + biggest))
    }
}

pub fn pde_residual(spec: &EquationSpec, u: &Expr) -> PdeResidual {
    let dx = derivative_chain(u, Coord::X, 5);
    let ut = derivative_chain(u, Coord::T, 1).pop().unwrap();
    let c = |r: &crate::exactpoly::Rat| Expr::constant(r.clone());
    PdeResidual {
        terms: [
            ut,
            Expr::mul([c(&spec.omega), dx[5].clone()]),
            Expr::mul([c(&spec.alpha), Expr::pow(u.clone(), 2), dx[1].clone()]),
            Expr::mul([c(&spec.beta), dx[1].clone(), dx[2].clone()]),
            Expr::mul([c(&spec.gamma), u.clone(), dx[3].clone()]),
        ],
    }
}
