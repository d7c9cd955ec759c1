//! Exact rational arithmetic and sparse multivariate polynomials.
//!
//! [`MPoly`] is the coefficient carrier for every derived equation. Terms are
//! kept in a canonical graded-lexicographic order over the fixed [`Sym`]
//! alphabet, so equality, printing and hashing are all structural.

mod mono;
mod mpoly;
mod parse;
mod rat;
mod sym;
mod univariate;

use thiserror::Error;

pub use mono::Mono;
pub use mpoly::MPoly;
pub use rat::{content, frac, int, latex_rat, parse_rat, to_f64, Rat};
pub use sym::Sym;
pub use univariate::{as_univariate, rational_roots};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is identically zero; branch on it instead of root-finding")]
    ZeroPolynomial,
}
