//! Elementary expression trees, the fKdV residual and the catalog of
//! closed-form Ito solutions.

mod catalog;
mod diff;
mod eval;
mod expr;
mod pde;
mod sampling;

pub use catalog::{catalog, record, Method, ParamValue, SolutionId, SolutionRecord};
pub use diff::{derivative_chain, differentiate, Differentiator};
pub use eval::{eval, Bindings, EvalError, Evaluator, MAGNITUDE_GUARD};
pub use expr::{Coord, Expr, Func, Node};
pub use pde::{pde_residual, PdeResidual, TERM_NAMES};
pub use sampling::{
    compare_pointwise, sample_record, sample_report, ComparisonReport, PointPair, Sample, SampleError, SamplePlan,
    VerificationReport, Verdict, IDENTITY_TOLERANCE, MIN_ACCEPTED, OVERSAMPLING, RESIDUAL_TOLERANCE,
};
