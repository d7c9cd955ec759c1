//! Exact tanh-method and projective Riccati machinery for the fifth-order
//! KdV family `u_t + ω u_xxxxx + α u² u_x + β u_x u_xx + γ u u_xxx = 0`.

pub mod exactpoly;
pub mod equation;
pub mod pre_method;
pub mod tanh_method;
pub mod fixtures;
pub mod branch_solver;
pub mod closedform;
pub mod selfcheck;
