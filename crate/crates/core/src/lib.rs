//! Numerical toolkit for the generalized bi-axially symmetric Helmholtz equation
//!
//! u_xx + u_yy + (2α/x) u_x + (2β/y) u_y - λ² u = 0,  0 < 2α, 2β < 1,
//!
//! in the quarter plane and the quarter disk: fundamental solutions built
//! from a three-variable confluent hypergeometric series, the Green's
//! function of the quarter disk, an integral-representation Dirichlet solver
//! and an independent finite-difference oracle.

// `!(x < y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod audit;
pub mod dirichlet;
pub mod error;
pub mod fdoracle;
pub mod fundsol;
pub mod green;
pub mod hyperfun;
pub mod par;
pub mod quadrature;

pub use error::{Error, Result};
