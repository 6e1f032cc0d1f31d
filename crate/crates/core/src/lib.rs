//! Quantum R-matrices and the dynamical twist `F(μ)` in finite-dimensional
//! representations of `U_q(g)` for A1, A2, A3, B2 and osp(1|2).

// `!(x <= tol)` is used on purpose so that NaN fails
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cartan;
pub mod cli;
pub mod dynamical;
pub mod error;
pub mod io;
pub mod linalg;
pub mod repspace;
pub mod rmat;

pub use error::{Error, Result};
