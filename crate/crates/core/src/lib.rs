//! Meshless generalized finite differences with non-standard time stepping
//! for 1-D equations of the form
//!
//! ```text
//! u_t = f₁(t,x,u)·u_x + f₂(t,x,u)·u_xx + g(t,x,u)·D^β u + h(t,x,u)
//! ```
//!
//! on irregular nodes, where `D^β` is the Caputo derivative with base point 0.

pub mod cholesky;
pub mod denoms;
pub mod diagnostics;
pub mod expr;
pub mod fracweights;
pub mod harness;
pub mod intweights;
pub mod mesh;
pub mod report;
pub mod solver;
pub mod specmath;
