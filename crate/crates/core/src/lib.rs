//! Zeros of bounded monotone operators `A : L_p → L_q`, `1 < p ≤ 2`, on
//! uniformly discretized functions over `[0, 1]`.
//!
//! The core iteration is
//!
//! ```text
//! x_{n+1} = J⁻¹(J x_n − α_n A x_n − α_n θ_n J x_n)
//! ```
//!
//! with the normalized duality map `J` of `L_p`, a step sequence `α_n` and a
//! vanishing regularization sequence `θ_n`. The same engine drives
//! Hammerstein integral equations, subgradient minimization, box-constrained
//! variational inequalities and `J`-fixed points; see [`solver`].
//!
//! ```
//! use lp_monotone::{grid::LpContext, operators::mult_op, solver::{solve_zero, SolveConfig}};
//!
//! let ctx = LpContext::new(1.5, 100).unwrap();
//! let x1 = ctx.sample(|t| 1.0 / (1.0 + t * t)).unwrap();
//! let cfg = SolveConfig::new(ctx, 1e-6, 10_000).unwrap();
//! let sol = solve_zero(&mult_op(), &x1, &cfg).unwrap();
//! assert!(sol.trace.converged);
//! ```

pub mod duality;
pub mod error;
pub mod grid;
pub mod harness;
pub mod io;
pub mod operators;
pub mod schedule;
pub mod solver;

#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
pub use grid::{GridFunction, LpContext};
