//! Resource-allocation solvers for virtualized heterogeneous wireless
//! networks with edge computing and in-network caching.
//!
//! The crate models an operator that buys spectrum, compute cycles, energy
//! and cache space from base stations and sells access, computation and
//! content delivery to users. Associating users with base stations and
//! splitting bandwidth/cache between them is a mixed-binary utility
//! maximization; after the standard time-sharing relaxation and variable
//! substitution it becomes a linear program.
//!
//! Provided pieces:
//!
//! * [`scenario`] — network/task/popularity/channel description and
//!   deterministic random generation,
//! * [`problem`] — utility coefficients, the constraint system, and
//!   feasibility/utility evaluation,
//! * [`lp`] — a dense two-phase simplex used as the centralized baseline,
//!   plus an exhaustive binary oracle for tiny instances,
//! * [`subqp`] — the per-base-station proximal subproblem solved by a
//!   primal-dual interior-point method,
//! * [`admm`] — the distributed consensus solver built from those
//!   subproblems,
//! * [`rounding`] — recovery of binary association/caching decisions from a
//!   relaxed solution.
//!
//! The crate is `no_std` (with `alloc`); everything that touches files,
//! clocks or a terminal lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod admm;
pub mod linalg;
pub mod lp;
pub mod problem;
pub mod rounding;
pub mod scenario;
pub mod subqp;
