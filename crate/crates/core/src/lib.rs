//! Numerical machinery for the m-point p-Laplacian fractional boundary value problem
//!
//! ```text
//! D^γ( φ_p( D^α u(t) ) ) + a(t) f(t, u(t), u'(t)) = 0,   t ∈ [0, ∞),
//! u(0) = u'(0) = 0,
//! lim_{t→∞} D^(α-1) u(t) = Σ η_i I^β u'(ξ_i),   D^α u(0) = 0,
//! ```
//!
//! with `0 < γ <= 1`, `2 < α <= 3`, `β > 0`. The crate provides
//! Riemann–Liouville quadrature ([`fractional`]), the closed-form Green
//! kernel ([`green`]), hypothesis checks and the existence certificate
//! ([`problem`]), and fixed-point solvers for the equivalent integral
//! equation ([`solver`]).
//!
//! Row-independent work (quadrature weights, kernel matrices, operator
//! applications) runs on rayon when the `parallel` feature is enabled and
//! [`Execution::Parallel`] is selected.

// `!(x > 0.0)` is used deliberately so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod fractional;
pub mod green;
pub mod grid;
pub mod problem;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use exec::Execution;
pub use fractional::{rl_derivative, rl_integral, rl_integral_at, weighted_sup_norm, ProductQuadrature};
pub use green::{green_solve_linear, GreenKernel, LinearSolution};
pub use grid::{Grid, SampledFunction};
pub use problem::{
    check_h1, check_h3, compute_m, estimate_b_delta, existence_certificate, CertificateOptions,
    ExistenceCertificate, H1Check, H3Check, Nonlinearity, ProblemSpec, Profile, WeightedBound,
};
pub use solver::{
    apply_t, linear_oracle_solve, picard_run, picard_solve, picard_with_operator, residual_report, FixedPointOperator, PicardRun, ResidualReport,
    Solution, SolverConfig, WeightedFunction,
};
pub use special::{gamma, phi_p, phi_q};
