//! Pointwise mean-value data for Taylor expansions.
//!
//! Given a `C^(k+1)` function `f`, a center `c`, and a point `x`, the
//! Lagrange form of the Taylor remainder guarantees a point `xi` on the
//! segment from `c` to `x` where the order-`(k+1)` derivative terms account
//! exactly for the remainder. This crate computes the canonical such point:
//! the one with the least segment parameter `tau` in `[0, 1]`, so that
//! `xi = c + tau (x - c)` is a well-defined, measurable function of `x`.
//!
//! The pieces:
//!
//! - [`multiindex`]: exponent vectors, factorials, monomials.
//! - [`expr`]: a small expression language with symbolic differentiation,
//!   plus the [`expr::FunctionModel`] abstraction and a polynomial model.
//! - [`taylor`]: Taylor coefficients and the parametrized remainder
//!   `F(x, t)`.
//! - [`interpolator`]: least-root search for `tau`, the rational-grid
//!   approximants `tau_n`, the two-point symmetric variant, and grid scans
//!   with jump detection.
//! - [`stochastic`]: seeded simulations that exercise the interpolator as a
//!   measurable selection (a delta-method demo and a pathwise second-order
//!   expansion along random walks).

pub mod expr;
pub mod interpolator;
pub mod multiindex;
pub mod stochastic;
pub mod taylor;
pub mod testing;

pub use expr::{EvalError, ExprModel, FunctionModel, ParseError, PolynomialModel};
pub use interpolator::{
    scan_xi, tau, tau_n, tau_n_table, xi, xi_symmetric, InterpolationResult, JumpFlag,
    RootError, RootMethod, RootOptions, ScanRow, ScanSeries, TauNEntry, TauNSeries,
};
pub use multiindex::MultiIndex;
pub use stochastic::{
    delta_method_sim, ito_sim, relative_residual, DeltaReport, DeltaRow, ItoPathRow, ItoReport,
    RandomStream, StochasticError,
};
pub use taylor::{remainder_f, taylor_coefficients, RemainderFn, TaylorError, TaylorPolynomial};
