//! Inequalities and approximations for beta and gamma distributions.
//!
//! The crate is organised around a set of closed-form bounds and the
//! reference oracles used to check them:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`special`] | log-gamma, Stirling remainder, incomplete beta/gamma, normal CDF, Bernoulli KL, the quadrature oracle for `Q_{a,b}` |
//! | [`q_bounds`] | bounds on `Q_{a,b}(x) = a ∫₀¹ y^{a-1}(1-xy)^{b-1} dy` and the induced bounds on `B_{a,b}` |
//! | [`gamma_bounds`] | gamma-limit versions of the `Q_{a,b}` bounds |
//! | [`expo_bounds`] | exponential, Hoeffding- and Bernstein-type tail bounds |
//! | [`gauss_approx`] | Gaussian tail bounds and the Gaussian approximation of `Beta(a,a)` |
//! | [`harness`] | grid verification engine, comparison tables and figure data |
//!
//! Every bound evaluator is a pure function. Results come back as a
//! [`BoundEval`], which carries the value, its natural logarithm (computed
//! directly, so it stays finite when the value itself under- or overflows),
//! the direction in which the bound holds for the given parameters, and
//! whether the evaluation point lies in the stated validity region.

pub mod bound;
pub mod expo_bounds;
pub mod gamma_bounds;
pub mod gauss_approx;
pub mod harness;
pub mod q_bounds;
pub mod special;

pub use bound::{BoundEval, BoundId, Direction, Family, Tail, XRegion};
pub use special::{ExtReal, Params};

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape parameters a = {a}, b = {b}: both must be finite and positive")]
    InvalidParams { a: f64, b: f64 },

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{routine} did not converge for {detail}")]
    NoConvergence {
        routine: &'static str,
        detail: String,
    },

    #[error("bound `{0}` is not handled by this evaluator")]
    UnsupportedBound(BoundId),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
