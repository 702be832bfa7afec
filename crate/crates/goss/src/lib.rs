//! Exact arithmetic for special values of Goss L-series at s = 1 over the
//! two class-number-one coefficient rings
//!
//! * `A0 = F_q[t]` (Carlitz module), and
//! * `A1 = F_3[t, e] / (e^2 - t^3 + t + 1)` (its genus-one Drinfeld-Hayes
//!   module),
//!
//! together with everything needed to verify the classical special-value
//! identities to a configurable truncated-Laurent precision: monic
//! enumeration and sign/degree data, truncated Laurent arithmetic in
//! extensions of the completion at infinity, twisted polynomials and the
//! module exponential/logarithm in exact and Laurent backends, periods by
//! two methods, torsion points, Anderson special polynomials with exact
//! integrality checks, Dirichlet characters, L-values, twisted harmonic
//! series, dual coefficients, and partial zeta identities.
//!
//! The `verify` module packages the whole identity suite into reports; the
//! companion `goss-cli` crate exposes it on the command line.

pub mod dirichlet;
pub mod drinfeld;
pub mod field;
pub mod fqpoly;
pub mod laurent;
pub mod logalg;
pub mod lvalues;
pub mod rings;
pub mod sums;
pub mod twisted;
pub mod verify;

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum GossError {
    #[error("zero element has no sign or degree")]
    ZeroElement,
    #[error("element is not an irreducible monic: {0}")]
    NotIrreducible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("working field cannot represent the value: {0}")]
    InsufficientField(String),
    #[error("newton iteration failed to converge")]
    NoConvergence,
    #[error("root is not simple to working precision")]
    MultipleRoot,
    #[error("no n-th root of the leading coefficient in the constant field")]
    NoRootInField,
    #[error("valuation not divisible by n; a ramified extension is needed")]
    RamificationNeeded,
    #[error("value is zero to working precision")]
    ZeroToPrecision,
    #[error("laurent backend ran out of precision: {0}")]
    PrecisionExhausted(String),
    #[error("logarithm argument outside the convergence disc")]
    DivergentInput,
    #[error("special polynomial coefficient has a denominator at z-index {n}")]
    IntegralityViolation { n: u32 },
    #[error("series did not stabilize below the degree cap {cap}")]
    NoStabilization { cap: u32 },
    #[error("linear system is singular to working precision")]
    SingularSystem,
    #[error("period methods disagree: {0}")]
    MethodDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GossError>;
