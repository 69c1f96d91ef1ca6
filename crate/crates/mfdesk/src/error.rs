//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by coefficient computation, bound evaluation, Diophantine
/// machinery, and density scans.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested an empty index range (e.g. a table of limit 0).
    #[error("empty range: {0}")]
    EmptyRange(String),

    /// A configured resource cap (table size, point-counting prime,
    /// factorization effort) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The curve reduces to a singular cubic mod p.
    #[error("bad reduction: curve y^2 = x^3 + {a}x + {b} is singular mod {p}")]
    BadReduction { a: i64, b: i64, p: u64 },

    /// Input coefficient data violates |lambda(p)| <= 2 p^((k-1)/2).
    #[error("Deligne bound violated at p = {p}: |lambda(p)| = {lambda_abs} > 2 p^((k-1)/2)")]
    DeligneViolation { p: u64, lambda_abs: String },

    /// The Frobenius angle is 0 or pi (repeated root of the Hecke polynomial).
    #[error("degenerate Frobenius angle (theta in {{0, pi}}) at p = {p}")]
    DegenerateAngle { p: u64 },

    /// Argument outside the mathematical domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bound formula requires a larger weight than supplied.
    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    /// Certified interval arithmetic could not separate the quantities at the
    /// requested precision; retry with more bits.
    #[error("precision exhausted: {0}")]
    Precision(String),

    /// F(p,q) = q^d f(p/q) vanished: the rational is a root of f.
    #[error("zero form: {0} is a root of the polynomial")]
    ZeroForm(String),

    /// Polynomial degree outside the operation's domain.
    #[error("degree error: {0}")]
    Degree(String),

    /// A multiplicative function violates the Wirsing growth hypotheses.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Prime divisor outside the classification range.
    #[error("range error: {0}")]
    Range(String),

    /// Malformed input (parse errors, invalid polynomial, singular curve...).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
