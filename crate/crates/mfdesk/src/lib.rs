//! mfdesk: desk-scale verification of modular-form coefficient bounds.
//!
//! The crate computes exact Fourier coefficients of modular forms
//! (Ramanujan tau, elliptic-curve Frobenius traces, user tables), evaluates
//! every explicit upper/lower bound on their growth in log scale, runs the
//! effective-Liouville Diophantine machinery (heights, convergents,
//! unimodular gaps), and empirically verifies the Mertens / harmonic /
//! Wirsing asymptotics that drive the density-one arguments.
//!
//! Modules:
//! - [`coeff`]: exact coefficients (q-expansion, point counting, Hecke
//!   recurrence, Frobenius angles, Binet evaluation)
//! - [`bounds`]: bound evaluators and the sandwich verification harness
//! - [`diophantine`]: heights, explicit Liouville constants, convergents,
//!   unimodular-gap checks
//! - [`density`]: prime classifications, generated multiplicative sets,
//!   Mertens/Wirsing verification
//! - [`hp`]: arbitrary-precision real arithmetic
//! - [`arith`]: primality, factorization, sieves
//! - [`cli`]: the `mfdesk` command-line front end
//!
//! Every operation is a pure function of immutable inputs and may be called
//! concurrently; table construction parallelizes internally but is
//! bit-deterministic regardless of thread count.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod coeff;
pub mod density;
pub mod diophantine;
pub mod error;
pub mod hp;

pub use error::{Error, Result};

/// Crate version embedded in every report for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
