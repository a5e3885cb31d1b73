//! Exact arithmetic for Lehmer-Pierce sequences of real quadratic units.
//!
//! For a unit u > 1 of the ring of integers of a real quadratic field, the
//! Lehmer-Pierce sequence is delta_n = N(u^n - 1). This crate computes the
//! sequence exactly, factors its terms, finds primitive prime divisors, and
//! combines an analytic bound with finite criterion/factor checks to produce
//! machine-checkable Zsigmondy-bound certificates, including a full
//! classification of the failing terms for every unit in the ranges covered
//! by the built-in verification reports.
//!
//! Entry points:
//! - [`quadring::QuadInt`]: exact elements (x + y*sqrt(d))/2.
//! - [`seqkit`]: the sequence itself, by closed form and by direct norm.
//! - [`cyclo`]: cyclotomic machinery and the N(phi_n(u)) | n^2 criterion.
//! - [`factorint`]: primality testing, factorization, persistent cache.
//! - [`search`]: the analytic bound g, derived constants, unit enumeration.
//! - [`ppd`]: primitive-prime-divisor reports and Zsigmondy certificates.
//!
//! The `examples/` directory has one runnable program per capability; a thin
//! `lehmer-pierce` binary exposes the same operations as subcommands.

pub mod cyclo;
pub mod error;
pub mod factorint;
pub mod ppd;
pub mod quadring;
pub mod real;
pub mod report;
pub mod search;
pub mod seqkit;

pub use error::{Error, Result};
pub use quadring::{named_unit, MinPoly, QuadInt};
pub use seqkit::{delta, delta_direct, delta_prime_index, DeltaSeq};
