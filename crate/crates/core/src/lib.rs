//! Certified verification of explicit estimates around the Dirichlet divisor
//! problem: exact summatory functions, interval arithmetic with MPFR
//! endpoints, and per-claim range checkers that emit pass/fail records.

pub mod ball;
pub mod bernoulli;
pub mod chowla_walum;
pub mod claims;
pub mod constants;
pub mod context;
pub mod divisor_theorem;
pub mod error;
pub mod expsums;
pub mod mertens_compare;
pub mod rational;
pub mod remainders;
pub mod report;
pub mod sieve;
pub mod summatory;
pub mod tables;

pub use ball::{check_inequality, check_strict_inequality, BallReal, PrecisionPolicy, Status};
pub use error::{Error, Result};
pub use rational::ExactRational;
