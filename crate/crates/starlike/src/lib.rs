//! Numerical verification toolkit for subordination-based starlikeness
//! criteria on the unit disk.
//!
//! The library is organized around a chain of results for normalized
//! analytic functions f(z) = z + a_{n+1} z^{n+1} + ... :
//!
//! * two subordination lemmas (`lemma21`, `lemma22`) that move a bound
//!   of the form p - z p'/mu < 1 + lambda z into bounds on p itself,
//! * three starlikeness criteria built on them (`thm1`, `thm2`, `thm3`):
//!   a membership test for S*, a starlikeness-order estimate with a
//!   deviation bound, and the same pair for a Bernardi-type integral
//!   transform of f,
//! * closed-form calculators for every bound that appears in the chain
//!   ([`criteria`]),
//! * truncated power series arithmetic ([`series`]) and circle sampling
//!   ([`disk`]) used to check the analytic statements numerically,
//! * a randomized verification and falsification harness ([`harness`]).
//!
//! Everything is deterministic: given the same inputs, grids, and seeds,
//! every function produces identical bytes in its reports.

pub mod builtin;
pub mod cli;
pub mod criteria;
pub mod disk;
mod error;
pub mod harness;
pub mod report;
pub mod series;
pub mod transform;

pub use error::Error;

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub use num_complex::Complex64;
