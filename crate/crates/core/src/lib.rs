//! Exact q-series toolkit for k-regular partitions.
//!
//! A k-regular partition repeats no part more than `k` times. The crate
//! provides
//! - [`qalg`]: exact polynomial and truncated power-series arithmetic,
//! - [`partitions`]: the partition model and brute-force enumeration,
//! - [`bijection`]: the map between k-regular partitions and
//!   (base partition, auxiliary partition) pairs,
//! - [`genfun`]: both sides of the k-fold generating-function identity, the
//!   `a`/`b` polynomial recurrences, and a coefficientwise verifier,
//! - [`analysis`]: unimodality scans and `q -> 1` limits,
//! - [`cli`]: the `kregular` command-line front end.

pub mod analysis;
pub mod bijection;
pub mod cli;
pub mod genfun;
pub mod partitions;
pub mod qalg;

pub use bijection::{build, reduce, reduce_trace, ReducedPair};
pub use genfun::{
    b_poly, b_poly_k, lhs_series, rhs_series, verify_identity, BTable, VerificationReport,
};
pub use partitions::{MultiplicityProfile, Partition};
pub use qalg::{IntPoly, QSeries, XQSeries};
