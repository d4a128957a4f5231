//! Empirical checks on the `b` polynomials: unimodality scans, the `q -> 1`
//! limits, and the comparison with the Bessel-type q-analog.
//!
//! At `q = 1` the `k = 2` polynomials collapse to `(2m+n)! / (m! n! 2^m)`,
//! the Bessel polynomial coefficient `(N+M)! / ((N-M)! M! 2^M)` with
//! `N = m + n`, `M = m`. The variant `(2m+n)! / (m! (m+n)! 2^m)` is not even
//! an integer at `(m, n) = (2, 2)`; [`mixed_bessel_limit`] keeps it around
//! only so the difference stays visible in tests.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::genfun::{b_table, BTable, GenfunError};
use crate::qalg::{q_factorial, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Genfun(#[from] GenfunError),
}

/// True iff the coefficients `c_0..c_r` (internal zeros included) weakly
/// rise to a peak and then weakly fall.
pub fn is_unimodal(p: &IntPoly) -> bool {
    let c = p.coeffs();
    let mut i = 0;
    while i + 1 < c.len() && c[i] <= c[i + 1] {
        i += 1;
    }
    while i + 1 < c.len() && c[i] >= c[i + 1] {
        i += 1;
    }
    i + 1 >= c.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub tuple: Vec<usize>,
    pub poly: IntPoly,
}

/// Result of a unimodality scan over all tuples with entry sum `<= sum_bound`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub k: usize,
    pub sum_bound: usize,
    pub tuples_checked: usize,
    /// `C(sum_bound + k, k)`, the number of tuples in range.
    #[serde(serialize_with = "crate::qalg::serialize_decimal")]
    pub expected_tuples: BigInt,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl ScanReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Scan every `b(n_k, ..., n_1)` with `n_k + ... + n_1 <= sum_bound`.
pub fn scan_unimodality(k: usize, sum_bound: usize) -> Result<ScanReport, AnalysisError> {
    let start = Instant::now();
    let table = BTable::with_sum_bound(k, sum_bound)?;
    let entries = table
        .sorted_entries()
        .into_iter()
        .map(|(t, p)| (t.to_vec(), p.clone()));
    let mut report = scan_entries(k, sum_bound, entries);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Scan an arbitrary list of indexed polynomials. Counterexamples come back
/// in input order.
pub fn scan_entries(
    k: usize,
    sum_bound: usize,
    entries: impl IntoIterator<Item = (Vec<usize>, IntPoly)>,
) -> ScanReport {
    let start = Instant::now();
    let entries: Vec<(Vec<usize>, IntPoly)> = entries.into_iter().collect();
    let flags: Vec<bool> = entries.par_iter().map(|(_, p)| is_unimodal(p)).collect();
    let counterexamples = entries
        .iter()
        .zip(&flags)
        .filter(|(_, &ok)| !ok)
        .map(|((t, p), _)| Counterexample {
            tuple: t.clone(),
            poly: p.clone(),
        })
        .collect();
    ScanReport {
        k,
        sum_bound,
        tuples_checked: entries.len(),
        expected_tuples: binomial(sum_bound + k, k),
        counterexamples,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Exact value at `q = 1`.
pub fn limit_q1(p: &IntPoly) -> BigInt {
    p.eval_one()
}

/// `(2m+n)! / (m! n! 2^m)`.
pub fn bessel_coeff(m: usize, n: usize) -> BigInt {
    factorial(2 * m + n) / (factorial(m) * factorial(n) * (BigInt::one() << m))
}

/// `(2m+n)! / (m! (m+n)! 2^m)` when it is an integer.
pub fn mixed_bessel_limit(m: usize, n: usize) -> Option<BigInt> {
    let num = factorial(2 * m + n);
    let den = factorial(m) * factorial(m + n) * (BigInt::one() << m);
    (&num % &den).is_zero().then(|| num / den)
}

/// Pairs `(m, n)`, `m + n <= bound`, where `b(m, n)` at `q = 1` differs from
/// [`bessel_coeff`].
pub fn bessel_limit_failures(bound: usize) -> Vec<(usize, usize)> {
    let b = b_table(bound, bound);
    let mut out = Vec::new();
    for m in 0..=bound {
        for n in 0..=bound - m {
            if limit_q1(&b[m][n]) != bessel_coeff(m, n) {
                out.push((m, n));
            }
        }
    }
    out
}

pub fn bessel_limit_check(bound: usize) -> bool {
    bessel_limit_failures(bound).is_empty()
}

/// `[a+c]_q! / ([a]_q! [c]_q!)`.
pub fn q_bessel_coeff(a: usize, c: usize) -> IntPoly {
    q_factorial(a + c)
        .div_exact(&(&q_factorial(a) * &q_factorial(c)))
        .expect("Gaussian binomial is a polynomial")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QBesselMismatch {
    pub m: usize,
    pub n: usize,
    pub b: IntPoly,
    pub q_analog: IntPoly,
}

/// Every `(m, n)` with `m >= 1`, `m + n <= bound` where `b(m, n)` differs from
/// `[2m+n]_q! / ([m+n]_q! [m]_q!)`.
pub fn q_bessel_mismatch(bound: usize) -> Vec<QBesselMismatch> {
    let b = b_table(bound, bound);
    let mut out = Vec::new();
    for m in 1..=bound {
        for n in 0..=bound - m {
            let q_analog = q_bessel_coeff(m + n, m);
            if q_analog != b[m][n] {
                out.push(QBesselMismatch {
                    m,
                    n,
                    b: b[m][n].clone(),
                    q_analog,
                });
            }
        }
    }
    out
}
