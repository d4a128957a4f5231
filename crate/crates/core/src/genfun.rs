//! Generating functions for k-regular partitions.
//!
//! The left side of every identity here is the product
//! `prod_{j>=1} (1 + x q^j + ... + x^k q^{kj})`, which counts k-regular
//! partitions by length (`x`) and weight (`q`). The right side is a k-fold sum
//! over tuples `(n_k, ..., n_1)`:
//!
//! ```text
//! sum  x^N q^E (1 - q)^e b(n_k, ..., n_1) / (q; q)_N
//! ```
//!
//! with `N = sum_j j*n_j`, `e = sum_j (j-1)*n_j`, and
//! `E = sum_j C(s_j + 1, 2)` where `s_j = n_k + ... + n_j`. The polynomials
//! `b` come from a k-term recurrence ([`BTable`]). For `k = 2` there is also
//! the intermediate multiple sum over repeat positions ([`lemma_sum_series`])
//! and its inner sums `a(m, n)`.
//!
//! Everything is computed on truncated series: x-degree at most `xmax`,
//! q-degree at most `qmax`, with exact integer coefficients.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::partitions::oracle_series;
use crate::qalg::{inv_poch_series, poch_monomial, q_factorial, q_int, IntPoly, QSeries, XQSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenfunError {
    #[error("k must be positive")]
    ZeroK,
    #[error("index tuple has {got} entries, expected k = {k}")]
    TupleLength { k: usize, got: usize },
    #[error("the lemma-direct right side exists only for k = 2 (got k = {0})")]
    LemmaRequiresK2(usize),
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `C(n + 1, 2) = 1 + 2 + ... + n`.
fn triangular(n: usize) -> usize {
    binom2(n + 1)
}

fn one_minus_q_pow(e: usize) -> IntPoly {
    &IntPoly::one() - &IntPoly::q_pow(e)
}

/// All `1 <= i_1 < ... < i_m <= upto`, lexicographically.
pub fn increasing_tuples(m: usize, upto: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, from: usize, upto: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let need = m - cur.len();
        for i in from..=upto {
            if upto - i + 1 < need {
                break;
            }
            cur.push(i);
            rec(m, i + 1, upto, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= upto {
        rec(m, 1, upto, &mut Vec::new(), &mut out);
    }
    out
}

/// `q^{sum i_j} prod_j (1 - q^{2m + n + 1 - i_j - j})`, one summand of `a(m, n)`.
fn a_summand(m: usize, n: usize, repeats: &[usize]) -> IntPoly {
    let total = 2 * m + n;
    let shift: usize = repeats.iter().sum();
    let product: IntPoly = repeats
        .iter()
        .enumerate()
        .map(|(j, &i)| one_minus_q_pow(total + 1 - i - (j + 1)))
        .product();
    product.shift(shift)
}

/// `a(m, n)` by summing over every choice of repeat positions.
pub fn a_direct(m: usize, n: usize) -> IntPoly {
    increasing_tuples(m, m + n)
        .iter()
        .map(|r| a_summand(m, n, r))
        .sum()
}

/// Table of `a(m, n)` for `m <= mmax`, `n <= nmax` from
/// `a(m, n) = q^m (1 - q^{2m+n-1}) a(m-1, n) + q^m a(m, n-1)`.
pub fn a_table(mmax: usize, nmax: usize) -> Vec<Vec<IntPoly>> {
    let mut t = vec![vec![IntPoly::zero(); nmax + 1]; mmax + 1];
    for m in 0..=mmax {
        for n in 0..=nmax {
            if m == 0 && n == 0 {
                t[0][0] = IntPoly::one();
                continue;
            }
            let mut acc = IntPoly::zero();
            if m > 0 {
                acc = &acc + &(&one_minus_q_pow(2 * m + n - 1) * &t[m - 1][n]).shift(m);
            }
            if n > 0 {
                acc = &acc + &t[m][n - 1].shift(m);
            }
            t[m][n] = acc;
        }
    }
    t
}

pub fn a_recur(m: usize, n: usize) -> IntPoly {
    a_table(m, n).swap_remove(m).swap_remove(n)
}

/// The corrected closed form `a(m, 0) = q^{C(m+1,2)} (q; q^2)_m`.
pub fn a_m0_closed_form(m: usize) -> IntPoly {
    poch_monomial(1, 1, 2, m).shift(triangular(m))
}

/// Table of `b(m, n)` from `b(m, n) = [2m+n-1]_q b(m-1, n) + q^m b(m, n-1)`.
pub fn b_table(mmax: usize, nmax: usize) -> Vec<Vec<IntPoly>> {
    let mut t = vec![vec![IntPoly::zero(); nmax + 1]; mmax + 1];
    for m in 0..=mmax {
        for n in 0..=nmax {
            if m == 0 && n == 0 {
                t[0][0] = IntPoly::one();
                continue;
            }
            let mut acc = IntPoly::zero();
            if m > 0 {
                acc = &acc + &(&q_int(2 * m + n - 1) * &t[m - 1][n]);
            }
            if n > 0 {
                acc = &acc + &t[m][n - 1].shift(m);
            }
            t[m][n] = acc;
        }
    }
    t
}

pub fn b_poly(m: usize, n: usize) -> IntPoly {
    b_table(m, n).swap_remove(m).swap_remove(n)
}

/// Every tuple of `k` non-negative integers summing to `total`, in
/// lexicographic order.
pub fn tuples_with_sum(k: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(k, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Index tuple helpers. Tuples are written `(n_k, ..., n_1)`, so slot `i`
/// holds `n_{k-i}`.
fn n_at(tuple: &[usize], j: usize) -> usize {
    tuple[tuple.len() - j]
}

/// `N = sum_j j * n_j`, the number of parts.
pub fn tuple_length(tuple: &[usize]) -> usize {
    (1..=tuple.len()).map(|j| j * n_at(tuple, j)).sum()
}

/// `E = sum_j C(s_j + 1, 2)` with `s_j = n_k + ... + n_j`: the weight of the
/// base partition with the tuple's multiplicity counts.
pub fn tuple_base_exponent(tuple: &[usize]) -> usize {
    let mut suffix = 0;
    let mut out = 0;
    for &n in tuple {
        suffix += n;
        out += triangular(suffix);
    }
    out
}

/// `e = sum_j (j - 1) * n_j`, the power of `(1 - q)`.
pub fn tuple_one_minus_q_power(tuple: &[usize]) -> usize {
    (1..=tuple.len()).map(|j| (j - 1) * n_at(tuple, j)).sum()
}

/// Memo table of the general-k polynomials `b(n_k, ..., n_1)`.
///
/// Filled level by level in the total `n_k + ... + n_1`; every entry depends
/// only on entries one level down, so a level is computed in parallel.
#[derive(Clone, Debug)]
pub struct BTable {
    k: usize,
    entries: HashMap<Vec<usize>, IntPoly>,
    max_level: usize,
}

impl BTable {
    /// Every tuple whose entries sum to at most `bound`.
    pub fn with_sum_bound(k: usize, bound: usize) -> Result<Self, GenfunError> {
        Self::fill(k, bound, |_| true)
    }

    /// Every tuple with `N = sum_j j*n_j <= max_length`.
    pub fn with_length_bound(k: usize, max_length: usize) -> Result<Self, GenfunError> {
        Self::fill(k, max_length, |t| tuple_length(t) <= max_length)
    }

    /// Fill the tuples with level `<= max_level` accepted by `keep`, which
    /// must be closed under decrementing any entry.
    pub fn fill(
        k: usize,
        max_level: usize,
        keep: impl Fn(&[usize]) -> bool + Sync,
    ) -> Result<Self, GenfunError> {
        if k == 0 {
            return Err(GenfunError::ZeroK);
        }
        let mut table = BTable {
            k,
            entries: HashMap::new(),
            max_level,
        };
        for level in 0..=max_level {
            let todo: Vec<Vec<usize>> = tuples_with_sum(k, level)
                .into_iter()
                .filter(|t| keep(t))
                .collect();
            let done: Vec<(Vec<usize>, IntPoly)> = todo
                .into_par_iter()
                .map(|t| {
                    let p = table.compute(&t);
                    (t, p)
                })
                .collect();
            table.entries.extend(done);
        }
        Ok(table)
    }

    fn compute(&self, tuple: &[usize]) -> IntPoly {
        let k = self.k;
        if tuple.iter().all(|&n| n == 0) {
            return IntPoly::one();
        }
        let total = tuple_length(tuple);
        let mut acc = IntPoly::zero();
        let mut prefix = IntPoly::one();
        let mut lower = tuple.to_vec();
        for j in 1..=k {
            if j >= 2 {
                // [N - j + 1]_q joins the product for this and every larger j.
                // Branches with N < j have n_j = 0 and never read it.
                prefix = &prefix * &q_int((total + 1).saturating_sub(j));
            }
            if n_at(tuple, j) == 0 {
                continue;
            }
            let shift: usize = (j + 1..=k).map(|i| (i - j) * n_at(tuple, i)).sum();
            let slot = k - j;
            lower[slot] -= 1;
            let prev = self
                .entries
                .get(&lower)
                .unwrap_or_else(|| panic!("b{lower:?} requested before it was filled"));
            acc = &acc + &(&prefix * prev).shift(shift);
            lower[slot] += 1;
        }
        acc
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&IntPoly> {
        self.entries.get(tuple)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in level order, lexicographic within a level.
    pub fn sorted_entries(&self) -> Vec<(&[usize], &IntPoly)> {
        let mut v: Vec<(&[usize], &IntPoly)> = self
            .entries
            .iter()
            .map(|(t, p)| (t.as_slice(), p))
            .collect();
        v.sort_by(|a, b| {
            let la: usize = a.0.iter().sum();
            let lb: usize = b.0.iter().sum();
            la.cmp(&lb).then_with(|| a.0.cmp(b.0))
        });
        v
    }
}

/// `b(n_k, ..., n_1)` for a single tuple, written in that order.
pub fn b_poly_k(k: usize, tuple: &[usize]) -> Result<IntPoly, GenfunError> {
    if k == 0 {
        return Err(GenfunError::ZeroK);
    }
    if tuple.len() != k {
        return Err(GenfunError::TupleLength {
            k,
            got: tuple.len(),
        });
    }
    let level = tuple.iter().sum();
    let table = BTable::fill(k, level, |t| t.iter().zip(tuple).all(|(a, b)| a <= b))?;
    Ok(table
        .get(tuple)
        .cloned()
        .expect("target tuple is in its own box"))
}

/// How the `1 / (q; q)_N` factor of each right-side summand is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    /// Numerator `q^E (1-q)^e b` times the series of `1/(q;q)_N`.
    Pochhammer,
    /// `(1-q)^e / (q;q)_N = 1 / ((1-q)^{N-e} [N]_q!)`, skipping the numerator factor.
    Cancelled,
}

/// Right side of the k-regular identity, truncated at `x^xmax`, `q^qmax`.
pub fn rhs_series(k: usize, xmax: usize, qmax: usize) -> Result<XQSeries, GenfunError> {
    rhs_series_with(k, xmax, qmax, Denominator::Pochhammer)
}

pub fn rhs_series_with(
    k: usize,
    xmax: usize,
    qmax: usize,
    denominator: Denominator,
) -> Result<XQSeries, GenfunError> {
    let table = BTable::with_length_bound(k, xmax)?;
    // A tuple contributes from q^E upward, since b has constant term 1.
    let tuples: Vec<(&[usize], &IntPoly)> = table
        .sorted_entries()
        .into_iter()
        .filter(|(t, _)| tuple_base_exponent(t) <= qmax)
        .collect();
    let summands: Vec<(usize, QSeries)> = tuples
        .par_iter()
        .map(|&(t, b)| (tuple_length(t), rhs_summand(t, b, qmax, denominator)))
        .collect();
    let mut out = XQSeries::zero(xmax, qmax);
    for (len, s) in &summands {
        out.add_term(*len, s);
    }
    Ok(out)
}

fn rhs_summand(tuple: &[usize], b: &IntPoly, qmax: usize, denominator: Denominator) -> QSeries {
    let total = tuple_length(tuple);
    let exp = tuple_base_exponent(tuple);
    let e = tuple_one_minus_q_power(tuple);
    let lead = QSeries::from_poly(b, qmax).shift(exp);
    match denominator {
        Denominator::Pochhammer => {
            let num = lead.mul_poly(&one_minus_q_pow(1).pow(e as u32));
            num.mul(&inv_poch_series(total, qmax))
        }
        Denominator::Cancelled => {
            let parts: usize = tuple.iter().sum();
            let den = &one_minus_q_pow(1).pow(parts as u32) * &q_factorial(total);
            let inv = QSeries::from_poly(&den, qmax)
                .recip()
                .expect("constant term 1");
            lead.mul(&inv)
        }
    }
}

/// Left side: `prod_{j=1}^{qmax} (1 + x q^j + ... + x^k q^{kj})`, truncated.
/// Factors with `j > qmax` only touch q-degrees above `qmax`.
pub fn lhs_series(k: usize, xmax: usize, qmax: usize) -> Result<XQSeries, GenfunError> {
    if k == 0 {
        return Err(GenfunError::ZeroK);
    }
    let mut cur: Vec<QSeries> = vec![QSeries::zero(qmax); xmax + 1];
    cur[0] = QSeries::one(qmax);
    for j in 1..=qmax {
        let mut next = cur.clone();
        for (len, s) in cur.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for c in 1..=k {
                if len + c > xmax || c * j > qmax {
                    break;
                }
                next[len + c] = next[len + c].add(&s.shift(c * j));
            }
        }
        cur = next;
    }
    let mut out = XQSeries::zero(xmax, qmax);
    for (len, s) in cur.iter().enumerate() {
        out.add_term(len, s);
    }
    Ok(out)
}

/// One summand of the k = 2 multiple sum: the generating function of the
/// (base, lambda) pairs for `m` pairs at `repeats` among `m + n` sizes,
/// `q^{C(m+n+1,2) + sum i_j} prod (1 - q^{2m+n+1-i_j-j}) / (q;q)_{2m+n}`.
pub fn lemma_term(m: usize, n: usize, repeats: &[usize], qmax: usize) -> QSeries {
    let num = a_summand(m, n, repeats).shift(triangular(m + n));
    QSeries::from_poly(&num, qmax).mul(&inv_poch_series(2 * m + n, qmax))
}

/// The k = 2 multiple sum over `(m, n, i_1 < ... < i_m)`, each term built
/// from its repeat positions rather than from any recurrence.
pub fn lemma_sum_series(xmax: usize, qmax: usize) -> XQSeries {
    let mut jobs = Vec::new();
    for m in 0..=xmax / 2 {
        for n in 0..=xmax - 2 * m {
            if triangular(m + n) + triangular(m) <= qmax {
                jobs.push((m, n));
            }
        }
    }
    let summands: Vec<(usize, QSeries)> = jobs
        .par_iter()
        .map(|&(m, n)| {
            let base = triangular(m + n);
            let num: IntPoly = increasing_tuples(m, m + n)
                .iter()
                .filter(|r| base + r.iter().sum::<usize>() <= qmax)
                .map(|r| a_summand(m, n, r))
                .sum();
            let s =
                QSeries::from_poly(&num.shift(base), qmax).mul(&inv_poch_series(2 * m + n, qmax));
            (2 * m + n, s)
        })
        .collect();
    let mut out = XQSeries::zero(xmax, qmax);
    for (len, s) in &summands {
        out.add_term(*len, s);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeftMethod {
    Product,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RightMethod {
    Recurrence,
    LemmaDirect,
}

impl LeftMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LeftMethod::Product => "product",
            LeftMethod::Enumeration => "enumeration",
        }
    }
}

impl RightMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RightMethod::Recurrence => "recurrence",
            RightMethod::LemmaDirect => "lemma-direct",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub x: usize,
    pub q: usize,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a coefficientwise comparison of the two sides.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub k: usize,
    pub xmax: usize,
    pub qmax: usize,
    pub status: Status,
    pub left_method: LeftMethod,
    pub right_method: RightMethod,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

pub fn verify_identity(
    k: usize,
    xmax: usize,
    qmax: usize,
    left: LeftMethod,
    right: RightMethod,
) -> Result<VerificationReport, GenfunError> {
    if k == 0 {
        return Err(GenfunError::ZeroK);
    }
    if right == RightMethod::LemmaDirect && k != 2 {
        return Err(GenfunError::LemmaRequiresK2(k));
    }
    let start = Instant::now();
    let lhs = match left {
        LeftMethod::Product => lhs_series(k, xmax, qmax)?,
        LeftMethod::Enumeration => oracle_series(k, xmax, qmax),
    };
    let rhs = match right {
        RightMethod::Recurrence => rhs_series(k, xmax, qmax)?,
        RightMethod::LemmaDirect => lemma_sum_series(xmax, qmax),
    };
    let mismatches: Vec<Mismatch> = lhs
        .diff(&rhs)
        .into_iter()
        .map(|(x, q, l, r)| Mismatch {
            x,
            q,
            lhs: l.to_string(),
            rhs: r.to_string(),
        })
        .collect();
    Ok(VerificationReport {
        k,
        xmax,
        qmax,
        status: if mismatches.is_empty() {
            Status::Verified
        } else {
            Status::Mismatch
        },
        left_method: left,
        right_method: right,
        mismatches,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Index pairs `(m, n)` with `m + n <= bound` where `a_direct`, `a_recur`
/// and `q^{C(m+1,2)} (1-q)^m b(m, n)` do not all agree.
pub fn ab_relation_failures(bound: usize) -> Vec<(usize, usize)> {
    let a = a_table(bound, bound);
    let b = b_table(bound, bound);
    let mut out = Vec::new();
    for m in 0..=bound {
        for n in 0..=bound - m {
            let via_b = (&one_minus_q_pow(1).pow(m as u32) * &b[m][n]).shift(triangular(m));
            let direct = a_direct(m, n);
            if direct != a[m][n] || direct != via_b {
                out.push((m, n));
            }
        }
    }
    out
}

pub fn ab_relation_check(bound: usize) -> bool {
    ab_relation_failures(bound).is_empty()
}

/// Degree bound `D(m, n) = max(2m+n-2 + D(m-1, n), m + D(m, n-1))`, `D(0, n) = 0`.
pub fn b_degree(m: usize, n: usize) -> usize {
    let mut d = vec![vec![0usize; n + 1]; m + 1];
    for i in 1..=m {
        for j in 0..=n {
            let from_m = 2 * i + j - 2 + d[i - 1][j];
            let from_n = if j > 0 { i + d[i][j - 1] } else { 0 };
            d[i][j] = from_m.max(from_n);
        }
    }
    d[m][n]
}
