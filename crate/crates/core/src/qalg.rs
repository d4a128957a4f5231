//! Exact polynomial and truncated power-series arithmetic in `q`.
//!
//! Three value types live here:
//! - [`IntPoly`]: a dense polynomial in `q` with arbitrary-precision integer
//!   coefficients, always normalized (no trailing zeros, zero is empty).
//! - [`QSeries`]: a power series known exactly through `q^trunc`.
//! - [`XQSeries`]: a bivariate series, stored as a map from the exponent of `x`
//!   to a [`QSeries`] sharing one truncation order.
//!
//! Coefficients never overflow and never round. Combining series with
//! different truncation orders keeps the smaller order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QalgError {
    #[error("series constant term {0} is not a unit; reciprocal does not exist over the integers")]
    NonUnitConstant(BigInt),
    #[error("mismatched q-truncation: {left} vs {right}")]
    MismatchedTruncation { left: usize, right: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("polynomial division is not exact over the integers")]
    InexactDivision,
    #[error("expected variable \"q\", found \"{0}\"")]
    UnknownVariable(String),
    #[error("invalid integer coefficient \"{0}\"")]
    BadCoefficient(String),
    #[error("series serialization requires a \"trunc\" field")]
    MissingTruncation,
    #[error("series has {len} coefficients but trunc {trunc} requires {expected}", expected = trunc + 1)]
    LengthMismatch { len: usize, trunc: usize },
}

fn strip_trailing_zeros(coeffs: &mut Vec<BigInt>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

/// Dense polynomial in `q` with exact integer coefficients.
///
/// Index `i` of the coefficient vector is the coefficient of `q^i`. The
/// vector never ends in a zero, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CoeffJson", try_from = "CoeffJson")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        strip_trailing_zeros(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self { coeffs }
    }

    /// `q^exp`.
    pub fn q_pow(exp: usize) -> Self {
        Self::monomial(1, exp)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^exp`; zero beyond the degree.
    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exponent of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Multiply by `q^exp`.
    pub fn shift(&self, exp: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); exp];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value at `q = 1`, i.e. the sum of the coefficients.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    /// Exact quotient `self / divisor`, failing if the division leaves a
    /// remainder or needs non-integer coefficients.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly, QalgError> {
        let dd = divisor.degree().ok_or(QalgError::ZeroDivisor)?;
        let Some(nd) = self.degree() else {
            return Ok(Self::zero());
        };
        if nd < dd {
            return Err(QalgError::InexactDivision);
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return Err(QalgError::InexactDivision);
            }
            let factor = top / lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * d;
            }
            quot[shift] = factor;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(QalgError::InexactDivision);
        }
        Ok(Self::from_coeffs(quot))
    }
}

impl From<QSeries> for IntPoly {
    fn from(s: QSeries) -> Self {
        IntPoly::from_coeffs(s.coeffs)
    }
}

fn add_coeffs(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

fn sub_coeffs(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o -= s;
    }
    out
}

/// Schoolbook product keeping only exponents `< cap`.
fn mul_coeffs(a: &[BigInt], b: &[BigInt], cap: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() || cap == 0 {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(cap);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::from_coeffs(add_coeffs(&self.coeffs, &rhs.coeffs))
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::from_coeffs(sub_coeffs(&self.coeffs, &rhs.coeffs))
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::from_coeffs(mul_coeffs(&self.coeffs, &rhs.coeffs, usize::MAX))
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl std::iter::Sum for IntPoly {
    fn sum<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

/// Human-readable form, lowest degree first: `1 + 2q - q^3`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (exp, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
        }
        first = false;
        match exp {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if exp == 1 {
                    f.write_str("q")?;
                } else {
                    write!(f, "q^{exp}")?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Power series in `q` known exactly through `q^trunc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CoeffJson", try_from = "CoeffJson")]
pub struct QSeries {
    /// Always `trunc + 1` entries.
    coeffs: Vec<BigInt>,
    trunc: usize,
}

impl QSeries {
    pub fn zero(trunc: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); trunc + 1],
            trunc,
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn from_poly(p: &IntPoly, trunc: usize) -> Self {
        let mut coeffs: Vec<BigInt> = p.coeffs.iter().take(trunc + 1).cloned().collect();
        coeffs.resize(trunc + 1, BigInt::zero());
        Self { coeffs, trunc }
    }

    fn from_raw(mut coeffs: Vec<BigInt>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, BigInt::zero());
        Self { coeffs, trunc }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^exp`, or `None` past the truncation order.
    pub fn coeff(&self, exp: usize) -> Option<&BigInt> {
        self.coeffs.get(exp)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The retained coefficients as a polynomial.
    pub fn to_poly(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.clone())
    }

    /// Lower the truncation order. Orders are never raised.
    pub fn truncate(&self, trunc: usize) -> Self {
        let trunc = trunc.min(self.trunc);
        Self {
            coeffs: self.coeffs[..=trunc].to_vec(),
            trunc,
        }
    }

    pub fn add(&self, rhs: &QSeries) -> QSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let coeffs = self.coeffs[..=trunc]
            .iter()
            .zip(&rhs.coeffs[..=trunc])
            .map(|(a, b)| a + b)
            .collect();
        Self { coeffs, trunc }
    }

    pub fn sub(&self, rhs: &QSeries) -> QSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let coeffs = self.coeffs[..=trunc]
            .iter()
            .zip(&rhs.coeffs[..=trunc])
            .map(|(a, b)| a - b)
            .collect();
        Self { coeffs, trunc }
    }

    pub fn mul(&self, rhs: &QSeries) -> QSeries {
        let trunc = self.trunc.min(rhs.trunc);
        Self::from_raw(
            mul_coeffs(&self.coeffs[..=trunc], &rhs.coeffs[..=trunc], trunc + 1),
            trunc,
        )
    }

    /// Product with a polynomial, kept at this series' order.
    pub fn mul_poly(&self, p: &IntPoly) -> QSeries {
        Self::from_raw(
            mul_coeffs(&self.coeffs, &p.coeffs, self.trunc + 1),
            self.trunc,
        )
    }

    /// Multiply by `q^exp`; terms pushed past the order are dropped.
    pub fn shift(&self, exp: usize) -> QSeries {
        let mut coeffs = vec![BigInt::zero(); exp.min(self.trunc + 1)];
        coeffs.extend(
            self.coeffs
                .iter()
                .take((self.trunc + 1).saturating_sub(exp))
                .cloned(),
        );
        Self::from_raw(coeffs, self.trunc)
    }

    /// Multiplicative inverse through the same order. The constant term must
    /// be `+1` or `-1`.
    pub fn recip(&self) -> Result<QSeries, QalgError> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(QalgError::NonUnitConstant(c0.clone()));
        }
        // c0 is its own inverse.
        let mut out: Vec<BigInt> = Vec::with_capacity(self.trunc + 1);
        out.push(c0.clone());
        for n in 1..=self.trunc {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                let s = &self.coeffs[i];
                if !s.is_zero() {
                    acc += s * &out[n - i];
                }
            }
            out.push(-(acc * c0));
        }
        Ok(Self {
            coeffs: out,
            trunc: self.trunc,
        })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)?;
        write!(f, " + O(q^{})", self.trunc + 1)
    }
}

pub fn poly_add(p: &IntPoly, r: &IntPoly) -> IntPoly {
    p + r
}

pub fn poly_mul(p: &IntPoly, r: &IntPoly) -> IntPoly {
    p * r
}

/// `[n]_q = 1 + q + ... + q^{n-1}`; `[0]_q = 0`.
pub fn q_int(n: usize) -> IntPoly {
    IntPoly::from_coeffs(vec![BigInt::one(); n])
}

/// `[n]_q! = [n]_q [n-1]_q ... [1]_q`.
pub fn q_factorial(n: usize) -> IntPoly {
    (1..=n).map(q_int).product()
}

/// `(q; q)_n = (1 - q)(1 - q^2)...(1 - q^n)`.
pub fn poch_finite(n: usize) -> IntPoly {
    poch_monomial(1, 1, 1, n)
}

/// `(c q^start; q^step)_n = prod_{j<n} (1 - c q^{start + j*step})`.
pub fn poch_monomial(c: i64, start: usize, step: usize, n: usize) -> IntPoly {
    (0..n)
        .map(|j| &IntPoly::one() - &IntPoly::monomial(c, start + j * step))
        .product()
}

pub fn series_from_poly(p: &IntPoly, trunc: usize) -> QSeries {
    QSeries::from_poly(p, trunc)
}

pub fn series_recip(s: &QSeries) -> Result<QSeries, QalgError> {
    s.recip()
}

/// Truncation of `1/(q;q)_n`: partitions into parts of size at most `n`.
pub fn inv_poch_series(n: usize, trunc: usize) -> QSeries {
    QSeries::from_poly(&poch_finite(n), trunc)
        .recip()
        .expect("(q;q)_n has constant term 1")
}

/// Bivariate series `sum_L x^L * S_L(q)` kept for `L <= xmax`, each `S_L`
/// exact through `q^qmax`. Zero coefficient series are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XQSeries {
    terms: BTreeMap<usize, QSeries>,
    xmax: usize,
    qmax: usize,
}

impl XQSeries {
    pub fn zero(xmax: usize, qmax: usize) -> Self {
        Self {
            terms: BTreeMap::new(),
            xmax,
            qmax,
        }
    }

    pub fn one(xmax: usize, qmax: usize) -> Self {
        let mut s = Self::zero(xmax, qmax);
        s.add_term(0, &QSeries::one(qmax));
        s
    }

    pub fn xmax(&self) -> usize {
        self.xmax
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    pub fn terms(&self) -> &BTreeMap<usize, QSeries> {
        &self.terms
    }

    /// Coefficient series of `x^xdeg`, `None` if it is zero or out of range.
    pub fn get(&self, xdeg: usize) -> Option<&QSeries> {
        self.terms.get(&xdeg)
    }

    /// Coefficient of `x^xdeg q^qdeg`; zero outside the retained window.
    pub fn coeff(&self, xdeg: usize, qdeg: usize) -> BigInt {
        self.terms
            .get(&xdeg)
            .and_then(|s| s.coeff(qdeg).cloned())
            .unwrap_or_default()
    }

    /// Accumulate `x^xdeg * s`. Degrees above `xmax` are dropped and `s` is
    /// cut to `qmax`; `s` must be exact at least through `qmax`.
    pub fn add_term(&mut self, xdeg: usize, s: &QSeries) {
        if xdeg > self.xmax {
            return;
        }
        debug_assert!(s.trunc() >= self.qmax, "term truncated below qmax");
        let s = s.truncate(self.qmax);
        let merged = match self.terms.remove(&xdeg) {
            Some(prev) => prev.add(&s),
            None => s,
        };
        if !merged.is_zero() {
            self.terms.insert(xdeg, merged);
        }
    }

    pub fn add(&self, rhs: &XQSeries) -> Result<XQSeries, QalgError> {
        self.check_qmax(rhs)?;
        let mut out = XQSeries::zero(self.xmax.min(rhs.xmax), self.qmax);
        for (&d, s) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(d, s);
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &XQSeries) -> Result<XQSeries, QalgError> {
        self.check_qmax(rhs)?;
        let xmax = self.xmax.min(rhs.xmax);
        let mut out = XQSeries::zero(xmax, self.qmax);
        for (&du, su) in &self.terms {
            for (&dv, sv) in &rhs.terms {
                if du + dv <= xmax {
                    out.add_term(du + dv, &su.mul(sv));
                }
            }
        }
        Ok(out)
    }

    fn check_qmax(&self, rhs: &XQSeries) -> Result<(), QalgError> {
        if self.qmax != rhs.qmax {
            return Err(QalgError::MismatchedTruncation {
                left: self.qmax,
                right: rhs.qmax,
            });
        }
        Ok(())
    }

    /// Every `(x, q, lhs, rhs)` where the two series differ in the common window.
    pub fn diff(&self, rhs: &XQSeries) -> Vec<(usize, usize, BigInt, BigInt)> {
        let xmax = self.xmax.min(rhs.xmax);
        let qmax = self.qmax.min(rhs.qmax);
        let mut out = Vec::new();
        for x in 0..=xmax {
            for q in 0..=qmax {
                let l = self.coeff(x, q);
                let r = rhs.coeff(x, q);
                if l != r {
                    out.push((x, q, l, r));
                }
            }
        }
        out
    }
}

pub fn xq_mul(u: &XQSeries, v: &XQSeries) -> Result<XQSeries, QalgError> {
    u.mul(v)
}

/// Wire form shared by [`IntPoly`] and [`QSeries`]: decimal-string
/// coefficients so values of any size round-trip exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffJson {
    pub var: String,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
}

fn parse_coeffs(strs: &[String]) -> Result<Vec<BigInt>, QalgError> {
    strs.iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|_| QalgError::BadCoefficient(s.clone()))
        })
        .collect()
}

impl From<IntPoly> for CoeffJson {
    fn from(p: IntPoly) -> Self {
        CoeffJson {
            var: "q".into(),
            coeffs: p.coeffs.iter().map(ToString::to_string).collect(),
            trunc: None,
        }
    }
}

impl TryFrom<CoeffJson> for IntPoly {
    type Error = QalgError;
    fn try_from(j: CoeffJson) -> Result<Self, QalgError> {
        if j.var != "q" {
            return Err(QalgError::UnknownVariable(j.var));
        }
        Ok(IntPoly::from_coeffs(parse_coeffs(&j.coeffs)?))
    }
}

impl From<QSeries> for CoeffJson {
    fn from(s: QSeries) -> Self {
        CoeffJson {
            var: "q".into(),
            coeffs: s.coeffs.iter().map(ToString::to_string).collect(),
            trunc: Some(s.trunc),
        }
    }
}

impl TryFrom<CoeffJson> for QSeries {
    type Error = QalgError;
    fn try_from(j: CoeffJson) -> Result<Self, QalgError> {
        if j.var != "q" {
            return Err(QalgError::UnknownVariable(j.var));
        }
        let trunc = j.trunc.ok_or(QalgError::MissingTruncation)?;
        if j.coeffs.len() != trunc + 1 {
            return Err(QalgError::LengthMismatch {
                len: j.coeffs.len(),
                trunc,
            });
        }
        Ok(QSeries {
            coeffs: parse_coeffs(&j.coeffs)?,
            trunc,
        })
    }
}

/// Serialize a big integer as a decimal string.
pub fn serialize_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// JSON form of an [`XQSeries`]: `{"xmax", "qmax", "terms": [{"x", "series"}]}`
/// with terms in increasing x-degree.
pub fn xq_to_json(s: &XQSeries) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = s
        .terms
        .iter()
        .map(|(d, q)| serde_json::json!({ "x": d, "series": CoeffJson::from(q.clone()) }))
        .collect();
    serde_json::json!({ "xmax": s.xmax, "qmax": s.qmax, "terms": terms })
}
