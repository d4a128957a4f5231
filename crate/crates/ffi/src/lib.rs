//! C ABI for the `kregular` toolkit.
//!
//! Every entry point returns a [`KrStatus`]. Results come back through out
//! pointers; objects are opaque handles released with the matching `*_free`
//! function, strings are NUL-terminated UTF-8 released with
//! [`kr_string_free`]. After a non-`Ok` status, [`kr_last_error_message`]
//! describes the failure on the calling thread.
//!
//! Panics never cross the boundary: they are caught and reported as
//! [`KrStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kregular::analysis::scan_unimodality;
use kregular::bijection::{build, reduce, BijectionError, ReducedPair};
use kregular::genfun::{
    a_recur, b_poly, b_poly_k, verify_identity, GenfunError, LeftMethod, RightMethod,
};
use kregular::partitions::{Partition, PartitionError};
use kregular::qalg::IntPoly;

/// Result code of every `kr_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range, e.g. `k == 0` or a wrong tuple length.
    InvalidArgument = 2,
    /// Partition text could not be parsed, or a string was not UTF-8.
    Parse = 3,
    /// The partition has a part repeated more than `k` times.
    NotRegular = 4,
    /// Base and lambda do not form a valid reduced pair.
    InvalidPair = 5,
    /// An internal panic was caught.
    Panic = 6,
}

/// Opaque polynomial in `q` with integer coefficients.
pub struct KrPoly(IntPoly);

/// Opaque reduced pair: base multiplicity word plus auxiliary partition.
pub struct KrReducedPair(ReducedPair);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(KrStatus, String);

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        Failure(KrStatus::Parse, e.to_string())
    }
}

impl From<BijectionError> for Failure {
    fn from(e: BijectionError) -> Self {
        let status = match e {
            BijectionError::NotRegular { .. } => KrStatus::NotRegular,
            BijectionError::ZeroK => KrStatus::InvalidArgument,
            _ => KrStatus::InvalidPair,
        };
        Failure(status, e.to_string())
    }
}

impl From<GenfunError> for Failure {
    fn from(e: GenfunError) -> Self {
        Failure(KrStatus::InvalidArgument, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(KrStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            KrStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(KrStatus::Parse, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(KrStatus::Parse, format!("{what}: {e}")))
}

unsafe fn read_slice<'a>(p: *const usize, len: usize, what: &str) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(KrStatus::Panic, e.to_string()))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `kr_*` call on the same thread.
#[no_mangle]
pub extern "C" fn kr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Two-index polynomial b(m, n).
///
/// # Safety
/// `out` must be valid for writing a handle.
#[no_mangle]
pub unsafe extern "C" fn kr_b_poly(m: usize, n: usize, out: *mut *mut KrPoly) -> KrStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(KrPoly(b_poly(m, n))))))
}

/// Polynomial a(m, n).
///
/// # Safety
/// `out` must be valid for writing a handle.
#[no_mangle]
pub unsafe extern "C" fn kr_a_poly(m: usize, n: usize, out: *mut *mut KrPoly) -> KrStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(KrPoly(a_recur(m, n))))))
}

/// General polynomial b(n_k, ..., n_1) for `tuple` of length `k`.
///
/// # Safety
/// `tuple` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_b_poly_k(
    k: usize,
    tuple: *const usize,
    len: usize,
    out: *mut *mut KrPoly,
) -> KrStatus {
    guard(|| {
        let t = read_slice(tuple, len, "tuple")?;
        let p = b_poly_k(k, t)?;
        write_out(out, Box::into_raw(Box::new(KrPoly(p))))
    })
}

/// Degree of `p`, or -1 for the zero polynomial.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_poly_degree(p: *const KrPoly, out: *mut i64) -> KrStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        let d = p.0.degree().map_or(-1, |d| d as i64);
        write_out(out, d)
    })
}

/// Value of `p` at q = 1 as a decimal string.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_poly_eval_one(p: *const KrPoly, out: *mut *mut c_char) -> KrStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        write_string(out, p.0.eval_one().to_string())
    })
}

/// JSON form `{"var":"q","coeffs":["1","2",...]}`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_poly_to_json(p: *const KrPoly, out: *mut *mut c_char) -> KrStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        write_string(out, to_json(&p.0)?)
    })
}

/// Human-readable form such as `1 + 2q - q^3`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_poly_to_string(p: *const KrPoly, out: *mut *mut c_char) -> KrStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        write_string(out, p.0.to_string())
    })
}

/// Release a polynomial. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kr_poly_free(p: *mut KrPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Reduce a k-regular partition given as space-separated, weakly increasing
/// parts, e.g. `"3 6 10 10"`.
///
/// # Safety
/// `partition` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_reduce(
    k: usize,
    partition: *const c_char,
    out: *mut *mut KrReducedPair,
) -> KrStatus {
    guard(|| {
        let p: Partition = read_str(partition, "partition")?.parse()?;
        let pair = reduce(&p, k)?;
        write_out(out, Box::into_raw(Box::new(KrReducedPair(pair))))
    })
}

/// Reduced pair from base partition text (sizes 1..s) and lambda text.
///
/// # Safety
/// `base` and `lambda` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_pair_new(
    k: usize,
    base: *const c_char,
    lambda: *const c_char,
    out: *mut *mut KrReducedPair,
) -> KrStatus {
    guard(|| {
        let base: Partition = read_str(base, "base")?.parse()?;
        let lambda: Partition = read_str(lambda, "lambda")?.parse()?;
        let pair = ReducedPair::from_base(k, &base, lambda)?;
        write_out(out, Box::into_raw(Box::new(KrReducedPair(pair))))
    })
}

/// Base partition text of a pair.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_pair_base(
    pair: *const KrReducedPair,
    out: *mut *mut c_char,
) -> KrStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        write_string(out, pair.0.base().to_string())
    })
}

/// Lambda text of a pair.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_pair_lambda(
    pair: *const KrReducedPair,
    out: *mut *mut c_char,
) -> KrStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        write_string(out, pair.0.lambda().to_string())
    })
}

/// Inverse of [`kr_reduce`]: the partition text.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_build(pair: *const KrReducedPair, out: *mut *mut c_char) -> KrStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        write_string(out, build(&pair.0).to_string())
    })
}

/// Release a pair. Null is ignored.
///
/// # Safety
/// `pair` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kr_pair_free(pair: *mut KrReducedPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Compare the product side with the recurrence side through x^xmax q^qmax.
/// Writes the report as JSON and sets `verified`.
///
/// # Safety
/// `verified` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_verify_identity_json(
    k: usize,
    xmax: usize,
    qmax: usize,
    verified: *mut bool,
    out: *mut *mut c_char,
) -> KrStatus {
    guard(|| {
        if verified.is_null() || out.is_null() {
            return Err(null("output pointer"));
        }
        let report = verify_identity(k, xmax, qmax, LeftMethod::Product, RightMethod::Recurrence)?;
        write_out(verified, report.is_verified())?;
        write_string(out, to_json(&report)?)
    })
}

/// Unimodality scan of b over tuples of length k with index sum at most
/// `sum_bound`. Writes the report as JSON and the counterexample count.
///
/// # Safety
/// `counterexamples` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kr_scan_unimodality_json(
    k: usize,
    sum_bound: usize,
    counterexamples: *mut usize,
    out: *mut *mut c_char,
) -> KrStatus {
    guard(|| {
        if counterexamples.is_null() || out.is_null() {
            return Err(null("output pointer"));
        }
        let report = scan_unimodality(k, sum_bound)
            .map_err(|e| Failure(KrStatus::InvalidArgument, e.to_string()))?;
        write_out(counterexamples, report.counterexamples.len())?;
        write_string(out, to_json(&report)?)
    })
}
