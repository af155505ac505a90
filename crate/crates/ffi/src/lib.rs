//! C ABI for `quarticlog`.
//!
//! Records and certificates are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`QlStatus`]; on failure a message is kept
//! per thread and can be read with [`ql_last_error_message`]. Strings returned through
//! out-parameters are owned by the caller and released with [`ql_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;

use quarticlog::certificate::{export_certificate, import_certificate};
use quarticlog::dyadic::{factor_quartic_over_q2, hilbert_2, hilbert_odd};
use quarticlog::report::{csv_row, json_line};
use quarticlog::tower::Ord;
use quarticlog::units::UnitCertificate;
use quarticlog::verify::{verify_certificate, verify_theorem, Status, VerificationRecord, VerifyOptions, MAX_PRECISION};
use quarticlog::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the operation's domain, e.g. `q` not a prime `≡ 3 (mod 4)`.
    Domain = 2,
    /// Malformed certificate document or string argument.
    Parse = 3,
    /// A certificate parsed but one of its exact identities fails.
    Invariant = 4,
    Precision = 5,
    /// The requested field is not defined for this record.
    NotAvailable = 6,
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlVerdict {
    Pass = 0,
    Consistent = 1,
    Fail = 2,
    Skipped = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlOrdField {
    Plus = 0,
    Minus = 1,
    Eta4 = 2,
    Log = 3,
}

/// Opaque verification record.
pub struct QlRecord(VerificationRecord);

/// Opaque unit certificate.
pub struct QlCertificate(UnitCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> QlStatus {
    match e {
        Error::Domain(_) => QlStatus::Domain,
        Error::Parse(_) => QlStatus::Parse,
        Error::NotAUnit(_) => QlStatus::Invariant,
        Error::PrecisionExhausted { .. } => QlStatus::Precision,
        _ => QlStatus::Internal,
    }
}

fn fail(s: QlStatus, msg: &str) -> QlStatus {
    set_error(msg);
    s
}

fn guard(f: impl FnOnce() -> Result<(), QlStatus>) -> QlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QlStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: quarticlog::Result<T>) -> Result<T, QlStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn non_null<T>(p: *const T) -> Result<(), QlStatus> {
    if p.is_null() {
        Err(fail(QlStatus::NullPointer, "null pointer argument"))
    } else {
        Ok(())
    }
}

fn options(precision_bits: u32, timeout_secs: f64) -> VerifyOptions {
    let precision_bits = if precision_bits == 0 { 128 } else { precision_bits };
    VerifyOptions {
        precision_bits,
        max_precision_bits: precision_bits.max(MAX_PRECISION),
        timeout: (timeout_secs > 0.0).then(|| Duration::from_secs_f64(timeout_secs)),
        timings: false,
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), QlStatus> {
    let c = CString::new(s).map_err(|_| fail(QlStatus::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn ql_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ql_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Runs the full verification for `q`. `precision_bits = 0` selects the default 128;
/// `timeout_secs <= 0` removes the search time limit.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ql_verify(q: u64, precision_bits: u32, timeout_secs: f64, out: *mut *mut QlRecord) -> QlStatus {
    guard(|| {
        non_null(out)?;
        let r = lift(verify_theorem(q, &options(precision_bits, timeout_secs)))?;
        *out = Box::into_raw(Box::new(QlRecord(r)));
        Ok(())
    })
}

/// Verifies an imported certificate.
///
/// # Safety
/// `cert` must be a live handle from [`ql_certificate_import_json`]; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ql_verify_certificate(
    cert: *const QlCertificate,
    precision_bits: u32,
    out: *mut *mut QlRecord,
) -> QlStatus {
    guard(|| {
        non_null(cert)?;
        non_null(out)?;
        let r = lift(verify_certificate(&(*cert).0, &options(precision_bits, 0.0)))?;
        *out = Box::into_raw(Box::new(QlRecord(r)));
        Ok(())
    })
}

/// # Safety
/// `record` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_record_free(record: *mut QlRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}

/// # Safety
/// `record` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_record_q(record: *const QlRecord, out: *mut u64) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(out)?;
        *out = (*record).0.q;
        Ok(())
    })
}

/// # Safety
/// `record` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_record_status(record: *const QlRecord, out: *mut QlVerdict) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(out)?;
        *out = match (*record).0.status {
            Status::Pass => QlVerdict::Pass,
            Status::Consistent => QlVerdict::Consistent,
            Status::Fail => QlVerdict::Fail,
            Status::Skipped => QlVerdict::Skipped,
        };
        Ok(())
    })
}

/// Reads one of the recorded orders. `*is_exact` is 0 when only the lower bound
/// `*value` is certified. Returns `NotAvailable` for fields the case does not define.
///
/// # Safety
/// `record` must be a live handle; `value` and `is_exact` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_record_ord(
    record: *const QlRecord,
    field: QlOrdField,
    value: *mut i64,
    is_exact: *mut i32,
) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(value)?;
        non_null(is_exact)?;
        let r = &(*record).0;
        let o = match field {
            QlOrdField::Plus => r.ord_plus,
            QlOrdField::Minus => r.ord_minus,
            QlOrdField::Eta4 => r.ord_eta4,
            QlOrdField::Log => r.ord_log,
        };
        match o {
            Some(Ord::Exact(v)) => {
                *value = v;
                *is_exact = 1;
            }
            Some(Ord::AtLeast(v)) => {
                *value = v;
                *is_exact = 0;
            }
            None => return Err(fail(QlStatus::NotAvailable, "field not defined for this record")),
        }
        Ok(())
    })
}

/// `u mod 4` for `q ≡ 7 (mod 8)`.
///
/// # Safety
/// `record` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_record_u_mod4(record: *const QlRecord, out: *mut u32) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(out)?;
        match (*record).0.u_mod4 {
            Some(u) => *out = u32::from(u),
            None => return Err(fail(QlStatus::NotAvailable, "u mod 4 is defined for q ≡ 7 mod 8")),
        }
        Ok(())
    })
}

/// The record as one line of JSON.
///
/// # Safety
/// `record` must be a live handle and `out` writable; free the result with
/// [`ql_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ql_record_to_json(record: *const QlRecord, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(out)?;
        write_string(out, json_line(&(*record).0))
    })
}

/// The record as a CSV row in the fixed column order.
///
/// # Safety
/// As [`ql_record_to_json`].
#[no_mangle]
pub unsafe extern "C" fn ql_record_to_csv(record: *const QlRecord, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        non_null(record)?;
        non_null(out)?;
        write_string(out, csv_row(&(*record).0))
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and exactly checks a certificate document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_certificate_import_json(json: *const c_char, out: *mut *mut QlCertificate) -> QlStatus {
    guard(|| {
        non_null(json)?;
        non_null(out)?;
        let text = CStr::from_ptr(json).to_str().map_err(|_| fail(QlStatus::Parse, "certificate is not UTF-8"))?;
        let cert = lift(import_certificate(text))?;
        *out = Box::into_raw(Box::new(QlCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `cert` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_certificate_export_json(cert: *const QlCertificate, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        non_null(cert)?;
        non_null(out)?;
        write_string(out, export_certificate(&(*cert).0))
    })
}

/// # Safety
/// `cert` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ql_certificate_free(cert: *mut QlCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

fn rational(num: i64, den: i64) -> Result<BigRational, QlStatus> {
    if den == 0 {
        return Err(fail(QlStatus::Domain, "zero denominator"));
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Hilbert symbol `(a_num/a_den, b_num/b_den)` over ℚ₂; writes ±1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_hilbert_2(a_num: i64, a_den: i64, b_num: i64, b_den: i64, out: *mut i32) -> QlStatus {
    guard(|| {
        non_null(out)?;
        *out = lift(hilbert_2(&rational(a_num, a_den)?, &rational(b_num, b_den)?))?;
        Ok(())
    })
}

/// Hilbert symbol over ℚ_p for an odd prime `p`; writes ±1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_hilbert_odd(
    p: u64,
    a_num: i64,
    a_den: i64,
    b_num: i64,
    b_den: i64,
    out: *mut i32,
) -> QlStatus {
    guard(|| {
        non_null(out)?;
        *out = lift(hilbert_odd(p, &rational(a_num, a_den)?, &rational(b_num, b_den)?))?;
        Ok(())
    })
}

/// Splitting type of `x⁴ + q` over ℚ₂: writes up to `capacity` pairs `(e, f)` and the
/// number of factors to `*count`. `BufferTooSmall` still reports `*count`.
///
/// # Safety
/// `e_out` and `f_out` must have room for `capacity` entries; `count` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_factor_quartic(
    q: u64,
    e_out: *mut u32,
    f_out: *mut u32,
    capacity: usize,
    count: *mut usize,
) -> QlStatus {
    guard(|| {
        non_null(count)?;
        let fac = lift(factor_quartic_over_q2(q))?;
        *count = fac.factors.len();
        if fac.factors.len() > capacity {
            return Err(fail(QlStatus::BufferTooSmall, "capacity below the number of factors"));
        }
        non_null(e_out)?;
        non_null(f_out)?;
        for (i, lf) in fac.factors.iter().enumerate() {
            *e_out.add(i) = lf.e;
            *f_out.add(i) = lf.f;
        }
        Ok(())
    })
}
