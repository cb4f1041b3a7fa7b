//! C interface to `critorbit`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`CritorbitStatus`]; on failure a message is available from
//! [`critorbit_last_error`] until the next call on the same thread. Strings
//! handed out by the library are NUL-terminated UTF-8 and must be released with
//! [`critorbit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use critorbit::cli::parse_poly_spec;
use critorbit::density::{attracting_density_scan, chebotarev_scan};
use critorbit::exactpoly::format_rational;
use critorbit::wreath::{check_fpp_bound, fpp_table, Proportion, WreathError};
use critorbit::{ExactPoly, FppTable};
use serde::Serialize;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CritorbitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Computation = 4,
    Panic = 5,
}

/// Polynomial with exact rational coefficients.
pub struct CritorbitPoly(ExactPoly);

/// Fixed-point proportion table of `[S_d]^n` for `n = 0..=n_max`.
pub struct CritorbitFppTable(FppTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CritorbitStatus, String);

fn fail(status: CritorbitStatus, msg: impl ToString) -> Failure {
    Failure(status, msg.to_string())
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CritorbitStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            CritorbitStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            CritorbitStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(CritorbitStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(CritorbitStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(CritorbitStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(CritorbitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(CritorbitStatus::Computation, "output contains NUL"))
}

fn json<T: Serialize>(v: &T) -> Result<*mut c_char, Failure> {
    let value = serde_json::to_value(v).map_err(|e| fail(CritorbitStatus::Computation, e))?;
    into_c(value.to_string())
}

fn computation(e: impl ToString) -> Failure {
    fail(CritorbitStatus::Computation, e)
}

/// Message for the most recent failure on this thread, or NULL after a
/// successful call. Owned by the library.
#[no_mangle]
pub extern "C" fn critorbit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn critorbit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a polynomial: comma-separated rationals, constant term first
/// (`"5,0,0,1"`), or a named polynomial (`"x3+5"`, `"x2+1"`).
///
/// # Safety
/// `spec` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_poly_parse(spec: *const c_char, out: *mut *mut CritorbitPoly) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = ptr::null_mut();
        let f = parse_poly_spec(text(spec, "spec")?).map_err(|e| fail(CritorbitStatus::InvalidArgument, e))?;
        *slot = Box::into_raw(Box::new(CritorbitPoly(f)));
        Ok(())
    })
}

/// # Safety
/// `poly` must be NULL or a handle from [`critorbit_poly_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn critorbit_poly_free(poly: *mut CritorbitPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_poly_degree(poly: *const CritorbitPoly, out: *mut usize) -> CritorbitStatus {
    guard(|| {
        *out_slot(out, "out")? = borrow(poly, "poly")?.0.degree();
        Ok(())
    })
}

/// Coefficients as a JSON array of rational strings, constant term first.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_poly_to_json(poly: *const CritorbitPoly, out: *mut *mut c_char) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = json(&borrow(poly, "poly")?.0)?;
        Ok(())
    })
}

/// Discriminant as an exact rational string `"a/b"`, such as `"-675/1"`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_poly_discriminant(
    poly: *const CritorbitPoly,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let disc = borrow(poly, "poly")?.0.discriminant().map_err(computation)?;
        *slot = into_c(format_rational(&disc.value))?;
        Ok(())
    })
}

fn check_workers(workers: usize) -> Result<(), Failure> {
    if workers == 0 {
        return Err(fail(CritorbitStatus::InvalidArgument, "workers must be at least 1"));
    }
    Ok(())
}

/// Attracting-density report over primes up to `bound`, as JSON.
/// `modulus == 0` disables the residue-class breakdown.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_density_scan_json(
    poly: *const CritorbitPoly,
    bound: u64,
    workers: usize,
    modulus: u64,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let f = &borrow(poly, "poly")?.0;
        check_workers(workers)?;
        let modulus = (modulus != 0).then_some(modulus);
        let scan = attracting_density_scan(f, bound, workers, modulus).map_err(computation)?;
        *slot = json(&scan.report)?;
        Ok(())
    })
}

/// Root frequency of `f'∘f^m` over primes up to `bound`, as JSON.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_chebotarev_scan_json(
    poly: *const CritorbitPoly,
    m: u32,
    bound: u64,
    workers: usize,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let f = &borrow(poly, "poly")?.0;
        check_workers(workers)?;
        let scan = chebotarev_scan(f, m, bound, workers).map_err(computation)?;
        *slot = json(&scan.report)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_new(d: u64, n_max: u32, out: *mut *mut CritorbitFppTable) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = ptr::null_mut();
        let table = fpp_table(d, n_max).map_err(|e| match e {
            WreathError::DegreeOutOfRange(_) => fail(CritorbitStatus::InvalidArgument, e),
            _ => computation(e),
        })?;
        *slot = Box::into_raw(Box::new(CritorbitFppTable(table)));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle from [`critorbit_fpp_table_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_free(table: *mut CritorbitFppTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

fn fpp_row(t: &FppTable, n: u32) -> Result<&critorbit::wreath::FppRow, Failure> {
    t.row(n)
        .ok_or_else(|| fail(CritorbitStatus::InvalidArgument, format!("n = {n} exceeds n_max = {}", t.n_max)))
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_n_max(table: *const CritorbitFppTable, out: *mut u32) -> CritorbitStatus {
    guard(|| {
        *out_slot(out, "out")? = borrow(table, "table")?.0.n_max;
        Ok(())
    })
}

/// Nearest doubles to the endpoints of `fpp([S_d]^n)`. They coincide when the
/// value is known exactly; `exact` reports which case applies.
///
/// # Safety
/// `table` must be a live handle; `lower`, `upper` and `exact` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_value(
    table: *const CritorbitFppTable,
    n: u32,
    lower: *mut f64,
    upper: *mut f64,
    exact: *mut bool,
) -> CritorbitStatus {
    guard(|| {
        let row = fpp_row(&borrow(table, "table")?.0, n)?;
        let v = &row.fpp_iter;
        *out_slot(lower, "lower")? = Proportion::Exact(v.lower().clone()).to_f64();
        *out_slot(upper, "upper")? = Proportion::Exact(v.upper().clone()).to_f64();
        *out_slot(exact, "exact")? = v.is_exact();
        Ok(())
    })
}

/// `fpp([S_d]^n)` as `"a/b"`, or `"a/b..c/d"` for a certified enclosure.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_value_string(
    table: *const CritorbitFppTable,
    n: u32,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = into_c(fpp_row(&borrow(table, "table")?.0, n)?.fpp_iter.to_string())?;
        Ok(())
    })
}

/// Whether `fpp([S_d]^n) <= 2/(n+2)` for every row of the table.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_check_bound(
    table: *const CritorbitFppTable,
    out: *mut bool,
) -> CritorbitStatus {
    guard(|| {
        *out_slot(out, "out")? = check_fpp_bound(&borrow(table, "table")?.0);
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_to_json(
    table: *const CritorbitFppTable,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = json(&borrow(table, "table")?.0)?;
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critorbit_fpp_table_to_csv(
    table: *const CritorbitFppTable,
    out: *mut *mut c_char,
) -> CritorbitStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        *slot = into_c(borrow(table, "table")?.0.to_csv())?;
        Ok(())
    })
}
