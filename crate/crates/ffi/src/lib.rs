//! C interface to bellkit.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `_free` function. Every fallible call returns a [`BkStatus`]; on failure
//! [`bk_last_error`] describes the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bellkit::braid::{bell_transform, yang_baxter_residual, BellTransformParams};
use bellkit::linalg::{mul, residual};
use bellkit::pauli::BitString;
use bellkit::suites::{run_suite, SuiteParams};
use bellkit::{CMatrix, Error, Report, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    SizeLimit = 4,
    NotUnitary = 5,
    BadJson = 6,
    Panic = 7,
}

/// A dense complex matrix.
pub struct BkMatrix {
    inner: CMatrix,
}

/// The outcome of a verification suite.
pub struct BkReport {
    inner: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> BkStatus {
    match err {
        Error::ShapeMismatch { .. } | Error::NotSquare { .. } | Error::LengthMismatch { .. } => BkStatus::ShapeMismatch,
        Error::SizeLimit { .. } => BkStatus::SizeLimit,
        Error::NotUnitary(_) => BkStatus::NotUnitary,
        _ => BkStatus::InvalidArgument,
    }
}

fn fail(status: BkStatus, msg: impl Into<String>) -> BkStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (BkStatus, String)>) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BkStatus::Ok,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(BkStatus::Panic, "panic inside bellkit"),
    }
}

fn lift(err: Error) -> (BkStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (BkStatus, String) {
    (BkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn matrix_ref<'a>(m: *const BkMatrix, what: &str) -> Result<&'a CMatrix, (BkStatus, String)> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null(what))
}

unsafe fn put_matrix(out: *mut *mut BkMatrix, m: CMatrix) -> Result<(), (BkStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(BkMatrix { inner: m }));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn bk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a `rows x cols` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut BkMatrix,
) -> BkStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let len = rows.checked_mul(cols).ok_or((BkStatus::SizeLimit, "rows * cols overflows".to_string()))?;
        let re = std::slice::from_raw_parts(re, len);
        let data = if im.is_null() {
            re.iter().map(|&r| C64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect()
        };
        put_matrix(out, CMatrix::new(rows, cols, data).map_err(lift)?)
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_free(m: *mut BkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_shape(m: *const BkMatrix, rows: *mut usize, cols: *mut usize) -> BkStatus {
    guard(|| {
        let m = matrix_ref(m, "matrix")?;
        if rows.is_null() || cols.is_null() {
            return Err(null("shape output"));
        }
        *rows = m.rows();
        *cols = m.cols();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_get(m: *const BkMatrix, row: usize, col: usize, re: *mut f64, im: *mut f64) -> BkStatus {
    guard(|| {
        let m = matrix_ref(m, "matrix")?;
        if re.is_null() || im.is_null() {
            return Err(null("entry output"));
        }
        if row >= m.rows() || col >= m.cols() {
            return Err((BkStatus::InvalidArgument, format!("entry ({row},{col}) outside {:?}", m.shape())));
        }
        let z = m[(row, col)];
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_mul(a: *const BkMatrix, b: *const BkMatrix, out: *mut *mut BkMatrix) -> BkStatus {
    guard(|| {
        let p = mul(matrix_ref(a, "a")?, matrix_ref(b, "b")?).map_err(lift)?;
        put_matrix(out, p)
    })
}

/// Largest entrywise modulus of `a - b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_residual(a: *const BkMatrix, b: *const BkMatrix, out: *mut f64) -> BkStatus {
    guard(|| {
        let r = residual(matrix_ref(a, "a")?, matrix_ref(b, "b")?).map_err(lift)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r;
        Ok(())
    })
}

/// The 4x4 Bell transform `B(epsilon, eta)`, each sign `+1` or `-1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_bell_transform(epsilon: i32, eta: i32, out: *mut *mut BkMatrix) -> BkStatus {
    guard(|| {
        let sign = |s: i32| i8::try_from(s).map_err(|_| (BkStatus::InvalidArgument, format!("sign {s}")));
        let p = BellTransformParams::new(sign(epsilon)?, sign(eta)?).map_err(lift)?;
        put_matrix(out, bell_transform(p))
    })
}

/// The twist permutation on `2n` qubits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_twist(n: usize, out: *mut *mut BkMatrix) -> BkStatus {
    guard(|| put_matrix(out, bellkit::bell::twist(n).map_err(lift)?))
}

/// The `2n`-qubit Bell state with labels given as the low `n` bits of `alpha`
/// and `beta`, most significant bit first. Returned as a column.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_multi_bell(n: usize, alpha: u64, beta: u64, out: *mut *mut BkMatrix) -> BkStatus {
    guard(|| {
        if n == 0 || n > bellkit::bell::MAX_PAIRS {
            return Err(lift(Error::SizeLimit { dim: n, limit: bellkit::bell::MAX_PAIRS }));
        }
        if alpha >> n != 0 || beta >> n != 0 {
            return Err((BkStatus::InvalidArgument, format!("labels need at most {n} bits")));
        }
        let a = BitString::from_index(alpha as usize, n);
        let b = BitString::from_index(beta as usize, n);
        put_matrix(out, bellkit::bell::multi_bell(n, &a, &b).map_err(lift)?)
    })
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_yang_baxter_residual(r: *const BkMatrix, local_dim: usize, out: *mut f64) -> BkStatus {
    guard(|| {
        let v = yang_baxter_residual(matrix_ref(r, "r")?, local_dim).map_err(lift)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = v;
        Ok(())
    })
}

/// Runs a named suite. `params_json` is null or a JSON object with any of
/// `family`, `d`, `n`, `gate`, `variant`, `trials`, `seed`, `tol`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params_json` null or NUL-terminated,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bk_run_suite(
    name: *const c_char,
    params_json: *const c_char,
    out: *mut *mut BkReport,
) -> BkStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let utf8 = |p: *const c_char| {
            CStr::from_ptr(p).to_str().map_err(|_| (BkStatus::InvalidArgument, "string is not UTF-8".to_string()))
        };
        let name = utf8(name)?;
        let params: SuiteParams = if params_json.is_null() {
            SuiteParams::default()
        } else {
            serde_json::from_str(utf8(params_json)?).map_err(|e| (BkStatus::BadJson, e.to_string()))?
        };
        let report = run_suite(name, &params).map_err(lift)?;
        let json = CString::new(report.to_json()).expect("json has no nul bytes");
        *out = Box::into_raw(Box::new(BkReport { inner: report, json }));
        Ok(())
    })
}

/// 1 when every case passed, 0 otherwise, -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_report_passed(r: *const BkReport) -> i32 {
    match r.as_ref() {
        Some(r) => r.inner.passed() as i32,
        None => -1,
    }
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_report_case_count(r: *const BkReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.cases.len())
}

/// Largest residual among the cases that assert an identity.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_report_max_residual(r: *const BkReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.inner.max_residual())
}

/// The report as JSON, owned by the handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_report_json(r: *const BkReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `r` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bk_report_free(r: *mut BkReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
