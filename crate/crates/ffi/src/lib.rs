//! C ABI over `combq`.
//!
//! Every fallible call returns a [`CombqStatus`]; on failure the message is
//! kept per thread and read back with [`combq_last_error`]. Handles and
//! strings returned through out-pointers are owned by the caller and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use combq::cli::render::{Fmt, Render};
use combq::cli::{bomb_report, scan_report, table_report, transport_report, CliError};
use combq::cyclotomic::Cyclotomic;
use combq::groups::mz_splitter;
use combq::linalg::CycMatrix;
use combq::{Error, ErrorKind};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    /// Malformed text input, including invalid UTF-8.
    Parse = 2,
    /// Input violated a documented precondition.
    Contract = 3,
    /// A size or enumeration ceiling was exceeded.
    Resource = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Opaque exact cyclotomic number.
pub struct CombqCyclotomic(Cyclotomic);

/// Opaque exact square or rectangular matrix over a cyclotomic field.
pub struct CombqMatrix(CycMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CombqStatus {
    match e.kind() {
        ErrorKind::Parse => CombqStatus::Parse,
        ErrorKind::Contract => CombqStatus::Contract,
        ErrorKind::Resource => CombqStatus::Resource,
    }
}

struct Failure(CombqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Core(e) => e.into(),
            CliError::Io(e) => Failure(CombqStatus::Contract, e.to_string()),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CombqStatus::Null, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CombqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CombqStatus::Ok
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
            set_error(&format!("internal panic: {msg}"));
            CombqStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(CombqStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn cyc<'a>(p: *const CombqCyclotomic, what: &str) -> Result<&'a Cyclotomic, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn mat<'a>(p: *const CombqMatrix, what: &str) -> Result<&'a CycMatrix, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(CombqStatus::Contract, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn combq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn combq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn combq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a literal such as `1/2*z - 1/2*z^3@8` or `3/4`.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_parse(literal: *const c_char, out: *mut *mut CombqCyclotomic) -> CombqStatus {
    guard(|| {
        let c: Cyclotomic = text(literal, "literal")?.parse()?;
        put(out, CombqCyclotomic(c))
    })
}

/// `ζ_n^k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_root_of_unity(n: u32, k: i64, out: *mut *mut CombqCyclotomic) -> CombqStatus {
    guard(|| put(out, CombqCyclotomic(Cyclotomic::root_of_unity(n, k)?)))
}

/// Binary operation selector for [`combq_cyclotomic_binary`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombqOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// `a op b`, promoting to the common conductor.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_binary(
    op: CombqOp,
    a: *const CombqCyclotomic,
    b: *const CombqCyclotomic,
    out: *mut *mut CombqCyclotomic,
) -> CombqStatus {
    guard(|| {
        let (a, b) = (cyc(a, "a")?, cyc(b, "b")?);
        let r = match op {
            CombqOp::Add => a.try_add(b)?,
            CombqOp::Sub => a.try_sub(b)?,
            CombqOp::Mul => a.try_mul(b)?,
            CombqOp::Div => a.try_div(b)?,
        };
        put(out, CombqCyclotomic(r))
    })
}

/// Complex conjugate.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_conjugate(
    a: *const CombqCyclotomic,
    out: *mut *mut CombqCyclotomic,
) -> CombqStatus {
    guard(|| put(out, CombqCyclotomic(cyc(a, "a")?.conjugate())))
}

/// Exact equality.
///
/// # Safety
/// `a`, `b` must be live handles; `equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_equal(
    a: *const CombqCyclotomic,
    b: *const CombqCyclotomic,
    equal: *mut bool,
) -> CombqStatus {
    guard(|| {
        let e = cyc(a, "a")? == cyc(b, "b")?;
        *equal.as_mut().ok_or_else(|| null("equal"))? = e;
        Ok(())
    })
}

/// Whether the value lies in ℚ.
///
/// # Safety
/// `a` must be a live handle; `rational` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_is_rational(a: *const CombqCyclotomic, rational: *mut bool) -> CombqStatus {
    guard(|| {
        let r = cyc(a, "a")?.is_rational();
        *rational.as_mut().ok_or_else(|| null("rational"))? = r;
        Ok(())
    })
}

/// Floating-point embedding with `ζ_n = e^{2πi/n}`.
///
/// # Safety
/// `a` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_to_complex(
    a: *const CombqCyclotomic,
    re: *mut f64,
    im: *mut f64,
) -> CombqStatus {
    guard(|| {
        let z = cyc(a, "a")?.to_complex();
        *re.as_mut().ok_or_else(|| null("re"))? = z.re;
        *im.as_mut().ok_or_else(|| null("im"))? = z.im;
        Ok(())
    })
}

/// Canonical text form; free with [`combq_string_free`].
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_to_string(a: *const CombqCyclotomic, out: *mut *mut c_char) -> CombqStatus {
    guard(|| put_string(out, cyc(a, "a")?.to_string()))
}

/// # Safety
/// `a` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn combq_cyclotomic_free(a: *mut CombqCyclotomic) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Row-major matrix from `rows * cols` literals.
///
/// # Safety
/// `entries` must point to `rows * cols` NUL-terminated strings; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_from_literals(
    rows: usize,
    cols: usize,
    entries: *const *const c_char,
    out: *mut *mut CombqMatrix,
) -> CombqStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        let count = rows.checked_mul(cols).ok_or_else(|| Failure(CombqStatus::Resource, "matrix too large".into()))?;
        let mut values = Vec::with_capacity(count);
        for i in 0..count {
            values.push(text(*entries.add(i), "entry")?.parse::<Cyclotomic>()?);
        }
        put(out, CombqMatrix(CycMatrix::new(rows, cols, values)?))
    })
}

/// The order-`n` splitter `S_n`; `n = 8` gives the balanced beam splitter.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_splitter(n: u32, out: *mut *mut CombqMatrix) -> CombqStatus {
    guard(|| put(out, CombqMatrix(mz_splitter(n)?)))
}

/// `a · b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_compose(
    a: *const CombqMatrix,
    b: *const CombqMatrix,
    out: *mut *mut CombqMatrix,
) -> CombqStatus {
    guard(|| put(out, CombqMatrix(mat(a, "a")?.compose(mat(b, "b")?)?)))
}

/// `m^t` for a square matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_power(m: *const CombqMatrix, t: u64, out: *mut *mut CombqMatrix) -> CombqStatus {
    guard(|| put(out, CombqMatrix(mat(m, "m")?.power(t)?)))
}

/// Multiplicative order up to `bound`; writes 0 when none was found.
///
/// # Safety
/// `m` must be a live handle; `order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_order(m: *const CombqMatrix, bound: u64, order: *mut u64) -> CombqStatus {
    guard(|| {
        let o = mat(m, "m")?.order(bound)?.unwrap_or(0);
        *order.as_mut().ok_or_else(|| null("order"))? = o;
        Ok(())
    })
}

/// Exact test of `m m† = I`.
///
/// # Safety
/// `m` must be a live handle; `unitary` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_is_unitary(m: *const CombqMatrix, unitary: *mut bool) -> CombqStatus {
    guard(|| {
        let u = mat(m, "m")?.is_unitary();
        *unitary.as_mut().ok_or_else(|| null("unitary"))? = u;
        Ok(())
    })
}

/// Dimensions of `m`.
///
/// # Safety
/// `m` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_shape(m: *const CombqMatrix, rows: *mut usize, cols: *mut usize) -> CombqStatus {
    guard(|| {
        let m = mat(m, "m")?;
        *rows.as_mut().ok_or_else(|| null("rows"))? = m.rows();
        *cols.as_mut().ok_or_else(|| null("cols"))? = m.cols();
        Ok(())
    })
}

/// Copy of entry `(row, col)`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_get(
    m: *const CombqMatrix,
    row: usize,
    col: usize,
    out: *mut *mut CombqCyclotomic,
) -> CombqStatus {
    guard(|| {
        let m = mat(m, "m")?;
        if row >= m.rows() || col >= m.cols() {
            return Err(Failure(
                CombqStatus::Contract,
                format!("entry ({row}, {col}) outside {}x{}", m.rows(), m.cols()),
            ));
        }
        put(out, CombqCyclotomic(m.get(row, col).clone()))
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn combq_matrix_free(m: *mut CombqMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn json<T: Render>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(CombqStatus::Contract, e.to_string()))
}

/// Bomb-tester scenario table as JSON, floats rounded to `precision` digits.
///
/// # Safety
/// `out` must be writable; free the result with [`combq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn combq_bomb_json(precision: u32, out: *mut *mut c_char) -> CombqStatus {
    guard(|| put_string(out, json(&bomb_report(&Fmt { precision: precision as usize })?)?))
}

/// Zeno table of the eight powers of the balanced splitter as JSON.
///
/// # Safety
/// `out` must be writable; free the result with [`combq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn combq_zeno_table_json(out: *mut *mut c_char) -> CombqStatus {
    guard(|| put_string(out, json(&table_report()?)?))
}

/// Survival series of `S_n` up to `t_max` (0 means `n`) as JSON.
///
/// # Safety
/// `out` must be writable; free the result with [`combq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn combq_zeno_scan_json(
    n: u32,
    t_max: u64,
    precision: u32,
    out: *mut *mut c_char,
) -> CombqStatus {
    guard(|| {
        let tmax = (t_max > 0).then_some(t_max);
        put_string(out, json(&scan_report(n, tmax, &Fmt { precision: precision as usize })?)?)
    })
}

/// Evaluates a transport model given as JSON text.
///
/// # Safety
/// `model` must be a NUL-terminated string; `out` must be writable; free the
/// result with [`combq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn combq_transport_json(
    model: *const c_char,
    precision: u32,
    out: *mut *mut c_char,
) -> CombqStatus {
    guard(|| {
        let model = text(model, "model")?;
        if !model.trim_start().starts_with('{') {
            return Err(Failure(CombqStatus::Parse, "model must be JSON text".into()));
        }
        put_string(out, json(&transport_report(model, &Fmt { precision: precision as usize })?)?)
    })
}
