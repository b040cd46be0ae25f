//! C interface to padiso.
//!
//! Every function returns a [`PadisoStatus`]. Results come back through out
//! pointers; handles are opaque and freed with the matching `*_free`. On
//! failure, `padiso_last_error` gives a message for the calling thread.
//! Strings returned by the library are released with `padiso_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use padiso::job::{run_job_to_string, Overrides, EXIT_INTERNAL, EXIT_MATH, EXIT_OK, EXIT_SCHEMA};
use padiso::{Error, PadicContext, PadicElement};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadisoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The job description does not match the schema.
    Schema = 3,
    /// A mathematical precondition failed; see `padiso_last_error`.
    Math = 4,
    /// Division needing more precision than the operands carry.
    DivisionPrecision = 5,
    /// Operands come from different contexts.
    ContextMismatch = 6,
    InvalidParameter = 7,
    Internal = 8,
}

/// Opaque handle to `O_K / p^M` for an unramified `K`.
pub struct PadisoContext {
    inner: Arc<PadicContext>,
}

/// Opaque handle to an element of a context.
pub struct PadisoElement {
    inner: PadicElement,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).expect("no interior nul"));
}

fn status_of(e: &Error) -> PadisoStatus {
    match e {
        Error::DivisionPrecision { .. } => PadisoStatus::DivisionPrecision,
        Error::ContextMismatch => PadisoStatus::ContextMismatch,
        Error::InvalidParameter(_) | Error::NotPrime(_) | Error::PrecisionOverflow { .. } => {
            PadisoStatus::InvalidParameter
        }
        _ => PadisoStatus::Math,
    }
}

fn guard(f: impl FnOnce() -> PadisoStatus) -> PadisoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error");
            PadisoStatus::Internal
        }
    }
}

fn fail(e: Error) -> PadisoStatus {
    set_error(&format!("{}: {e}", e.kind()));
    status_of(&e)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PadisoStatus> {
    if s.is_null() {
        set_error("null pointer argument");
        return Err(PadisoStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        PadisoStatus::InvalidUtf8
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn padiso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn padiso_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn padiso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run a JSON job, as the command-line tool does with the same config.
/// `*report_out` receives the JSON report (also on failure, when the report
/// describes the error); `*exit_code_out`, if not null, receives the
/// command-line exit code (0, 2, 3 or 4).
///
/// # Safety
/// `config_json` must be a nul-terminated string; `report_out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn padiso_run_job(
    config_json: *const c_char,
    report_out: *mut *mut c_char,
    exit_code_out: *mut i32,
) -> PadisoStatus {
    guard(|| {
        if report_out.is_null() {
            set_error("null report pointer");
            return PadisoStatus::NullPointer;
        }
        *report_out = ptr::null_mut();
        let config = match read_str(config_json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let (code, report) = run_job_to_string(config, &Overrides::default());
        if !exit_code_out.is_null() {
            *exit_code_out = code;
        }
        *report_out = into_c_string(report);
        match code {
            EXIT_OK => PadisoStatus::Ok,
            EXIT_SCHEMA => {
                set_error("job does not match the schema");
                PadisoStatus::Schema
            }
            EXIT_MATH => {
                set_error("mathematical precondition failed");
                PadisoStatus::Math
            }
            EXIT_INTERNAL => {
                set_error("internal error");
                PadisoStatus::Internal
            }
            _ => PadisoStatus::Internal,
        }
    })
}

/// Create the context of precision `precision` over the unramified extension
/// of degree `degree` of `Q_p` (degree 1 is `Z/p^M`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padiso_context_new(
    p: u64,
    precision: u32,
    degree: usize,
    out: *mut *mut PadisoContext,
) -> PadisoStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return PadisoStatus::NullPointer;
        }
        *out = ptr::null_mut();
        match PadicContext::unramified(p, precision, degree) {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(PadisoContext { inner: ctx }));
                PadisoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `ctx` must come from `padiso_context_new` (or be null) and not be used
/// afterwards. Elements created from it stay valid.
#[no_mangle]
pub unsafe extern "C" fn padiso_context_free(ctx: *mut PadisoContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parse a base-10 integer (any sign or length) into the context.
///
/// # Safety
/// `ctx` must be a live context, `text` a nul-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_from_string(
    ctx: *const PadisoContext,
    text: *const c_char,
    out: *mut *mut PadisoElement,
) -> PadisoStatus {
    guard(|| {
        if ctx.is_null() || out.is_null() {
            set_error("null pointer argument");
            return PadisoStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let ctx = &(*ctx).inner;
        match ctx.parse_integer(text) {
            Ok(v) => {
                let e = PadicElement::new(ctx, ctx.from_u64(v));
                *out = Box::into_raw(Box::new(PadisoElement { inner: e }));
                PadisoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `e` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_free(e: *mut PadisoElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Decimal rendering: an integer for degree 1, `(c0, c1, ...)` otherwise.
///
/// # Safety
/// `e` must be a live element and `out` writable; free the result with
/// `padiso_string_free`.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_to_string(e: *const PadisoElement, out: *mut *mut c_char) -> PadisoStatus {
    guard(|| {
        if e.is_null() || out.is_null() {
            set_error("null pointer argument");
            return PadisoStatus::NullPointer;
        }
        let e = &(*e).inner;
        *out = into_c_string(e.context().format(&e.raw()));
        PadisoStatus::Ok
    })
}

/// p-adic valuation; the precision for zero.
///
/// # Safety
/// `e` must be a live element and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_valuation(e: *const PadisoElement, out: *mut u32) -> PadisoStatus {
    guard(|| {
        if e.is_null() || out.is_null() {
            set_error("null pointer argument");
            return PadisoStatus::NullPointer;
        }
        *out = (*e).inner.valuation();
        PadisoStatus::Ok
    })
}

unsafe fn binary(
    a: *const PadisoElement,
    b: *const PadisoElement,
    out: *mut *mut PadisoElement,
    op: impl FnOnce(&PadicElement, &PadicElement) -> padiso::Result<PadicElement>,
) -> PadisoStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer argument");
            return PadisoStatus::NullPointer;
        }
        *out = ptr::null_mut();
        match op(&(*a).inner, &(*b).inner) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(PadisoElement { inner: r }));
                PadisoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `*out = a + b`.
///
/// # Safety
/// `a`, `b` must be live elements and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_add(
    a: *const PadisoElement,
    b: *const PadisoElement,
    out: *mut *mut PadisoElement,
) -> PadisoStatus {
    binary(a, b, out, |x, y| x.add(y))
}

/// `*out = a - b`.
///
/// # Safety
/// As `padiso_element_add`.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_sub(
    a: *const PadisoElement,
    b: *const PadisoElement,
    out: *mut *mut PadisoElement,
) -> PadisoStatus {
    binary(a, b, out, |x, y| x.sub(y))
}

/// `*out = a * b`.
///
/// # Safety
/// As `padiso_element_add`.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_mul(
    a: *const PadisoElement,
    b: *const PadisoElement,
    out: *mut *mut PadisoElement,
) -> PadisoStatus {
    binary(a, b, out, |x, y| x.mul(y))
}

/// `*out = a / b`; fails with `DivisionPrecision` when `v(b) > v(a)`.
///
/// # Safety
/// As `padiso_element_add`.
#[no_mangle]
pub unsafe extern "C" fn padiso_element_div(
    a: *const PadisoElement,
    b: *const PadisoElement,
    out: *mut *mut PadisoElement,
) -> PadisoStatus {
    binary(a, b, out, |x, y| x.div(y))
}
