//! C ABI over `semigroup-core`.
//!
//! Functions are passed as opaque `SgFunction` handles; rationals cross the
//! boundary as NUL-terminated strings (`"p/q"` or an integer). Every call
//! returns an [`SgStatus`]; on failure `sg_last_error()` describes it.
//! Strings returned through out-parameters are owned by the caller and must be
//! released with `sg_string_free`, handles with `sg_function_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use semigroup_core::cesaro::cesaro_residual;
use semigroup_core::cli::builtin;
use semigroup_core::rational::{self, Rational};
use semigroup_core::semigroup::{apply, is_common_fixed_point};
use semigroup_core::{Error, OmegaFn};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Structure = 4,
    Domain = 5,
    Argument = 6,
    Internal = 7,
}

/// Opaque handle to a function on `{-1} ∪ [0, ∞)`.
pub struct SgFunction(OmegaFn);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(SgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Structure(_) => SgStatus::Structure,
            Error::Domain(_) => SgStatus::Domain,
            Error::Argument(_) => SgStatus::Argument,
            Error::Parse(_) => SgStatus::Parse,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SgStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(SgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn rat(p: *const c_char, what: &str) -> Result<Rational, Fail> {
    Ok(rational::parse(text(p, what)?)?)
}

unsafe fn handle<'a>(p: *const SgFunction, what: &str) -> Result<&'a OmegaFn, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed(f: OmegaFn) -> *mut SgFunction {
    Box::into_raw(Box::new(SgFunction(f)))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

/// Message for the most recent failure on this thread, or NULL after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `{"minus_one": .., "breakpoints": [[u, v], ..]}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_function_from_json(json: *const c_char, out: *mut *mut SgFunction) -> SgStatus {
    guard(|| {
        let f = OmegaFn::from_json(text(json, "json")?)?;
        put(out, boxed(f), "out")
    })
}

/// One of `zero`, `v:<s>`, `w:<s>`, `T0:<t>`.
///
/// # Safety
/// `name` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_function_builtin(name: *const c_char, out: *mut *mut SgFunction) -> SgStatus {
    guard(|| {
        let f = builtin(text(name, "name")?)?;
        put(out, boxed(f), "out")
    })
}

/// # Safety
/// `f` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_function_to_json(f: *const SgFunction, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let s = handle(f, "f")?.to_json();
        put(out, owned(s), "out")
    })
}

/// # Safety
/// `f` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sg_function_free(f: *mut SgFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `out = T(t) x`.
///
/// # Safety
/// `t` must be a valid C string, `x` a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_apply(t: *const c_char, x: *const SgFunction, out: *mut *mut SgFunction) -> SgStatus {
    guard(|| {
        let y = apply(&rat(t, "t")?, handle(x, "x")?)?;
        put(out, boxed(y), "out")
    })
}

/// Exact sup distance between two functions.
///
/// # Safety
/// `a`, `b` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_sup_dist(a: *const SgFunction, b: *const SgFunction, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let d = handle(a, "a")?.sup_dist(handle(b, "b")?);
        put(out, owned(rational::format(&d)), "out")
    })
}

/// # Safety
/// `x` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_in_c(x: *const SgFunction, out: *mut bool) -> SgStatus {
    guard(|| {
        let m = handle(x, "x")?.in_c();
        put(out, m.in_c, "out")
    })
}

/// # Safety
/// `x` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_is_common_fixed_point(x: *const SgFunction, out: *mut bool) -> SgStatus {
    guard(|| {
        let b = is_common_fixed_point(handle(x, "x")?)?;
        put(out, b, "out")
    })
}

/// Value at `u`, where `u = -1` or `u ≥ 0`.
///
/// # Safety
/// `x` must be a live handle, `u` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_eval(x: *const SgFunction, u: *const c_char, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let v = handle(x, "x")?.eval(&rat(u, "u")?)?;
        put(out, owned(rational::format(&v)), "out")
    })
}

/// Residual `‖A(t)x − x‖` and its error bound. `h` may be NULL for the exact
/// route, which accepts only the zero function.
///
/// # Safety
/// `x` must be a live handle, `t` a valid C string, `h` NULL or a valid C
/// string, `residual` and `bound` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_cesaro_residual(
    x: *const SgFunction,
    t: *const c_char,
    h: *const c_char,
    residual: *mut *mut c_char,
    bound: *mut *mut c_char,
) -> SgStatus {
    guard(|| {
        if residual.is_null() || bound.is_null() {
            return Err(null("out"));
        }
        let h = if h.is_null() { None } else { Some(rat(h, "h")?) };
        let (r, b) = cesaro_residual(handle(x, "x")?, &rat(t, "t")?, h.as_ref())?;
        put(residual, owned(rational::format(&r)), "residual")?;
        put(bound, owned(rational::format(&b)), "bound")
    })
}
