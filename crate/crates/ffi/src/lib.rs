//! C ABI over `tmzv`: opaque handles, integer status codes, thread-local error text.
//!
//! Every function returns a [`TmzvStatus`]; on failure `tmzv_last_error` describes it.
//! Strings handed out by the library are released with `tmzv_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tmzv::cli::{evaluate, parse};
use tmzv::numeric::{EvalConfig, Evaluator};
use tmzv::relations::{self, Params};
use tmzv::{Element, Error, Index};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmzvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Param = 5,
    UnknownIdentity = 6,
    Numeric = 7,
    Panic = 8,
}

/// Opaque element of the word algebra.
pub struct TmzvElement(Element);

/// Opaque numeric evaluator with its truncation settings and value cache.
pub struct TmzvEvaluator(Evaluator);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> TmzvStatus {
    match e {
        Error::Parse { .. } | Error::InvalidNumber(_) | Error::InvalidWord(_) => TmzvStatus::Parse,
        Error::NotH1(_) | Error::NotH0(_) | Error::NotAdmissible(_) | Error::ZeroPart | Error::TooLong(_) => {
            TmzvStatus::Domain
        }
        Error::Param(_) => TmzvStatus::Param,
        Error::UnknownIdentity(_) => TmzvStatus::UnknownIdentity,
        Error::Numeric(_) => TmzvStatus::Numeric,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TmzvStatus, String)>) -> TmzvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TmzvStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TmzvStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TmzvStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TmzvStatus, String) {
    (TmzvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TmzvStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TmzvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (TmzvStatus, String)> {
    let c = CString::new(s).map_err(|_| (TmzvStatus::Panic, "interior NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the most recent failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tmzv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tmzv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and expands an expression such as `z(1) tst z(1)`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tmzv_expand(src: *const c_char, out: *mut *mut TmzvElement) -> TmzvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let src = str_arg(src, "src")?;
        let e = evaluate(&parse(src).map_err(lib)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(TmzvElement(e)));
        Ok(())
    })
}

/// Builds `z_{k_1} ... z_{k_n}`.
///
/// # Safety
/// `parts` must point to `len` integers (or be null with `len == 0`); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tmzv_element_from_index(
    parts: *const u32,
    len: usize,
    out: *mut *mut TmzvElement,
) -> TmzvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let slice = index_slice(parts, len)?;
        let idx = Index::new(slice.to_vec()).map_err(lib)?;
        *out = Box::into_raw(Box::new(TmzvElement(Element::index(&idx))));
        Ok(())
    })
}

unsafe fn index_slice<'a>(parts: *const u32, len: usize) -> Result<&'a [u32], (TmzvStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if parts.is_null() {
        return Err(null("parts"));
    }
    Ok(std::slice::from_raw_parts(parts, len))
}

/// Canonical text form, e.g. `2 z1 z1 + (1-2t) z2`.
///
/// # Safety
/// `e` must be a live element handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tmzv_element_to_string(e: *const TmzvElement, out: *mut *mut c_char) -> TmzvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let e = e.as_ref().ok_or_else(|| null("element"))?;
        out_string(e.0.to_string(), out)
    })
}

/// Writes 1 to `out` when the elements are equal, 0 otherwise.
///
/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tmzv_element_equal(
    a: *const TmzvElement,
    b: *const TmzvElement,
    out: *mut i32,
) -> TmzvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        *out = i32::from(a.0 == b.0);
        Ok(())
    })
}

/// Releases an element handle; null is ignored.
///
/// # Safety
/// `e` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tmzv_element_free(e: *mut TmzvElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Creates an evaluator with outer truncation `m` (0 selects the default 100000).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tmzv_evaluator_new(m: usize, out: *mut *mut TmzvEvaluator) -> TmzvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = if m == 0 {
            EvalConfig::default()
        } else {
            EvalConfig::with_terms(m).map_err(lib)?
        };
        let ev = Evaluator::new(cfg).map_err(lib)?;
        *out = Box::into_raw(Box::new(TmzvEvaluator(ev)));
        Ok(())
    })
}

/// Releases an evaluator handle; null is ignored.
///
/// # Safety
/// `ev` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tmzv_evaluator_free(ev: *mut TmzvEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// Evaluates ζ^t(k) at the given `t`, writing the value and its truncation estimate.
///
/// # Safety
/// `ev` must be live, `parts` must point to `len` integers, `value` and `err` valid (`err` may be null).
#[no_mangle]
pub unsafe extern "C" fn tmzv_zeta_t(
    ev: *const TmzvEvaluator,
    parts: *const u32,
    len: usize,
    t: f64,
    value: *mut f64,
    err: *mut f64,
) -> TmzvStatus {
    guard(|| {
        if value.is_null() {
            return Err(null("value"));
        }
        let ev = ev.as_ref().ok_or_else(|| null("evaluator"))?;
        let idx = Index::new(index_slice(parts, len)?.to_vec()).map_err(lib)?;
        let p = ev.0.zeta_t(&idx).map_err(lib)?;
        let at = p.at_t(t);
        *value = at.coeff(0, 0).re;
        if !err.is_null() {
            *err = at.err;
        }
        Ok(())
    })
}

/// Checks one catalog identity. `params` holds `key=value` pairs separated by spaces,
/// e.g. `k=4 n=2` or `index=2,1`. Writes 1/0 to `pass` and the JSON report to `report`
/// (pass null to skip it).
///
/// # Safety
/// `ev` must be live; `name` and `params` NUL-terminated; `pass` valid.
#[no_mangle]
pub unsafe extern "C" fn tmzv_check(
    ev: *const TmzvEvaluator,
    name: *const c_char,
    params: *const c_char,
    pass: *mut i32,
    report: *mut *mut c_char,
) -> TmzvStatus {
    guard(|| {
        if pass.is_null() {
            return Err(null("pass"));
        }
        let ev = ev.as_ref().ok_or_else(|| null("evaluator"))?;
        let name = str_arg(name, "name")?;
        let params = parse_params(str_arg(params, "params")?)?;
        let r = relations::check(name, &params, &ev.0, false).map_err(lib)?;
        *pass = i32::from(r.pass);
        if !report.is_null() {
            out_string(r.to_json(), report)?;
        }
        Ok(())
    })
}

fn parse_params(src: &str) -> Result<Params, (TmzvStatus, String)> {
    let mut p = Params::new();
    for item in src.split_whitespace() {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| (TmzvStatus::Param, format!("expected key=value, got {item:?}")))?;
        p.set(k, v);
    }
    Ok(p)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tmzv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
