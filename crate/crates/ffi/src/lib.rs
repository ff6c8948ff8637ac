//! C ABI for the `cylindric` decision procedures.
//!
//! Conventions:
//! - every fallible function returns a [`CylStatus`] and writes its result
//!   through an out-pointer, which is left untouched on failure;
//! - the message of the most recent failure on the calling thread is
//!   available from [`cyl_last_error`];
//! - objects are opaque handles released with their `_free` function, and
//!   strings returned by the library are released with [`cyl_string_free`];
//! - panics never cross the boundary; they are reported as
//!   [`CylStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cylindric::forms::NormalForm;
use cylindric::io::{from_json, parse_forms, to_json, FormRecord, FormSetRecord, SplitRecord};
use cylindric::rewriter::{decide_equation, decide_zero_forms, rewrite};
use cylindric::splitter::{split_atom, SplitResult};
use cylindric::term::parse_term;
use cylindric::witness::is_satisfiable;
use cylindric::{Error, Params};

/// Result of every fallible call. The first four values equal the exit codes
/// of the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylStatus {
    Ok = 0,
    /// Invalid input: bad parameters, syntax errors, malformed forms.
    Invalid = 1,
    /// A form or search budget was exceeded.
    Budget = 2,
    /// A construction failed its own verification.
    Verification = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Dimension, number of variables and variant.
pub struct CylParams(Params);

/// A normal form of some degree.
pub struct CylForm(NormalForm);

/// A verified split of a form below `t` into two disjoint forms.
pub struct CylSplit(SplitResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Utf8(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn status(&self) -> CylStatus {
        match self {
            Failure::Lib(Error::FormBudget { .. } | Error::Budget(_)) => CylStatus::Budget,
            Failure::Lib(Error::Verification(_)) => CylStatus::Verification,
            Failure::Lib(_) | Failure::Utf8(_) => CylStatus::Invalid,
            Failure::Null(_) => CylStatus::NullArgument,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Null(arg) => format!("argument `{arg}` is null"),
            Failure::Utf8(arg) => format!("argument `{arg}` is not valid UTF-8"),
        }
    }
}

fn set_last_error(message: String) {
    // interior NULs cannot be represented in a C string
    let message = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CylStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            CylStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(failure.message());
            failure.status()
        }
        Err(_) => {
            set_last_error("internal panic".to_owned());
            CylStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: the caller passes either null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or(Failure::Null(name))
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    // SAFETY: the caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| Failure::Utf8(name))
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    // SAFETY: `out` was checked for null and points to writable storage.
    unsafe { out.write(value) }
}

fn check_out<T>(out: *mut T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::Null(name))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cyl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if the last call
/// succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cyl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cyl_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Creates parameters; `variant` is `"nca"` or `"wca"`.
///
/// # Safety
/// `variant` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_params_new(
    n: usize,
    m: usize,
    variant: *const c_char,
    out: *mut *mut CylParams,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let variant = unsafe { text(variant, "variant") }?.parse()?;
        let p = Params::new(n, m, variant)?;
        unsafe { write_out(out, Box::into_raw(Box::new(CylParams(p)))) };
        Ok(())
    })
}

/// Releases parameters. Null is ignored.
///
/// # Safety
/// `p` must be null or a handle from [`cyl_params_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cyl_params_free(p: *mut CylParams) {
    if !p.is_null() {
        // SAFETY: `p` came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Parses a form from its JSON record (`{"degree", "color", "subs"}`).
///
/// # Safety
/// `params` must be a live handle, `json` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_form_from_json(
    params: *const CylParams,
    json: *const c_char,
    out: *mut *mut CylForm,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let record: FormRecord = from_json(unsafe { text(json, "json") }?)?;
        let form = record.to_form(&p.0)?;
        unsafe { write_out(out, Box::into_raw(Box::new(CylForm(form)))) };
        Ok(())
    })
}

/// Serializes a form to its JSON record; free the result with [`cyl_string_free`].
///
/// # Safety
/// `form` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_form_to_json(form: *const CylForm, out: *mut *mut c_char) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let form = unsafe { borrow(form, "form") }?;
        let json = to_json(&FormRecord::from_form(&form.0))?;
        unsafe { write_out(out, into_c_string(json)) };
        Ok(())
    })
}

/// Degree of a form; 0 for a null handle.
///
/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyl_form_degree(form: *const CylForm) -> usize {
    // SAFETY: null or live handle, per the contract.
    unsafe { form.as_ref() }.map_or(0, |f| f.0.degree())
}

/// Releases a form. Null is ignored.
///
/// # Safety
/// `form` must be null or a form handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cyl_form_free(form: *mut CylForm) {
    if !form.is_null() {
        // SAFETY: `form` came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(form) });
    }
}

/// Decides whether a form is satisfiable in the class of `params`.
///
/// # Safety
/// `params` and `form` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_is_satisfiable(
    params: *const CylParams,
    form: *const CylForm,
    out: *mut bool,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let form = unsafe { borrow(form, "form") }?;
        let result = is_satisfiable(&form.0, &p.0)?;
        unsafe { write_out(out, result.satisfiable) };
        Ok(())
    })
}

/// Decides whether two terms are equal in the class of `params`.
/// `budget` bounds the number of normal forms enumerated.
///
/// # Safety
/// `params` must be a live handle, `lhs` and `rhs` NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_decide_equation(
    params: *const CylParams,
    lhs: *const c_char,
    rhs: *const c_char,
    budget: u64,
    out: *mut bool,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let lhs = parse_term(unsafe { text(lhs, "lhs") }?, &p.0)?;
        let rhs = parse_term(unsafe { text(rhs, "rhs") }?, &p.0)?;
        let equal = decide_equation(&lhs, &rhs, &p.0, budget)?;
        unsafe { write_out(out, equal) };
        Ok(())
    })
}

/// Decides whether the join of a form set (or single form, as JSON) is zero.
///
/// # Safety
/// `params` must be a live handle, `json` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_decide_zero(params: *const CylParams, json: *const c_char, out: *mut bool) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let set = parse_forms(unsafe { text(json, "json") }?, &p.0)?;
        let zero = decide_zero_forms(&set, &p.0)?;
        unsafe { write_out(out, zero) };
        Ok(())
    })
}

/// Rewrites a term into the JSON form set of normal forms below it;
/// free the result with [`cyl_string_free`].
///
/// # Safety
/// `params` must be a live handle, `term` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_rewrite(
    params: *const CylParams,
    term: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let term = parse_term(unsafe { text(term, "term") }?, &p.0)?;
        let set = rewrite(&term, &p.0, budget)?;
        let json = to_json(&FormSetRecord::from_set(&set))?;
        unsafe { write_out(out, into_c_string(json)) };
        Ok(())
    })
}

/// Splits a satisfiable form below `t`. Fails with [`CylStatus::Invalid`]
/// if the form is not below `t` or unsatisfiable, and with
/// [`CylStatus::Verification`] if the constructed split does not verify.
///
/// # Safety
/// `params` and `form` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_split(params: *const CylParams, form: *const CylForm, out: *mut *mut CylSplit) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = unsafe { borrow(params, "params") }?;
        let form = unsafe { borrow(form, "form") }?;
        let split = split_atom(&form.0, &p.0)?;
        unsafe { write_out(out, Box::into_raw(Box::new(CylSplit(split)))) };
        Ok(())
    })
}

fn split_part(
    split: *const CylSplit,
    out: *mut *mut CylForm,
    pick: impl FnOnce(&SplitResult) -> &NormalForm,
) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let split = unsafe { borrow(split, "split") }?;
        let form = pick(&split.0).clone();
        unsafe { write_out(out, Box::into_raw(Box::new(CylForm(form)))) };
        Ok(())
    })
}

/// The first half of a split as a new form handle.
///
/// # Safety
/// `split` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_split_sigma(split: *const CylSplit, out: *mut *mut CylForm) -> CylStatus {
    split_part(split, out, |s| &s.sigma)
}

/// The second half of a split as a new form handle.
///
/// # Safety
/// `split` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_split_gamma(split: *const CylSplit, out: *mut *mut CylForm) -> CylStatus {
    split_part(split, out, |s| &s.gamma)
}

/// Serializes a split, with its certificates, to JSON; free the result with
/// [`cyl_string_free`].
///
/// # Safety
/// `split` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_split_to_json(split: *const CylSplit, out: *mut *mut c_char) -> CylStatus {
    guard(|| {
        check_out(out, "out")?;
        let split = unsafe { borrow(split, "split") }?;
        let json = to_json(&SplitRecord::from_split(&split.0))?;
        unsafe { write_out(out, into_c_string(json)) };
        Ok(())
    })
}

/// Releases a split. Null is ignored.
///
/// # Safety
/// `split` must be null or a handle from [`cyl_split`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cyl_split_free(split: *mut CylSplit) {
    if !split.is_null() {
        // SAFETY: `split` came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(split) });
    }
}
