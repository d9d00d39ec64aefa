//! C ABI over `tdw-core`.
//!
//! Polynomials are opaque handles owned by the caller and released with
//! `tdw_polynomial_free`. Strings returned by the library are released with
//! `tdw_string_free`. Every function returns a `TdwStatus`; on failure the
//! message is available from `tdw_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tdw_core::check::milnor_number;
use tdw_core::cli::{parse_order, run_command, Command, Format, RunConfig};
use tdw_core::parse::{parse_polynomial, render, VarDecl};
use tdw_core::poly::{MonomialOrder, Polynomial};
use tdw_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdwStatus {
    Ok = 0,
    /// The verdict compared two sides and they differ.
    Mismatch = 1,
    InvalidInput = 2,
    Unstable = 3,
    Internal = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdwCommand {
    Milnor = 0,
    Koszul = 1,
    Twisted = 2,
    CheckKb = 3,
    CheckLog = 4,
    CheckSum = 5,
    CheckQuasiIso = 6,
}

/// Parsed polynomial together with its variable names.
pub struct TdwPolynomial {
    decl: VarDecl,
    poly: Polynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> TdwStatus {
    match e.exit_code() {
        3 => TdwStatus::Unstable,
        4 => TdwStatus::Internal,
        _ => TdwStatus::InvalidInput,
    }
}

fn fail(e: Error) -> TdwStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard<F: FnOnce() -> TdwStatus>(f: F) -> TdwStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        TdwStatus::Panic
    })
}

/// Reads an optional C string; null maps to `None`.
unsafe fn opt_str<'a>(p: *const c_char) -> Result<Option<&'a str>, TdwStatus> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| {
        set_error("argument is not valid UTF-8");
        TdwStatus::InvalidUtf8
    })
}

unsafe fn req_str<'a>(p: *const c_char) -> Result<&'a str, TdwStatus> {
    opt_str(p)?.ok_or_else(|| {
        set_error("null string argument");
        TdwStatus::NullPointer
    })
}

fn split_list(s: Option<&str>) -> Option<Vec<String>> {
    s.map(|s| s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect())
}

fn to_c_string(s: String, out: *mut *mut c_char) -> TdwStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TdwStatus::Ok
        }
        Err(_) => {
            set_error("output contains a nul byte");
            TdwStatus::Internal
        }
    }
}

/// Parses `text` over the comma-separated `vars` (inferred when null) with
/// divisor variables `divisor` (none when null). On success `*out` owns a
/// new handle.
///
/// # Safety
/// String arguments must be null or valid nul-terminated strings; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdw_polynomial_parse(
    text: *const c_char,
    vars: *const c_char,
    divisor: *const c_char,
    out: *mut *mut TdwPolynomial,
) -> TdwStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TdwStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (text, vars, divisor) = match (req_str(text), opt_str(vars), opt_str(divisor)) {
            (Ok(t), Ok(v), Ok(d)) => (t, v, d),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let decl = match split_list(vars) {
            Some(v) => VarDecl::plain(&v),
            None => VarDecl::infer(text),
        }
        .and_then(|d| d.with_divisor(&split_list(divisor).unwrap_or_default()));
        let result = decl.and_then(|decl| {
            let poly = parse_polynomial(text, &decl)?;
            Ok(TdwPolynomial { decl, poly })
        });
        match result {
            Ok(p) => {
                *out = Box::into_raw(Box::new(p));
                TdwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `p` must be null or a handle from `tdw_polynomial_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tdw_polynomial_free(p: *mut TdwPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of the polynomial in degrevlex order. Free the result
/// with `tdw_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdw_polynomial_render(p: *const TdwPolynomial, out: *mut *mut c_char) -> TdwStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            set_error("null pointer argument");
            return TdwStatus::NullPointer;
        }
        let p = &*p;
        to_c_string(render(&p.poly, p.decl.names(), &MonomialOrder::DegRevLex), out)
    })
}

/// Number of variables of the polynomial's ring.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdw_polynomial_nvars(p: *const TdwPolynomial, out: *mut usize) -> TdwStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            set_error("null pointer argument");
            return TdwStatus::NullPointer;
        }
        *out = (*p).poly.nvars();
        TdwStatus::Ok
    })
}

/// Milnor number `dim Q[x]/J(f)` under degrevlex.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdw_milnor_number(p: *const TdwPolynomial, out: *mut usize) -> TdwStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            set_error("null pointer argument");
            return TdwStatus::NullPointer;
        }
        match milnor_number(&(*p).poly, &MonomialOrder::DegRevLex) {
            Ok(m) => {
                *out = m.value;
                TdwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a command on an expression and writes its JSON report to `*out`
/// (free with `tdw_string_free`). The report is produced even when the
/// command fails; the status then mirrors the CLI exit code. `order` may
/// be null for degrevlex; `max_doublings < 0` keeps the default.
///
/// # Safety
/// String arguments must be null or valid nul-terminated strings; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdw_run_json(
    command: TdwCommand,
    text: *const c_char,
    vars: *const c_char,
    divisor: *const c_char,
    order: *const c_char,
    max_doublings: i32,
    out: *mut *mut c_char,
) -> TdwStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TdwStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (text, vars, divisor, order) = match (req_str(text), opt_str(vars), opt_str(divisor), opt_str(order)) {
            (Ok(t), Ok(v), Ok(d), Ok(o)) => (t, v, d, o),
            (Err(s), ..) | (_, Err(s), ..) | (_, _, Err(s), _) | (.., Err(s)) => return s,
        };
        let cmd = match command {
            TdwCommand::Milnor => Command::Milnor,
            TdwCommand::Koszul => Command::Koszul,
            TdwCommand::Twisted => Command::Twisted,
            TdwCommand::CheckKb => Command::CheckKb,
            TdwCommand::CheckLog => Command::CheckLog,
            TdwCommand::CheckSum => Command::CheckSum,
            TdwCommand::CheckQuasiIso => Command::CheckQuasiIso,
        };
        let mut config = RunConfig::new(cmd, text);
        config.vars = split_list(vars);
        config.divisor = split_list(divisor).unwrap_or_default();
        config.format = Format::Json;
        if let Some(o) = order {
            match parse_order(o) {
                Ok(o) => config.order = o,
                Err(e) => return fail(e),
            }
        }
        if max_doublings >= 0 {
            config.truncation.max_doublings = max_doublings as u32;
        }
        let (json, code) = run_command(&config);
        let status = to_c_string(json, out);
        if status != TdwStatus::Ok {
            return status;
        }
        match code {
            0 => TdwStatus::Ok,
            1 => TdwStatus::Mismatch,
            3 => TdwStatus::Unstable,
            4 => TdwStatus::Internal,
            _ => TdwStatus::InvalidInput,
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tdw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tdw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
