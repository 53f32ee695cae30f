//! C ABI over the modpoly library.
//!
//! Every fallible call returns a [`ModpolyStatus`]; on failure the message is
//! available from [`modpoly_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`modpoly_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modpoly::polytopality::{self, Guards, VerificationReport, Verdict};
use modpoly::{toroids, Diagram, Error, ModMatrixRep};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModpolyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidModulus = 4,
    GuardExceeded = 5,
    Internal = 6,
}

/// Verdict of a verification.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModpolyVerdict {
    StringCGroup = 0,
    NotSggi = 1,
    IntersectionFails = 2,
    Degenerate = 3,
}

/// Opaque parsed diagram.
pub struct ModpolyDiagram(Diagram);

/// Opaque verification report.
pub struct ModpolyReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ModpolyStatus {
    match e {
        Error::Syntax { .. } | Error::InvalidDiagram(_) | Error::InvalidWindow(_) | Error::InvalidWord(_) => {
            ModpolyStatus::ParseError
        }
        Error::InvalidModulus(_) => ModpolyStatus::InvalidModulus,
        e if e.is_guard() => ModpolyStatus::GuardExceeded,
        _ => ModpolyStatus::Internal,
    }
}

fn fail(e: Error) -> ModpolyStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn guarded(f: impl FnOnce() -> ModpolyStatus) -> ModpolyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside modpoly".into());
            ModpolyStatus::Internal
        }
    }
}

fn guards(order_guard: u64) -> Guards {
    Guards { order: (order_guard > 0).then_some(order_guard as u128), ..Guards::default() }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ModpolyStatus> {
    if p.is_null() {
        set_error("null pointer argument".into());
        return Err(ModpolyStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        ModpolyStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> ModpolyStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ModpolyStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte".into());
            ModpolyStatus::Internal
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return ModpolyStatus::NullPointer;
        }
    };
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn modpoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn modpoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a diagram such as `"1 - 2 = 2"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_diagram_parse(text: *const c_char, out: *mut *mut ModpolyDiagram) -> ModpolyStatus {
    nonnull!(out);
    guarded(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Diagram::parse(text) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(ModpolyDiagram(d)));
                ModpolyStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a diagram. NULL is ignored.
///
/// # Safety
/// `d` must come from [`modpoly_diagram_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn modpoly_diagram_free(d: *mut ModpolyDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live diagram.
#[no_mangle]
pub unsafe extern "C" fn modpoly_diagram_rank(d: *const ModpolyDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.rank())
}

/// Canonical text form of the diagram.
///
/// # Safety
/// `d` must be a live diagram and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_diagram_render(d: *const ModpolyDiagram, out: *mut *mut c_char) -> ModpolyStatus {
    nonnull!(d, out);
    write_string(out, (*d).0.to_string())
}

/// Verifies the reduction modulo `modulus`. `order_guard` of 0 disables the
/// order guard.
///
/// # Safety
/// `d` must be a live diagram and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_verify(
    d: *const ModpolyDiagram,
    modulus: u64,
    order_guard: u64,
    out: *mut *mut ModpolyReport,
) -> ModpolyStatus {
    nonnull!(d, out);
    guarded(|| match polytopality::verify(&(*d).0, modulus, guards(order_guard)) {
        Ok(r) => {
            *out = Box::into_raw(Box::new(ModpolyReport(r)));
            ModpolyStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `r` must come from [`modpoly_verify`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn modpoly_report_free(r: *mut ModpolyReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Verdict of a report.
///
/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_report_verdict(r: *const ModpolyReport, out: *mut ModpolyVerdict) -> ModpolyStatus {
    nonnull!(r, out);
    *out = match (*r).0.verdict {
        Verdict::StringCGroup => ModpolyVerdict::StringCGroup,
        Verdict::NotSGGI => ModpolyVerdict::NotSggi,
        Verdict::IntersectionFails => ModpolyVerdict::IntersectionFails,
        Verdict::Degenerate => ModpolyVerdict::Degenerate,
    };
    ModpolyStatus::Ok
}

/// Group order as a decimal string.
///
/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_report_order(r: *const ModpolyReport, out: *mut *mut c_char) -> ModpolyStatus {
    nonnull!(r, out);
    write_string(out, (*r).0.order.to_string())
}

/// Schläfli type. Writes up to `cap` periods into `buf` and the full length
/// into `len`.
///
/// # Safety
/// `r` must be a live report, `len` writable and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn modpoly_report_schlafli(
    r: *const ModpolyReport,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> ModpolyStatus {
    nonnull!(r, len);
    let s = &(*r).0.schlafli;
    *len = s.len();
    if cap > 0 {
        nonnull!(buf);
        ptr::copy_nonoverlapping(s.as_ptr(), buf, s.len().min(cap));
    }
    ModpolyStatus::Ok
}

/// Report as JSON.
///
/// # Safety
/// `r` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_report_to_json(r: *const ModpolyReport, out: *mut *mut c_char) -> ModpolyStatus {
    nonnull!(r, out);
    write_string(out, (*r).0.to_json().to_string())
}

/// Classification of the maximal sections modulo `modulus`, as a JSON array.
///
/// # Safety
/// `d` must be a live diagram and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_classify_json(
    d: *const ModpolyDiagram,
    modulus: u64,
    out: *mut *mut c_char,
) -> ModpolyStatus {
    nonnull!(d, out);
    guarded(|| match toroids::classify_all(&(*d).0, modulus) {
        Ok(sections) => {
            let v: Vec<_> = sections.iter().map(|s| s.to_json()).collect();
            write_string(out, serde_json::Value::Array(v).to_string())
        }
        Err(e) => fail(e),
    })
}

/// Order of the reduced group as a decimal string.
///
/// # Safety
/// `d` must be a live diagram and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modpoly_group_order(
    d: *const ModpolyDiagram,
    modulus: u64,
    order_guard: u64,
    out: *mut *mut c_char,
) -> ModpolyStatus {
    nonnull!(d, out);
    guarded(|| {
        let rep = match ModMatrixRep::new(&(*d).0, modulus) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        match polytopality::Subgroups::new(rep.gens().to_vec(), guards(order_guard)) {
            Ok(sub) => {
                let all: Vec<usize> = (0..sub.gens().len()).collect();
                match sub.order(&all) {
                    Ok(o) => write_string(out, o.to_string()),
                    Err(e) => fail(e),
                }
            }
            Err(e) => fail(e),
        }
    })
}
