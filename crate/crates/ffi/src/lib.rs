//! C ABI over `sullivan_core`.
//!
//! Models are opaque handles created by [`sullivan_model_parse`] and released
//! with [`sullivan_model_free`]. Every fallible call returns a
//! [`SullivanStatus`]; on failure a message is kept per thread and can be read
//! with [`sullivan_last_error_message`]. Strings handed out by the library
//! must be released with [`sullivan_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sullivan_core::cohomology::cohomology_total;
use sullivan_core::conjecture::analyze;
use sullivan_core::dga::{validate, SullivanPresentation};
use sullivan_core::invariants::{ellipticity_check, toomer_via_quotients};
use sullivan_core::parser::{parse_model, serialize_model};
use sullivan_core::{report, Error};

/// Opaque model handle.
pub struct SullivanModel {
    inner: SullivanPresentation,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SullivanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationFailed = 4,
    NotCertified = 5,
    NotHomogeneous = 6,
    FirstGeneratorOdd = 7,
    BufferTooSmall = 8,
    Inconsistent = 9,
    Failed = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> SullivanStatus {
    match e {
        Error::Syntax { .. }
        | Error::UndeclaredGenerator { .. }
        | Error::DuplicateGenerator { .. }
        | Error::DuplicateDifferential { .. }
        | Error::InvalidPresentation(_) => SullivanStatus::ParseError,
        Error::NotCertified => SullivanStatus::NotCertified,
        Error::NotHomogeneous => SullivanStatus::NotHomogeneous,
        Error::FirstGeneratorOdd(_) => SullivanStatus::FirstGeneratorOdd,
        Error::ToomerMismatch { .. }
        | Error::InternalInconsistency(_)
        | Error::LiftNotDivisible(_) => SullivanStatus::Inconsistent,
        _ => SullivanStatus::Failed,
    }
}

fn fail(e: &Error) -> SullivanStatus {
    set_error(e.to_string());
    status_of(e)
}

/// Runs `f`, turning a panic into `Panic` instead of unwinding into C.
fn guard(f: impl FnOnce() -> SullivanStatus) -> SullivanStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            SullivanStatus::Panic
        }
    }
}

unsafe fn model<'a>(m: *const SullivanModel) -> Option<&'a SullivanPresentation> {
    m.as_ref().map(|m| &m.inner)
}

fn hand_out(s: String, out: *mut *mut c_char) -> SullivanStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SullivanStatus::Ok
        }
        Err(_) => {
            set_error("string contains a NUL byte");
            SullivanStatus::Failed
        }
    }
}

/// Parses model text. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sullivan_model_parse(
    text: *const c_char,
    out: *mut *mut SullivanModel,
) -> SullivanStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("model text is not UTF-8");
            return SullivanStatus::InvalidUtf8;
        };
        match parse_model(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(SullivanModel { inner: p }));
                SullivanStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `m` must come from [`sullivan_model_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sullivan_model_free(m: *mut SullivanModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of generators, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sullivan_model_generator_count(m: *const SullivanModel) -> usize {
    model(m).map_or(0, |p| p.arity())
}

/// `Ok` when the model passes every validation rule, otherwise
/// `ValidationFailed` with the broken rules in the error message.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sullivan_model_validate(m: *const SullivanModel) -> SullivanStatus {
    guard(|| {
        let Some(p) = model(m) else {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        };
        let r = validate(p);
        if r.ok() {
            SullivanStatus::Ok
        } else {
            set_error(report::validation_text(&r).trim_end());
            SullivanStatus::ValidationFailed
        }
    })
}

/// Writes dim H^i for i = 0..=max_degree into `out`, which holds `len`
/// entries. `*written` receives max_degree + 1; if that exceeds `len`,
/// nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `out` must point to `len` writable entries; `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn sullivan_cohomology_dims(
    m: *const SullivanModel,
    max_degree: u32,
    out: *mut usize,
    len: usize,
    written: *mut usize,
) -> SullivanStatus {
    guard(|| {
        let Some(p) = model(m) else {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        };
        let need = max_degree as usize + 1;
        if !written.is_null() {
            *written = need;
        }
        if need > len || out.is_null() {
            set_error(format!("buffer holds {len} entries, {need} needed"));
            return SullivanStatus::BufferTooSmall;
        }
        match cohomology_total(p, max_degree) {
            Ok(h) => {
                for (i, d) in h.dims().into_iter().enumerate() {
                    *out.add(i) = d;
                }
                SullivanStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Toomer invariant of a certified model, by formula and by quotients.
/// `*formula` is set to `u32::MAX` when the differential is not homogeneous.
///
/// # Safety
/// `formula` and `direct` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sullivan_toomer(
    m: *const SullivanModel,
    formula: *mut u32,
    direct: *mut u32,
) -> SullivanStatus {
    guard(|| {
        let Some(p) = model(m) else {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        };
        if formula.is_null() || direct.is_null() {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        }
        let run = || -> Result<_, Error> {
            let cert = ellipticity_check(p)?;
            toomer_via_quotients(p, &cert)
        };
        match run() {
            Ok(r) => {
                *formula = r.e_formula.unwrap_or(u32::MAX);
                *direct = r.e_direct;
                if r.agrees {
                    SullivanStatus::Ok
                } else {
                    set_error("formula and quotient computation disagree");
                    SullivanStatus::Inconsistent
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Full pipeline as one JSON record. The record is written even when the
/// pipeline fails; the status then says why.
///
/// # Safety
/// `out` must be a valid pointer; the string is freed with [`sullivan_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sullivan_check_record(
    m: *const SullivanModel,
    out: *mut *mut c_char,
) -> SullivanStatus {
    guard(|| {
        let Some(p) = model(m) else {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        }
        let result = analyze(p, None);
        let s = hand_out(report::check_record(p, &result).to_string(), out);
        match (s, result) {
            (SullivanStatus::Ok, Err(e)) => fail(&e),
            (s, _) => s,
        }
    })
}

/// Model text in the input grammar.
///
/// # Safety
/// `out` must be a valid pointer; the string is freed with [`sullivan_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sullivan_model_serialize(
    m: *const SullivanModel,
    out: *mut *mut c_char,
) -> SullivanStatus {
    guard(|| {
        let Some(p) = model(m) else {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null pointer");
            return SullivanStatus::NullPointer;
        }
        hand_out(serialize_model(p), out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sullivan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sullivan_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn sullivan_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
