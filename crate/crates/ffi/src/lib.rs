//! C interface to `ulrich-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` or
//! `*_parse` functions and released by the matching `*_free`. Every fallible
//! function returns a [`UlrichStatus`] and writes its result through an out
//! pointer. After a failure, [`ulrich_last_error`] describes it. Strings
//! returned to the caller must be released with [`ulrich_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ulrich_core::resolution::build_resolution;
use ulrich_core::ulrich::{self, UlrichOptions};
use ulrich_core::wire::{CertificateFile, ResolutionChecksJson, ResolutionJson};
use ulrich_core::{Engine, Error, Field, LocalIdeal, Poly, Ring};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UlrichStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed polynomial, field, variable list or JSON.
    Input = 3,
    /// Handles from different rings were mixed.
    RingMismatch = 4,
    /// The ideal is not primary to the maximal ideal, or a precondition failed.
    Precondition = 5,
    /// The certificate data is inconsistent.
    InvalidCertificate = 6,
    /// A size or truncation limit was exceeded.
    Limit = 7,
    Unsupported = 8,
    /// An internal panic was caught at the boundary.
    Internal = 9,
}

pub struct UlrichRing(Arc<Ring>);

pub struct UlrichPoly(Poly);

pub struct UlrichCertificate(ulrich::UlrichCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(UlrichStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::RingMismatch => UlrichStatus::RingMismatch,
            Error::InvalidCertificate(_) => UlrichStatus::InvalidCertificate,
            Error::SearchSpace { .. } => UlrichStatus::Limit,
            Error::NotPrimary(ulrich_core::error::NotPrimary::CapExceeded { .. }) => UlrichStatus::Limit,
            Error::Unsupported(_) => UlrichStatus::Unsupported,
            Error::NotPrimary(_) | Error::Precondition(_) => UlrichStatus::Precondition,
            _ => UlrichStatus::Input,
        };
        Failure(code, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(UlrichStatus::NullArgument, format!("null pointer: {what}"))
}

fn set_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `body`, records any failure and converts it to a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> UlrichStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            UlrichStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(Some(msg));
            code
        }
        Err(_) => {
            set_error(Some("internal error".into()));
            UlrichStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(UlrichStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn poly_array(ps: *const *const UlrichPoly, n: usize, what: &str) -> Result<Vec<Poly>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if ps.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts(ps, n).iter().map(|&p| handle(p, what).map(|p| p.0.clone())).collect()
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ulrich_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ulrich_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ulrich_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a ring from a field spec (`q` or `fp:<p>`) and a variable list
/// (`X,Y` or a count).
///
/// # Safety
/// String arguments must be nul-terminated. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_ring_new(field: *const c_char, vars: *const c_char, out: *mut *mut UlrichRing) -> UlrichStatus {
    guard(|| {
        let field: Field = text(field, "field")?.parse()?;
        let ring = Ring::from_spec(field, text(vars, "vars")?)?;
        write(out, Box::into_raw(Box::new(UlrichRing(ring))), "out")
    })
}

/// # Safety
/// `ring` must be null or a handle from [`ulrich_ring_new`].
#[no_mangle]
pub unsafe extern "C" fn ulrich_ring_free(ring: *mut UlrichRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// # Safety
/// `ring` must be a live handle, `src` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_poly_parse(ring: *const UlrichRing, src: *const c_char, out: *mut *mut UlrichPoly) -> UlrichStatus {
    guard(|| {
        let ring = handle(ring, "ring")?;
        let p = Poly::parse(text(src, "src")?, &ring.0)?;
        write(out, Box::into_raw(Box::new(UlrichPoly(p))), "out")
    })
}

/// Writes the canonical text form. Free it with [`ulrich_string_free`].
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_poly_to_string(poly: *const UlrichPoly, out: *mut *mut c_char) -> UlrichStatus {
    guard(|| {
        let p = handle(poly, "poly")?;
        write(out, c_string(p.0.to_string()), "out")
    })
}

/// # Safety
/// `poly` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ulrich_poly_free(poly: *mut UlrichPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Length of `S/(gens)` for an ideal primary to the maximal ideal.
///
/// # Safety
/// `gens` must point to `n` live handles. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_colength(gens: *const *const UlrichPoly, n: usize, out: *mut usize) -> UlrichStatus {
    guard(|| {
        let gens = poly_array(gens, n, "gens")?;
        let ring = gens.first().ok_or(Error::EmptyIdeal)?.ring().clone();
        let len = Engine::default().colength(&LocalIdeal::new(&ring, gens)?)?;
        write(out, len, "out")
    })
}

/// Decides whether `(gens)` is an Ulrich ideal of `S/(f)`.
///
/// # Safety
/// `gens` must point to `n` live handles, `f` must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_is_ulrich(gens: *const *const UlrichPoly, n: usize, f: *const UlrichPoly, out: *mut bool) -> UlrichStatus {
    guard(|| {
        let gens = poly_array(gens, n, "gens")?;
        let f = handle(f, "f")?;
        let v = ulrich::is_ulrich(&Engine::default(), &gens, &f.0, &UlrichOptions::default())?;
        write(out, v.is_ulrich, "out")
    })
}

/// Builds a certificate `(f, a, b, x, epsilon)` with `d` entries in `a` and `x`.
///
/// # Safety
/// `a` and `x` must point to `d` live handles each. Other handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ulrich_certificate_new(
    f: *const UlrichPoly,
    a: *const *const UlrichPoly,
    b: *const UlrichPoly,
    x: *const *const UlrichPoly,
    d: usize,
    epsilon: *const UlrichPoly,
    out: *mut *mut UlrichCertificate,
) -> UlrichStatus {
    guard(|| {
        let c = ulrich::UlrichCertificate::new(
            handle(f, "f")?.0.clone(),
            poly_array(a, d, "a")?,
            handle(b, "b")?.0.clone(),
            poly_array(x, d, "x")?,
            handle(epsilon, "epsilon")?.0.clone(),
        )?;
        write(out, Box::into_raw(Box::new(UlrichCertificate(c))), "out")
    })
}

/// Reads a certificate document (`{"schema": 1, "certificate": {...}}`).
///
/// # Safety
/// `ring` must be live, `json` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_certificate_from_json(
    ring: *const UlrichRing,
    json: *const c_char,
    out: *mut *mut UlrichCertificate,
) -> UlrichStatus {
    guard(|| {
        let ring = handle(ring, "ring")?;
        let c = CertificateFile::parse(text(json, "json")?)?.certificate.to_certificate(&ring.0)?;
        write(out, Box::into_raw(Box::new(UlrichCertificate(c))), "out")
    })
}

/// Writes the certificate document. Free it with [`ulrich_string_free`].
///
/// # Safety
/// `cert` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_certificate_to_json(cert: *const UlrichCertificate, out: *mut *mut c_char) -> UlrichStatus {
    guard(|| {
        let c = handle(cert, "cert")?;
        let s = serde_json::to_string(&CertificateFile::new(&c.0)).map_err(Error::from)?;
        write(out, c_string(s), "out")
    })
}

/// # Safety
/// `cert` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ulrich_certificate_free(cert: *mut UlrichCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Checks the identity, the unit and the parameter conditions.
///
/// # Safety
/// `cert` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_certificate_verify(cert: *const UlrichCertificate, out: *mut bool) -> UlrichStatus {
    guard(|| {
        let c = handle(cert, "cert")?;
        write(out, ulrich::verify_certificate(&Engine::default(), &c.0)?, "out")
    })
}

/// Builds the resolution and writes it as JSON, with the checks when
/// `check` is set. Free the string with [`ulrich_string_free`].
///
/// # Safety
/// `cert` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ulrich_resolution_json(cert: *const UlrichCertificate, check: bool, out: *mut *mut c_char) -> UlrichStatus {
    guard(|| {
        let c = handle(cert, "cert")?;
        let engine = Engine::default();
        let r = build_resolution(&engine, &c.0)?;
        let checks = if check { Some(ResolutionChecksJson::compute(&engine, &r, true)?) } else { None };
        let s = serde_json::to_string(&ResolutionJson::new(&r, checks)).map_err(Error::from)?;
        write(out, c_string(s), "out")
    })
}
