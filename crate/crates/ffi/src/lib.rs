//! C interface to the pscaffold library.
//!
//! The API hands out an opaque extension handle and returns reports as
//! heap-allocated JSON strings (free them with [`psc_string_free`]). Every
//! function returns a [`PscStatus`]; on any failure the thread-local message
//! from [`psc_last_error_message`] describes what went wrong. Mathematical
//! verdicts (a failed law check, a non-free ring of integers) are data in
//! the reports, not error codes.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pscaffold::extension::{build_extension, ExtensionKind};
use pscaffold::fp::Prime;
use pscaffold::group_algebra::build_scaffold;
use pscaffold::input::parse_series_literal;
use pscaffold::order::{associated_order_report, survey};
use pscaffold::tower::Tower;
use pscaffold::verify::verify_valuation_law;
use pscaffold::Error;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PscStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotFullyRamified = 2,
    DegenerateData = 3,
    PrecisionExhausted = 4,
    DecompositionStall = 5,
    HypothesisViolated = 6,
    Utf8 = 7,
    NullPointer = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> PscStatus {
    match err {
        Error::PrecisionExhausted(_) => PscStatus::PrecisionExhausted,
        Error::NotFullyRamified(_) => PscStatus::NotFullyRamified,
        Error::DegenerateData(_) => PscStatus::DegenerateData,
        Error::DecompositionStall(_) => PscStatus::DecompositionStall,
        Error::HypothesisViolated(_) => PscStatus::HypothesisViolated,
        Error::InvalidInput(_) => PscStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> PscStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

fn guarded<F: FnOnce() -> PscStatus>(f: F) -> PscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in pscaffold".into());
            set_error(msg);
            PscStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PscStatus> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(PscStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        PscStatus::Utf8
    })
}

fn emit_string(out: *mut *mut c_char, text: String) -> PscStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return PscStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PscStatus::Ok
        }
        Err(_) => {
            set_error("report contained an interior NUL byte".into());
            PscStatus::Utf8
        }
    }
}

/// Opaque handle to a validated extension together with its computation
/// context.
pub struct PscExtension {
    tower: Tower,
}

/// Last error message for this thread, or null if none was recorded. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn psc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |c| c.as_ptr())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn psc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build an extension from its defining data.
///
/// `kind` is "abelian" or "cyclic"; `beta1_json` and `beta2_json` are series
/// literals of the form `[[exponent, coefficient], ...]`. A `precision` of 0
/// or less selects the default window. On success `*out` owns the handle;
/// release it with [`psc_extension_free`].
///
/// # Safety
/// The string arguments must be valid NUL-terminated pointers (or null,
/// which is reported as an error) and `out` must be a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_extension_build(
    p: u32,
    kind: *const c_char,
    beta1_json: *const c_char,
    beta2_json: *const c_char,
    precision: i64,
    out: *mut *mut PscExtension,
) -> PscStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return PscStatus::NullPointer;
        }
        let kind = match read_str(kind) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let beta1 = match read_str(beta1_json) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let beta2 = match read_str(beta2_json) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let build = || -> pscaffold::Result<Tower> {
            let prime = Prime::new(p)?;
            let kind = ExtensionKind::parse(kind)?;
            let b1 = parse_series_literal(prime, beta1)?;
            let b2 = parse_series_literal(prime, beta2)?;
            let precision = if precision > 0 { Some(precision) } else { None };
            let ext = build_extension(prime, kind, &b1, &b2, precision)?;
            Tower::new(ext)
        };
        match build() {
            Ok(tower) => {
                *out = Box::into_raw(Box::new(PscExtension { tower }));
                PscStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a handle obtained from [`psc_extension_build`].
///
/// # Safety
/// `ext` must be null or a handle from [`psc_extension_build`] that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn psc_extension_free(ext: *mut PscExtension) {
    if !ext.is_null() {
        drop(Box::from_raw(ext));
    }
}

unsafe fn borrow<'a>(ext: *const PscExtension) -> Result<&'a PscExtension, PscStatus> {
    ext.as_ref().ok_or_else(|| {
        set_error("null extension handle".into());
        PscStatus::NullPointer
    })
}

/// Reduced data, breaks and hypothesis flags as a JSON document.
///
/// # Safety
/// `ext` must be a live handle and `out_json` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_extension_analyze_json(
    ext: *const PscExtension,
    out_json: *mut *mut c_char,
) -> PscStatus {
    guarded(|| {
        let handle = match borrow(ext) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let summary = handle.tower.ext().summary();
        emit_string(out_json, serde_json::to_string_pretty(&summary).unwrap())
    })
}

/// Build the scaffold pair and verify its valuation law on `trials` seeded
/// samples; the verdict and any counterexample are fields of the JSON
/// report.
///
/// # Safety
/// `ext` must be a live handle and `out_json` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_scaffold_verify_json(
    ext: *const PscExtension,
    trials: u32,
    seed: u64,
    out_json: *mut *mut c_char,
) -> PscStatus {
    guarded(|| {
        let handle = match borrow(ext) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let sc = match build_scaffold(handle.tower.ext()) {
            Ok(sc) => sc,
            Err(e) => return fail(e),
        };
        match verify_valuation_law(&handle.tower, &sc, trials, seed) {
            Ok(report) => emit_string(out_json, serde_json::to_string_pretty(&report).unwrap()),
            Err(e) => fail(e),
        }
    })
}

/// The associated-order report (break tables, freeness verdicts, generator
/// certificate) as JSON. When the scaffold hypotheses fail the report is
/// `{"applicable": false}`.
///
/// # Safety
/// `ext` must be a live handle and `out_json` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_order_report_json(
    ext: *const PscExtension,
    out_json: *mut *mut c_char,
) -> PscStatus {
    guarded(|| {
        let handle = match borrow(ext) {
            Ok(h) => h,
            Err(code) => return code,
        };
        if !handle.tower.ext().hypotheses_hold() {
            return emit_string(
                out_json,
                serde_json::to_string_pretty(&serde_json::json!({ "applicable": false }))
                    .unwrap(),
            );
        }
        let sc = match build_scaffold(handle.tower.ext()) {
            Ok(sc) => sc,
            Err(e) => return fail(e),
        };
        match associated_order_report(&handle.tower, &sc) {
            Ok(report) => {
                let doc = serde_json::json!({ "applicable": true, "order": report });
                emit_string(out_json, serde_json::to_string_pretty(&doc).unwrap())
            }
            Err(e) => fail(e),
        }
    })
}

/// Freeness survey over b1 in [b1_min, b1_max] and b2 = b1 + p^2 m for
/// m <= m_max, as tab-separated text with a header row.
///
/// # Safety
/// `out_tsv` must be a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_survey_tsv(
    p: u32,
    b1_min: i64,
    b1_max: i64,
    m_max: i64,
    out_tsv: *mut *mut c_char,
) -> PscStatus {
    guarded(|| {
        if let Err(e) = Prime::new(p) {
            return fail(e);
        }
        let rows = survey(p, b1_min, b1_max, m_max);
        let mut text = String::from("p\tb1\tb2\tr\tfree_by_r\tfree_by_w\tagree\n");
        for r in &rows {
            text.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.p, r.b1, r.b2, r.r, r.free_by_r, r.free_by_w, r.agree
            ));
        }
        emit_string(out_tsv, text)
    })
}

/// Run every symbolic identity certification; the JSON array lists each
/// check with its residual.
///
/// # Safety
/// `out_json` must be a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn psc_identities_json(out_json: *mut *mut c_char) -> PscStatus {
    guarded(|| match pscaffold::symbolic::run_all() {
        Ok(checks) => emit_string(out_json, serde_json::to_string_pretty(&checks).unwrap()),
        Err(e) => fail(e),
    })
}

/// Free a string returned by any of the *_json / *_tsv functions.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn psc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
