//! Exercise the C surface directly: handle lifecycle, JSON reports, error
//! codes and the last-error message.

use std::ffi::{CStr, CString};
use std::ptr;

use pscaffold_capi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
    psc_string_free(ptr);
    s
}

#[test]
fn build_analyze_verify_order_roundtrip() {
    unsafe {
        let mut handle: *mut PscExtension = ptr::null_mut();
        let status = psc_extension_build(
            3,
            cstr("cyclic").as_ptr(),
            cstr("[[-1,1]]").as_ptr(),
            cstr("[[-7,1]]").as_ptr(),
            0,
            &mut handle,
        );
        assert_eq!(status, PscStatus::Ok);
        assert!(!handle.is_null());

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(psc_extension_analyze_json(handle, &mut out), PscStatus::Ok);
        let analyze: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(analyze["b2"], 19);
        assert_eq!(analyze["mu"], serde_json::json!([[-2, 1]]));

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            psc_scaffold_verify_json(handle, 12, 0, &mut out),
            PscStatus::Ok
        );
        let verify: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(verify["verdict"], true);
        assert_eq!(verify["residues_complete"], true);

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(psc_order_report_json(handle, &mut out), PscStatus::Ok);
        let order: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(order["applicable"], true);
        assert_eq!(order["order"]["r"], 1);
        assert_eq!(order["order"]["free_by_w"], true);
        assert_eq!(
            order["order"]["w"],
            serde_json::json!([0, 0, 0, 2, 2, 2, 4, 4, 5])
        );

        psc_extension_free(handle);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut handle: *mut PscExtension = ptr::null_mut();
        // beta1 = t^2 is unramified
        let status = psc_extension_build(
            3,
            cstr("cyclic").as_ptr(),
            cstr("[[2,1]]").as_ptr(),
            cstr("[[-7,1]]").as_ptr(),
            0,
            &mut handle,
        );
        assert_eq!(status, PscStatus::NotFullyRamified);
        let msg = CStr::from_ptr(psc_last_error_message()).to_str().unwrap();
        assert!(msg.contains("not fully ramified"), "{msg}");

        // malformed series literal
        let status = psc_extension_build(
            3,
            cstr("cyclic").as_ptr(),
            cstr("nope").as_ptr(),
            cstr("[[-7,1]]").as_ptr(),
            0,
            &mut handle,
        );
        assert_eq!(status, PscStatus::InvalidArgument);

        // unsupported prime
        let status = psc_extension_build(
            9,
            cstr("cyclic").as_ptr(),
            cstr("[[-1,1]]").as_ptr(),
            cstr("[[-7,1]]").as_ptr(),
            0,
            &mut handle,
        );
        assert_eq!(status, PscStatus::InvalidArgument);

        // null handling
        assert_eq!(
            psc_extension_analyze_json(ptr::null(), &mut ptr::null_mut()),
            PscStatus::NullPointer
        );
    }
}

#[test]
fn order_not_applicable_is_data_not_error() {
    unsafe {
        let mut handle: *mut PscExtension = ptr::null_mut();
        let status = psc_extension_build(
            3,
            cstr("cyclic").as_ptr(),
            cstr("[[-1,1]]").as_ptr(),
            cstr("[[-2,1]]").as_ptr(),
            0,
            &mut handle,
        );
        assert_eq!(status, PscStatus::Ok);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(psc_order_report_json(handle, &mut out), PscStatus::Ok);
        let order: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(order["applicable"], false);
        psc_extension_free(handle);
    }
}

#[test]
fn survey_and_identities() {
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(psc_survey_tsv(3, 1, 4, 5, &mut out), PscStatus::Ok);
        let tsv = take_string(out);
        assert!(tsv.starts_with("p\tb1\tb2\tr\tfree_by_r\tfree_by_w\tagree\n"));
        assert!(tsv.lines().skip(1).all(|l| l.ends_with("true")));

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(psc_identities_json(&mut out), PscStatus::Ok);
        let checks: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(checks.as_array().unwrap().iter().all(|c| c["ok"] == true));
    }
}

#[test]
fn version_is_nonempty() {
    unsafe {
        let v = CStr::from_ptr(psc_version()).to_str().unwrap();
        assert!(!v.is_empty());
    }
}
