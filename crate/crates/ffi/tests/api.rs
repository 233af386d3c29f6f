use std::ffi::{c_char, CStr};
use std::ptr;

use spectra_lab_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let t = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { sl_string_free(s) };
    t
}

fn cantor(name: &CStr) -> *mut SlCantorSet {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { sl_cantor_set_new(name.as_ptr(), &mut set) }, SlStatus::Ok);
    set
}

#[test]
fn middle_third_dimension_and_thickness() {
    let set = cantor(c"midthird");
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { sl_cantor_set_dimension(set, 1e-8, &mut lo, &mut hi) }, SlStatus::Ok);
    let exact = 2f64.ln() / 3f64.ln();
    assert!(lo <= exact && exact <= hi && hi - lo <= 1e-8);
    let mut tau = 0.0;
    assert_eq!(unsafe { sl_cantor_set_thickness(set, 6, &mut tau) }, SlStatus::Ok);
    assert!((tau - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { sl_cantor_set_dimension(set, 0.0, &mut lo, &mut hi) }, SlStatus::InvalidArgument);
    unsafe { sl_cantor_set_free(set) };
}

#[test]
fn sumset_certificate() {
    let k = cantor(c"midthird");
    let mut ok = false;
    assert_eq!(unsafe { sl_sumset_certify(k, k, 0.0, 2.0, 14, &mut ok) }, SlStatus::Ok);
    assert!(ok);
    let thin = cantor(c"affine:1/4");
    assert_eq!(unsafe { sl_sumset_certify(thin, thin, 0.0, 2.0, 10, &mut ok) }, SlStatus::Ok);
    assert!(!ok);
    unsafe {
        sl_cantor_set_free(k);
        sl_cantor_set_free(thin);
    }
}

#[test]
fn subshift_round_trip_and_avoidance() {
    let mut full = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_full(2, &mut full) }, SlStatus::Ok);
    let mut n = 0u64;
    assert_eq!(unsafe { sl_subshift_fixed_points(full, 10, &mut n) }, SlStatus::Ok);
    assert_eq!(n, 1024);

    let mut sub = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_avoid_word(full, c"010".as_ptr(), &mut sub) }, SlStatus::Ok);
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { sl_subshift_entropy(sub, 1e-12, &mut lo, &mut hi) }, SlStatus::Ok);
    let h = 1.754877666246693f64.ln();
    assert!(lo - 1e-12 <= h && h <= hi + 1e-12);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_to_json(sub, &mut json) }, SlStatus::Ok);
    let text = take(json);
    let c = std::ffi::CString::new(text.clone()).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_from_json(c.as_ptr(), &mut back) }, SlStatus::Ok);
    let mut json2 = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_to_json(back, &mut json2) }, SlStatus::Ok);
    assert_eq!(take(json2), text);

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { sl_subshift_avoid_word(full, c"012".as_ptr(), &mut bad) }, SlStatus::InvalidArgument);
    assert!(bad.is_null());
    assert_eq!(unsafe { sl_subshift_full(0, &mut bad) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_subshift_fixed_points(full, 80, &mut n) }, SlStatus::ResourceCap);
    unsafe {
        sl_subshift_free(full);
        sl_subshift_free(sub);
        sl_subshift_free(back);
    }
}

#[test]
fn runs_match_the_command_line() {
    let run = |cfg: &CStr| {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { sl_run(cfg.as_ptr(), &mut r) }, SlStatus::Ok);
        r
    };
    let a = run(cr#"{"command":"sumset","K":"midthird","target":[0,2]}"#);
    let b = run(cr#"{"command":"sumset","K":"midthird","target":[0,2]}"#);
    let (mut cert_ok, mut certified) = (false, false);
    assert_eq!(unsafe { sl_report_status(a, &mut cert_ok, &mut certified) }, SlStatus::Ok);
    assert!(cert_ok && certified);
    let (mut pa, mut pb) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        sl_report_payload(a, &mut pa);
        sl_report_payload(b, &mut pb);
    }
    assert_eq!(take(pa), take(pb));
    let mut full = ptr::null_mut();
    assert_eq!(unsafe { sl_report_to_json(a, &mut full) }, SlStatus::Ok);
    let full = take(full);
    assert!(full.contains("\"provenance\"") && full.contains("\"certificate_ok\": true"));

    let c = run(cr#"{"command":"sumset","K":"midthird","target":[0.25,2.5]}"#);
    assert_eq!(unsafe { sl_report_status(c, &mut cert_ok, &mut certified) }, SlStatus::Ok);
    assert!(!cert_ok);
    unsafe {
        sl_report_free(a);
        sl_report_free(b);
        sl_report_free(c);
    }
}

#[test]
fn bad_configs_are_rejected() {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { sl_run(cr#"{"command":"spectrum","max_period":0}"#.as_ptr(), &mut r) }, SlStatus::InvalidArgument);
    assert!(r.is_null());
    let msg = unsafe { CStr::from_ptr(sl_last_error()) }.to_string_lossy().into_owned();
    assert!(msg.contains("max_period"), "{msg}");
    assert_eq!(unsafe { sl_run(cr#"{"comand":"spectrum"}"#.as_ptr(), &mut r) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_run(c"{".as_ptr(), &mut r) }, SlStatus::InvalidArgument);
    assert_eq!(unsafe { sl_run(ptr::null(), &mut r) }, SlStatus::NullPointer);
    assert_eq!(unsafe { sl_run(c"{}".as_ptr(), ptr::null_mut()) }, SlStatus::NullPointer);
}

#[test]
fn null_handles_are_ignored_by_free() {
    unsafe {
        sl_cantor_set_free(ptr::null_mut());
        sl_subshift_free(ptr::null_mut());
        sl_report_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
}
