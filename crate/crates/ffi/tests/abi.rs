use std::ffi::{CStr, CString};
use std::ptr;

use kclt_ffi::*;

#[test]
fn pattern_round_trip() {
    let coords = [0.0, 0.0, 1.0, 1.0, -2.0, 3.0];
    let mut p = ptr::null_mut();
    let st = unsafe { kclt_pattern_new(2, 100.0, coords.as_ptr(), 3, &mut p) };
    assert_eq!(st, KcltStatus::Ok);
    unsafe {
        assert_eq!(kclt_pattern_len(p), 3);
        assert_eq!(kclt_pattern_dim(p), 2);
        let c = std::slice::from_raw_parts(kclt_pattern_coords(p), 6);
        assert_eq!(c, &coords);
        kclt_pattern_free(p);
    }
}

#[test]
fn errors_set_message() {
    let coords = [20.0, 0.0];
    let mut p = ptr::null_mut();
    let st = unsafe { kclt_pattern_new(2, 100.0, coords.as_ptr(), 1, &mut p) };
    assert_eq!(st, KcltStatus::InvalidArgument);
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(kclt_last_error()) }.to_str().unwrap();
    assert!(!msg.is_empty());
    let st = unsafe { kclt_sample_poisson(2, 100.0, 1.0, 1, 0, ptr::null_mut()) };
    assert_eq!(st, KcltStatus::NullPointer);
    let st = unsafe { kclt_sample_strauss(100.0, 0.5, 0.4, 3.0, 1, 0, &mut p) };
    assert_eq!(st, KcltStatus::Inadmissible);
}

#[test]
fn sample_estimate_and_test() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { kclt_sample_poisson(2, 900.0, 1.0, 4, 0, &mut p) },
        KcltStatus::Ok
    );
    let mut buf = [0.0; 4];
    let mut written = 0;
    let st = unsafe {
        kclt_estimate_k(
            p,
            1.0,
            KcltCorrection::Translation,
            1.0,
            0.1,
            buf.as_mut_ptr(),
            4,
            &mut written,
        )
    };
    assert_eq!(st, KcltStatus::BufferTooSmall);
    assert_eq!(written, 11);
    let mut k = [0.0; 11];
    let st = unsafe {
        kclt_estimate_k(
            p,
            1.0,
            KcltCorrection::Translation,
            1.0,
            0.1,
            k.as_mut_ptr(),
            11,
            &mut written,
        )
    };
    assert_eq!(st, KcltStatus::Ok);
    assert!((k[10] - std::f64::consts::PI).abs() < 1.0);
    assert!(kclt_last_error().is_null());

    let mut l = ptr::null_mut();
    assert_eq!(
        unsafe { kclt_limit_poisson(2.0, 0.1, 1.0, &mut l) },
        KcltStatus::Ok
    );
    assert_eq!(unsafe { kclt_limit_len(l) }, 21);
    let mut res = KcltGofResult {
        statistic: 0.0,
        quantile: 0.0,
        alpha: 0.0,
        r_max: 0.0,
        reject: -1,
    };
    let st = unsafe { kclt_gof_test(p, l, 0.05, 1.0, KcltCorrection::Border, 1.0, 2000, 1, 0, &mut res) };
    assert_eq!(st, KcltStatus::Ok);
    assert_eq!(res.reject, (res.statistic > res.quantile) as i32);
    assert_eq!(res.alpha, 0.05);
    unsafe {
        kclt_limit_free(l);
        kclt_pattern_free(p);
    }
}

#[test]
fn other_samplers_and_load_errors() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { kclt_sample_lgcp(100.0, 0.2, 2.0, 1, 0, &mut p) },
        KcltStatus::Ok
    );
    unsafe { kclt_pattern_free(p) };
    assert_eq!(
        unsafe { kclt_sample_strauss(100.0, 0.2, 0.4, 1.556, 1, 0, &mut p) },
        KcltStatus::Ok
    );
    unsafe { kclt_pattern_free(p) };
    let mut l = ptr::null_mut();
    let missing = CString::new("/nonexistent/limit").unwrap();
    assert_eq!(
        unsafe { kclt_limit_load(missing.as_ptr(), &mut l) },
        KcltStatus::Io
    );
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kclt.h")).unwrap();
    for sym in [
        "kclt_pattern_new",
        "kclt_gof_test",
        "KCLT_STATUS_OK",
        "typedef struct KcltPattern KcltPattern",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
