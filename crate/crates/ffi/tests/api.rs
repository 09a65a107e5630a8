use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dyndrf_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { drf_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(drf_last_error_message()) }.to_str().unwrap().to_owned()
}

fn micro() -> *mut DrfInstance {
    let num = [1i64, 1, 1, 1, 1, 1];
    let den = [1i64, 10, 10, 1, 1, 1];
    let mut inst = ptr::null_mut();
    let status = unsafe { drf_instance_new(3, 2, num.as_ptr(), den.as_ptr(), &mut inst) };
    assert_eq!(status, DrfStatus::Ok);
    inst
}

#[test]
fn micro_instance_shares_and_levels() {
    let inst = micro();
    assert_eq!(unsafe { (drf_instance_n(inst), drf_instance_m(inst)) }, (3, 2));
    for algorithm in [DrfAlgorithm::Bisect, DrfAlgorithm::Naive, DrfAlgorithm::Lp] {
        let mut run = ptr::null_mut();
        assert_eq!(unsafe { drf_run_new(inst, algorithm, &mut run) }, DrfStatus::Ok);
        let shares: Vec<String> = (0..3)
            .map(|i| {
                let mut s = ptr::null_mut();
                assert_eq!(unsafe { drf_run_share(run, 3, i, &mut s) }, DrfStatus::Ok);
                take(s)
            })
            .collect();
        assert_eq!(shares, ["20/33", "20/33", "1/3"]);

        let mut x = 0.0;
        assert_eq!(unsafe { drf_run_share_f64(run, 3, 2, &mut x) }, DrfStatus::Ok);
        assert!((x - 1.0 / 3.0).abs() < 1e-15);

        let mut level = ptr::null_mut();
        assert_eq!(unsafe { drf_run_water_level(run, 3, &mut level) }, DrfStatus::Ok);
        assert_eq!(take(level), "1/3");
        let mut tau = 0;
        assert_eq!(unsafe { drf_run_split(run, 3, &mut tau) }, DrfStatus::Ok);
        assert_eq!(tau, 3);
        unsafe { drf_run_free(run) };
    }
    assert_eq!(unsafe { drf_verify(inst) }, DrfStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { drf_instance_free(inst) };
}

#[test]
fn reports_are_json() {
    let inst = micro();
    let mut run = ptr::null_mut();
    unsafe { drf_run_new(inst, DrfAlgorithm::Bisect, &mut run) };
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { drf_run_report_json(run, &mut json) }, DrfStatus::Ok);
    let report = take(json);
    assert!(report.contains("\"20/33\""));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { drf_ratio_report_json(inst, DrfObjective::Both, &mut json) }, DrfStatus::Ok);
    let ratios = take(json);
    assert!(ratios.contains("\"17/20\"") && ratios.contains("\"7/10\""));
    unsafe {
        drf_run_free(run);
        drf_instance_free(inst);
    }
}

#[test]
fn generators_and_text_round_trip() {
    let mut t1 = ptr::null_mut();
    assert_eq!(unsafe { drf_gen_theorem1(2, 4, 1, 10, &mut t1) }, DrfStatus::Ok);
    let mut run = ptr::null_mut();
    unsafe { drf_run_new(t1, DrfAlgorithm::Bisect, &mut run) };
    let mut s = ptr::null_mut();
    unsafe { drf_run_share(run, 4, 0, &mut s) };
    assert_eq!(take(s), "10/31");

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { drf_instance_to_text(t1, &mut text) }, DrfStatus::Ok);
    let text = CString::new(take(text)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { drf_instance_parse(text.as_ptr(), &mut back) }, DrfStatus::Ok);
    assert_eq!(unsafe { drf_instance_n(back) }, 4);

    let mut t2 = ptr::null_mut();
    assert_eq!(unsafe { drf_gen_theorem2(3, 1, 100, &mut t2) }, DrfStatus::Ok);
    assert_eq!(unsafe { drf_instance_n(t2) }, 10);
    let mut random = ptr::null_mut();
    assert_eq!(unsafe { drf_gen_random(6, 3, 1, 8, &mut random) }, DrfStatus::Ok);
    assert_eq!(unsafe { drf_verify(random) }, DrfStatus::Ok);
    unsafe {
        drf_run_free(run);
        for i in [t1, back, t2, random] {
            drf_instance_free(i);
        }
    }
}

#[test]
fn error_codes() {
    let mut inst = ptr::null_mut();
    let bad = CString::new("n = 2\nm = 1\n1\n1/0\n").unwrap();
    assert_eq!(unsafe { drf_instance_parse(bad.as_ptr(), &mut inst) }, DrfStatus::ParseError);
    assert!(last_error().contains("line 4"));
    assert!(inst.is_null());

    let num = [1i64, 0];
    let den = [1i64, 1];
    assert_eq!(
        unsafe { drf_instance_new(1, 2, num.as_ptr(), den.as_ptr(), &mut inst) },
        DrfStatus::ValidationError
    );
    let den = [1i64, 0];
    assert_eq!(
        unsafe { drf_instance_new(1, 2, num.as_ptr(), den.as_ptr(), &mut inst) },
        DrfStatus::InvalidArgument
    );

    assert_eq!(unsafe { drf_gen_theorem1(3, 3, 1, 10, &mut inst) }, DrfStatus::ValidationError);
    assert_eq!(unsafe { drf_gen_theorem1(3, 5, 1, 0, &mut inst) }, DrfStatus::InvalidArgument);
    assert_eq!(unsafe { drf_verify(ptr::null()) }, DrfStatus::NullPointer);
    assert_eq!(unsafe { drf_instance_n(ptr::null()) }, 0);

    let inst = micro();
    assert_eq!(
        unsafe { drf_run_new(inst, DrfAlgorithm::Bisect, ptr::null_mut()) },
        DrfStatus::NullPointer
    );
    let mut run = ptr::null_mut();
    unsafe { drf_run_new(inst, DrfAlgorithm::Lp, &mut run) };
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { drf_run_share(run, 2, 2, &mut s) }, DrfStatus::InvalidArgument);
    assert_eq!(unsafe { drf_run_share(run, 0, 0, &mut s) }, DrfStatus::InvalidArgument);
    assert!(s.is_null());
    unsafe {
        drf_run_free(run);
        drf_instance_free(inst);
        drf_instance_free(ptr::null_mut());
        drf_string_free(ptr::null_mut());
    }
}
