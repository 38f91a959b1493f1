use std::ffi::{c_char, CStr, CString};
use std::ptr;

use semigroup_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    sg_string_free(s);
    out
}

unsafe fn builtin(name: &str) -> *mut SgFunction {
    let mut f = ptr::null_mut();
    assert_eq!(sg_function_builtin(c(name).as_ptr(), &mut f), SgStatus::Ok);
    f
}

fn last_error() -> String {
    let p = sg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn apply_zero_at_one() {
    unsafe {
        let zero = builtin("zero");
        let mut y = ptr::null_mut();
        assert_eq!(sg_apply(c("1").as_ptr(), zero, &mut y), SgStatus::Ok);
        assert!(sg_last_error().is_null());
        let mut json = ptr::null_mut();
        assert_eq!(sg_function_to_json(y, &mut json), SgStatus::Ok);
        assert_eq!(take(json), r#"{"minus_one":"0","breakpoints":[["0","1"],["1","0"]]}"#);
        let mut d = ptr::null_mut();
        assert_eq!(sg_sup_dist(y, zero, &mut d), SgStatus::Ok);
        assert_eq!(take(d), "1");
        let mut v = ptr::null_mut();
        assert_eq!(sg_eval(y, c("1/2").as_ptr(), &mut v), SgStatus::Ok);
        assert_eq!(take(v), "1/2");
        sg_function_free(y);
        sg_function_free(zero);
    }
}

#[test]
fn json_round_trip_and_membership() {
    unsafe {
        let src = r#"{"minus_one":"1/2","breakpoints":[["0","1"],["3/2","1/2"]]}"#;
        let mut f = ptr::null_mut();
        assert_eq!(sg_function_from_json(c(src).as_ptr(), &mut f), SgStatus::Ok);
        let mut json = ptr::null_mut();
        sg_function_to_json(f, &mut json);
        assert_eq!(take(json), src);
        let mut inside = false;
        assert_eq!(sg_in_c(f, &mut inside), SgStatus::Ok);
        assert!(inside);
        let mut fixed = true;
        assert_eq!(sg_is_common_fixed_point(f, &mut fixed), SgStatus::Ok);
        assert!(!fixed);
        sg_function_free(f);

        let steep = r#"{"minus_one":"0","breakpoints":[["0","0"],["1/2","1"]]}"#;
        let mut g = ptr::null_mut();
        assert_eq!(sg_function_from_json(c(steep).as_ptr(), &mut g), SgStatus::Ok);
        sg_in_c(g, &mut inside);
        assert!(!inside);
        let mut y = ptr::null_mut();
        assert_eq!(sg_apply(c("1").as_ptr(), g, &mut y), SgStatus::Domain);
        assert!(y.is_null());
        sg_function_free(g);
    }
}

#[test]
fn fixed_points_and_residual() {
    unsafe {
        let v = builtin("v:1/4");
        let mut fixed = false;
        sg_is_common_fixed_point(v, &mut fixed);
        assert!(fixed);
        sg_function_free(v);

        let zero = builtin("zero");
        let (mut r, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sg_cesaro_residual(zero, c("10").as_ptr(), ptr::null(), &mut r, &mut b), SgStatus::Ok);
        assert_eq!((take(r), take(b)), ("1/10".to_string(), "0".to_string()));
        let (mut r, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sg_cesaro_residual(zero, c("4").as_ptr(), c("1/4").as_ptr(), &mut r, &mut b), SgStatus::Ok);
        let (r, b) = (take(r), take(b));
        assert_eq!(b, "1/16");
        assert!(!r.is_empty());
        sg_function_free(zero);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(sg_function_from_json(ptr::null(), &mut f), SgStatus::NullPointer);
        assert_eq!(sg_function_from_json(c("{").as_ptr(), &mut f), SgStatus::Parse);
        assert_eq!(
            sg_function_from_json(c(r#"{"minus_one":"0","breakpoints":[["1","0"]]}"#).as_ptr(), &mut f),
            SgStatus::Structure
        );
        assert_eq!(sg_function_builtin(c("v:3/4").as_ptr(), &mut f), SgStatus::Argument);
        let bad = [0xffu8, 0];
        assert_eq!(sg_function_builtin(bad.as_ptr().cast(), &mut f), SgStatus::InvalidUtf8);

        let zero = builtin("zero");
        let mut y = ptr::null_mut();
        assert_eq!(sg_apply(c("-1").as_ptr(), zero, &mut y), SgStatus::Argument);
        assert!(last_error().contains("negative"));
        assert_eq!(sg_apply(c("1/0").as_ptr(), zero, &mut y), SgStatus::Parse);
        assert_eq!(sg_apply(c("1").as_ptr(), ptr::null(), &mut y), SgStatus::NullPointer);
        assert_eq!(sg_apply(c("1").as_ptr(), zero, ptr::null_mut()), SgStatus::NullPointer);
        let mut v = ptr::null_mut();
        assert_eq!(sg_eval(zero, c("-1/2").as_ptr(), &mut v), SgStatus::Domain);
        sg_function_free(zero);
        sg_function_free(ptr::null_mut());
        sg_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/semigroup.h");
    for name in [
        "sg_last_error",
        "sg_function_from_json",
        "sg_function_builtin",
        "sg_function_to_json",
        "sg_function_free",
        "sg_string_free",
        "sg_apply",
        "sg_sup_dist",
        "sg_in_c",
        "sg_is_common_fixed_point",
        "sg_eval",
        "sg_cesaro_residual",
        "typedef struct SgFunction SgFunction",
        "SG_STATUS_DOMAIN = 5",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
