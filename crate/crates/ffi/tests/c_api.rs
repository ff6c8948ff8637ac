use std::ffi::{CStr, CString};
use std::ptr;

use cylindric_ffi::*;

const SPLITTABLE: &str = r#"{"degree":0,"color":["d_0_0","d_1_1","x_0"]}"#;
const UNSATISFIABLE: &str = r#"{"degree":0,"color":["d_1_1","x_0"]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = cyl_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

fn params(n: usize, m: usize, variant: &str) -> *mut CylParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cyl_params_new(n, m, c(variant).as_ptr(), &mut p) }, CylStatus::Ok);
    p
}

fn form(p: *const CylParams, json: &str) -> *mut CylForm {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { cyl_form_from_json(p, c(json).as_ptr(), &mut f) }, CylStatus::Ok);
    f
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { cyl_string_free(s) };
    owned
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(cyl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn invalid_params_set_last_error() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cyl_params_new(1, 1, c("nca").as_ptr(), &mut p) }, CylStatus::Invalid);
    assert!(p.is_null());
    assert!(last_error().is_some());
    assert_eq!(unsafe { cyl_params_new(2, 1, c("ca").as_ptr(), &mut p) }, CylStatus::Invalid);
    assert!(last_error().unwrap().contains("variant"));
    let p = params(2, 1, "wca");
    assert_eq!(last_error(), None);
    unsafe { cyl_params_free(p) };
}

#[test]
fn null_arguments_are_reported() {
    let mut out = false;
    assert_eq!(unsafe { cyl_is_satisfiable(ptr::null(), ptr::null(), &mut out) }, CylStatus::NullArgument);
    assert!(last_error().unwrap().contains("params"));
    let p = params(2, 1, "nca");
    assert_eq!(
        unsafe { cyl_decide_equation(p, c("x0").as_ptr(), c("x0").as_ptr(), 1000, ptr::null_mut()) },
        CylStatus::NullArgument
    );
    unsafe {
        cyl_params_free(p);
        cyl_params_free(ptr::null_mut());
        cyl_form_free(ptr::null_mut());
        cyl_split_free(ptr::null_mut());
        cyl_string_free(ptr::null_mut());
    }
}

#[test]
fn satisfiability_matches_the_library() {
    let p = params(2, 1, "nca");
    let (sat, unsat) = (form(p, SPLITTABLE), form(p, UNSATISFIABLE));
    let mut out = false;
    assert_eq!(unsafe { cyl_is_satisfiable(p, sat, &mut out) }, CylStatus::Ok);
    assert!(out);
    assert_eq!(unsafe { cyl_is_satisfiable(p, unsat, &mut out) }, CylStatus::Ok);
    assert!(!out);
    assert_eq!(unsafe { cyl_form_degree(sat) }, 0);
    unsafe {
        cyl_form_free(sat);
        cyl_form_free(unsat);
        cyl_params_free(p);
    }
}

#[test]
fn form_json_round_trips() {
    let p = params(2, 1, "nca");
    let f = form(p, SPLITTABLE);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cyl_form_to_json(f, &mut s) }, CylStatus::Ok);
    let json = take_string(s);
    let g = form(p, &json);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { cyl_form_to_json(g, &mut again) }, CylStatus::Ok);
    assert_eq!(take_string(again), json);
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { cyl_form_from_json(p, c(r#"{"degree":0,"color":["d_5_0"]}"#).as_ptr(), &mut bad) }, CylStatus::Invalid);
    assert!(bad.is_null());
    unsafe {
        cyl_form_free(f);
        cyl_form_free(g);
        cyl_params_free(p);
    }
}

#[test]
fn equations_and_zero_tests() {
    let p = params(2, 1, "nca");
    let mut out = false;
    assert_eq!(unsafe { cyl_decide_equation(p, c("x0 * d0 1").as_ptr(), c("d0 1 * x0").as_ptr(), 1_000_000, &mut out) }, CylStatus::Ok);
    assert!(out);
    assert_eq!(unsafe { cyl_decide_equation(p, c("x0").as_ptr(), c("d0 1").as_ptr(), 1_000_000, &mut out) }, CylStatus::Ok);
    assert!(!out);
    assert_eq!(unsafe { cyl_decide_equation(p, c("c0(x0)").as_ptr(), c("x0").as_ptr(), 1_000_000, &mut out) }, CylStatus::Budget);
    assert_eq!(unsafe { cyl_decide_equation(p, c("c0 (").as_ptr(), c("x0").as_ptr(), 1_000_000, &mut out) }, CylStatus::Invalid);
    assert!(last_error().unwrap().contains("syntax"));
    assert_eq!(unsafe { cyl_decide_zero(p, c(UNSATISFIABLE).as_ptr(), &mut out) }, CylStatus::Ok);
    assert!(out);
    assert_eq!(unsafe { cyl_decide_zero(p, c(SPLITTABLE).as_ptr(), &mut out) }, CylStatus::Ok);
    assert!(!out);
    unsafe { cyl_params_free(p) };
}

#[test]
fn rewriting_and_budgets() {
    let p = params(2, 1, "nca");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cyl_rewrite(p, c("d0 1 * x0").as_ptr(), 1_000_000, &mut s) }, CylStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["forms"].as_array().unwrap().len(), 8);
    assert_eq!(unsafe { cyl_rewrite(p, c("c0(x0)").as_ptr(), 1_000_000, &mut s) }, CylStatus::Budget);
    assert!(last_error().unwrap().contains("budget exceeded"));
    unsafe { cyl_params_free(p) };
}

#[test]
fn split_produces_two_distinct_satisfiable_forms() {
    let p = params(2, 1, "nca");
    let tau = form(p, SPLITTABLE);
    let mut split = ptr::null_mut();
    assert_eq!(unsafe { cyl_split(p, tau, &mut split) }, CylStatus::Ok);
    let (mut sigma, mut gamma) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { cyl_split_sigma(split, &mut sigma) }, CylStatus::Ok);
    assert_eq!(unsafe { cyl_split_gamma(split, &mut gamma) }, CylStatus::Ok);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        cyl_form_to_json(sigma, &mut a);
        cyl_form_to_json(gamma, &mut b);
    }
    assert_ne!(take_string(a), take_string(b));
    for half in [sigma, gamma] {
        let mut sat = false;
        assert_eq!(unsafe { cyl_is_satisfiable(p, half, &mut sat) }, CylStatus::Ok);
        assert!(sat);
        assert_eq!(unsafe { cyl_form_degree(half) }, 1);
    }
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cyl_split_to_json(split, &mut s) }, CylStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert!(json.get("sigma").is_some() && json.get("gamma").is_some());
    unsafe {
        cyl_form_free(sigma);
        cyl_form_free(gamma);
        cyl_split_free(split);
        cyl_form_free(tau);
    }

    let unsat = form(p, UNSATISFIABLE);
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { cyl_split(p, unsat, &mut none) }, CylStatus::Invalid);
    assert!(none.is_null());
    unsafe {
        cyl_form_free(unsat);
        cyl_params_free(p);
    }
}
