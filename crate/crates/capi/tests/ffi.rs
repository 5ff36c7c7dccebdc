//! Exercises the C ABI end to end through the exported symbols, the way an
//! external binding would: opaque handles in, status codes and JSON out.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tempered_capi::*;

fn parse(json: &str, dim: usize) -> *mut TemperedExpr {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { tempered_expr_parse(c.as_ptr(), dim, &mut out) };
    assert!(
        matches!(status, TemperedStatus::Ok),
        "parse failed: {}",
        last_error()
    );
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tempered_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(p: *mut c_char) -> serde_json::Value {
    assert!(!p.is_null());
    let text = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { tempered_string_free(p) };
    serde_json::from_str(&text).expect("well-formed JSON from the ABI")
}

#[test]
fn expression_round_trip_is_canonical() {
    let doc = r#"{"kind":"dirac_complement","point":[1,-2]}"#;
    let h = parse(doc, 0);
    let mut out = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_expr_to_json(h, &mut out) },
        TemperedStatus::Ok
    ));
    let v = take_string(out);
    assert_eq!(v["kind"], "dirac_complement");
    assert_eq!(v["point"], serde_json::json!([1, -2]));
    let mut dim = 0usize;
    assert!(matches!(
        unsafe { tempered_expr_dim(h, &mut dim) },
        TemperedStatus::Ok
    ));
    assert_eq!(dim, 2);
    unsafe { tempered_expr_free(h) };
}

#[test]
fn divides_through_the_abi() {
    let g = parse(r#"{"kind":"const","re":"1","im":"0"}"#, 1);
    let f = parse(
        r#"{"kind":"coord_poly","terms":[{"exps":[1],"coeff":{"re":"1","im":"0"}}]}"#,
        1,
    );
    let mut out = ptr::null_mut();
    let status = unsafe { tempered_divides(g, f, 30, 32, &mut out) };
    assert!(matches!(status, TemperedStatus::Ok), "{}", last_error());
    let v = take_string(out);
    assert_eq!(v["verdict"], "divides");
    assert_eq!(v["scope"], "global");
    assert_eq!(v["certificate"]["M"], "1");
    assert_eq!(v["certificate"]["m"], 1);
    unsafe {
        tempered_expr_free(g);
        tempered_expr_free(f);
    }
}

#[test]
fn gcd_and_membership_through_the_abi() {
    let g1 = parse(r#"{"kind":"dirac","point":[0]}"#, 1);
    let g2 = parse(r#"{"kind":"dirac_complement","point":[0]}"#, 1);
    let gens = [g1 as *const TemperedExpr, g2 as *const TemperedExpr];

    let mut d = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_gcd(gens.as_ptr(), 2, &mut d) },
        TemperedStatus::Ok
    ));
    let mut djson = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_expr_to_json(d, &mut djson) },
        TemperedStatus::Ok
    ));
    assert_eq!(take_string(djson)["kind"], "magnitude_max_sq");

    let one = parse(r#"{"kind":"const","re":"1","im":"0"}"#, 1);
    let mut verdict = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_ideal_member(one, gens.as_ptr(), 2, 20, 32, &mut verdict) },
        TemperedStatus::Ok
    ));
    let v = take_string(verdict);
    assert_eq!(v["verdict"], "member");
    assert_eq!(v["cofactors"].as_array().unwrap().len(), 2);

    let mut principal = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_principal(gens.as_ptr(), 2, 20, 32, &mut principal) },
        TemperedStatus::Ok
    ));
    let p = take_string(principal);
    assert_eq!(p["reverse"]["verdict"], "member");

    unsafe {
        tempered_expr_free(g1);
        tempered_expr_free(g2);
        tempered_expr_free(one);
        tempered_expr_free(d);
    }
}

#[test]
fn classifier_and_maximal_membership() {
    let d = parse(r#"{"kind":"dirac_complement","point":[3,0]}"#, 2);
    let mut out = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_classify_prime(d, 20, 8, &mut out) },
        TemperedStatus::Ok
    ));
    let v = take_string(out);
    assert_eq!(v["classification"], "fixed_maximal");
    assert_eq!(v["point"], serde_json::json!([3, 0]));

    let coords = [3i64, 0];
    let mut member = 2u8;
    assert!(matches!(
        unsafe { tempered_fixed_maximal_member(d, coords.as_ptr(), 2, &mut member) },
        TemperedStatus::Ok
    ));
    assert_eq!(member, 1);
    unsafe { tempered_expr_free(d) };
}

#[test]
fn separator_zero_order_and_masks() {
    let n1 = [0i64, 0];
    let n2 = [1i64, 0];
    let mut sep = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_separator(n1.as_ptr(), n2.as_ptr(), 2, &mut sep) },
        TemperedStatus::Ok
    ));
    let mut member = 2u8;
    assert!(matches!(
        unsafe { tempered_fixed_maximal_member(sep, n1.as_ptr(), 2, &mut member) },
        TemperedStatus::Ok
    ));
    assert_eq!(member, 1);

    let mut mask = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_pattern_mask(1, 1, &mut mask) },
        TemperedStatus::Ok
    ));
    let point = [32i64];
    let mut zo = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_zero_order(mask, point.as_ptr(), 1, 100, &mut zo) },
        TemperedStatus::Ok
    ));
    let v = take_string(zo);
    assert_eq!(v["order"]["kind"], "finite");
    assert_eq!(v["order"]["value"], 26);

    let mut krull = ptr::null_mut();
    assert!(matches!(
        unsafe {
            tempered_krull_member(
                mask,
                TemperedKrullSet::ZeroOrderDivergent,
                1,
                10,
                &mut krull,
            )
        },
        TemperedStatus::Ok
    ));
    assert_eq!(take_string(krull)["verdict"]["verdict"], "certified_in");

    unsafe {
        tempered_expr_free(sep);
        tempered_expr_free(mask);
    }
}

#[test]
fn chain_report_and_errors() {
    let mut out = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_chain_report(1, 1, 10, &mut out) },
        TemperedStatus::Ok
    ));
    let v = take_string(out);
    assert_eq!(v["levels"], 1);
    assert_eq!(v["disjointness_violations"].as_array().unwrap().len(), 0);

    // budget violation surfaces as a status code with a message
    let mut big = ptr::null_mut();
    let status = unsafe { tempered_chain_report(1, 100, 10, &mut big) };
    assert!(matches!(status, TemperedStatus::BudgetExceeded));
    assert!(!last_error().is_empty());

    // equal points are rejected
    let p = [0i64];
    let mut sep = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_separator(p.as_ptr(), p.as_ptr(), 1, &mut sep) },
        TemperedStatus::Unsupported
    ));
}

#[test]
fn approximate_evaluation_of_square_roots() {
    let h = parse(
        r#"{"kind":"half_root","expr":{"kind":"const","re":"-1","im":"0"}}"#,
        1,
    );
    let p = [0i64];
    let mut out = ptr::null_mut();
    assert!(matches!(
        unsafe { tempered_eval_approx(h, p.as_ptr(), 1, 96, &mut out) },
        TemperedStatus::Ok
    ));
    let v = take_string(out);
    // sqrt(-1) = i: real part ~0, imaginary part ~1
    let im: String = v["value"]["im"].as_str().unwrap().into();
    assert!(im.starts_with('1') || im.starts_with("0.") || im.contains('/'));
    let err: String = v["abs_err"].as_str().unwrap().into();
    assert_ne!(err, "");
    unsafe { tempered_expr_free(h) };
}
