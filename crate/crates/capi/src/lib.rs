//! C ABI for the tempered library.
//!
//! Expressions travel as opaque `TemperedExpr` handles; every operation
//! returns a status code, writes its result through an out-parameter, and
//! reports verdicts as the same canonical JSON documents the CLI emits.
//! Strings returned through `char **` are owned by the library and must be
//! released with [`tempered_string_free`]; handles with
//! [`tempered_expr_free`]. On any non-OK status, [`tempered_last_error`]
//! returns a thread-local message describing the failure.

// Raw-pointer contracts are uniform across the ABI and documented in the
// crate doc: handles come from this library, strings are NUL-terminated,
// arrays are valid for the stated lengths.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::Signed;
use tempered::expr::{expr_from_str, expr_to_json, SeqExpr};
use tempered::growth::{audit_lower, audit_upper, GrowthCertificate, LowerCertificate, Scope};
use tempered::lattice::{LatticePoint, Window};
use tempered::number::rat_from_str;
use tempered::report;
use tempered::Error;

/// Opaque expression handle.
pub struct TemperedExpr {
    inner: SeqExpr,
}

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TemperedStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    DimensionMismatch = 3,
    EvalError = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> TemperedStatus {
    match err {
        Error::DimensionMismatch { .. } => TemperedStatus::DimensionMismatch,
        Error::Parse { .. } => TemperedStatus::ParseError,
        Error::HalfRootNotExact
        | Error::VanishesAt(_)
        | Error::CoordinateOverflow(_)
        | Error::QuotientNotInferable => TemperedStatus::EvalError,
        Error::BudgetExceeded(_) => TemperedStatus::BudgetExceeded,
        Error::EmptyList | Error::EqualPoints | Error::Unsupported(_) => {
            TemperedStatus::Unsupported
        }
    }
}

fn run_guarded<F: FnOnce() -> TemperedStatus>(f: F) -> TemperedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TemperedStatus::Panic
        }
    }
}

fn fail(err: Error) -> TemperedStatus {
    set_error(&err.to_string());
    status_of(&err)
}

unsafe fn expr_ref<'a>(handle: *const TemperedExpr) -> Option<&'a SeqExpr> {
    handle.as_ref().map(|h| &h.inner)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TemperedStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(TemperedStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TemperedStatus::ParseError
    })
}

unsafe fn read_point(coords: *const i64, len: usize) -> Result<LatticePoint, TemperedStatus> {
    if coords.is_null() || len == 0 {
        set_error("null or empty coordinate array");
        return Err(TemperedStatus::NullArgument);
    }
    let slice = std::slice::from_raw_parts(coords, len);
    Ok(LatticePoint::new(slice.to_vec()))
}

fn write_string(out: *mut *mut c_char, text: String) -> TemperedStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("result contained an interior NUL byte");
            return TemperedStatus::Unsupported;
        }
    };
    unsafe {
        *out = c.into_raw();
    }
    TemperedStatus::Ok
}

fn write_json(out: *mut *mut c_char, value: serde_json::Value) -> TemperedStatus {
    write_string(out, report::canonical_string(&value))
}

fn write_expr(out: *mut *mut TemperedExpr, expr: SeqExpr) -> TemperedStatus {
    unsafe {
        *out = Box::into_raw(Box::new(TemperedExpr { inner: expr }));
    }
    TemperedStatus::Ok
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tempered_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tempered_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release an expression handle.
#[no_mangle]
pub unsafe extern "C" fn tempered_expr_free(expr: *mut TemperedExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Parse an expression from canonical JSON. `dim = 0` infers the ambient
/// dimension from the document.
#[no_mangle]
pub unsafe extern "C" fn tempered_expr_parse(
    json: *const c_char,
    dim: usize,
    out: *mut *mut TemperedExpr,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() {
            set_error("null out parameter");
            return TemperedStatus::NullArgument;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match expr_from_str(text, if dim == 0 { None } else { Some(dim) }) {
            Ok(expr) => write_expr(out, expr),
            Err(e) => fail(e),
        }
    })
}

/// Serialize an expression to canonical JSON.
#[no_mangle]
pub unsafe extern "C" fn tempered_expr_to_json(
    expr: *const TemperedExpr,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        match expr_to_json(e) {
            Ok(v) => write_json(out, v),
            Err(err) => fail(err),
        }
    })
}

/// Ambient dimension of an expression.
#[no_mangle]
pub unsafe extern "C" fn tempered_expr_dim(
    expr: *const TemperedExpr,
    out: *mut usize,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        *out = e.dim();
        TemperedStatus::Ok
    })
}

/// The dyadic mask family member of the given order.
#[no_mangle]
pub unsafe extern "C" fn tempered_pattern_mask(
    dim: usize,
    order: u32,
    out: *mut *mut TemperedExpr,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() || dim == 0 {
            set_error("null out parameter or zero dimension");
            return TemperedStatus::NullArgument;
        }
        match SeqExpr::pattern_mask(dim, order) {
            Ok(e) => write_expr(out, e),
            Err(e) => fail(e),
        }
    })
}

/// Exact evaluation; the result is `{"value": {"re", "im"}}` JSON.
#[no_mangle]
pub unsafe extern "C" fn tempered_eval(
    expr: *const TemperedExpr,
    coords: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let point = match read_point(coords, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match tempered::eval(e, &point) {
            Ok(v) => write_json(out, serde_json::json!({"value": report::gaussian_json(&v)})),
            Err(err) => fail(err),
        }
    })
}

/// Approximate evaluation with a certified error bound:
/// `{"value": {"re", "im"}, "abs_err": "p/q"}`.
#[no_mangle]
pub unsafe extern "C" fn tempered_eval_approx(
    expr: *const TemperedExpr,
    coords: *const i64,
    len: usize,
    precision_bits: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let point = match read_point(coords, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match tempered::eval_approx(e, &point, precision_bits) {
            Ok(v) => write_json(
                out,
                serde_json::json!({
                    "value": report::gaussian_json(&v.value),
                    "abs_err": report::rational_json(&v.abs_err),
                }),
            ),
            Err(err) => fail(err),
        }
    })
}

/// Structural global growth certificate: `{"certificate": {"M", "m"}}`.
#[no_mangle]
pub unsafe extern "C" fn tempered_infer_certificate(
    expr: *const TemperedExpr,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        match tempered::growth::infer_certificate(e) {
            Ok(c) => write_json(
                out,
                serde_json::json!({"certificate": report::certificate_json(&c), "scope": "global"}),
            ),
            Err(err) => fail(err),
        }
    })
}

/// Audit an upper certificate `|f| <= M (1+|n|)^m` on the window of the
/// given radius. `bound` is a rational string such as `"3/2"`.
#[no_mangle]
pub unsafe extern "C" fn tempered_audit_upper(
    expr: *const TemperedExpr,
    bound: *const c_char,
    degree: u32,
    radius: u64,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let bound = match read_str(bound).and_then(|s| rat_from_str(s).map_err(fail)) {
            Ok(b) => b,
            Err(s) => return s,
        };
        if !bound.numer().is_positive() {
            set_error("the bound M must be positive");
            return TemperedStatus::Unsupported;
        }
        let cert = GrowthCertificate::new(bound, degree);
        match audit_upper(e, &cert, &Window::new(e.dim(), radius)) {
            Ok(r) => write_json(out, report::audit_json(&r, Scope::Window(radius))),
            Err(err) => fail(err),
        }
    })
}

/// Audit a lower certificate `|f| >= delta (1+|n|)^-m` on a window.
#[no_mangle]
pub unsafe extern "C" fn tempered_audit_lower(
    expr: *const TemperedExpr,
    delta: *const c_char,
    degree: u32,
    radius: u64,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(e), false) = (expr_ref(expr), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let delta = match read_str(delta).and_then(|s| rat_from_str(s).map_err(fail)) {
            Ok(b) => b,
            Err(s) => return s,
        };
        if !delta.numer().is_positive() {
            set_error("delta must be positive");
            return TemperedStatus::Unsupported;
        }
        let cert = LowerCertificate::new(delta, degree);
        match audit_lower(e, &cert, &Window::new(e.dim(), radius)) {
            Ok(r) => write_json(out, report::audit_json(&r, Scope::Window(radius))),
            Err(err) => fail(err),
        }
    })
}

/// Divisibility verdict JSON (same shape as the CLI `divides` body).
#[no_mangle]
pub unsafe extern "C" fn tempered_divides(
    g: *const TemperedExpr,
    f: *const TemperedExpr,
    radius: u64,
    m_cap: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(g), Some(f), false) = (expr_ref(g), expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let window = Window::new(g.dim(), radius);
        match tempered::ring::divides(g, f, &window, m_cap).and_then(|v| report::divides_json(&v)) {
            Ok((body, _)) => write_json(out, body),
            Err(err) => fail(err),
        }
    })
}

/// Invertibility verdict JSON.
#[no_mangle]
pub unsafe extern "C" fn tempered_is_invertible(
    f: *const TemperedExpr,
    radius: u64,
    m_cap: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let window = Window::new(f.dim(), radius);
        match tempered::ring::is_invertible(f, &window, m_cap)
            .and_then(|v| report::invertibility_json(&v))
        {
            Ok((body, _)) => write_json(out, body),
            Err(err) => fail(err),
        }
    })
}

unsafe fn read_generators(
    gens: *const *const TemperedExpr,
    count: usize,
) -> Result<Vec<SeqExpr>, TemperedStatus> {
    if gens.is_null() || count == 0 {
        set_error("null or empty generator array");
        return Err(TemperedStatus::NullArgument);
    }
    let handles = std::slice::from_raw_parts(gens, count);
    let mut out = Vec::with_capacity(count);
    for h in handles {
        match expr_ref(*h) {
            Some(e) => out.push(e.clone()),
            None => {
                set_error("null generator handle");
                return Err(TemperedStatus::NullArgument);
            }
        }
    }
    Ok(out)
}

/// Magnitude-max GCD of a generator list, as a new expression handle.
#[no_mangle]
pub unsafe extern "C" fn tempered_gcd(
    gens: *const *const TemperedExpr,
    count: usize,
    out: *mut *mut TemperedExpr,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() {
            set_error("null out parameter");
            return TemperedStatus::NullArgument;
        }
        let generators = match read_generators(gens, count) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match tempered::ring::gcd(&generators) {
            Ok(d) => write_expr(out, d),
            Err(e) => fail(e),
        }
    })
}

/// Ideal membership verdict JSON with cofactor witnesses.
#[no_mangle]
pub unsafe extern "C" fn tempered_ideal_member(
    f: *const TemperedExpr,
    gens: *const *const TemperedExpr,
    count: usize,
    radius: u64,
    m_cap: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let generators = match read_generators(gens, count) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let window = Window::new(f.dim(), radius);
        match tempered::ring::ideal_member(f, &generators, &window, m_cap)
            .and_then(|v| report::membership_json(&v))
        {
            Ok((body, _)) => write_json(out, body),
            Err(err) => fail(err),
        }
    })
}

/// Principalization report JSON.
#[no_mangle]
pub unsafe extern "C" fn tempered_principal(
    gens: *const *const TemperedExpr,
    count: usize,
    radius: u64,
    m_cap: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() {
            set_error("null out parameter");
            return TemperedStatus::NullArgument;
        }
        let generators = match read_generators(gens, count) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let window = Window::new(generators[0].dim(), radius);
        match tempered::ring::principal_generator(&generators, &window, m_cap)
            .and_then(|r| report::principal_json(&r))
        {
            Ok((body, _)) => write_json(out, body),
            Err(err) => fail(err),
        }
    })
}

/// Membership in the fixed maximal ideal at a point; writes 0 or 1.
#[no_mangle]
pub unsafe extern "C" fn tempered_fixed_maximal_member(
    f: *const TemperedExpr,
    coords: *const i64,
    len: usize,
    out: *mut u8,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let point = match read_point(coords, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match tempered::ideals::fixed_maximal_member(f, &point) {
            Ok(member) => {
                *out = u8::from(member);
                TemperedStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Separator expression for two distinct points of the same dimension.
#[no_mangle]
pub unsafe extern "C" fn tempered_separator(
    first: *const i64,
    second: *const i64,
    len: usize,
    out: *mut *mut TemperedExpr,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() {
            set_error("null out parameter");
            return TemperedStatus::NullArgument;
        }
        let p1 = match read_point(first, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let p2 = match read_point(second, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match tempered::ideals::separator(&p1, &p2) {
            Ok(e) => write_expr(out, e),
            Err(e) => fail(e),
        }
    })
}

/// Prime classification JSON for the principal ideal generated by `d`.
#[no_mangle]
pub unsafe extern "C" fn tempered_classify_prime(
    d: *const TemperedExpr,
    radius: u64,
    m_cap: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(d), false) = (expr_ref(d), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let window = Window::new(d.dim(), radius);
        match tempered::ideals::classify_principal_prime(d, &window, m_cap)
            .and_then(|c| report::classification_json(&c))
        {
            Ok((body, _)) => write_json(out, body),
            Err(err) => fail(err),
        }
    })
}

/// Membership in the diagonal decay ideal along an explicit subsequence.
#[no_mangle]
pub unsafe extern "C" fn tempered_nonfixed_member(
    f: *const TemperedExpr,
    subsequence: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        if subsequence.is_null() || len == 0 {
            set_error("null or empty subsequence");
            return TemperedStatus::NullArgument;
        }
        let subseq = std::slice::from_raw_parts(subsequence, len);
        match tempered::ideals::nonfixed_ideal_member(f, subseq) {
            Ok(v) => write_json(out, report::nonfixed_json(&v).0),
            Err(e) => fail(e),
        }
    })
}

/// Zero-order at a point with the given scan cap:
/// `{"order": {"kind", "value"}}`.
#[no_mangle]
pub unsafe extern "C" fn tempered_zero_order(
    f: *const TemperedExpr,
    coords: *const i64,
    len: usize,
    cap: u64,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let point = match read_point(coords, len) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if cap == 0 {
            set_error("zero-order cap must be >= 1");
            return TemperedStatus::Unsupported;
        }
        match tempered::krull::zero_order(f, &point, cap) {
            Ok(o) => write_json(
                out,
                serde_json::json!({"order": report::zero_order_json(&o)}),
            ),
            Err(e) => fail(e),
        }
    })
}

/// Which dyadic set family a membership query addresses.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TemperedKrullSet {
    DyadicVanishing = 0,
    ZeroOrderDivergent = 1,
    ZeroOrderBounded = 2,
}

/// Membership verdict JSON for one of the dyadic set families.
#[no_mangle]
pub unsafe extern "C" fn tempered_krull_member(
    f: *const TemperedExpr,
    set: TemperedKrullSet,
    degree: u32,
    horizon: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        let (Some(f), false) = (expr_ref(f), out.is_null()) else {
            set_error("null argument");
            return TemperedStatus::NullArgument;
        };
        let result = match set {
            TemperedKrullSet::DyadicVanishing => {
                tempered::krull::membership_dyadic_vanishing(f, horizon)
            }
            TemperedKrullSet::ZeroOrderDivergent => {
                tempered::krull::membership_divergent(f, degree, horizon)
            }
            TemperedKrullSet::ZeroOrderBounded => {
                tempered::krull::membership_bounded(f, degree, horizon)
            }
        };
        match result {
            Ok(m) => write_json(out, report::krull_membership_json(&m).0),
            Err(e) => fail(e),
        }
    })
}

/// Full chain evidence report JSON.
#[no_mangle]
pub unsafe extern "C" fn tempered_chain_report(
    dim: usize,
    levels: u32,
    horizon: u32,
    out: *mut *mut c_char,
) -> TemperedStatus {
    run_guarded(|| {
        if out.is_null() || dim == 0 {
            set_error("null out parameter or zero dimension");
            return TemperedStatus::NullArgument;
        }
        match tempered::krull::chain_report(dim, levels, horizon) {
            Ok(r) => write_json(out, report::chain_report_json(&r)),
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn parse(json: &str, dim: usize) -> *mut TemperedExpr {
        let c = CString::new(json).unwrap();
        let mut out = ptr::null_mut();
        let status = unsafe { tempered_expr_parse(c.as_ptr(), dim, &mut out) };
        assert!(matches!(status, TemperedStatus::Ok));
        out
    }

    fn take_string(p: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
        unsafe { tempered_string_free(p) };
        s
    }

    #[test]
    fn parse_eval_roundtrip() {
        let h = parse(r#"{"kind":"dirac","point":[2,2]}"#, 0);
        let coords = [2i64, 2];
        let mut out = ptr::null_mut();
        let status = unsafe { tempered_eval(h, coords.as_ptr(), 2, &mut out) };
        assert!(matches!(status, TemperedStatus::Ok));
        let text = take_string(out);
        assert!(text.contains(r#""re":"1""#), "{text}");
        unsafe { tempered_expr_free(h) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut out = ptr::null_mut();
        let status = unsafe { tempered_expr_parse(ptr::null(), 0, &mut out) };
        assert!(matches!(status, TemperedStatus::NullArgument));
        let msg = unsafe { CStr::from_ptr(tempered_last_error()) };
        assert!(!msg.to_bytes().is_empty());
    }

    #[test]
    fn parse_error_reports_message() {
        let c = CString::new("{not json").unwrap();
        let mut out = ptr::null_mut();
        let status = unsafe { tempered_expr_parse(c.as_ptr(), 1, &mut out) };
        assert!(matches!(status, TemperedStatus::ParseError));
    }
}
