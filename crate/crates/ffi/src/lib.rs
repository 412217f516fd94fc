//! C ABI over `cg3`.
//!
//! Every function returns a [`Cg3Status`]. Results come back through out
//! pointers; strings are NUL-terminated UTF-8 JSON owned by the caller and
//! released with [`cg3_string_free`]. On failure the thread-local message
//! from [`cg3_last_error`] describes what went wrong.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cg3::cgops::project;
use cg3::lr3::{decompose, dim_irrep, HomSpaceSpec};
use cg3::ratverify::{
    candidate_search, recheck_candidate, verify_double_bundle, verify_grassmannian_bundle, with_retries,
    DoubleBundleInstance, VerificationReport,
};
use cg3::{Error, Rational, TensorPoly, Weight};
use serde_json::{json, Value};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cg3Status {
    Ok = 0,
    /// A verification ran to completion but the ranks fell short. The report is still returned.
    RankDeficient = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    InvalidJson = 4,
    InvalidInstance = 5,
    NotOccurring = 6,
    NotPrime = 7,
    DenominatorDivisibleByP = 8,
    InvalidPolynomial = 9,
    InvalidWeight = 10,
    Internal = 11,
    Panic = 12,
}

impl From<&Error> for Cg3Status {
    fn from(e: &Error) -> Self {
        match e.kind() {
            "RankDeficient" => Cg3Status::RankDeficient,
            "InvalidInstance" => Cg3Status::InvalidInstance,
            "NotOccurring" => Cg3Status::NotOccurring,
            "NotPrime" => Cg3Status::NotPrime,
            "DenominatorDivisibleByP" => Cg3Status::DenominatorDivisibleByP,
            "Polynomial" => Cg3Status::InvalidPolynomial,
            "Weight" => Cg3Status::InvalidWeight,
            _ => Cg3Status::Internal,
        }
    }
}

/// An element of a tensor space `S^a ⊗ D^b ⊗ ...` with rational coefficients.
pub struct Cg3Poly(TensorPoly<Rational>);

/// Outcome of a bundle verification.
pub struct Cg3Report(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(Cg3Status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(Cg3Status::from(&e), e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<Cg3Status, Failure>>(f: F) -> Cg3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == Cg3Status::Ok {
                set_last_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside cg3");
            Cg3Status::Panic
        }
    }
}

fn null() -> Failure {
    Failure(Cg3Status::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(Cg3Status::InvalidUtf8, e.to_string()))
}

unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let s = serde_json::to_string(v).map_err(|e| Failure(Cg3Status::Internal, e.to_string()))?;
    *out = CString::new(s).map_err(|e| Failure(Cg3Status::Internal, e.to_string()))?.into_raw();
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure(Cg3Status::Internal, e.to_string()))
}

/// Message describing the most recent failure on this thread, or an empty
/// string. The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn cg3_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dimension of `V(a,b)`.
#[no_mangle]
pub extern "C" fn cg3_dim(a: u32, b: u32) -> u64 {
    dim_irrep(Weight::new(a, b))
}

/// Decomposition of `V(a1,b1) ⊗ V(a2,b2)` as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_decompose_json(a1: u32, b1: u32, a2: u32, b2: u32, out: *mut *mut c_char) -> Cg3Status {
    guard(|| {
        let d = decompose(Weight::new(a1, b1), Weight::new(a2, b2));
        write_json(out, &to_value(&d)?)?;
        Ok(Cg3Status::Ok)
    })
}

/// Parameters of `Hom(V(a1,b1) ⊗ V(a2,b2), V(a3,b3))` as JSON `{s,t,J,mult}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_homspace_json(
    a1: u32,
    b1: u32,
    a2: u32,
    b2: u32,
    a3: u32,
    b3: u32,
    out: *mut *mut c_char,
) -> Cg3Status {
    guard(|| {
        let v = match HomSpaceSpec::new(Weight::new(a1, b1), Weight::new(a2, b2), Weight::new(a3, b3)) {
            Some(h) => json!({ "s": h.s, "t": h.t, "J": h.js, "mult": h.multiplicity() }),
            None => json!({ "s": null, "t": null, "J": [], "mult": 0 }),
        };
        write_json(out, &v)?;
        Ok(Cg3Status::Ok)
    })
}

/// Parses a polynomial from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_poly_from_json(json: *const c_char, out: *mut *mut Cg3Poly) -> Cg3Status {
    guard(|| {
        let text = read_str(json)?;
        if out.is_null() {
            return Err(null());
        }
        let p: TensorPoly<Rational> =
            serde_json::from_str(text).map_err(|e| Failure(Cg3Status::InvalidJson, e.to_string()))?;
        *out = Box::into_raw(Box::new(Cg3Poly(p)));
        Ok(Cg3Status::Ok)
    })
}

/// Serializes a polynomial to JSON.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_poly_to_json(poly: *const Cg3Poly, out: *mut *mut c_char) -> Cg3Status {
    guard(|| {
        let p = poly.as_ref().ok_or_else(null)?;
        write_json(out, &to_value(&p.0)?)?;
        Ok(Cg3Status::Ok)
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cg3_poly_len(poly: *const Cg3Poly) -> usize {
    poly.as_ref().map_or(0, |p| p.0.len())
}

/// Releases a polynomial handle. Null is ignored.
///
/// # Safety
/// `poly` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg3_poly_free(poly: *mut Cg3Poly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Projects an element of `S^a ⊗ D^b` onto `V(a,b)`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_project(a: u32, b: u32, poly: *const Cg3Poly, out: *mut *mut Cg3Poly) -> Cg3Status {
    guard(|| {
        let p = poly.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let v = project(Weight::new(a, b), &p.0, &())?;
        *out = Box::into_raw(Box::new(Cg3Poly(v)));
        Ok(Cg3Status::Ok)
    })
}

/// Checks that the bundle map `V(src) ⊗ V(mid) → V(dst)` at a random point
/// has full rank over 𝔽_p. Uses the double-bundle check when
/// `dim mid − dim dst = 1` and the Grassmannian check otherwise.
///
/// Returns [`Cg3Status::Ok`] or [`Cg3Status::RankDeficient`] together with a
/// report; any other status leaves `out` untouched.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn cg3_verify(
    src_a: u32,
    src_b: u32,
    mid_a: u32,
    mid_b: u32,
    dst_a: u32,
    dst_b: u32,
    j: u32,
    prime: u32,
    seed: u64,
    retries: u64,
    out: *mut *mut Cg3Report,
) -> Cg3Status {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let inst = DoubleBundleInstance::new(
            Weight::new(src_a, src_b),
            Weight::new(mid_a, mid_b),
            Weight::new(dst_a, dst_b),
            j,
        )?
        .with_prime(prime)
        .with_seed(seed);
        let result = if inst.k == 1 {
            with_retries(&inst, retries, verify_double_bundle)
        } else {
            with_retries(&inst, retries, verify_grassmannian_bundle)
        };
        let (report, status) = match result {
            Ok(r) => (r, Cg3Status::Ok),
            Err(Error::RankDeficient(r)) => {
                set_last_error(&r.summary());
                (*r, Cg3Status::RankDeficient)
            }
            Err(e) => return Err(e.into()),
        };
        *out = Box::into_raw(Box::new(Cg3Report(report)));
        Ok(status)
    })
}

/// Whether the verification met its expected ranks.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cg3_report_passed(report: *const Cg3Report) -> bool {
    report.as_ref().is_some_and(|r| r.0.passed)
}

/// Serializes a report to JSON. Wall-clock timing is omitted so output is reproducible.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_report_to_json(report: *const Cg3Report, out: *mut *mut c_char) -> Cg3Status {
    guard(|| {
        let r = report.as_ref().ok_or_else(null)?;
        let mut v = to_value(&r.0)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("runtimeMs");
        }
        write_json(out, &v)?;
        Ok(Cg3Status::Ok)
    })
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg3_report_free(report: *mut Cg3Report) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Candidate bundles for `V(a,b)` with labels up to `max_label`, as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg3_search_json(
    a: u32,
    b: u32,
    max_label: u32,
    max_summands: u32,
    essential_only: bool,
    out: *mut *mut c_char,
) -> Cg3Status {
    guard(|| {
        if !(1..=2).contains(&max_summands) {
            return Err(Failure(Cg3Status::InvalidInstance, "max_summands must be 1 or 2".into()));
        }
        let source = Weight::new(a, b);
        let mut hits = candidate_search(source, max_label, max_summands);
        if essential_only {
            hits.retain(|c| c.essential);
        }
        let rechecked = hits.iter().all(|c| recheck_candidate(source, c));
        let v = json!({
            "source": source,
            "maxLabel": max_label,
            "maxSummands": max_summands,
            "candidates": hits,
            "recheckPassed": rechecked,
        });
        write_json(out, &v)?;
        Ok(Cg3Status::Ok)
    })
}
