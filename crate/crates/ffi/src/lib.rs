//! C ABI over the flagherm engine.
//!
//! Spaces are opaque handles. Every fallible call returns an [`FhStatus`];
//! on failure the message is kept per thread and read back with
//! [`fh_last_error_message`]. Strings handed out by the library must be
//! released with [`fh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use flagherm::curvature::curvature_report;
use flagherm::exact::to_f64;
use flagherm::flagspace::{builtin_space, FlagSpace};
use flagherm::hermitian::{make_acs, make_metric, make_symbolic_metric};
use flagherm::parse::{parse_poly_list, parse_rational_list, parse_signs};
use flagherm::render::{self, DEFAULT_PRECISION};
use flagherm::solver::solve_klsc;
use flagherm::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownSpace = 3,
    Parse = 4,
    InvalidMetric = 5,
    InvalidAcs = 6,
    Arity = 7,
    Domain = 8,
    Unsupported = 9,
    Internal = 10,
}

/// Opaque handle to a built-in flag space.
pub struct FhSpace {
    inner: Arc<FlagSpace>,
}

/// Everything in a curvature report, as doubles.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FhReportValues {
    pub n0_sq: f64,
    pub df_minus_sq: f64,
    pub df_plus_sq: f64,
    pub big_df_sq: f64,
    pub s: f64,
    pub s1: f64,
    /// s₂(t) = s2_a·t² + s2_b·t + s2_c
    pub s2_a: f64,
    pub s2_b: f64,
    pub s2_c: f64,
    pub s_j: f64,
    pub defect: f64,
    /// bit 0: W1, bit 1: W2, bit 2: W3; zero means Kähler
    pub gh_class: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FhStatus {
    match e {
        Error::UnknownSpace(_) => FhStatus::UnknownSpace,
        Error::Parse(_) => FhStatus::Parse,
        Error::InvalidMetric(_) => FhStatus::InvalidMetric,
        Error::InvalidAcs(_) | Error::SpaceMismatch => FhStatus::InvalidAcs,
        Error::ArityMismatch { .. } => FhStatus::Arity,
        Error::Domain(_) | Error::InvalidTolerance => FhStatus::Domain,
        Error::UnsupportedFamily(_) | Error::ZeroPolynomial => FhStatus::Unsupported,
        _ => FhStatus::Internal,
    }
}

struct Fail(FhStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status plus the thread's message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FhStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FhStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(FhStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(FhStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const FhSpace) -> Result<&'a FhSpace, Fail> {
    p.as_ref().ok_or_else(|| Fail(FhStatus::NullPointer, "space handle is null".into()))
}

unsafe fn hand_out(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(FhStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s).map_err(|_| Fail(FhStatus::Internal, "nul in output".into()))?.into_raw();
    Ok(())
}

/// Looks up a built-in space ("su3-full", "cp3", "su4-full", "g2-u2", "g2-full").
///
/// # Safety
/// `name` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_space_new(name: *const c_char, out: *mut *mut FhSpace) -> FhStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(FhStatus::NullPointer, "output pointer is null".into()));
        }
        *out = ptr::null_mut();
        let fs = builtin_space(text(name, "name")?)?;
        *out = Box::into_raw(Box::new(FhSpace { inner: Arc::new(fs) }));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`fh_space_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fh_space_free(space: *mut FhSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of isotropy summands; 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fh_space_summand_count(space: *const FhSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.summand_count())
}

/// Number of stored zero-sum triples; 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fh_space_triple_count(space: *const FhSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.zero_sum_triples().len())
}

/// Full exact report for a numeric metric ("1,2/3,1") and structure ("+,+,-") as JSON.
///
/// # Safety
/// Pointers must be valid; `*out` receives a string for [`fh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fh_report_json(
    space: *const FhSpace,
    metric: *const c_char,
    acs: *const c_char,
    out: *mut *mut c_char,
) -> FhStatus {
    guard(|| {
        let fs = &handle(space)?.inner;
        let g = make_metric(fs.clone(), parse_rational_list(text(metric, "metric")?)?)?;
        let j = make_acs(fs.clone(), &parse_signs(text(acs, "acs")?)?)?;
        let r = curvature_report(&g, &j)?;
        let v = render::report_json(&g, &j, &r, None, DEFAULT_PRECISION);
        hand_out(out, serde_json::to_string(&v).expect("serializable"))
    })
}

/// Same report as [`fh_report_json`], reduced to doubles.
///
/// # Safety
/// Pointers must be valid; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fh_report_values(
    space: *const FhSpace,
    metric: *const c_char,
    acs: *const c_char,
    out: *mut FhReportValues,
) -> FhStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(FhStatus::NullPointer, "output pointer is null".into()));
        }
        let fs = &handle(space)?.inner;
        let g = make_metric(fs.clone(), parse_rational_list(text(metric, "metric")?)?)?;
        let j = make_acs(fs.clone(), &parse_signs(text(acs, "acs")?)?)?;
        let r = curvature_report(&g, &j)?;
        let c = r.gh_class;
        *out = FhReportValues {
            n0_sq: to_f64(&r.norms.n0_sq),
            df_minus_sq: to_f64(&r.norms.df_minus_sq),
            df_plus_sq: to_f64(&r.norms.df_plus_sq),
            big_df_sq: to_f64(&r.norms.big_df_sq),
            s: to_f64(&r.s),
            s1: to_f64(&r.s1),
            s2_a: to_f64(&r.s2.a),
            s2_b: to_f64(&r.s2.b),
            s2_c: to_f64(&r.s2.c),
            s_j: to_f64(&r.s_j),
            defect: to_f64(&r.defect),
            gh_class: c.w1 as u32 | (c.w2 as u32) << 1 | (c.w3 as u32) << 2,
        };
        Ok(())
    })
}

/// Solves 2s₁ − s = 0 along a family ("x^2,x^2,1,x^2,1,1") for `var`; JSON out.
///
/// # Safety
/// Pointers must be valid; `*out` receives a string for [`fh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fh_solve_json(
    space: *const FhSpace,
    acs: *const c_char,
    family: *const c_char,
    var: *const c_char,
    tol: f64,
    out: *mut *mut c_char,
) -> FhStatus {
    guard(|| {
        let fs = &handle(space)?.inner;
        let j = make_acs(fs.clone(), &parse_signs(text(acs, "acs")?)?)?;
        let g = make_symbolic_metric(fs.clone(), parse_poly_list(text(family, "family")?)?)?;
        let sol = solve_klsc(&g, &j, text(var, "var")?, tol)?;
        let v = render::solution_json(&sol, DEFAULT_PRECISION);
        hand_out(out, serde_json::to_string(&v).expect("serializable"))
    })
}

/// Message for the most recent failure on this thread, or null. Owned by the library;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
