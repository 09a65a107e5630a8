//! C ABI over the `dyndrf` crate.
//!
//! Every fallible function returns a [`DrfStatus`] and writes its result
//! through an out-pointer. On failure, [`drf_last_error_message`] returns a
//! description of the most recent error on the calling thread. Strings
//! handed out by this library must be released with [`drf_string_free`];
//! handles with their matching `_free` function.
//!
//! Agent indices are zero-based and steps run from 1 to `n`, as in the Rust
//! API. Split indices reported by [`drf_run_split`] are one-based (the first
//! agent holding the water level).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dyndrf::dynamic::{self, Algorithm, StepSolution};
use dyndrf::generate;
use dyndrf::io::{self, RatioReportFile, RunReportFile};
use dyndrf::model::{Instance, RawDemandMatrix};
use dyndrf::ratio::{self, ObjectiveSet};
use dyndrf::rational::{exact_string, ratio, to_f64};
use dyndrf::Error;

/// Status codes. The first five match the exit codes of the `dyndrf` CLI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrfStatus {
    Ok = 0,
    ParseError = 1,
    ValidationError = 2,
    PropertyViolation = 3,
    InternalError = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrfAlgorithm {
    Bisect = 0,
    Naive = 1,
    Lp = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrfObjective {
    Maxsum = 0,
    Maxmin = 1,
    Both = 2,
}

/// Opaque validated instance.
pub struct DrfInstance {
    inner: Instance,
}

/// Opaque completed run: the instance and every step solution.
pub struct DrfRun {
    instance: Instance,
    algorithm: Algorithm,
    steps: Vec<StepSolution>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

enum Failure {
    Status(DrfStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(DrfStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure::Status(DrfStatus::InvalidArgument, message.into())
}

fn status_of(e: &Error) -> DrfStatus {
    match e {
        Error::Parse(_) => DrfStatus::ParseError,
        Error::Validation(_) => DrfStatus::ValidationError,
        Error::Violation(_) => DrfStatus::PropertyViolation,
        Error::Internal(_) => DrfStatus::InternalError,
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DrfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            DrfStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside dyndrf");
            DrfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|_| invalid("string contains a nul byte"))?;
    put(out, c.into_raw())
}

unsafe fn put_instance(out: *mut *mut DrfInstance, inner: Instance) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(DrfInstance { inner })))
}

fn eps(num: i64, den: i64) -> Result<dyndrf::rational::Rational, Failure> {
    if den == 0 {
        return Err(invalid("epsilon denominator is zero"));
    }
    Ok(ratio(num, den))
}

/// Builds an instance from an `n x m` row-major matrix of fractions
/// `num[i] / den[i]`. Rows whose largest entry is not 1 are normalized.
///
/// # Safety
/// `num` and `den` must each point to `n * m` readable values.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_new(
    n: usize,
    m: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut DrfInstance,
) -> DrfStatus {
    guard(|| {
        if num.is_null() || den.is_null() {
            return Err(null("demand matrix"));
        }
        let len = n.checked_mul(m).ok_or_else(|| invalid("matrix too large"))?;
        let num = std::slice::from_raw_parts(num, len);
        let den = std::slice::from_raw_parts(den, len);
        if let Some(i) = den.iter().position(|&d| d == 0) {
            return Err(invalid(format!("zero denominator at entry {i}")));
        }
        let rows = (0..n)
            .map(|i| (0..m).map(|r| ratio(num[i * m + r], den[i * m + r])).collect())
            .collect();
        let raw = RawDemandMatrix::new(rows).map_err(Error::from)?;
        let instance = Instance::from_raw(&raw).map_err(Error::from)?;
        put_instance(out, instance)
    })
}

/// Parses an instance in the text format read by `dyndrf allocate --in`.
///
/// # Safety
/// `text` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_parse(text: *const c_char, out: *mut *mut DrfInstance) -> DrfStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Error::Parse("instance text is not UTF-8".into()))?;
        let parsed = io::parse_instance(text).map_err(Error::from)?;
        put_instance(out, parsed.instance)
    })
}

/// Renders an instance in the text format.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_to_text(instance: *const DrfInstance, out: *mut *mut c_char) -> DrfStatus {
    guard(|| {
        let instance = deref(instance, "instance")?;
        put_string(out, io::write_instance(&instance.inner, None))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_gen_theorem1(
    m: usize,
    n: usize,
    eps_num: i64,
    eps_den: i64,
    out: *mut *mut DrfInstance,
) -> DrfStatus {
    guard(|| {
        let instance = generate::gen_theorem1(m, n, &eps(eps_num, eps_den)?).map_err(Error::from)?;
        put_instance(out, instance)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_gen_theorem2(m: usize, eps_num: i64, eps_den: i64, out: *mut *mut DrfInstance) -> DrfStatus {
    guard(|| {
        let instance = generate::gen_theorem2(m, &eps(eps_num, eps_den)?).map_err(Error::from)?;
        put_instance(out, instance)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_gen_random(
    n: usize,
    m: usize,
    seed: u64,
    denom_bound: u32,
    out: *mut *mut DrfInstance,
) -> DrfStatus {
    guard(|| {
        let instance = generate::gen_random(n, m, seed, denom_bound).map_err(Error::from)?;
        put_instance(out, instance)
    })
}

/// Agent count, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_n(instance: *const DrfInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.n())
}

/// Resource count, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_m(instance: *const DrfInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.m())
}

/// # Safety
/// `instance` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn drf_instance_free(instance: *mut DrfInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Runs every step with the chosen routine. Each step is checked against
/// the allocation properties; a failure yields `DRF_STATUS_PROPERTY_VIOLATION`.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_new(
    instance: *const DrfInstance,
    algorithm: DrfAlgorithm,
    out: *mut *mut DrfRun,
) -> DrfStatus {
    guard(|| {
        let instance = deref(instance, "instance")?.inner.clone();
        let algorithm = match algorithm {
            DrfAlgorithm::Bisect => Algorithm::Bisect,
            DrfAlgorithm::Naive => Algorithm::Naive,
            DrfAlgorithm::Lp => Algorithm::Lp,
        };
        let steps = dynamic::run_with(&instance, algorithm).map_err(Error::from)?;
        put(out, Box::into_raw(Box::new(DrfRun { instance, algorithm, steps })))
    })
}

/// # Safety
/// `run` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn drf_run_free(run: *mut DrfRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

fn step_of(run: &DrfRun, k: usize) -> Result<&StepSolution, Failure> {
    if k == 0 || k > run.steps.len() {
        return Err(invalid(format!("step {k} outside 1..={}", run.steps.len())));
    }
    Ok(&run.steps[k - 1])
}

fn share_of(run: &DrfRun, k: usize, agent: usize) -> Result<&dyndrf::rational::Rational, Failure> {
    let step = step_of(run, k)?;
    if agent >= k {
        return Err(invalid(format!("agent {agent} not present at step {k}")));
    }
    Ok(step.shares.share(agent))
}

/// Exact share of `agent` after step `k`, as `p/q`.
///
/// # Safety
/// `run` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_share(run: *const DrfRun, k: usize, agent: usize, out: *mut *mut c_char) -> DrfStatus {
    guard(|| {
        let share = share_of(deref(run, "run")?, k, agent)?;
        put_string(out, exact_string(share))
    })
}

/// Nearest double to the share of `agent` after step `k`.
///
/// # Safety
/// `run` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_share_f64(run: *const DrfRun, k: usize, agent: usize, out: *mut f64) -> DrfStatus {
    guard(|| {
        let share = share_of(deref(run, "run")?, k, agent)?;
        put(out, to_f64(share))
    })
}

/// Exact water level of step `k`, as `p/q`.
///
/// # Safety
/// `run` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_water_level(run: *const DrfRun, k: usize, out: *mut *mut c_char) -> DrfStatus {
    guard(|| {
        let step = step_of(deref(run, "run")?, k)?;
        put_string(out, exact_string(&step.water_level))
    })
}

/// One-based index of the first agent raised to the water level at step `k`.
///
/// # Safety
/// `run` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_split(run: *const DrfRun, k: usize, out: *mut usize) -> DrfStatus {
    guard(|| {
        let step = step_of(deref(run, "run")?, k)?;
        put(out, step.split + 1)
    })
}

/// The run as the JSON document written by `dyndrf allocate`.
///
/// # Safety
/// `run` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_run_report_json(run: *const DrfRun, out: *mut *mut c_char) -> DrfStatus {
    guard(|| {
        let run = deref(run, "run")?;
        put_string(out, RunReportFile::new(&run.instance, run.algorithm, &run.steps).to_json())
    })
}

/// Per-step competitive ratios as the JSON document written by `dyndrf ratio`.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drf_ratio_report_json(
    instance: *const DrfInstance,
    objective: DrfObjective,
    out: *mut *mut c_char,
) -> DrfStatus {
    guard(|| {
        let instance = &deref(instance, "instance")?.inner;
        let objectives = match objective {
            DrfObjective::Maxsum => ObjectiveSet::Maxsum,
            DrfObjective::Maxmin => ObjectiveSet::Maxmin,
            DrfObjective::Both => ObjectiveSet::Both,
        };
        let report = ratio::ratio_report(instance, objectives).map_err(Error::from)?;
        put_string(out, RatioReportFile::new(instance, objectives, &report).to_json())
    })
}

/// Runs the full property battery on the instance.
///
/// # Safety
/// `instance` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn drf_verify(instance: *const DrfInstance) -> DrfStatus {
    guard(|| {
        ratio::verify_run(&deref(instance, "instance")?.inner).map_err(Error::from)?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn drf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last call on this thread; empty after a success. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn drf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
