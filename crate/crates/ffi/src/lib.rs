//! C ABI over the `pi0` crate.
//!
//! Specs and results live behind opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`Pi0Status`]; on failure [`pi0_last_error`] describes the problem. Output
//! parameters are written only on success. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pi0::catalog;
use pi0::elliptic::elliptic_pi0;
use pi0::spec_file::{GroupSpecFile, Pi0Record};
use pi0::{Error, RealGroupSpec};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi0Status {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The data describes no valid group or curve.
    InvalidInput = 3,
    /// The cubic is singular or numerically too close to singular.
    Degenerate = 4,
    /// An index or buffer size is out of range, or a value does not fit.
    OutOfRange = 5,
    /// An internal consistency check failed.
    Internal = 6,
    /// The library panicked; the message is available from `pi0_last_error`.
    Panic = 7,
}

/// Opaque group description.
pub struct Pi0Spec {
    spec: RealGroupSpec,
}

/// Opaque component-group result.
pub struct Pi0Result {
    record: Pi0Record,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(Pi0Status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Degenerate { .. } => Pi0Status::Degenerate,
            Error::Overflow { .. } => Pi0Status::OutOfRange,
            e if e.is_input_error() => Pi0Status::InvalidInput,
            _ => Pi0Status::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(Pi0Status::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Pi0Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Pi0Status::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            Pi0Status::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(Pi0Status::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    ptr::write(out, value);
}

fn boxed_spec(spec: RealGroupSpec) -> *mut Pi0Spec {
    Box::into_raw(Box::new(Pi0Spec { spec }))
}

/// Message of the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pi0_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pi0_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a spec from a row-major `rank × rank` involution `sigma` and
/// `n_coroots` row-major coroot vectors of length `rank`. `coroots` may be
/// null when `n_coroots` is zero.
///
/// # Safety
/// `sigma` must point to `rank * rank` values, `coroots` to
/// `n_coroots * rank` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_spec_new(
    rank: usize,
    sigma: *const i64,
    coroots: *const i64,
    n_coroots: usize,
    out: *mut *mut Pi0Spec,
) -> Pi0Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if sigma.is_null() && rank > 0 {
            return Err(null("sigma"));
        }
        if coroots.is_null() && n_coroots > 0 && rank > 0 {
            return Err(null("coroots"));
        }
        if rank.checked_mul(rank.max(n_coroots)).is_none() {
            return Err(Failure(Pi0Status::OutOfRange, "dimensions overflow".into()));
        }
        let rows = |p: *const i64, n: usize| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..rank).map(|j| unsafe { *p.add(i * rank + j) }).collect())
                .collect()
        };
        let file = GroupSpecFile {
            name: None,
            rank,
            sigma: if rank == 0 { Vec::new() } else { rows(sigma, rank) },
            coroots: if rank == 0 {
                Vec::new()
            } else {
                rows(coroots, n_coroots)
            },
            expected_pi0_rank: None,
        };
        let spec = file.to_spec()?;
        write_out(out, boxed_spec(spec));
        Ok(())
    })
}

/// Parses a JSON spec document `{"rank", "sigma", "coroots", "name"?}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_spec_from_json(json: *const c_char, out: *mut *mut Pi0Spec) -> Pi0Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let spec = GroupSpecFile::parse(text)?.to_spec()?;
        write_out(out, boxed_spec(spec));
        Ok(())
    })
}

/// Spec of a catalog family such as `"gl"` with size `n`; pass `n = 0` for
/// families without a size parameter.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_catalog_spec(family: *const c_char, n: usize, out: *mut *mut Pi0Spec) -> Pi0Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = read_str(family, "family")?;
        let entry = catalog::entry(family, (n > 0).then_some(n))?;
        write_out(out, boxed_spec(entry.spec));
        Ok(())
    })
}

/// Rank of the lattice `Λ`.
///
/// # Safety
/// `spec` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_spec_rank(spec: *const Pi0Spec, out: *mut usize) -> Pi0Status {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, spec.spec.rank());
        Ok(())
    })
}

/// Releases a spec. Null is ignored.
///
/// # Safety
/// `spec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pi0_spec_free(spec: *mut Pi0Spec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Computes `π₀ G(ℝ) ≅ (ℤ/2)^r`.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_compute(spec: *const Pi0Spec, out: *mut *mut Pi0Result) -> Pi0Status {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let result = pi0::pi0(&spec.spec)?;
        let record = Pi0Record::new(&spec.spec, &result, None)?;
        write_out(out, Box::into_raw(Box::new(Pi0Result { record })));
        Ok(())
    })
}

/// The exponent `r` in `(ℤ/2)^r`.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_result_rank(result: *const Pi0Result, out: *mut usize) -> Pi0Status {
    guard(|| {
        let result = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, result.record.pi0_rank);
        Ok(())
    })
}

/// Copies representative `index` (a vector `λ ∈ Λ₊` whose component
/// contains `Exp(iλ/2)`) into `buf`, which must hold exactly the lattice rank.
///
/// # Safety
/// `result` must be a live handle and `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn pi0_result_representative(
    result: *const Pi0Result,
    index: usize,
    buf: *mut i64,
    len: usize,
) -> Pi0Status {
    guard(|| {
        let result = result.as_ref().ok_or_else(|| null("result"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let reps = &result.record.representatives;
        let v = reps.get(index).ok_or_else(|| {
            Failure(
                Pi0Status::OutOfRange,
                format!("index {index} out of range, {} representatives", reps.len()),
            )
        })?;
        if len != v.len() {
            return Err(Failure(
                Pi0Status::OutOfRange,
                format!("buffer holds {len} entries, representative has {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, len);
        Ok(())
    })
}

/// The result as a JSON record (input fields included). Release the string
/// with `pi0_string_free`.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_result_to_json(result: *const Pi0Result, out: *mut *mut c_char) -> Pi0Status {
    guard(|| {
        let result = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = serde_json::to_string(&result.record).map_err(|e| Failure(Pi0Status::Internal, e.to_string()))?;
        let c = CString::new(text).map_err(|e| Failure(Pi0Status::Internal, e.to_string()))?;
        write_out(out, c.into_raw());
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pi0_result_free(result: *mut Pi0Result) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pi0_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Nontrivial invariant factors of `H¹(ℝ, iΛ/iQ∨)`. Writes their number to
/// `count` and the first `min(count, cap)` factors to `buf` (which may be
/// null when `cap` is zero).
///
/// # Safety
/// `spec` must be a live handle, `buf` must hold `cap` writable values and
/// `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_h1_invariant_factors(
    spec: *const Pi0Spec,
    buf: *mut u64,
    cap: usize,
    count: *mut usize,
) -> Pi0Status {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if count.is_null() {
            return Err(null("count"));
        }
        if buf.is_null() && cap > 0 {
            return Err(null("buf"));
        }
        let h1 = pi0::h1_gamma(&spec.spec)?;
        let factors = h1
            .invariant_factors
            .iter()
            .map(|d| u64::try_from(d).map_err(|_| Failure(Pi0Status::OutOfRange, format!("factor {d} exceeds u64"))))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, d) in factors.iter().take(cap).enumerate() {
            *buf.add(i) = *d;
        }
        write_out(count, factors.len());
        Ok(())
    })
}

/// Number of real components (1 or 2) of `y² = x³ + px + q`, required to
/// agree across the discriminant, the real roots and the period lattice.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pi0_elliptic_components(p: f64, q: f64, out: *mut u8) -> Pi0Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let report = elliptic_pi0(p, q)?;
        write_out(out, report.components);
        Ok(())
    })
}
