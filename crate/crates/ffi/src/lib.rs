//! C ABI over `tre-core`.
//!
//! States and samplers are opaque heap handles released with their `_free`
//! function. Every entry point returns a [`TreStatus`]; on failure the
//! message is available from [`tre_last_error_message`] on the same thread.
//! Matrices cross the boundary row-major as separate real and imaginary
//! arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use tre_core::matfun::{trace_norm_distance, CMatrix, HermitianMatrix};
use tre_core::renyi::{renyi_overlap, trre};
use tre_core::statefile::{parse_state, StateFile};
use tre_core::states::{haar_random_pure, random_mixed_hs, DensityMatrix, SeededSampler};
use tre_core::tre::{self as core_tre, relative_entropy, telescopic_relative_entropy, EntropyValue};
use tre_core::verify::{run_fuzz, FuzzConfig};
use tre_core::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    DimensionMismatch = 4,
    Numerical = 5,
    Parse = 6,
    Panic = 7,
}

/// A density matrix.
pub struct TreState(DensityMatrix);

/// A seeded random stream for the sampling functions.
pub struct TreSampler(SeededSampler);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TreStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch(..) => TreStatus::DimensionMismatch,
            Error::NotHermitian { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::InvalidTrace(_)
            | Error::NonFinite(..)
            | Error::ZeroVector => TreStatus::InvalidState,
            Error::StateFile { .. } => TreStatus::Parse,
            Error::FunctionUndefined { .. }
            | Error::RankDeficient { .. }
            | Error::Singular(_)
            | Error::StepTooLarge { .. }
            | Error::Quadrature(_) => TreStatus::Numerical,
            _ => TreStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TreStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TreStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TreStatus::Ok,
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
            TreStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(p: *const TreState, what: &str) -> Result<&'a DensityMatrix, Failure> {
    unsafe { p.as_ref() }.map(|s| &s.0).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn emit_state(out: *mut *mut TreState, rho: DensityMatrix) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(TreState(rho)))) };
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Failure(TreStatus::InvalidArgument, e.to_string()))?;
    unsafe { out.write(c.into_raw()) };
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tre_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn tre_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a state from a row-major `dim × dim` matrix. `im` may be null for
/// a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim*dim` doubles; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_from_matrix(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut TreState,
) -> TreStatus {
    guard(|| {
        if dim == 0 {
            return Err(Error::EmptyDimension.into());
        }
        let n = dim
            .checked_mul(dim)
            .ok_or(Failure(TreStatus::InvalidArgument, "dim overflows".into()))?;
        let re = unsafe { slice(re, n, "re") }?;
        let im = if im.is_null() {
            None
        } else {
            Some(unsafe { slice(im, n, "im") }?)
        };
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            let k = i * dim + j;
            Complex64::new(re[k], im.map_or(0.0, |v| v[k]))
        });
        let rho = DensityMatrix::new(HermitianMatrix::new(m)?)?;
        unsafe { emit_state(out, rho) }
    })
}

/// Builds the diagonal state `diag(p_0, …, p_{dim-1})`.
///
/// # Safety
/// `diag` must point to `dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_from_diagonal(dim: usize, diag: *const f64, out: *mut *mut TreState) -> TreStatus {
    guard(|| {
        let d = unsafe { slice(diag, dim, "diag") }?;
        let rho = DensityMatrix::from_diagonal(d)?;
        unsafe { emit_state(out, rho) }
    })
}

/// Qubit state `(I + xX + yY + zZ)/2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_from_bloch(x: f64, y: f64, z: f64, out: *mut *mut TreState) -> TreStatus {
    guard(|| {
        let rho = DensityMatrix::from_bloch(x, y, z)?;
        unsafe { emit_state(out, rho) }
    })
}

/// Parses a state document (`matrix`, `diag`, `pure` or `bloch` form).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_from_json(json: *const c_char, out: *mut *mut TreState) -> TreStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(TreStatus::Parse, e.to_string()))?;
        let rho = parse_state(text)?;
        unsafe { emit_state(out, rho) }
    })
}

/// Serializes a state in the `matrix` form. Release the string with
/// [`tre_string_free`].
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_to_json(state: *const TreState, out: *mut *mut c_char) -> TreStatus {
    guard(|| {
        let rho = unsafe { state_ref(state, "state") }?;
        unsafe { emit_string(out, StateFile::from_density(rho).to_json_string()) }
    })
}

/// Dimension of a state, or 0 for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tre_state_dim(state: *const TreState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.0.dim())
}

/// Copies the matrix row-major into `re` and `im`, each of length `len`
/// (at least `dim*dim`). `im` may be null.
///
/// # Safety
/// `state` must be a live handle; `re` (and `im` when non-null) must be
/// writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tre_state_matrix(state: *const TreState, re: *mut f64, im: *mut f64, len: usize) -> TreStatus {
    guard(|| {
        let rho = unsafe { state_ref(state, "state") }?;
        let dim = rho.dim();
        if len < dim * dim {
            return Err(Failure(
                TreStatus::InvalidArgument,
                format!("buffer holds {len} entries, need {}", dim * dim),
            ));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let m = rho.matrix();
        for i in 0..dim {
            for j in 0..dim {
                let k = i * dim + j;
                unsafe { re.add(k).write(m[(i, j)].re) };
                if !im.is_null() {
                    unsafe { im.add(k).write(m[(i, j)].im) };
                }
            }
        }
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tre_state_free(state: *mut TreState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tre_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// New sampler; the same seed reproduces the same states.
#[no_mangle]
pub extern "C" fn tre_sampler_new(seed: u64) -> *mut TreSampler {
    Box::into_raw(Box::new(TreSampler(SeededSampler::new(seed))))
}

/// # Safety
/// `sampler` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tre_sampler_free(sampler: *mut TreSampler) {
    if !sampler.is_null() {
        drop(unsafe { Box::from_raw(sampler) });
    }
}

unsafe fn sampler_mut<'a>(p: *mut TreSampler) -> Result<&'a mut SeededSampler, Failure> {
    unsafe { p.as_mut() }.map(|s| &mut s.0).ok_or_else(|| null("sampler"))
}

/// Hilbert–Schmidt random state of the given rank.
///
/// # Safety
/// `sampler` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_random_mixed(
    sampler: *mut TreSampler,
    dim: usize,
    rank: usize,
    out: *mut *mut TreState,
) -> TreStatus {
    guard(|| {
        let sm = unsafe { sampler_mut(sampler) }?;
        let rho = random_mixed_hs(dim, rank, sm)?;
        unsafe { emit_state(out, rho) }
    })
}

/// Haar random pure state.
///
/// # Safety
/// `sampler` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_state_random_pure(
    sampler: *mut TreSampler,
    dim: usize,
    out: *mut *mut TreState,
) -> TreStatus {
    guard(|| {
        let sm = unsafe { sampler_mut(sampler) }?;
        let rho = haar_random_pure(dim, sm)?;
        unsafe { emit_state(out, rho) }
    })
}

unsafe fn pair_call(
    rho: *const TreState,
    sigma: *const TreState,
    out: *mut f64,
    f: impl FnOnce(&DensityMatrix, &DensityMatrix) -> tre_core::Result<f64>,
) -> TreStatus {
    guard(|| {
        let r = unsafe { state_ref(rho, "rho") }?;
        let s = unsafe { state_ref(sigma, "sigma") }?;
        let v = f(r, s)?;
        unsafe { write_out(out, v) }
    })
}

/// `S_a(ρ||σ)` for `a ∈ [0,1]`.
///
/// # Safety
/// `rho`, `sigma` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_telescopic_relative_entropy(
    rho: *const TreState,
    sigma: *const TreState,
    a: f64,
    out: *mut f64,
) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, |r, s| telescopic_relative_entropy(r, s, a)) }
}

/// `S_0(ρ||σ) = 1 − tr ρ{σ}`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_limit_zero(rho: *const TreState, sigma: *const TreState, out: *mut f64) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, core_tre::tre_limit_zero) }
}

/// `S_1(ρ||σ) = 1 − tr σ{ρ}`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_limit_one(rho: *const TreState, sigma: *const TreState, out: *mut f64) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, core_tre::tre_limit_one) }
}

/// `T(ρ,σ) = ½‖ρ − σ‖₁`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_trace_distance(rho: *const TreState, sigma: *const TreState, out: *mut f64) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, trace_norm_distance) }
}

/// `S(ρ||σ)` in nats; `+INFINITY` when the support of `ρ` is not inside that
/// of `σ`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_relative_entropy(
    rho: *const TreState,
    sigma: *const TreState,
    out: *mut f64,
) -> TreStatus {
    unsafe {
        pair_call(rho, sigma, out, |r, s| {
            Ok(match relative_entropy(r, s)? {
                EntropyValue::Finite(v) => v,
                EntropyValue::Infinite => f64::INFINITY,
            })
        })
    }
}

/// `Q_{p,a}(ρ,σ)` for `p ∈ (0,1)`, `a ∈ [0,1)`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_trre(
    rho: *const TreState,
    sigma: *const TreState,
    p: f64,
    a: f64,
    out: *mut f64,
) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, |r, s| trre(r, s, p, a)) }
}

/// `tr ρ^{1−p} σ^p`.
///
/// # Safety
/// As [`tre_telescopic_relative_entropy`].
#[no_mangle]
pub unsafe extern "C" fn tre_renyi_overlap(
    rho: *const TreState,
    sigma: *const TreState,
    p: f64,
    out: *mut f64,
) -> TreStatus {
    unsafe { pair_call(rho, sigma, out, |r, s| renyi_overlap(r, s, p)) }
}

/// Closed form of `S_a` for two pure states at trace distance `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tre_pure_closed_form(t: f64, a: f64, out: *mut f64) -> TreStatus {
    guard(|| {
        let v = core_tre::tre_pure_closed_form(t, a)?;
        unsafe { write_out(out, v) }
    })
}

/// Runs the randomized checks over `dims` with the default grids and slack,
/// writes the JSON report to `report_json` (release with
/// [`tre_string_free`]) and the overall verdict to `passed`.
///
/// # Safety
/// `dims` must point to `n_dims` values; `report_json` and `passed` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tre_verify(
    dims: *const usize,
    n_dims: usize,
    trials: u64,
    seed: u64,
    report_json: *mut *mut c_char,
    passed: *mut bool,
) -> TreStatus {
    guard(|| {
        let dims = unsafe { slice(dims, n_dims, "dims") }?;
        if report_json.is_null() || passed.is_null() {
            return Err(null("out"));
        }
        let config = FuzzConfig {
            dims: dims.to_vec(),
            trials,
            seed,
            ..FuzzConfig::default()
        };
        let report = run_fuzz(&config)?;
        unsafe { passed.write(report.passed) };
        unsafe { emit_string(report_json, report.to_json()) }
    })
}
