//! C interface to `vrd-core`.
//!
//! Every fallible call returns a [`VrdStatus`] and writes results through out
//! pointers. On failure, [`vrd_last_error`] describes the error on the calling
//! thread. Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vrd_core::qmath::{ComplexMatrix, DensityMatrix, Observable, C64};
use vrd_core::sampler::{estimate, exact_expectation, required_samples, SamplerConfig, VirtualOperation};
use vrd_core::vrd::{build_virtual_operation_teleport, conventional_rate, overhead_bounds, virtual_rate, Theory};
use vrd_core::Error;

pub const VRD_THEORY_COHERENCE: u32 = 0;
pub const VRD_THEORY_ENTANGLEMENT: u32 = 1;
pub const VRD_THEORY_MAGIC: u32 = 2;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VrdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Input is not a valid state, channel or observable.
    InvalidState = 3,
    Unsupported = 4,
    Infeasible = 5,
    Solver = 6,
    Panic = 7,
}

/// A density matrix.
pub struct VrdState(DensityMatrix);

/// A virtual operation `lambda_plus * Plus - lambda_minus * Minus`.
pub struct VrdVirtualOperation(VirtualOperation);

/// Overhead bounds for `m` copies. `exact` is NaN when the bounds do not coincide.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VrdOverhead {
    pub lower: f64,
    pub upper: f64,
    pub exact: f64,
    /// NaN when no overlap monotone is available.
    pub closed_form: f64,
    /// Nonzero when the target free set is a relaxation.
    pub relaxation: u8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VrdRate {
    /// Zero when every overhead is infinite.
    pub m_star: usize,
    pub rate: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct VrdEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub exact: f64,
    pub hoeffding_bound: f64,
    pub n_samples: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(VrdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidArgument(_) => VrdStatus::InvalidArgument,
            Error::Unsupported(_) => VrdStatus::Unsupported,
            Error::Infeasible(_) => VrdStatus::Infeasible,
            Error::Solver(_) => VrdStatus::Solver,
            _ => VrdStatus::InvalidState,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> VrdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            VrdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("internal panic: {msg}")));
            VrdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(VrdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn theory(code: u32) -> Result<Theory, Failure> {
    match code {
        VRD_THEORY_COHERENCE => Ok(Theory::Coherence),
        VRD_THEORY_ENTANGLEMENT => Ok(Theory::Entanglement),
        VRD_THEORY_MAGIC => Ok(Theory::Magic),
        _ => Err(Failure(VrdStatus::InvalidArgument, format!("unknown theory code {code}"))),
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread, or null after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn vrd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code; null for an unknown code.
#[no_mangle]
pub extern "C" fn vrd_status_name(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer\0",
        2 => b"invalid argument\0",
        3 => b"invalid state\0",
        4 => b"unsupported\0",
        5 => b"infeasible\0",
        6 => b"solver failure\0",
        7 => b"panic\0",
        _ => return ptr::null(),
    };
    s.as_ptr().cast()
}

/// The noisy input `p psi + (1 - p) I / d` of a theory.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_state_noisy(theory_code: u32, p: f64, out: *mut *mut VrdState) -> VrdStatus {
    guard(|| {
        let rho = theory(theory_code)?.noisy_state(p)?;
        write(out, boxed(VrdState(rho)), "out")
    })
}

/// The pure target state for `m` copies of a theory.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_state_target(theory_code: u32, m: usize, out: *mut *mut VrdState) -> VrdStatus {
    guard(|| {
        let target = theory(theory_code)?.target(m)?;
        write(out, boxed(VrdState(target)), "out")
    })
}

/// A state from a row-major `dim x dim` matrix. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn vrd_state_from_matrix(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut VrdState,
) -> VrdStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        if dim == 0 {
            return Err(Failure(VrdStatus::InvalidArgument, "dim must be positive".into()));
        }
        let n = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure(VrdStatus::InvalidArgument, "dim too large".into()))?;
        let re = std::slice::from_raw_parts(re, n);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, n));
        let data = (0..n).map(|i| C64::new(re[i], im.map_or(0.0, |v| v[i]))).collect();
        let rho = DensityMatrix::new(ComplexMatrix::from_vec(dim, dim, data)?)?;
        write(out, boxed(VrdState(rho)), "out")
    })
}

/// # Safety
/// `state` must be null or a valid handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_state_dim(state: *const VrdState, out: *mut usize) -> VrdStatus {
    guard(|| write(out, deref(state, "state")?.0.dim(), "out"))
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vrd_state_free(state: *mut VrdState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Bounds on the sampling overhead of distilling `m` target copies within `eps`.
///
/// # Safety
/// `state` must be a valid handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_overhead(
    state: *const VrdState,
    theory_code: u32,
    m: usize,
    eps: f64,
    out: *mut VrdOverhead,
) -> VrdStatus {
    guard(|| {
        let rho = &deref(state, "state")?.0;
        let r = overhead_bounds(rho, m, eps, theory(theory_code)?)?;
        let value = VrdOverhead {
            lower: r.lower,
            upper: r.upper,
            exact: r.exact.unwrap_or(f64::NAN),
            closed_form: r.closed_form.unwrap_or(f64::NAN),
            relaxation: r.relaxation as u8,
        };
        write(out, value, "out")
    })
}

/// Best `m / C^2` over `m = 1..=m_max`.
///
/// # Safety
/// `state` must be a valid handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_virtual_rate(
    state: *const VrdState,
    theory_code: u32,
    eps: f64,
    m_max: usize,
    out: *mut VrdRate,
) -> VrdStatus {
    guard(|| {
        let r = virtual_rate(&deref(state, "state")?.0, eps, theory(theory_code)?, m_max)?;
        write(out, VrdRate { m_star: r.m_star, rate: r.rate }, "out")
    })
}

/// Largest `m <= m_max` reachable by a free operation within `eps`; zero if none.
///
/// # Safety
/// `state` must be a valid handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_conventional_rate(
    state: *const VrdState,
    theory_code: u32,
    eps: f64,
    m_max: usize,
    out: *mut usize,
) -> VrdStatus {
    guard(|| {
        let d = conventional_rate(&deref(state, "state")?.0, eps, theory(theory_code)?, m_max)?;
        write(out, d, "out")
    })
}

/// The explicit Bell-state distillation operation for `1/3 <= p <= 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_teleport_new(p: f64, out: *mut *mut VrdVirtualOperation) -> VrdStatus {
    guard(|| {
        let vop = build_virtual_operation_teleport(p)?;
        write(out, boxed(VrdVirtualOperation(vop)), "out")
    })
}

/// Coefficients of the decomposition and the overhead `lambda_plus + lambda_minus`.
/// Any out pointer may be null.
///
/// # Safety
/// `vop` must be a valid handle; non-null out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_vop_coefficients(
    vop: *const VrdVirtualOperation,
    lambda_plus: *mut f64,
    lambda_minus: *mut f64,
    overhead: *mut f64,
) -> VrdStatus {
    guard(|| {
        let v = &deref(vop, "vop")?.0;
        for (p, x) in [(lambda_plus, v.lambda_plus()), (lambda_minus, v.lambda_minus()), (overhead, v.overhead())] {
            if !p.is_null() {
                p.write(x);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `vop` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vrd_vop_free(vop: *mut VrdVirtualOperation) {
    if !vop.is_null() {
        drop(Box::from_raw(vop));
    }
}

/// Monte-Carlo estimate of `tr[P Op(input)]`, where `P` projects onto the pure
/// state `target`. Deterministic for a given seed; `beta = 0.1`, `delta = 0.05`.
///
/// # Safety
/// All handles must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_estimate_projector(
    vop: *const VrdVirtualOperation,
    input: *const VrdState,
    target: *const VrdState,
    n_samples: usize,
    seed: u64,
    out: *mut VrdEstimate,
) -> VrdStatus {
    guard(|| {
        let vop = &deref(vop, "vop")?.0;
        let rho = &deref(input, "input")?.0;
        let m = Observable::projector(&deref(target, "target")?.0)?;
        let cfg = SamplerConfig::new(n_samples, seed);
        cfg.validate()?;
        let exact = exact_expectation(vop, rho, &m)?;
        let rep = estimate(vop, rho, &m, &cfg)?;
        let value = VrdEstimate {
            mean: rep.mean,
            std_error: rep.std_error,
            exact,
            hoeffding_bound: rep.hoeffding_bound,
            n_samples: rep.n_samples,
        };
        write(out, value, "out")
    })
}

/// Shots needed for accuracy `beta` with probability `1 - delta` at overhead `c`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vrd_required_samples(c: f64, beta: f64, delta: f64, out: *mut u64) -> VrdStatus {
    guard(|| write(out, required_samples(c, beta, delta)?, "out"))
}
