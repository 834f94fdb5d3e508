//! C ABI over `stefan-core`.
//!
//! Every function returns a [`StefanStatus`]; results go through out-pointers.
//! Solutions are opaque [`StefanSolution`] handles released with
//! [`stefan_solution_free`]. After a non-OK status,
//! [`stefan_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stefan_core::model::{BoundaryCondition, LatentHeatLaw, MaterialParams, RawSpec};
use stefan_core::solution::{self, SimilaritySolution};
use stefan_core::{equivalence, kummer, verify, Error, ProblemSpec};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StefanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    Precondition = 4,
    Numerical = 5,
    VerificationFailed = 6,
    Panic = 7,
}

/// Kind of fixed-face condition in [`StefanProblem`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StefanBcKind {
    Dirichlet = 0,
    Neumann = 1,
    Robin = 2,
    General = 3,
}

/// Problem description. Only the fields used by `bc` are read:
/// `u0` (Dirichlet), `q0` (Neumann), `h0, u_inf` (Robin),
/// `lambda, h0, u_inf` (General).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StefanProblem {
    pub a: f64,
    pub k: f64,
    pub gamma: f64,
    pub beta: f64,
    pub delta: f64,
    pub bc: StefanBcKind,
    pub u0: f64,
    pub q0: f64,
    pub h0: f64,
    pub u_inf: f64,
    pub lambda: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StefanCoefficients {
    pub xi: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StefanResidualReport {
    pub pde_max_rel: f64,
    pub phase_temp_max_abs: f64,
    pub stefan_max_rel: f64,
    pub fixed_face_max_rel: f64,
    pub passed: bool,
}

/// Opaque solved problem.
pub struct StefanSolution {
    inner: SimilaritySolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> StefanStatus {
    match e {
        Error::Validation(_) | Error::InvalidParameter(_) | Error::Config(_) => StefanStatus::InvalidInput,
        Error::Domain(_) => StefanStatus::Domain,
        Error::Precondition(_) => StefanStatus::Precondition,
        Error::Overflow(_)
        | Error::Bracketing { .. }
        | Error::NonConvergence { .. }
        | Error::Residual { .. }
        | Error::Degenerate(_)
        | Error::PrecisionInsufficient { .. } => StefanStatus::Numerical,
        Error::Verification(_) => StefanStatus::VerificationFailed,
    }
}

fn guard(body: impl FnOnce() -> Result<(), StefanStatus>) -> StefanStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => StefanStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            StefanStatus::Panic
        }
    }
}

fn fail(e: Error) -> StefanStatus {
    let status = status_of(&e);
    set_last_error(e.to_string());
    status
}

fn null(name: &str) -> StefanStatus {
    set_last_error(format!("{name} is null"));
    StefanStatus::NullPointer
}

/// # Safety
/// `p` must be null or valid for reads of `T`.
unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, StefanStatus> {
    unsafe { p.as_ref() }.ok_or_else(|| null(name))
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), StefanStatus> {
    if p.is_null() {
        return Err(null(name));
    }
    unsafe { p.write(value) };
    Ok(())
}

fn spec_of(p: &StefanProblem) -> Result<ProblemSpec, StefanStatus> {
    let bc = match p.bc {
        StefanBcKind::Dirichlet => BoundaryCondition::Dirichlet { u0: p.u0 },
        StefanBcKind::Neumann => BoundaryCondition::Neumann { q0: p.q0 },
        StefanBcKind::Robin => BoundaryCondition::Robin {
            h0: p.h0,
            u_inf: p.u_inf,
        },
        StefanBcKind::General => BoundaryCondition::General {
            lambda: p.lambda,
            h0: p.h0,
            u_inf: p.u_inf,
        },
    };
    let material = MaterialParams {
        a: p.a,
        k: p.k,
        gamma: p.gamma,
    };
    RawSpec::new(material, LatentHeatLaw::new(p.beta, p.delta), bc)
        .validate()
        .map_err(fail)
}

/// Message for the most recent non-OK status on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn stefan_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Solves `problem` and stores a new handle in `*out`.
///
/// # Safety
/// `problem` must point to a valid [`StefanProblem`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_solve(problem: *const StefanProblem, out: *mut *mut StefanSolution) -> StefanStatus {
    guard(|| {
        let p = unsafe { deref(problem, "problem") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = solution::solve(&spec_of(p)?).map_err(fail)?;
        let handle = Box::into_raw(Box::new(StefanSolution { inner }));
        unsafe { write(out, "out", handle) }
    })
}

/// Releases a handle from [`stefan_solve`]. Null is ignored.
///
/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn stefan_solution_free(solution: *mut StefanSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_solution_coefficients(
    solution: *const StefanSolution,
    out: *mut StefanCoefficients,
) -> StefanStatus {
    guard(|| {
        let s = &unsafe { deref(solution, "solution") }?.inner;
        let c = StefanCoefficients {
            xi: s.xi(),
            alpha: s.alpha(),
            c1: s.c1(),
            c2: s.c2(),
        };
        unsafe { write(out, "out", c) }
    })
}

/// Temperature u(x, t) for 0 ≤ x ≤ s(t), t > 0.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_eval_u(solution: *const StefanSolution, x: f64, t: f64, out: *mut f64) -> StefanStatus {
    guard(|| {
        let s = &unsafe { deref(solution, "solution") }?.inner;
        let u = s.eval_u(x, t).map_err(fail)?;
        unsafe { write(out, "out", u) }
    })
}

/// Front position s(t) and speed ṡ(t).
///
/// # Safety
/// `solution` must be a live handle; `s` and `sdot` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_eval_front(
    solution: *const StefanSolution,
    t: f64,
    s: *mut f64,
    sdot: *mut f64,
) -> StefanStatus {
    guard(|| {
        let sol = &unsafe { deref(solution, "solution") }?.inner;
        if s.is_null() || sdot.is_null() {
            return Err(null("s/sdot"));
        }
        let (pos, speed) = sol.eval_front(t).map_err(fail)?;
        unsafe {
            write(s, "s", pos)?;
            write(sdot, "sdot", speed)
        }
    })
}

/// Latent heat at the front, γ s(t)^β.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_latent_heat(solution: *const StefanSolution, t: f64, out: *mut f64) -> StefanStatus {
    guard(|| {
        let s = &unsafe { deref(solution, "solution") }?.inner;
        let l = s.latent_heat(t).map_err(fail)?;
        unsafe { write(out, "out", l.value) }
    })
}

/// Finite-difference residuals on an `nx × nt` grid over `[t0, t1]`.
/// Returns `VerificationFailed` with `*out` filled when a gate is exceeded.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_verify(
    solution: *const StefanSolution,
    nx: usize,
    nt: usize,
    t0: f64,
    t1: f64,
    out: *mut StefanResidualReport,
) -> StefanStatus {
    guard(|| {
        let s = &unsafe { deref(solution, "solution") }?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = verify::pde_residual(s, nx, nt, (t0, t1)).map_err(fail)?;
        let report = StefanResidualReport {
            pde_max_rel: r.pde_max_rel,
            phase_temp_max_abs: r.phase_temp_max_abs,
            stefan_max_rel: r.stefan_max_rel,
            fixed_face_max_rel: r.fixed_face_max_rel,
            passed: r.passes(),
        };
        unsafe { write(out, "out", report) }?;
        r.check().map_err(fail)
    })
}

/// Kummer's function M(a, b, z).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_kummer_m(a: f64, b: f64, z: f64, out: *mut f64) -> StefanStatus {
    guard(|| {
        let m = kummer::kummer_m(a, b, z).map_err(fail)?;
        unsafe { write(out, "out", m) }
    })
}

/// Dirichlet datum u0 with the same front as `problem`, and the gap between
/// the two solved roots.
///
/// # Safety
/// `problem` must point to a valid [`StefanProblem`]; `u0` and `xi_gap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_to_dirichlet(
    problem: *const StefanProblem,
    u0: *mut f64,
    xi_gap: *mut f64,
) -> StefanStatus {
    guard(|| {
        let p = unsafe { deref(problem, "problem") }?;
        if u0.is_null() || xi_gap.is_null() {
            return Err(null("u0/xi_gap"));
        }
        let rec = equivalence::to_dirichlet(&spec_of(p)?).map_err(fail)?;
        let value = match *rec.target_spec.bc() {
            BoundaryCondition::Dirichlet { u0 } => u0,
            _ => unreachable!("target of to_dirichlet is a Dirichlet problem"),
        };
        unsafe {
            write(u0, "u0", value)?;
            write(xi_gap, "xi_gap", rec.max_xi_gap)
        }
    })
}

/// Coefficient h0 of the convective problem (λ, h0, u∞) equivalent to the
/// Dirichlet `problem`. Requires λ·u0 < u∞.
///
/// # Safety
/// `problem` must point to a valid [`StefanProblem`]; `h0` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stefan_from_dirichlet(
    problem: *const StefanProblem,
    lambda: f64,
    u_inf: f64,
    h0: *mut f64,
) -> StefanStatus {
    guard(|| {
        let p = unsafe { deref(problem, "problem") }?;
        if h0.is_null() {
            return Err(null("h0"));
        }
        let rec = equivalence::from_dirichlet(&spec_of(p)?, lambda, u_inf).map_err(fail)?;
        let value = match *rec.target_spec.bc() {
            BoundaryCondition::General { h0, .. } => h0,
            _ => unreachable!("target of from_dirichlet is a general convective problem"),
        };
        unsafe { write(h0, "h0", value) }
    })
}
