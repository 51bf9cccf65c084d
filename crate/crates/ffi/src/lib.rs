//! C ABI over the `p2c` library.
//!
//! Every fallible function returns a [`P2cStatus`]. On failure the message is
//! kept per thread and can be read with [`p2c_last_error`]. Handles are
//! opaque; each `*_new`/`*_compute` has a matching `*_free`. Panics never
//! cross the boundary: they are reported as `P2C_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use p2c::classifier::{classify_negative, classify_positive, ClassifierConfig, FamilyParams};
use p2c::connection::{self, Case, CurveConstraint};
use p2c::pii_ode::{integrate, InitialData, Trajectory};
use p2c::stokes_numeric::{compute_stokes, StokesConfig, StokesData};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2cStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The connection formulas are undefined for the input.
    Domain = 3,
    Integration = 4,
    Classification = 5,
    Stokes = 6,
    Panic = 7,
}

/// Asymptotic family tag.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2cFamilyKind {
    N1 = 1,
    N2 = 2,
    N3 = 3,
    P1 = 4,
    P2 = 5,
}

/// A family with its parameters packed in order:
/// N1 `(d, phi)`, N2 `(eps, h)`, N3 `(beta, varphi)`, P1 `(sigma, gamma, chi)`,
/// P2 `(kappa)`. Unused slots are zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2cFamily {
    pub kind: P2cFamilyKind,
    pub params: [f64; 3],
    /// Fit residual; zero for predictions.
    pub residual: f64,
}

impl From<FamilyParams> for P2cFamily {
    fn from(f: FamilyParams) -> Self {
        let (kind, params) = match f {
            FamilyParams::N1 { amplitude, phase } => (P2cFamilyKind::N1, [amplitude, phase, 0.0]),
            FamilyParams::N2 { sign, tail } => (P2cFamilyKind::N2, [sign, tail, 0.0]),
            FamilyParams::N3 { beta, phase } => (P2cFamilyKind::N3, [beta, phase, 0.0]),
            FamilyParams::P1 { sign, gamma, chi } => (P2cFamilyKind::P1, [sign, gamma, chi]),
            FamilyParams::P2 { kappa } => (P2cFamilyKind::P2, [kappa, 0.0, 0.0]),
        };
        P2cFamily { kind, params, residual: 0.0 }
    }
}

/// Integrated solution of one initial-value problem.
pub struct P2cTrajectory(Trajectory);

/// Numeric Stokes multipliers of one `(a, b)`.
pub struct P2cStokes(StokesData);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: P2cStatus, msg: impl std::fmt::Display) -> P2cStatus {
    set_error(msg.to_string());
    status
}

/// Runs `f`, turning a panic into `P2C_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> P2cStatus) -> P2cStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(P2cStatus::Panic, "internal panic"),
    }
}

/// Writes `value` through `out` unless it is null.
unsafe fn put<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

/// Message of the last failure on this thread. Valid until the next failing
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn p2c_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn p2c_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Integrates `q(0) = a`, `q'(0) = b` over `[t_min, t_max]` (which must
/// contain 0) at relative tolerance `tol`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn p2c_trajectory_new(
    a: f64,
    b: f64,
    t_min: f64,
    t_max: f64,
    tol: f64,
    out: *mut *mut P2cTrajectory,
) -> P2cStatus {
    guard(|| {
        if out.is_null() {
            return fail(P2cStatus::NullPointer, "out is null");
        }
        match integrate(InitialData::new(a, b), t_min, t_max, tol) {
            Ok(t) => {
                out.write(Box::into_raw(Box::new(P2cTrajectory(t))));
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Integration, e),
        }
    })
}

/// # Safety
/// `traj` must come from [`p2c_trajectory_new`] and not be used afterwards.
/// Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn p2c_trajectory_free(traj: *mut P2cTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Solution and derivative at `t`; fails at or near a pole.
///
/// # Safety
/// `traj` must be a live handle; `q` and `qp` may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_trajectory_eval(
    traj: *const P2cTrajectory,
    t: f64,
    q: *mut f64,
    qp: *mut f64,
) -> P2cStatus {
    guard(|| {
        let Some(traj) = traj.as_ref() else { return fail(P2cStatus::NullPointer, "trajectory is null") };
        match traj.0.eval(t) {
            Some((v, d)) => {
                put(q, v);
                put(qp, d);
                P2cStatus::Ok
            }
            None => fail(P2cStatus::InvalidArgument, format!("t = {t} is outside the trajectory or at a pole")),
        }
    })
}

/// Number of poles crossed; 0 for a null handle.
///
/// # Safety
/// `traj` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn p2c_trajectory_pole_count(traj: *const P2cTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.poles.len())
}

/// Location and residue (+1 or -1) of pole `index`, in increasing `t`.
///
/// # Safety
/// `traj` must be a live handle; `t0` and `residue` may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_trajectory_pole(
    traj: *const P2cTrajectory,
    index: usize,
    t0: *mut f64,
    residue: *mut f64,
) -> P2cStatus {
    guard(|| {
        let Some(traj) = traj.as_ref() else { return fail(P2cStatus::NullPointer, "trajectory is null") };
        match traj.0.poles.get(index) {
            Some(p) => {
                put(t0, p.t0);
                put(residue, p.sigma.value());
                P2cStatus::Ok
            }
            None => fail(P2cStatus::InvalidArgument, format!("pole index {index} out of range")),
        }
    })
}

/// Classifies the trajectory on `[lo, hi]` with the default thresholds.
/// A window on `t < 0` selects the negative-axis families, `t > 0` the
/// positive-axis ones.
///
/// # Safety
/// `traj` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p2c_classify(traj: *const P2cTrajectory, lo: f64, hi: f64, out: *mut P2cFamily) -> P2cStatus {
    guard(|| {
        let Some(traj) = traj.as_ref() else { return fail(P2cStatus::NullPointer, "trajectory is null") };
        if out.is_null() {
            return fail(P2cStatus::NullPointer, "out is null");
        }
        let cfg = ClassifierConfig::default();
        let result = if hi <= 0.0 {
            classify_negative(&traj.0, (lo, hi), &cfg)
        } else if lo >= 0.0 {
            classify_positive(&traj.0, (lo, hi), &cfg)
        } else {
            return fail(P2cStatus::InvalidArgument, "window must not straddle t = 0");
        };
        match result {
            Ok(c) => {
                out.write(P2cFamily { residual: c.residual, ..c.family.into() });
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Classification, e),
        }
    })
}

/// Numeric Stokes multipliers from the Lax pair. `radius <= 0` or `tol <= 0`
/// select the defaults (8 and 1e-12).
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p2c_stokes_compute(
    a: f64,
    b: f64,
    radius: f64,
    tol: f64,
    out: *mut *mut P2cStokes,
) -> P2cStatus {
    guard(|| {
        if out.is_null() {
            return fail(P2cStatus::NullPointer, "out is null");
        }
        let defaults = StokesConfig::default();
        let cfg = StokesConfig {
            radius: if radius > 0.0 { radius } else { defaults.radius },
            tol: if tol > 0.0 { tol } else { defaults.tol },
            ..defaults
        };
        match compute_stokes(a, b, &cfg) {
            Ok(d) => {
                out.write(Box::into_raw(Box::new(P2cStokes(d))));
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Stokes, e),
        }
    })
}

/// # Safety
/// `stokes` must come from [`p2c_stokes_compute`] and not be used
/// afterwards. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn p2c_stokes_free(stokes: *mut P2cStokes) {
    if !stokes.is_null() {
        drop(Box::from_raw(stokes));
    }
}

/// Multiplier `s_k` for `k` in `-1..=3`.
///
/// # Safety
/// `stokes` must be a live handle; `re` and `im` may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_stokes_get(stokes: *const P2cStokes, k: i32, re: *mut f64, im: *mut f64) -> P2cStatus {
    guard(|| {
        let Some(s) = stokes.as_ref() else { return fail(P2cStatus::NullPointer, "stokes is null") };
        if !(-1..=3).contains(&k) {
            return fail(P2cStatus::InvalidArgument, format!("k = {k} is outside -1..=3"));
        }
        let v = s.0.get(k);
        put(re, v.re);
        put(im, v.im);
        P2cStatus::Ok
    })
}

/// Constraint and reality residuals of the computed multipliers.
///
/// # Safety
/// `stokes` must be a live handle; the outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_stokes_residuals(
    stokes: *const P2cStokes,
    constraint: *mut f64,
    conj: *mut f64,
) -> P2cStatus {
    guard(|| {
        let Some(s) = stokes.as_ref() else { return fail(P2cStatus::NullPointer, "stokes is null") };
        put(constraint, s.0.constraint_residual);
        put(conj, s.0.conj_residual);
        P2cStatus::Ok
    })
}

/// Leading-order family predicted by the connection formulas, on the side
/// the regime of `(a, b)` speaks about, and the index of the last curve
/// crossed.
///
/// # Safety
/// `out` must be valid for one write; `curve_index` may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_predict_family(a: f64, b: f64, out: *mut P2cFamily, curve_index: *mut u32) -> P2cStatus {
    guard(|| {
        if out.is_null() {
            return fail(P2cStatus::NullPointer, "out is null");
        }
        match connection::scale(a, b).and_then(|sd| connection::predict_parameters(&sd)) {
            Ok(p) => {
                out.write(p.params.into());
                put(curve_index, p.curve_index);
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Domain, e),
        }
    })
}

/// Point of the `n`-th curve of case `case` (1 or 2) on the line `a = value`
/// (`fixed_a != 0`) or `b = value`.
///
/// # Safety
/// The outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn p2c_locate_curve(
    case: i32,
    n: u32,
    fixed_a: i32,
    value: f64,
    a: *mut f64,
    b: *mut f64,
    xi: *mut f64,
) -> P2cStatus {
    guard(|| {
        let case = match case {
            1 => Case::One,
            2 => Case::Two,
            _ => return fail(P2cStatus::InvalidArgument, format!("case must be 1 or 2, got {case}")),
        };
        let constraint = if fixed_a != 0 { CurveConstraint::FixedA(value) } else { CurveConstraint::FixedB(value) };
        match connection::locate_curve(case, n, constraint) {
            Ok(p) => {
                put(a, p.a);
                put(b, p.b);
                put(xi, p.xi);
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Domain, e),
        }
    })
}

/// Full connection report as a JSON string. Release it with
/// [`p2c_string_free`].
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn p2c_report_json(a: f64, b: f64, out: *mut *mut c_char) -> P2cStatus {
    guard(|| {
        if out.is_null() {
            return fail(P2cStatus::NullPointer, "out is null");
        }
        let report = match connection::connection_report(a, b) {
            Ok(r) => r,
            Err(e) => return fail(P2cStatus::Domain, e),
        };
        let text = serde_json::to_string(&report).expect("reports serialize");
        match CString::new(text) {
            Ok(s) => {
                out.write(s.into_raw());
                P2cStatus::Ok
            }
            Err(e) => fail(P2cStatus::Panic, e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is
/// accepted.
#[no_mangle]
pub unsafe extern "C" fn p2c_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
