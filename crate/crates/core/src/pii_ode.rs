//! Pole-tolerant integration of `q'' = 2 q^3 + t q` on the real line.
//!
//! An embedded Dormand-Prince 5(4) pair with PI step control advances the
//! state `(q, q', w)`, where `w` accumulates `int q^2 dt` inside each
//! pole-free segment. When `|q|` crosses the vault threshold the local
//! Laurent expansion about the pole is fitted to the current state and used
//! to jump to the mirror point on the far side of the pole.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("integration span [{0}, {1}] must contain t = 0")]
    SpanExcludesOrigin(f64, f64),
    #[error("tolerance {0:e} outside [1e-13, 1e-6]")]
    Tolerance(f64),
    #[error("step size underflow at t = {t} away from any pole")]
    Stiffness { t: f64 },
    #[error("pole model rejected near t = {t}: {reason}")]
    PoleModel { t: f64, reason: String, last: Sample },
    #[error("step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("interval [{t1}, {t2}] contains a pole or lies outside the trajectory")]
    NotPoleFree { t1: f64, t2: f64 },
    #[error("non-finite initial data")]
    NonFinite,
}

/// Initial data `q(0)`, `q'(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub q0: f64,
    pub qp0: f64,
}

impl InitialData {
    pub fn new(q0: f64, qp0: f64) -> Self {
        Self { q0, qp0 }
    }

    pub fn negated(self) -> Self {
        Self { q0: -self.q0, qp0: -self.qp0 }
    }
}

/// One stored point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub q: f64,
    pub qp: f64,
    /// `int q^2 dt` from the start of the sample's pole-free segment.
    pub q2_integral: f64,
    /// Pole-free segment index: 0 contains the seed point, negative indices
    /// lie to the left, positive to the right.
    pub segment: i32,
}

impl Sample {
    /// `H = p^2/2 - q^4/2 - t q^2/2`; along solutions `dH/dt = -q^2/2`.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * self.qp * self.qp - 0.5 * self.q.powi(4) - 0.5 * self.t * self.q * self.q
    }
}

/// Residue sign of a simple pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Residue {
    Plus,
    Minus,
}

impl Residue {
    pub fn from_sign(x: f64) -> Self {
        if x >= 0.0 {
            Residue::Plus
        } else {
            Residue::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Residue::Plus => 1.0,
            Residue::Minus => -1.0,
        }
    }
}

/// A pole crossed by the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleRecord {
    pub t0: f64,
    pub sigma: Residue,
    pub c3: f64,
    pub vault_radius: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegrationStats {
    pub steps: usize,
    pub rejected: usize,
    pub vaults: usize,
    pub tol: f64,
}

/// Piecewise solution record. Samples are sorted by increasing `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Initial data at `t = 0`, absent for runs seeded elsewhere.
    pub init: Option<InitialData>,
    pub samples: Vec<Sample>,
    pub poles: Vec<PoleRecord>,
    pub stats: IntegrationStats,
}

/// Numerical settings of the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub tol: f64,
    /// `|q|` at which a pole vault is triggered is
    /// `max(vault_threshold, vault_threshold_slope * sqrt|t|)`; the second
    /// term keeps the trigger above the `sqrt|t|` floor of dense pole trains.
    pub vault_threshold: f64,
    pub vault_threshold_slope: f64,
    /// Resume radius as a multiple of the trigger distance `|t - t0|`.
    pub resume_scale: f64,
    /// Highest Laurent power kept in the pole model.
    pub laurent_order: usize,
    /// Relative mismatch allowed between the fitted model and the earlier
    /// accepted states.
    pub model_tolerance: f64,
    pub max_steps: usize,
    /// Also store the solution at every integer `t` inside the span.
    pub integer_samples: bool,
}

impl IntegratorConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            vault_threshold: 4.0,
            vault_threshold_slope: 3.0,
            resume_scale: 1.0,
            laurent_order: 20,
            model_tolerance: 1e-6,
            max_steps: 5_000_000,
            integer_samples: true,
        }
    }
}

pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-6;

/// Integrates outward from `t = 0` over `[t_start, t_end]`.
pub fn integrate(init: InitialData, t_start: f64, t_end: f64, tol: f64) -> Result<Trajectory, OdeError> {
    integrate_with(init, t_start, t_end, &IntegratorConfig::with_tol(tol))
}

pub fn integrate_with(
    init: InitialData,
    t_start: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, OdeError> {
    let (lo, hi) = if t_start <= t_end { (t_start, t_end) } else { (t_end, t_start) };
    if !(lo <= 0.0 && hi >= 0.0) {
        return Err(OdeError::SpanExcludesOrigin(t_start, t_end));
    }
    if !init.q0.is_finite() || !init.qp0.is_finite() {
        return Err(OdeError::NonFinite);
    }
    check_tol(cfg.tol)?;
    let seed = Sample { t: 0.0, q: init.q0, qp: init.qp0, q2_integral: 0.0, segment: 0 };
    let mut left = march(seed, lo, cfg)?;
    let right = march(seed, hi, cfg)?;
    left.samples.reverse();
    left.poles.reverse();
    let mut samples = left.samples;
    samples.pop(); // the seed, present in both halves
    samples.extend(right.samples);
    let mut poles = left.poles;
    poles.extend(right.poles);
    let stats = IntegrationStats {
        steps: left.stats.steps + right.stats.steps,
        rejected: left.stats.rejected + right.stats.rejected,
        vaults: left.stats.vaults + right.stats.vaults,
        tol: cfg.tol,
    };
    Ok(Trajectory { init: Some(init), samples, poles, stats })
}

/// One-directional integration from an arbitrary seed state.
pub fn integrate_from(
    t_seed: f64,
    q: f64,
    qp: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, OdeError> {
    check_tol(cfg.tol)?;
    let seed = Sample { t: t_seed, q, qp, q2_integral: 0.0, segment: 0 };
    let mut half = march(seed, t_end, cfg)?;
    if t_end < t_seed {
        half.samples.reverse();
        half.poles.reverse();
    }
    Ok(Trajectory { init: None, samples: half.samples, poles: half.poles, stats: half.stats })
}

fn check_tol(tol: f64) -> Result<(), OdeError> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(OdeError::Tolerance(tol));
    }
    Ok(())
}

struct Half {
    samples: Vec<Sample>,
    poles: Vec<PoleRecord>,
    stats: IntegrationStats,
}

type State = [f64; 3];

fn rhs(t: f64, y: &State) -> State {
    let q = y[0];
    [y[1], 2.0 * q * q * q + t * q, q * q]
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for i in 0..3 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// One Dormand-Prince step; returns the new state, its derivative and the
/// scaled error norm of the `(q, q')` components.
fn dp_step(t: f64, y: &State, k1: &State, h: f64, tol: f64) -> (State, State, f64) {
    let k2 = rhs(t + C2 * h, &combo(y, h, &[(A21, k1)]));
    let k3 = rhs(t + C3 * h, &combo(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(t + C4 * h, &combo(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(t + C5 * h, &combo(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(t + h, &combo(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y_new = combo(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(t + h, &y_new);
    let mut err: f64 = 0.0;
    for i in 0..3 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = tol + tol * y[i].abs().max(y_new[i].abs());
        err = err.max((e / scale).abs());
    }
    (y_new, k7, err)
}

/// Largest step allowed at `(t, q)`: resolves the local oscillation (phase
/// change below pi/4) and never reaches a pole at distance about `1/|q|`.
fn step_cap(t: f64, q: f64) -> f64 {
    let oscillation = (PI / 4.0) / (2f64.sqrt() * t.abs().max(1.0).sqrt());
    oscillation.min(0.25 / q.abs().max(1e-300))
}

fn march(seed: Sample, t_end: f64, cfg: &IntegratorConfig) -> Result<Half, OdeError> {
    let dir = if t_end >= seed.t { 1.0 } else { -1.0 };
    let mut samples = vec![seed];
    let mut poles = Vec::new();
    let mut stats = IntegrationStats { tol: cfg.tol, ..Default::default() };
    let mut t = seed.t;
    let mut y: State = [seed.q, seed.qp, 0.0];
    let mut segment = 0i32;
    let mut k1 = rhs(t, &y);
    let mut h = dir * 0.01f64.min(step_cap(t, y[0]));
    let mut err_prev: f64 = 1.0;
    let next_integer = |t: f64| -> f64 {
        if dir > 0.0 {
            (t + 1e-12).floor() + 1.0
        } else {
            (t - 1e-12).ceil() - 1.0
        }
    };
    while dir * (t_end - t) > 0.0 {
        if stats.steps + stats.rejected >= cfg.max_steps {
            return Err(OdeError::StepBudget(cfg.max_steps));
        }
        let cap = step_cap(t, y[0]);
        let mut target = t_end;
        if cfg.integer_samples {
            let n = next_integer(t);
            if dir * (t_end - n) > 0.0 {
                target = n;
            }
        }
        let mut hh = dir * h.abs().min(cap);
        let hits_target = dir * (t + hh - target) >= 0.0;
        if hits_target {
            hh = target - t;
        }
        if hh.abs() < 1e-14 * t.abs().max(1.0) && !hits_target {
            return Err(OdeError::Stiffness { t });
        }
        let (y_new, k_new, err) = dp_step(t, &y, &k1, hh, cfg.tol);
        if err.is_nan() || err > 1.0 {
            stats.rejected += 1;
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = hh * factor;
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(OdeError::Stiffness { t });
            }
            continue;
        }
        stats.steps += 1;
        t = if hits_target { target } else { t + hh };
        y = y_new;
        k1 = k_new;
        let e = err.max(1e-10);
        let factor = (0.9 * e.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(0.2, 5.0);
        err_prev = e;
        h = hh * factor;
        // Only a growing |q| signals an approaching pole; right after a
        // vault |q| is still large but shrinking.
        let threshold = cfg.vault_threshold.max(cfg.vault_threshold_slope * t.abs().sqrt());
        if y[0].abs() > threshold && y[0] * y[1] * dir > 0.0 {
            let tail = &samples[samples.len().saturating_sub(2)..];
            let history: Vec<(f64, f64)> = tail.iter().map(|s| (s.t, s.q)).collect();
            let vault = vault_pole(t, y[0], y[1], dir, &history, cfg)?;
            stats.vaults += 1;
            let pole = vault.pole;
            let beyond = dir * (t_end - vault.resume_t) <= 0.0;
            if beyond {
                // The far side of this pole is outside the span: stop at the
                // last stored pre-pole sample.
                break;
            }
            poles.push(pole);
            segment += dir as i32;
            t = vault.resume_t;
            y = [vault.resume_q, vault.resume_qp, 0.0];
            k1 = rhs(t, &y);
            h = dir * step_cap(t, y[0]);
            err_prev = 1.0;
            samples.push(Sample { t, q: y[0], qp: y[1], q2_integral: 0.0, segment });
            continue;
        }
        samples.push(Sample { t, q: y[0], qp: y[1], q2_integral: y[2], segment });
    }
    Ok(Half { samples, poles, stats })
}

/// Coefficients `c_{-1}, c_0, ..., c_K` of the Laurent expansion
/// `q = sum c_k (t - t0)^k` about a pole of residue `sigma`, with free
/// coefficient `c3`.
pub fn laurent_coefficients(t0: f64, sigma: f64, c3: f64, order: usize) -> Vec<f64> {
    // index j holds c_{j-1}
    let len = order + 2;
    let mut c = vec![0.0; len];
    c[0] = sigma;
    for k in 0..=order {
        if k == 3 {
            c[4] = c3;
            continue;
        }
        // (k - 3)(k + 2) c_k = 2 [q^3]_{k-2} (without c_k) + t0 c_{k-2} + c_{k-3}
        let m = k as i64 - 2;
        let mut cube = 0.0;
        for i in 0..len {
            let ii = i as i64 - 1;
            if ii > m + 2 {
                break;
            }
            for j in 0..len {
                let jj = j as i64 - 1;
                let ll = m - ii - jj;
                if ll < -1 {
                    break;
                }
                let l = (ll + 1) as usize;
                if l >= len || i == k + 1 || j == k + 1 || l == k + 1 {
                    continue;
                }
                cube += c[i] * c[j] * c[l];
            }
        }
        let prev2 = if k >= 1 { c[k - 1] } else { 0.0 };
        let prev3 = if k >= 2 { c[k - 2] } else { 0.0 };
        c[k + 1] = (2.0 * cube + t0 * prev2 + prev3) / (((k as f64) - 3.0) * ((k as f64) + 2.0));
    }
    c
}

/// `(q, q')` of the Laurent model at offset `tau` from the pole.
pub fn laurent_eval(c: &[f64], tau: f64) -> (f64, f64) {
    // Horner on tau * q = sum c_{j-1} tau^j.
    let mut tq = 0.0;
    let mut dtq = 0.0;
    for &cj in c.iter().rev() {
        dtq = dtq * tau + tq;
        tq = tq * tau + cj;
    }
    let q = tq / tau;
    let qp = (dtq - q) / tau;
    (q, qp)
}

/// Result of crossing one pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vault {
    pub pole: PoleRecord,
    pub resume_t: f64,
    pub resume_q: f64,
    pub resume_qp: f64,
}

/// Fits the Laurent model to the state `(t, q, q')` near a pole and
/// re-expands it on the far side. `history` holds earlier `(t, q)` samples
/// used to validate the fit.
pub fn vault_pole(
    t: f64,
    q: f64,
    qp: f64,
    direction: f64,
    history: &[(f64, f64)],
    cfg: &IntegratorConfig,
) -> Result<Vault, OdeError> {
    let last = Sample { t, q, qp, q2_integral: 0.0, segment: 0 };
    let reject = |reason: String| OdeError::PoleModel { t, reason, last };
    let ratio = qp / (q * q);
    let tau0 = -q / qp;
    let sigma = (q * tau0).signum();
    if !(ratio * sigma + 1.0).abs().lt(&0.25) || dir_mismatch(tau0, direction) {
        return Err(reject(format!("state is not pole-like (q'/q^2 = {ratio:.3})")));
    }
    let order = cfg.laurent_order;
    let residual = |t0: f64, c3: f64| -> (f64, f64) {
        let c = laurent_coefficients(t0, sigma, c3, order);
        let (mq, mqp) = laurent_eval(&c, t - t0);
        (mq - q, mqp - qp)
    };
    let mut t0 = t - tau0;
    let mut c3 = 0.0;
    let mut converged = false;
    for _ in 0..50 {
        let (r1, r2) = residual(t0, c3);
        if r1.abs() <= 1e-13 * q.abs() && r2.abs() <= 1e-13 * qp.abs() {
            converged = true;
            break;
        }
        let ht = 1e-7 * tau0.abs();
        let hc = 1e-3 * (1.0 + c3.abs());
        let (a1, a2) = residual(t0 + ht, c3);
        let (b1, b2) = residual(t0 - ht, c3);
        let (d1, d2) = residual(t0, c3 + hc);
        let (e1, e2) = residual(t0, c3 - hc);
        let j11 = (a1 - b1) / (2.0 * ht);
        let j21 = (a2 - b2) / (2.0 * ht);
        let j12 = (d1 - e1) / (2.0 * hc);
        let j22 = (d2 - e2) / (2.0 * hc);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return Err(reject("singular Laurent fit".into()));
        }
        let dt0 = -(r1 * j22 - r2 * j12) / det;
        let dc3 = -(j11 * r2 - j21 * r1) / det;
        t0 += dt0;
        c3 += dc3;
        // `t - t0` carries an absolute rounding error of ulp(t), which caps
        // the attainable residual; a vanishing Newton step is equally final.
        if dt0.abs() <= 1e-14 * t0.abs().max(1.0) && dc3.abs() <= 1e-9 * (1.0 + c3.abs()) {
            converged = true;
            break;
        }
    }
    if !converged || !t0.is_finite() || !c3.is_finite() {
        return Err(reject("Laurent fit did not converge".into()));
    }
    let coeffs = laurent_coefficients(t0, sigma, c3, order);
    let tol_rel = cfg.model_tolerance.max(1e3 * cfg.tol);
    for &(th, qh) in history {
        if th == t || (th - t0).abs() < 1e-12 {
            continue;
        }
        let (mq, _) = laurent_eval(&coeffs, th - t0);
        let mismatch = (mq - qh).abs() / qh.abs().max(1.0);
        if mismatch > tol_rel {
            return Err(reject(format!("model mismatch {mismatch:.2e} at t = {th}")));
        }
    }
    let radius = cfg.resume_scale * (t - t0).abs();
    let resume_t = t0 + direction * radius;
    let (resume_q, resume_qp) = laurent_eval(&coeffs, resume_t - t0);
    Ok(Vault {
        pole: PoleRecord { t0, sigma: Residue::from_sign(sigma), c3, vault_radius: radius },
        resume_t,
        resume_q,
        resume_qp,
    })
}

/// The pole must lie ahead of the trigger point.
fn dir_mismatch(tau: f64, direction: f64) -> bool {
    // tau = t - t0 is behind the pole when it has the opposite sign to the
    // direction of travel.
    tau * direction > 0.0
}

impl Trajectory {
    pub fn t_min(&self) -> f64 {
        self.samples.first().map_or(f64::NAN, |s| s.t)
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.t)
    }

    /// Poles with `lo <= t0 <= hi`, in increasing order.
    pub fn poles_in(&self, lo: f64, hi: f64) -> Vec<PoleRecord> {
        self.poles.iter().copied().filter(|p| p.t0 >= lo && p.t0 <= hi).collect()
    }

    /// Index of the last sample with `t <= x`.
    fn bracket(&self, x: f64) -> Option<usize> {
        if self.samples.is_empty() || x < self.t_min() || x > self.t_max() {
            return None;
        }
        let idx = self.samples.partition_point(|s| s.t <= x);
        Some(idx.saturating_sub(1).min(self.samples.len().saturating_sub(2)))
    }

    /// Cubic Hermite interpolation of `(q, q')` at `x`. Returns `None`
    /// outside the sampled span or across a pole.
    pub fn eval(&self, x: f64) -> Option<(f64, f64)> {
        if self.samples.len() == 1 {
            let s = self.samples[0];
            return (s.t == x).then_some((s.q, s.qp));
        }
        let i = self.bracket(x)?;
        let (s0, s1) = (self.samples[i], self.samples[i + 1]);
        if s0.segment != s1.segment {
            return None;
        }
        Some(hermite(&s0, &s1, x))
    }

    /// Sample exactly at `t`, when stored.
    pub fn sample_at(&self, t: f64) -> Option<Sample> {
        let idx = self.samples.partition_point(|s| s.t < t);
        self.samples.get(idx).copied().filter(|s| s.t == t)
    }

    /// Samples with `lo <= t <= hi`.
    pub fn samples_in(&self, lo: f64, hi: f64) -> &[Sample] {
        let a = self.samples.partition_point(|s| s.t < lo);
        let b = self.samples.partition_point(|s| s.t <= hi);
        &self.samples[a..b]
    }

    /// Whether `q(t; -a, -b) = -q(t; a, b)` sample-wise against `other`,
    /// returning the largest mismatch over common sample times.
    pub fn antisymmetry_defect(&self, other: &Trajectory) -> f64 {
        let mut worst: f64 = 0.0;
        for (s, o) in self.samples.iter().zip(&other.samples) {
            if s.t != o.t {
                return f64::INFINITY;
            }
            worst = worst.max((s.q + o.q).abs());
        }
        if self.samples.len() != other.samples.len() {
            return f64::INFINITY;
        }
        worst
    }
}

fn hermite(s0: &Sample, s1: &Sample, x: f64) -> (f64, f64) {
    let h = s1.t - s0.t;
    let u = (x - s0.t) / h;
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let q = h00 * s0.q + h10 * h * s0.qp + h01 * s1.q + h11 * h * s1.qp;
    // derivative, using the second derivatives from the ODE for a quintic
    // would be sharper; the cubic derivative is adequate for sampling.
    let d00 = (6.0 * u2 - 6.0 * u) / h;
    let d10 = 3.0 * u2 - 4.0 * u + 1.0;
    let d01 = (-6.0 * u2 + 6.0 * u) / h;
    let d11 = 3.0 * u2 - 2.0 * u;
    let qp = d00 * s0.q + d10 * s0.qp + d01 * s1.q + d11 * s1.qp;
    (q, qp)
}

/// `|H(t2) - H(t1) + 1/2 int_{t1}^{t2} q^2 dt|` between two stored samples
/// of one pole-free segment.
pub fn hamiltonian_drift(traj: &Trajectory, t1: f64, t2: f64) -> Result<f64, OdeError> {
    let err = OdeError::NotPoleFree { t1, t2 };
    let s1 = traj.sample_at(t1).ok_or(err.clone())?;
    let s2 = traj.sample_at(t2).ok_or(err.clone())?;
    if s1.segment != s2.segment {
        return Err(err);
    }
    Ok((s2.hamiltonian() - s1.hamiltonian() + 0.5 * (s2.q2_integral - s1.q2_integral)).abs())
}
