//! Asymptotic family of a trajectory on each half-axis, and fits of the
//! family parameters.
//!
//! Negative axis: N1 (decaying oscillation), N2 (plateau `-eps sqrt(-t/2)`),
//! N3 (pole train). Positive axis: P1 (pole train), P2 (Airy decay).

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connection::canonical_mod;
use crate::pii_ode::{PoleRecord, Sample, Trajectory};
use crate::specfun::airy;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error("window [{0}, {1}] is not valid here: {2}")]
    Window(f64, f64, String),
    #[error("trajectory covers [{have_lo}, {have_hi}], window needs [{lo}, {hi}]")]
    Coverage { lo: f64, hi: f64, have_lo: f64, have_hi: f64 },
    #[error("ambiguous classification: both {0} and {1} criteria hold")]
    Ambiguous(&'static str, &'static str),
    #[error("no family criterion holds: {0}")]
    Unclassifiable(String),
    #[error("need at least {need} poles, found {found}")]
    InsufficientData { need: usize, found: usize },
    #[error("fit residual {residual:.3e} exceeds {limit:.3e}")]
    Fit { residual: f64, limit: f64 },
    #[error("N2 fit residual {0:.3} exceeds the refusal threshold; the separatrix has been lost at this depth")]
    SeparatrixInstability(f64),
}

/// Parameters of one asymptotic family. Serialized as
/// `{"variant": "N1", "params": {"d": .., "phi": ..}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params")]
pub enum FamilyParams {
    N1 {
        #[serde(rename = "d")]
        amplitude: f64,
        #[serde(rename = "phi")]
        phase: f64,
    },
    N2 {
        #[serde(rename = "eps")]
        sign: f64,
        #[serde(rename = "h")]
        tail: f64,
    },
    N3 {
        beta: f64,
        #[serde(rename = "varphi")]
        phase: f64,
    },
    P1 {
        #[serde(rename = "sigma")]
        sign: f64,
        gamma: f64,
        chi: f64,
    },
    P2 {
        kappa: f64,
    },
}

impl FamilyParams {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyParams::N1 { .. } => "N1",
            FamilyParams::N2 { .. } => "N2",
            FamilyParams::N3 { .. } => "N3",
            FamilyParams::P1 { .. } => "P1",
            FamilyParams::P2 { .. } => "P2",
        }
    }

    /// The same family for the data `(-a, -b)`.
    pub fn negated(self) -> Self {
        match self {
            FamilyParams::N1 { amplitude, phase } => {
                FamilyParams::N1 { amplitude, phase: canonical_mod(phase + PI, 2.0 * PI) }
            }
            FamilyParams::N2 { sign, tail } => FamilyParams::N2 { sign: -sign, tail: -tail },
            FamilyParams::N3 { beta, phase } => FamilyParams::N3 { beta, phase: canonical_mod(phase + PI, 2.0 * PI) },
            FamilyParams::P1 { sign, gamma, chi } => FamilyParams::P1 { sign: -sign, gamma, chi },
            FamilyParams::P2 { kappa } => FamilyParams::P2 { kappa: -kappa },
        }
    }
}

/// A classified half-axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub family: FamilyParams,
    /// Family-specific fit residual (relative RMS for sample fits, RMS
    /// phase error in radians for pole fits).
    pub residual: f64,
    pub window: (f64, f64),
    /// Phase residual of each pole, for the pole-train families.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pole_residuals: Vec<f64>,
}

/// Thresholds and windows. None of these come from the asymptotic theory;
/// they are empirical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Allowed relative deviation of pole spacing from `pi / sqrt(-t)`.
    pub spacing_tol: f64,
    /// Plateau band, relative to `sqrt(-t/2)`.
    pub plateau_band: f64,
    /// Relative residual above which the N2 tail fit is refused.
    pub n2_refusal: f64,
    /// Relative residual above which the N1 fit is rejected.
    pub n1_max_residual: f64,
    /// Relative change of `q / Ai` across the window still counted as
    /// converged for P2.
    pub p2_ratio_tol: f64,
    /// Minimum `|t_lo|` of a negative-axis window.
    pub min_depth: f64,
    /// Minimum `t_hi` of a positive-axis window.
    pub min_height: f64,
    pub negative_window: (f64, f64),
    pub positive_window: (f64, f64),
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            spacing_tol: 0.25,
            plateau_band: 0.1,
            n2_refusal: 0.2,
            n1_max_residual: 0.25,
            p2_ratio_tol: 0.05,
            min_depth: 20.0,
            min_height: 10.0,
            negative_window: (-30.0, -15.0),
            positive_window: (8.0, 16.0),
        }
    }
}

fn check_coverage(traj: &Trajectory, lo: f64, hi: f64) -> Result<(), ClassifierError> {
    if traj.t_min() > lo || traj.t_max() < hi {
        return Err(ClassifierError::Coverage { lo, hi, have_lo: traj.t_min(), have_hi: traj.t_max() });
    }
    Ok(())
}

/// Whether consecutive pole gaps track `pi / sqrt(-t)` within `tol`.
fn pole_train_negative(poles: &[PoleRecord], tol: f64) -> bool {
    poles.len() >= 3
        && poles.windows(2).all(|w| {
            let mid = -0.5 * (w[0].t0 + w[1].t0);
            let expected = PI / mid.sqrt();
            ((w[1].t0 - w[0].t0) / expected - 1.0).abs() <= tol
        })
}

/// Plateau sign `eps` if `|q + eps sqrt(-t/2)| < band sqrt(-t/2)` over the
/// third of the window nearest `t_hi` (the part least affected by the
/// separatrix instability).
fn plateau(traj: &Trajectory, lo: f64, hi: f64, band: f64) -> Option<f64> {
    let start = hi - (hi - lo) / 3.0;
    if !traj.poles_in(start, hi).is_empty() {
        return None;
    }
    let tail = traj.samples_in(start, hi);
    if tail.is_empty() {
        return None;
    }
    [1.0, -1.0].into_iter().find(|&eps| {
        tail.iter().all(|s| {
            let level = (-s.t / 2.0).sqrt();
            (s.q + eps * level).abs() < band * level
        })
    })
}

pub fn classify_negative(
    traj: &Trajectory,
    window: (f64, f64),
    cfg: &ClassifierConfig,
) -> Result<Classification, ClassifierError> {
    let (lo, hi) = window;
    if !(lo < hi && hi <= 0.0) || -lo < cfg.min_depth {
        return Err(ClassifierError::Window(lo, hi, format!("need t_lo <= -{} < t_hi <= 0", cfg.min_depth)));
    }
    check_coverage(traj, lo, hi)?;
    let poles = traj.poles_in(lo, hi);
    let is_n3 = pole_train_negative(&poles, cfg.spacing_tol);
    let n2 = plateau(traj, lo, hi, cfg.plateau_band);
    match (is_n3, n2) {
        (true, Some(_)) => Err(ClassifierError::Ambiguous("N3", "N2")),
        (true, None) => {
            let fit = fit_pole_phase(&poles, PoleModel::N3)?;
            Ok(Classification {
                family: FamilyParams::N3 { beta: fit.growth, phase: fit.phase },
                residual: fit.rms,
                window,
                pole_residuals: fit.per_pole,
            })
        }
        (false, Some(_)) => {
            // The tail is only resolvable where the plateau still holds and
            // rounding has not yet been amplified past it.
            let start = (hi - (hi - lo) / 3.0).max(-n2_resolvable_depth(traj.stats.tol));
            if start >= hi {
                return Err(ClassifierError::SeparatrixInstability(f64::INFINITY));
            }
            let fit = fit_n2(traj, (start, hi), cfg)?;
            Ok(Classification {
                family: FamilyParams::N2 { sign: fit.sign, tail: fit.tail },
                residual: fit.residual,
                window,
                pole_residuals: vec![],
            })
        }
        (false, None) => {
            if !poles.is_empty() {
                return Err(ClassifierError::Unclassifiable(format!(
                    "{} poles in the window without a regular pole train",
                    poles.len()
                )));
            }
            let fit = fit_n1(traj, window, cfg)?;
            Ok(Classification {
                family: FamilyParams::N1 { amplitude: fit.amplitude, phase: fit.phase },
                residual: fit.residual,
                window,
                pole_residuals: vec![],
            })
        }
    }
}

pub fn classify_positive(
    traj: &Trajectory,
    window: (f64, f64),
    cfg: &ClassifierConfig,
) -> Result<Classification, ClassifierError> {
    let (lo, hi) = window;
    if !(lo < hi && lo >= 0.0) || hi < cfg.min_height {
        return Err(ClassifierError::Window(lo, hi, format!("need 0 <= t_lo < t_hi, t_hi >= {}", cfg.min_height)));
    }
    check_coverage(traj, lo, hi)?;
    let horizon = airy_horizon(traj.stats.tol);
    let p2_window = ((lo.min(horizon - P2_MIN_SPAN)).max(0.0), hi.min(horizon));
    let poles = traj.poles_in(lo, hi);
    if traj.poles_in(p2_window.0, p2_window.1).is_empty() && p2_window.1 > p2_window.0 {
        let fit = fit_p2(traj, p2_window)?;
        if fit.drift <= cfg.p2_ratio_tol {
            return Ok(Classification {
                family: FamilyParams::P2 { kappa: fit.kappa },
                residual: fit.drift,
                window: p2_window,
                pole_residuals: vec![],
            });
        }
        if poles.is_empty() {
            return Err(ClassifierError::Unclassifiable(format!(
                "pole-free window but q/Ai drifts by {:.3}",
                fit.drift
            )));
        }
    }
    let fit = fit_pole_phase(&poles, PoleModel::P1)?;
    Ok(Classification {
        family: FamilyParams::P1 { sign: fit.sign, gamma: fit.growth, chi: fit.phase },
        residual: fit.rms,
        window,
        pole_residuals: fit.per_pole,
    })
}

const P2_MIN_SPAN: f64 = 2.0;

/// Largest `t` at which an integration error of relative size `tol`, carried
/// by the growing `Bi` mode, stays below a tenth of the decaying `Ai` part.
/// Beyond it no computed trajectory can exhibit `q ~ kappa Ai`, whatever
/// the data, so a P2 test is confined to `t` below it. Pole vaults leave
/// errors well above tight step tolerances, hence the 1e-11 floor.
pub fn airy_horizon(tol: f64) -> f64 {
    let tol = tol.max(1e-11);
    let limit = 0.1 / tol;
    let (mut lo, mut hi) = (0.0, 30.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let v = airy(mid);
        if v.bi / v.ai < limit {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Both half-axes of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BothSides {
    pub negative: Result<Classification, String>,
    pub positive: Result<Classification, String>,
}

pub fn classify_both(traj: &Trajectory, cfg: &ClassifierConfig) -> BothSides {
    BothSides {
        negative: classify_negative(traj, cfg.negative_window, cfg).map_err(|e| e.to_string()),
        positive: classify_positive(traj, cfg.positive_window, cfg).map_err(|e| e.to_string()),
    }
}

fn n1_phase(t: f64, amplitude: f64) -> f64 {
    let s = -t;
    2.0 / 3.0 * s.powf(1.5) - 0.75 * amplitude * amplitude * s.ln()
}

/// Solves the 2x2 normal equations of `y ~ u x1 + v x2`.
fn lstsq2(rows: impl Iterator<Item = (f64, f64, f64)>) -> Option<(f64, f64)> {
    let (mut a11, mut a12, mut a22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (x1, x2, y) in rows {
        a11 += x1 * x1;
        a12 += x1 * x2;
        a22 += x2 * x2;
        r1 += x1 * y;
        r2 += x2 * y;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() <= 1e-14 * (a11 * a22).max(f64::MIN_POSITIVE) {
        return None;
    }
    Some(((r1 * a22 - r2 * a12) / det, (a11 * r2 - a12 * r1) / det))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N1Fit {
    pub amplitude: f64,
    pub phase: f64,
    /// RMS misfit relative to the RMS of `q (-t)^{1/4}`.
    pub residual: f64,
}

fn n1_misfit(samples: &[Sample], amplitude: f64, phase: f64) -> f64 {
    samples
        .iter()
        .map(|s| {
            let model = amplitude * (-s.t).powf(-0.25) * (n1_phase(s.t, amplitude) + phase).cos();
            ((s.q - model) * (-s.t).powf(0.25)).powi(2)
        })
        .sum()
}

/// Least-squares fit of `q ~ d (-t)^{-1/4} cos((2/3)(-t)^{3/2} - (3d^2/4) ln(-t) + phi)`.
/// For a fixed `d` in the logarithmic term the model is linear in
/// `(d cos phi, -d sin phi)`; that fixed point is iterated, then the two
/// parameters are polished by Gauss-Newton.
pub fn fit_n1(traj: &Trajectory, window: (f64, f64), cfg: &ClassifierConfig) -> Result<N1Fit, ClassifierError> {
    let samples: Vec<Sample> = traj.samples_in(window.0, window.1).to_vec();
    fit_n1_samples(&samples, window, cfg.n1_max_residual)
}

fn fit_n1_samples(samples: &[Sample], window: (f64, f64), limit: f64) -> Result<N1Fit, ClassifierError> {
    if samples.len() < 8 || window.1 >= 0.0 {
        return Err(ClassifierError::Window(window.0, window.1, "too few samples on t < 0".into()));
    }
    let scaled = |s: &Sample| s.q * (-s.t).powf(0.25);
    let energy: f64 = samples.iter().map(|s| scaled(s).powi(2)).sum();
    if energy == 0.0 {
        return Ok(N1Fit { amplitude: 0.0, phase: 0.0, residual: 0.0 });
    }
    let mut amplitude = (2.0 * energy / samples.len() as f64).sqrt();
    let mut phase = 0.0;
    for _ in 0..60 {
        let Some((c, d)) = lstsq2(samples.iter().map(|s| {
            let th = n1_phase(s.t, amplitude);
            (th.cos(), th.sin(), scaled(s))
        })) else {
            break;
        };
        let next = c.hypot(d);
        phase = (-d).atan2(c);
        let done = (next - amplitude).abs() <= 1e-14 * next.max(1e-300);
        amplitude = next;
        if done {
            break;
        }
    }
    // Gauss-Newton polish on (d, phi).
    for _ in 0..20 {
        let (mut j11, mut j12, mut j22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for s in samples {
            let th = n1_phase(s.t, amplitude) + phase;
            let r = scaled(s) - amplitude * th.cos();
            let dth_dd = -1.5 * amplitude * (-s.t).ln();
            let jd = th.cos() - amplitude * th.sin() * dth_dd;
            let jp = -amplitude * th.sin();
            j11 += jd * jd;
            j12 += jd * jp;
            j22 += jp * jp;
            g1 += jd * r;
            g2 += jp * r;
        }
        let det = j11 * j22 - j12 * j12;
        if det.abs() < 1e-300 {
            break;
        }
        let dd = (g1 * j22 - g2 * j12) / det;
        let dp = (j11 * g2 - j12 * g1) / det;
        amplitude += dd;
        phase += dp;
        if dd.abs() < 1e-13 * amplitude.abs().max(1e-300) && dp.abs() < 1e-13 {
            break;
        }
    }
    if amplitude < 0.0 {
        amplitude = -amplitude;
        phase += PI;
    }
    let residual = (n1_misfit(samples, amplitude, phase) / energy).sqrt();
    if residual.is_nan() || residual > limit {
        return Err(ClassifierError::Fit { residual, limit });
    }
    Ok(N1Fit { amplitude, phase: canonical_mod(phase, 2.0 * PI), residual })
}

/// Pole-train model whose phase is matched to multiples of pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleModel {
    /// `(2/3)(-t)^{3/2} + (3/2) beta ln(-t) + varphi = k pi`.
    N3,
    /// `(sqrt2/3) t^{3/2} + (3 gamma/4) ln t + chi = k pi`.
    P1,
}

impl PoleModel {
    /// Parameter-free part of the phase and the coefficient of the growth
    /// parameter.
    fn terms(self, t: f64) -> (f64, f64) {
        match self {
            PoleModel::N3 => (2.0 / 3.0 * (-t).powf(1.5), 1.5 * (-t).ln()),
            PoleModel::P1 => (SQRT_2 / 3.0 * t.powf(1.5), 0.75 * t.ln()),
        }
    }

    fn period(self) -> f64 {
        match self {
            PoleModel::N3 => 2.0 * PI,
            PoleModel::P1 => PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFit {
    /// `beta` (N3) or `gamma` (P1).
    pub growth: f64,
    /// `varphi` (N3, mod 2 pi) or `chi` (P1, mod pi).
    pub phase: f64,
    /// Integer offset applied to the nominal pole numbering.
    pub offset: i32,
    /// Residue sign of the train (P1 only; 0 for N3).
    pub sign: f64,
    pub rms: f64,
    pub per_pole: Vec<f64>,
}

/// Minimum number of poles for a phase fit.
pub const MIN_POLES: usize = 4;

/// Fits the pole phases. Consecutive poles differ by one unit of `k`; the
/// absolute numbering is nominal (nearest multiple of pi of the
/// parameter-free phase at the first pole) plus an offset scanned over
/// [-3, 3]. The offset only moves the phase by multiples of pi, so it is
/// chosen by the residue parity (N3 residues alternate as `(-1)^{k+1}`)
/// and then by the smallest canonical phase.
pub fn fit_pole_phase(poles: &[PoleRecord], model: PoleModel) -> Result<PhaseFit, ClassifierError> {
    if poles.len() < MIN_POLES {
        return Err(ClassifierError::InsufficientData { need: MIN_POLES, found: poles.len() });
    }
    let step: i64 = match model {
        PoleModel::N3 => -1,
        PoleModel::P1 => 1,
    };
    let base = (model.terms(poles[0].t0).0 / PI).round() as i64;
    let numbering = |j: usize, offset: i32| base + offset as i64 + step * j as i64;
    let (growth, phase0) = lstsq2(poles.iter().enumerate().map(|(j, p)| {
        let (free, coef) = model.terms(p.t0);
        (coef, 1.0, numbering(j, 0) as f64 * PI - free)
    }))
    .ok_or(ClassifierError::InsufficientData { need: MIN_POLES, found: poles.len() })?;
    let per_pole: Vec<f64> = poles
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let (free, coef) = model.terms(p.t0);
            free + coef * growth + phase0 - numbering(j, 0) as f64 * PI
        })
        .collect();
    let rms = (per_pole.iter().map(|r| r * r).sum::<f64>() / per_pole.len() as f64).sqrt();

    let parity_mismatch = |offset: i32| -> usize {
        match model {
            PoleModel::N3 => poles
                .iter()
                .enumerate()
                .filter(|(j, p)| {
                    let k = numbering(*j, offset);
                    let expected = if k.rem_euclid(2) == 1 { 1.0 } else { -1.0 };
                    p.sigma.value() != expected
                })
                .count(),
            PoleModel::P1 => 0,
        }
    };
    let offset = (-3..=3)
        .min_by(|&x, &y| {
            let key = |o: i32| (parity_mismatch(o), (phase0 + o as f64 * PI).abs());
            let (kx, ky) = (key(x), key(y));
            kx.0.cmp(&ky.0).then(kx.1.total_cmp(&ky.1))
        })
        .expect("non-empty range");
    let sign = match model {
        PoleModel::N3 => 0.0,
        PoleModel::P1 => {
            let total: f64 = poles.iter().map(|p| p.sigma.value()).sum();
            total.signum()
        }
    };
    Ok(PhaseFit {
        growth,
        phase: canonical_mod(phase0 + offset as f64 * PI, model.period()),
        offset,
        sign,
        rms,
        per_pole,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2Fit {
    pub kappa: f64,
    /// Relative change of `q / Ai` between the window midpoint and `t_hi`.
    pub drift: f64,
}

/// `Ai(t)` below which the window is useless.
const AI_FLOOR: f64 = 1e-290;

/// `kappa` as the median of `q / Ai` over the upper half of the window,
/// where the nonlinear and pole-remnant corrections have died out.
pub fn fit_p2(traj: &Trajectory, window: (f64, f64)) -> Result<P2Fit, ClassifierError> {
    let samples = traj.samples_in(window.0, window.1);
    if samples.len() < 4 {
        return Err(ClassifierError::Window(window.0, window.1, "too few samples".into()));
    }
    if airy(window.1).ai < AI_FLOOR {
        return Err(ClassifierError::Window(window.0, window.1, "Ai underflows".into()));
    }
    if samples.iter().all(|s| s.q == 0.0) {
        return Ok(P2Fit { kappa: 0.0, drift: 0.0 });
    }
    let mid = 0.5 * (window.0 + window.1);
    let mut ratios: Vec<f64> = samples.iter().filter(|s| s.t >= mid).map(|s| s.q / airy(s.t).ai).collect();
    if ratios.is_empty() {
        return Err(ClassifierError::Window(window.0, window.1, "too few samples".into()));
    }
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    let kappa = if n % 2 == 1 { ratios[n / 2] } else { 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]) };
    let ratio = |t: f64| traj.eval(t).map(|(q, _)| q / airy(t).ai);
    let drift = match (ratio(mid), ratio(window.1)) {
        (Some(m), Some(e)) => (e - m).abs() / m.abs().max(e.abs()).max(1e-300),
        _ => f64::INFINITY,
    };
    Ok(P2Fit { kappa, drift })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N2Fit {
    pub sign: f64,
    pub tail: f64,
    /// RMS deviation of the scaled tail from its mean, relative to `|h|`.
    pub residual: f64,
}

/// Algebraic part of the plateau, `sqrt(u/2) (1 - u^{-3}/8 + ...)` with
/// `u = -t`, summed to its smallest term. Its corrections dwarf the
/// exponentially small tail, so the tail is measured against it.
pub fn n2_plateau(u: f64) -> f64 {
    // Y(x) = sum c_k x^k, x = u^{-3}, solves 2 c_m + [Y^3]_m - 3 c_m = p(p-1) c_{m-1}
    // with p = 1/2 - 3(m-1), from w'' = w (2 w^2 - u) and w = sqrt(u/2) Y.
    const TERMS: usize = 12;
    let mut c = [0.0f64; TERMS];
    let mut sq = [0.0f64; TERMS];
    c[0] = 1.0;
    sq[0] = 1.0;
    for m in 1..TERMS {
        let p = 0.5 - 3.0 * (m - 1) as f64;
        // [Y^3]_m without the c_m terms: sum over c_i [Y^2]_{m-i}, i >= 1,
        // plus c_0 times the lower part of [Y^2]_m.
        let sq_lower: f64 = (1..m).map(|i| c[i] * c[m - i]).sum();
        let cube_lower: f64 = (1..m).map(|i| c[i] * sq[m - i]).sum::<f64>() + sq_lower;
        c[m] = (p * (p - 1.0) * c[m - 1] - cube_lower) / 2.0;
        sq[m] = 2.0 * c[m] + sq_lower;
    }
    let x = u.powi(-3);
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for &ck in &c {
        let term = ck * pow;
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        pow *= x;
    }
    (u / 2.0).sqrt() * sum
}

/// Depth `u` at which a perturbation of size `noise` in the growing mode,
/// `noise e^{(2 sqrt2/3) u^{3/2}}`, reaches the tail scale
/// `e^{-(2 sqrt2/3) u^{3/2}}`. Separatrix data are only known to the
/// integration tolerance, so that is the natural `noise`.
pub fn n2_resolvable_depth(noise: f64) -> f64 {
    (-noise.max(f64::EPSILON).ln() / (4.0 * SQRT_2 / 3.0)).powf(2.0 / 3.0)
}

fn n2_scaled_tail(s: &Sample, sign: f64) -> f64 {
    let u = -s.t;
    (s.q + sign * n2_plateau(u)) * u.powf(0.25) * (2.0 * SQRT_2 / 3.0 * u.powf(1.5)).exp()
}

/// `eps` from the plateau sign; `h` as the least-squares constant of
/// `(q + eps w(-t)) (-t)^{1/4} e^{(2 sqrt2/3)(-t)^{3/2}}`, where `w` is the
/// algebraic plateau `n2_plateau`.
pub fn fit_n2(traj: &Trajectory, window: (f64, f64), cfg: &ClassifierConfig) -> Result<N2Fit, ClassifierError> {
    fit_n2_samples(
        traj.samples_in(window.0, window.1),
        window,
        !traj.poles_in(window.0, window.1).is_empty(),
        cfg.n2_refusal,
    )
}

fn fit_n2_samples(
    samples: &[Sample],
    window: (f64, f64),
    has_poles: bool,
    refusal: f64,
) -> Result<N2Fit, ClassifierError> {
    if samples.len() < 4 || window.1 >= 0.0 {
        return Err(ClassifierError::Window(window.0, window.1, "too few samples on t < 0".into()));
    }
    if has_poles {
        return Err(ClassifierError::SeparatrixInstability(f64::INFINITY));
    }
    let mean_q = samples.iter().map(|s| s.q).sum::<f64>() / samples.len() as f64;
    let sign = if mean_q < 0.0 { 1.0 } else { -1.0 };
    let tails: Vec<f64> = samples.iter().map(|s| n2_scaled_tail(s, sign)).collect();
    let tail = tails.iter().sum::<f64>() / tails.len() as f64;
    let rms = (tails.iter().map(|y| (y - tail).powi(2)).sum::<f64>() / tails.len() as f64).sqrt();
    let residual = rms / tail.abs();
    if residual.is_nan() || residual > refusal {
        return Err(ClassifierError::SeparatrixInstability(residual));
    }
    Ok(N2Fit { sign, tail, residual })
}
