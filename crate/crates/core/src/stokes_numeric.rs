//! Stokes multipliers at `t = 0` computed directly from the Lax-pair
//! `lambda`-equation `Psi' = M(lambda) Psi`, independent of any asymptotic
//! formula.
//!
//! For each `m` in 0..6 the solution `y_m` recessive along the ray
//! `arg lambda = (2m - 1) pi / 6` is seeded at radius `R` from the formal
//! series `(I + sum_j m_j lambda^{-j}) e^{-i theta sigma_3}`,
//! `theta = 4 lambda^3 / 3`, and transported inward along that ray to
//! `lambda = 0` with the exponential factored out, so the integrated
//! quantity stays O(1) and the dominant companion decays. Multipliers are
//! ratios of 2x2 determinants between the `y_m` at the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connection::{self, ConnectionError};

pub type Matrix2 = [[Complex64; 2]; 2];
type Vector2 = [Complex64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StokesError {
    #[error("radius {0} is below the minimum 5")]
    Radius(f64),
    #[error("tolerance {0:e} must lie in [1e-14, 1e-8]")]
    Tolerance(f64),
    #[error("formal series at radius {radius} is accurate only to {error:.1e}; use a larger radius")]
    Accuracy { radius: f64, error: f64 },
    #[error("solution overflowed on ray {ray}; try a smaller radius")]
    Conditioning { ray: usize },
    #[error("step budget exhausted on ray {ray}")]
    StepBudget { ray: usize },
    #[error("Stokes data fail the constraints: residual {0:.3e}")]
    Consistency(f64),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `-i(4 lambda^2 + 2a^2) sigma_3 + 4 lambda a sigma_1 - 2b sigma_2`, the
/// `lambda`-equation at `t = 0` with `q = a`, `q' = b`.
pub fn lax_rhs(lambda: Complex64, a: f64, b: f64) -> Matrix2 {
    let i = Complex64::i();
    let diag = -i * (4.0 * lambda * lambda + 2.0 * a * a);
    [[diag, 4.0 * lambda * a + 2.0 * i * b], [4.0 * lambda * a - 2.0 * i * b, -diag]]
}

/// Ray `arg lambda = (2k - 1) pi / 6` on which the canonical solution of
/// index `k` is seeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorFrame {
    pub k: i32,
    pub radius: f64,
}

impl SectorFrame {
    pub fn bisector(&self) -> f64 {
        (2 * self.k - 1) as f64 * PI / 6.0
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.radius, self.bisector())
    }
}

/// Coefficients of the formal solution: column 1 is
/// `(sum f_j lambda^{-j}, sum g_j lambda^{-j}) e^{-i theta}`, column 2 is
/// `(sum (-1)^j g_j lambda^{-j}, sum (-1)^j f_j lambda^{-j}) e^{+i theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    pub f: Vec<Complex64>,
    pub g: Vec<Complex64>,
}

pub fn formal_series(a: f64, b: f64, order: usize) -> FormalSeries {
    let i = Complex64::i();
    let mut f = vec![c(0.0, 0.0); order + 1];
    let mut g = vec![c(0.0, 0.0); order + 1];
    f[0] = c(1.0, 0.0);
    let at = |v: &[Complex64], j: isize| if j >= 0 { v[j as usize] } else { c(0.0, 0.0) };
    let a2 = a * a;
    for j in 1..=order {
        let jj = j as isize;
        let jf = j as f64;
        g[j] = (-(jf - 3.0) * at(&g, jj - 3) - 4.0 * a * at(&f, jj - 1) + 2.0 * i * b * at(&f, jj - 2)
            - 2.0 * i * a2 * at(&g, jj - 2))
            / (8.0 * i);
        let gj = g[j];
        f[j] = -((a / (2.0 * i)) * (-(jf - 1.0) * at(&g, jj - 1) - 2.0 * i * a2 * gj)
            + (b / 4.0)
                * (-(jf - 2.0) * at(&g, jj - 2) + 2.0 * i * b * at(&f, jj - 1) - 2.0 * i * a2 * at(&g, jj - 1)))
            / jf;
    }
    FormalSeries { f, g }
}

impl FormalSeries {
    /// Column `which` (0 or 1) without its exponential, summed up to the
    /// smallest term; returns the value and the size of the first omitted
    /// term as an error estimate.
    fn column(&self, lambda: Complex64, which: usize) -> (Vector2, f64) {
        let inv = 1.0 / lambda;
        let mut pow = c(1.0, 0.0);
        let mut sum = [c(0.0, 0.0); 2];
        let mut last = f64::INFINITY;
        for j in 0..self.f.len() {
            let sign = if which == 1 && j % 2 == 1 { -1.0 } else { 1.0 };
            let (top, bottom) = if which == 0 { (self.f[j], self.g[j]) } else { (self.g[j], self.f[j]) };
            let term = [sign * top * pow, sign * bottom * pow];
            let size = term[0].norm().max(term[1].norm());
            if j > 1 && size > last {
                return (sum, last);
            }
            sum[0] += term[0];
            sum[1] += term[1];
            last = if j == 0 { f64::INFINITY } else { size };
            pow *= inv;
        }
        (sum, last)
    }
}

fn theta(lambda: Complex64) -> Complex64 {
    4.0 / 3.0 * lambda * lambda * lambda
}

/// Canonical fundamental solution at a seed point, kept as the series part
/// times `e^{-i theta sigma_3}` since the exponential alone may overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSeed {
    pub lambda: Complex64,
    pub theta: Complex64,
    pub series_part: Matrix2,
}

impl CanonicalSeed {
    pub fn det(&self) -> Complex64 {
        det(&self.series_part)
    }

    pub fn matrix(&self) -> Matrix2 {
        let e = (-Complex64::i() * self.theta).exp();
        let p = &self.series_part;
        [[p[0][0] * e, p[0][1] / e], [p[1][0] * e, p[1][1] / e]]
    }
}

/// Seed of `frame` with the formal series truncated after `order`
/// correction terms.
pub fn canonical_seed(a: f64, b: f64, frame: &SectorFrame, order: usize) -> CanonicalSeed {
    let lambda = frame.point();
    let series = formal_series(a, b, order);
    let inv = 1.0 / lambda;
    let col = |k| {
        let mut pow = c(1.0, 0.0);
        let mut sum = [c(0.0, 0.0); 2];
        for j in 0..=order {
            let sign = if k == 1 && j % 2 == 1 { -1.0 } else { 1.0 };
            let (top, bottom) = if k == 0 { (series.f[j], series.g[j]) } else { (series.g[j], series.f[j]) };
            sum[0] += sign * top * pow;
            sum[1] += sign * bottom * pow;
            pow *= inv;
        }
        sum
    };
    let (c0, c1) = (col(0), col(1));
    CanonicalSeed { lambda, theta: theta(lambda), series_part: [[c0[0], c1[0]], [c0[1], c1[1]]] }
}

pub fn det(m: &Matrix2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det_cols(u: &Vector2, v: &Vector2) -> Complex64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Numerical settings of the Stokes computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesConfig {
    pub radius: f64,
    pub tol: f64,
    /// Terms of the formal series available to the seed.
    pub series_order: usize,
    /// Largest radius the automatic increase may reach.
    pub max_radius: f64,
    pub max_steps: usize,
}

impl Default for StokesConfig {
    fn default() -> Self {
        Self { radius: 8.0, tol: 1e-12, series_order: 60, max_radius: 32.0, max_steps: 2_000_000 }
    }
}

/// Stokes multipliers `s_{-1} .. s_3` with their consistency residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesData {
    pub schema_version: u32,
    pub a: f64,
    pub b: f64,
    /// `s[k + 1]` holds `s_k`.
    pub s: [Complex64; 5],
    pub radius: f64,
    /// `|s1 - s2 + s3 + s1 s2 s3| / max(1, |s1 s2 s3|)`.
    pub constraint_residual: f64,
    /// `max(|s3 - conj s1|, |Im s2|)`.
    pub conj_residual: f64,
    /// `max(|s2 + s_{-1}|, |s3 + s0|)`, relative to `max(1, |s|)`.
    pub periodicity_residual: f64,
    /// Largest deviation of `det(y_m, y_{m+1})` from `(-1)^m`.
    pub det_residual: f64,
    /// Error estimate of the seeds (first omitted formal-series term).
    pub seed_error: f64,
}

impl StokesData {
    pub fn get(&self, k: i32) -> Complex64 {
        self.s[(k + 1) as usize]
    }
    pub fn s1(&self) -> Complex64 {
        self.get(1)
    }
    pub fn s2(&self) -> Complex64 {
        self.get(2)
    }
    pub fn s3(&self) -> Complex64 {
        self.get(3)
    }
}

/// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Transports `z = y e^{-sign i theta}` along `lambda = r e^{i phi}` from
/// `r = radius` to `r = 0`.
fn transport(
    z0: Vector2,
    phi: f64,
    sign: f64,
    a: f64,
    b: f64,
    cfg: &StokesConfig,
    ray: usize,
) -> Result<Vector2, StokesError> {
    let dir = Complex64::from_polar(1.0, phi);
    let i = Complex64::i();
    let rhs = |r: f64, z: &Vector2| -> Vector2 {
        let lambda = dir * r;
        let m = lax_rhs(lambda, a, b);
        let shift = sign * 4.0 * i * lambda * lambda;
        [dir * ((m[0][0] - shift) * z[0] + m[0][1] * z[1]), dir * (m[1][0] * z[0] + (m[1][1] - shift) * z[1])]
    };
    let mut r = cfg.radius;
    let mut z = z0;
    let mut h = -0.1 / (8.0 * r * r + 1.0);
    let mut k = [[c(0.0, 0.0); 2]; 7];
    k[0] = rhs(r, &z);
    let mut steps = 0;
    while r > 0.0 {
        if steps >= cfg.max_steps {
            return Err(StokesError::StepBudget { ray });
        }
        steps += 1;
        if r + h < 0.0 {
            h = -r;
        }
        for s in 1..7 {
            let mut y = z;
            for (j, kj) in k.iter().enumerate().take(s) {
                let w = DP_A[s][j] * h;
                if w != 0.0 {
                    y[0] += w * kj[0];
                    y[1] += w * kj[1];
                }
            }
            k[s] = rhs(r + DP_C[s] * h, &y);
        }
        let mut next = z;
        let mut err = [c(0.0, 0.0); 2];
        for s in 0..7 {
            next[0] += DP_B[s] * h * k[s][0];
            next[1] += DP_B[s] * h * k[s][1];
            err[0] += DP_E[s] * h * k[s][0];
            err[1] += DP_E[s] * h * k[s][1];
        }
        let scale = |x: Complex64, y: Complex64| cfg.tol * (1.0 + x.norm().max(y.norm()));
        let e = (err[0].norm() / scale(z[0], next[0])).max(err[1].norm() / scale(z[1], next[1]));
        if !e.is_finite() {
            return Err(StokesError::Conditioning { ray });
        }
        if e <= 1.0 {
            r += h;
            if h == -(r - h) || r.abs() < 1e-300 {
                r = 0.0;
            }
            z = next;
            k[0] = k[6];
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            h *= (0.9 * e.powf(-0.2)).clamp(0.1, 0.9);
        }
        if z[0].norm() > 1e150 || z[1].norm() > 1e150 {
            return Err(StokesError::Conditioning { ray });
        }
    }
    Ok(z)
}

/// The recessive solution of ray `m` evaluated at `lambda = 0`, with its
/// seed error estimate.
fn ray_solution(
    m: usize,
    a: f64,
    b: f64,
    series: &FormalSeries,
    cfg: &StokesConfig,
) -> Result<(Vector2, f64), StokesError> {
    let frame = SectorFrame { k: m as i32, radius: cfg.radius };
    let phi = frame.bisector();
    let lambda = frame.point();
    // Even rays carry the e^{-i theta} column, odd rays the e^{+i theta} one.
    let (which, sign) = if m.rem_euclid(2) == 0 { (0, -1.0) } else { (1, 1.0) };
    let (z0, err) = series.column(lambda, which);
    Ok((transport(z0, phi, sign, a, b, cfg, m)?, err))
}

/// Stokes multipliers for real initial data `(a, b)`, in the gauge where the
/// decaying Airy-type solution (Hastings-McLeod) has `s1 = -i`. The radius
/// grows by factors of 1.5 (up to `max_radius`) until the formal-series seed
/// is accurate to `tol`.
pub fn compute_stokes(a: f64, b: f64, cfg: &StokesConfig) -> Result<StokesData, StokesError> {
    if cfg.radius < 5.0 {
        return Err(StokesError::Radius(cfg.radius));
    }
    if !(1e-14..=1e-8).contains(&cfg.tol) {
        return Err(StokesError::Tolerance(cfg.tol));
    }
    let series = formal_series(a, b, cfg.series_order);
    let mut run = *cfg;
    loop {
        let probe = (0..6)
            .map(|m| series.column(SectorFrame { k: m as i32, radius: run.radius }.point(), m % 2).1)
            .fold(0.0, f64::max);
        if probe <= 0.1 * run.tol || run.radius * 1.5 > run.max_radius {
            if probe > 1e3 * run.tol {
                return Err(StokesError::Accuracy { radius: run.radius, error: probe });
            }
            break;
        }
        run.radius *= 1.5;
    }
    let rays: Vec<(Vector2, f64)> =
        (0..6).into_par_iter().map(|m| ray_solution(m, a, b, &series, &run)).collect::<Result<_, _>>()?;
    let y = |m: i32| rays[m.rem_euclid(6) as usize].0;
    let seed_error = rays.iter().map(|r| r.1).fold(0.0, f64::max);

    let i = Complex64::i();
    let mut s = [c(0.0, 0.0); 5];
    for k in -1..=3 {
        let raw = det_cols(&y(k - 1), &y(k + 1)) / det_cols(&y(k - 1), &y(k));
        let gauge = if k.rem_euclid(2) == 0 { i } else { -i };
        s[(k + 1) as usize] = gauge * raw;
    }
    let det_residual = (0..6)
        .map(|m| {
            let expected = if m % 2 == 0 { 1.0 } else { -1.0 };
            (det_cols(&y(m), &y(m + 1)) - expected).norm()
        })
        .fold(0.0, f64::max);
    let (s1, s2, s3) = (s[2], s[3], s[4]);
    let product = (s1 * s2 * s3).norm();
    let constraint_residual = (s1 - s2 + s3 + s1 * s2 * s3).norm() / product.max(1.0);
    let conj_residual = (s3 - s1.conj()).norm().max(s2.im.abs());
    let periodicity_residual = ((s2 + s[0]).norm() / s2.norm().max(1.0)).max((s3 + s[1]).norm() / s3.norm().max(1.0));
    let data = StokesData {
        schema_version: connection::SCHEMA_VERSION,
        a,
        b,
        s,
        radius: run.radius,
        constraint_residual,
        conj_residual,
        periodicity_residual,
        det_residual,
        seed_error,
    };
    let worst = constraint_residual.max(periodicity_residual);
    if worst.is_nan() || worst > 1e3 * run.tol.max(seed_error) {
        return Err(StokesError::Consistency(worst));
    }
    Ok(data)
}

/// One multiplier of one `(a, b)`, numeric against predicted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub xi: f64,
    pub k: i32,
    pub numeric_re: f64,
    pub numeric_im: f64,
    pub predicted_re: f64,
    pub predicted_im: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub a: f64,
    pub b: f64,
    pub numeric: StokesData,
    pub predicted: connection::PredictedStokes,
    pub rows: Vec<ValidationRow>,
    /// `| |s1| - 1 |` of the numeric data.
    pub modulus_defect: f64,
    /// `|arg s1 - arg s1_pred|` wrapped to `[0, pi]`.
    pub arg_error: f64,
}

pub fn validate_prediction(a: f64, b: f64, cfg: &StokesConfig) -> Result<Validation, StokesError> {
    let sd = connection::scale(a, b)?;
    let predicted = connection::predict_stokes(&sd)?;
    let numeric = compute_stokes(a, b, cfg)?;
    let rows = [(1, numeric.s1(), predicted.s1), (2, numeric.s2(), predicted.s2), (3, numeric.s3(), predicted.s3)]
        .into_iter()
        .map(|(k, n, p)| ValidationRow {
            xi: sd.xi,
            k,
            numeric_re: n.re,
            numeric_im: n.im,
            predicted_re: p.re,
            predicted_im: p.im,
            rel_err: (n - p).norm() / p.norm(),
        })
        .collect();
    let arg_error = connection::canonical_mod(numeric.s1().arg() - predicted.s1.arg(), 2.0 * PI).abs();
    Ok(Validation { a, b, modulus_defect: (numeric.s1().norm() - 1.0).abs(), arg_error, numeric, predicted, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lax_matrix_structure() {
        for lambda in [c(0.3, -1.2), c(2.0, 0.5)] {
            let m = lax_rhs(lambda, 0.7, -0.4);
            assert!((m[0][0] + m[1][1]).norm() < 1e-15);
            // Pauli expansion entry by entry.
            let i = Complex64::i();
            assert!((m[0][1] - (4.0 * lambda * 0.7 + 2.0 * i * -0.4)).norm() < 1e-15);
            assert!((m[1][0] - (4.0 * lambda * 0.7 - 2.0 * i * -0.4)).norm() < 1e-15);
        }
        let m = lax_rhs(c(1.0, 1.0), 0.0, 0.0);
        assert_eq!(m[0][1], c(0.0, 0.0));
        assert_eq!(m[0][0], -4.0 * Complex64::i() * c(1.0, 1.0) * c(1.0, 1.0));
    }

    #[test]
    fn formal_series_satisfies_equation() {
        // Column 1 times e^{-i theta} must solve Psi' = M Psi order by order;
        // check the residual at a large point shrinks like the truncation.
        let (a, b) = (0.8, 0.3);
        let series = formal_series(a, b, 30);
        for r in [10.0, 20.0] {
            let lambda = Complex64::from_polar(r, -PI / 6.0);
            let h = 1e-4;
            let col = |l: Complex64| series.column(l, 0).0;
            let (zp, zm, z0) = (col(lambda + h), col(lambda - h), col(lambda));
            let dz = [(zp[0] - zm[0]) / (2.0 * h), (zp[1] - zm[1]) / (2.0 * h)];
            let m = lax_rhs(lambda, a, b);
            let shift = -4.0 * Complex64::i() * lambda * lambda;
            let res0 = dz[0] - ((m[0][0] - shift) * z0[0] + m[0][1] * z0[1]);
            let res1 = dz[1] - (m[1][0] * z0[0] + (m[1][1] - shift) * z0[1]);
            assert!(res0.norm().max(res1.norm()) < 1e-6, "r {r}: {res0} {res1}");
        }
    }

    #[test]
    fn seed_determinant_tends_to_one() {
        let errs: Vec<f64> = [6.0, 12.0]
            .iter()
            .map(|&radius| (canonical_seed(0.8, 0.3, &SectorFrame { k: 1, radius }, 1).det() - 1.0).norm())
            .collect();
        assert!(errs[1] < errs[0] / 2.0, "{errs:?}");
        let exact = canonical_seed(0.0, 0.0, &SectorFrame { k: 2, radius: 6.0 }, 1);
        assert_abs_diff_eq!((exact.det() - 1.0).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(exact.matrix()[0][1], c(0.0, 0.0));
    }

    #[test]
    fn zero_data_has_zero_multipliers() {
        let d = compute_stokes(0.0, 0.0, &StokesConfig::default()).unwrap();
        for s in d.s {
            assert!(s.norm() < 1e-10);
        }
    }

    #[test]
    fn real_data_symmetries() {
        let d = compute_stokes(0.8, 0.3, &StokesConfig::default()).unwrap();
        assert!(d.s2().im.abs() < 1e-8);
        assert!((d.s3() - d.s1().conj()).norm() < 1e-8);
        assert!(d.constraint_residual < 1e-9);
        assert!(d.det_residual < 1e-9);
        let s2 = d.s2().re;
        if s2.abs() > 1e-6 {
            let identity = d.s1().norm_sqr() - 1.0 + 2.0 * d.s1().re / s2;
            assert!(identity.abs() < 1e-6);
        }
    }

    #[test]
    fn hastings_mcleod_gauge() {
        // Decaying solution with kappa = 1: s1 = -i, s2 = 0.
        let d = compute_stokes(0.367_061_551_548_07, -0.295_372_105_447_55, &StokesConfig::default()).unwrap();
        assert!((d.s1() + Complex64::i()).norm() < 1e-6, "{:?}", d.s1());
        assert!(d.s2().norm() < 1e-6);
    }

    #[test]
    fn radius_stability() {
        let base = compute_stokes(0.5, -0.7, &StokesConfig::default()).unwrap();
        let wide = compute_stokes(0.5, -0.7, &StokesConfig { radius: 12.0, ..StokesConfig::default() }).unwrap();
        for k in -1..=3 {
            assert!((base.get(k) - wide.get(k)).norm() < 1e-9, "k {k}");
        }
    }

    #[test]
    fn odd_symmetry_of_data() {
        // (a, b) -> (-a, -b) maps q to -q; s_k -> -s_k.
        let p = compute_stokes(0.6, 0.4, &StokesConfig::default()).unwrap();
        let m = compute_stokes(-0.6, -0.4, &StokesConfig::default()).unwrap();
        for k in -1..=3 {
            assert!((p.get(k) + m.get(k)).norm() < 1e-9, "k {k}");
        }
    }

    #[test]
    fn argument_validation() {
        assert!(matches!(
            compute_stokes(0.0, 0.0, &StokesConfig { radius: 4.0, ..StokesConfig::default() }),
            Err(StokesError::Radius(_))
        ));
        assert!(matches!(
            compute_stokes(0.0, 0.0, &StokesConfig { tol: 1e-6, ..StokesConfig::default() }),
            Err(StokesError::Tolerance(_))
        ));
    }
}
