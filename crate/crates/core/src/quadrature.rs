//! Branch-aware radicals `sqrt(s^4 +- 1/4)`, adaptive Gauss-Kronrod
//! quadrature along rays to infinity, and the contour constants that enter
//! the connection formulas.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::beta;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("point {0} is a branch point of the radical")]
    BranchPoint(Complex64),
    #[error("quadrature did not converge: best estimate {best} with error {error:e}")]
    NoConvergence { best: Complex64, error: f64 },
    #[error("scaled data violate A^4 - B^2 = {expected}: residual {residual:e}")]
    Constraint { expected: f64, residual: f64 },
    #[error("integration contour passes through the pole at s = {0}")]
    PoleOnContour(f64),
    #[error("imaginary part {0:e} of F2 exceeds the tolerance")]
    ImaginaryResidual(f64),
}

/// Which of the two quartic radicals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Radical {
    /// `sqrt(s^4 + 1/4)`, roots `(1/sqrt 2) e^{+-i pi/4}`, `(1/sqrt 2) e^{+-3 i pi/4}`.
    Plus,
    /// `sqrt(s^4 - 1/4)`, roots `+-1/sqrt 2`, `+-i/sqrt 2`.
    Minus,
}

impl Radical {
    pub fn roots(self) -> [Complex64; 4] {
        let r = FRAC_1_SQRT_2;
        match self {
            Radical::Plus => [
                Complex64::new(0.5, -0.5),
                Complex64::new(0.5, 0.5),
                Complex64::new(-0.5, 0.5),
                Complex64::new(-0.5, -0.5),
            ],
            Radical::Minus => {
                [Complex64::new(r, 0.0), Complex64::new(0.0, r), Complex64::new(-r, 0.0), Complex64::new(0.0, -r)]
            }
        }
    }

    fn shift(self) -> f64 {
        match self {
            Radical::Plus => 0.25,
            Radical::Minus => -0.25,
        }
    }
}

/// `exp(1/2 sum_i Log(s - root_i))` with principal logarithms, so each
/// factor has its cut running left from its root.
pub fn sqrt_branch(s: Complex64, which: Radical) -> Result<Complex64, QuadratureError> {
    let mut log_sum = Complex64::new(0.0, 0.0);
    for r in which.roots() {
        let d = s - r;
        if d == Complex64::new(0.0, 0.0) {
            return Err(QuadratureError::BranchPoint(s));
        }
        log_sum += d.ln();
    }
    Ok((0.5 * log_sum).exp())
}

/// [`sqrt_branch`] at `start + offset`, with the factor belonging to a root
/// at `start` formed from `offset` directly so points very close to the
/// branch point keep full relative accuracy.
pub fn sqrt_branch_near(start: Complex64, offset: Complex64, which: Radical) -> Result<Complex64, QuadratureError> {
    let mut log_sum = Complex64::new(0.0, 0.0);
    for r in which.roots() {
        let d = if r == start { offset } else { (start - r) + offset };
        if d == Complex64::new(0.0, 0.0) {
            return Err(QuadratureError::BranchPoint(start + offset));
        }
        log_sum += d.ln();
    }
    Ok((0.5 * log_sum).exp())
}

/// Residual `value^2 - (s^4 +- 1/4)` used by property tests.
pub fn radical_residual(s: Complex64, which: Radical) -> Result<f64, QuadratureError> {
    let v = sqrt_branch(s, which)?;
    let exact = s.powi(4) + which.shift();
    Ok((v * v - exact).norm() / exact.norm().max(1.0))
}

/// Behaviour of the integrand at the start of the ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointSingularity {
    /// Integrand bounded at the start.
    Regular,
    /// Integrand `O((s - start)^{-1/2})`; removed by `s = start + dir u^2`.
    InverseSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gauss_kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7-K15 on a finite real interval of a complex-valued
/// integrand.
pub fn quad_interval<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult, QuadratureError> {
    let (v0, e0) = gauss_kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v0, error: e0 });
    let mut total = v0;
    let mut err = e0;
    loop {
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(QuadratureError::NoConvergence { best: total, error: err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(QuadratureError::NoConvergence { best: total, error: err });
        }
        let (lv, le) = gauss_kronrod(&f, worst.a, mid);
        let (rv, re) = gauss_kronrod(&f, mid, worst.b);
        total += lv + rv - worst.value;
        err += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().fold(Complex64::new(0.0, 0.0), |acc, s| acc + s.value);
    let error = heap.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, error, intervals: heap.len() })
}

/// Integral of `f` along `start + direction * [0, inf)`. The integrand
/// receives the point and its exact offset from `start`.
///
/// The ray parameter is `v = u / (1 - u)` with `u` in `[0, 1)`, and with
/// [`EndpointSingularity::InverseSqrt`] the point is `start + direction v^2`.
/// The whole ray is integrated, so no truncation tail is needed.
pub fn quad_ray<F: Fn(Complex64, Complex64) -> Complex64>(
    f: F,
    start: Complex64,
    direction: Complex64,
    singularity: EndpointSingularity,
    opts: QuadOptions,
) -> Result<QuadResult, QuadratureError> {
    let dir = direction / direction.norm();
    let mapped = |u: f64| -> Complex64 {
        let one_minus = 1.0 - u;
        let v = u / one_minus;
        let dv = 1.0 / (one_minus * one_minus);
        let (offset, jac) = match singularity {
            EndpointSingularity::Regular => (v, dv),
            EndpointSingularity::InverseSqrt => (v * v, 2.0 * v * dv),
        };
        let delta = dir * offset;
        if offset == 0.0 || !jac.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        f(start + delta, delta) * dir * jac
    };
    quad_interval(mapped, 0.0, 1.0, opts)
}

/// `B(1/2, 1/4)`.
pub fn beta_half_quarter() -> f64 {
    beta(0.5, 0.25).expect("positive arguments")
}

/// `E1 = B(1/2, 1/4) / 6`.
pub fn e1() -> f64 {
    beta_half_quarter() / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseOneConstants {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// The contour integral from `(1 - i)/2` to infinity, prefactor included.
    pub f_of_xi: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseTwoConstants {
    pub f1: f64,
    pub f2: f64,
    /// Imaginary part of the F2 expression before it was discarded.
    pub f2_imag: f64,
}

/// Tolerance on the scaled constraint, relative to `max(1, B^2)`.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Largest imaginary part of F2 accepted before discarding it.
pub const F2_IMAG_TOL: f64 = 1e-8;

// Throughout, `amp` and `slope` are the scaled initial data `A` and `B`.
fn check_constraint(amp: f64, slope: f64, expected: f64) -> Result<(), QuadratureError> {
    let residual = amp.powi(4) - slope * slope - expected;
    if residual.abs() > CONSTRAINT_TOL * (slope * slope).max(1.0) {
        return Err(QuadratureError::Constraint { expected, residual });
    }
    Ok(())
}

fn alpha1() -> Complex64 {
    Complex64::new(0.5, -0.5)
}

fn plus_radical(offset: Complex64) -> Complex64 {
    sqrt_branch_near(alpha1(), offset, Radical::Plus).unwrap_or(Complex64::new(f64::NAN, 0.0))
}

/// `(2A^2 - (B/A)^2)/8 * int_{(1-i)/2}^inf ds / ((s + B/(2A)) sqrt(s^4 + 1/4))`
/// along the ray leaving `(1 - i)/2` in `direction`.
pub fn f_of_xi_along(
    amp: f64,
    slope: f64,
    direction: Complex64,
    opts: QuadOptions,
) -> Result<Complex64, QuadratureError> {
    let pole = slope / (2.0 * amp);
    let pref = (2.0 * amp * amp - (slope / amp).powi(2)) / 8.0;
    let integral = quad_ray(
        |s, d| 1.0 / ((s + pole) * plus_radical(d)),
        alpha1(),
        direction,
        EndpointSingularity::InverseSqrt,
        opts,
    )?;
    Ok(pref * integral.value)
}

/// `E1` from its defining integral `4/(3(1+i)) int_{alpha_1}^inf ds / sqrt(4s^4 + 1)`,
/// as an independent check on the closed form [`e1`].
pub fn e1_by_quadrature() -> Result<Complex64, QuadratureError> {
    let r = quad_ray(
        |_, d| 1.0 / (2.0 * plus_radical(d)),
        alpha1(),
        Complex64::new(1.0, 0.0),
        EndpointSingularity::InverseSqrt,
        QuadOptions::default(),
    )?;
    Ok(4.0 / (3.0 * Complex64::new(1.0, 1.0)) * r.value)
}

/// `int_1^inf dt / sqrt(t^4 - 1)` by quadrature; the closed form is `B(1/2, 1/4) / 4`.
pub fn lemniscate_integral() -> Result<f64, QuadratureError> {
    // t^4 - 1 = d (d + 2) (d^2 + 2d + 2) with d = t - 1, exact near t = 1.
    let r = quad_ray(
        |_, d| 1.0 / (d * (d + 2.0) * (d * d + 2.0 * d + 2.0)).sqrt(),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        EndpointSingularity::InverseSqrt,
        QuadOptions::default(),
    )?;
    Ok(r.value.re)
}

/// Constants of the case `A^4 - B^2 = 1`.
pub fn case_one_constants(amp: f64, slope: f64) -> Result<CaseOneConstants, QuadratureError> {
    check_constraint(amp, slope, 1.0)?;
    let f = f_of_xi_along(amp, slope, Complex64::new(1.0, 0.0), QuadOptions::default())?;
    let lead = slope / (16.0 * amp) * beta(0.25, 0.5).expect("positive arguments");
    Ok(CaseOneConstants { e1: e1(), e2: lead + f.re, e3: lead + PI / 8.0 + f.im, f_of_xi: f })
}

/// Constants of the case `A^4 - B^2 = -1`. For `B < 0` the integrals are
/// those of `(-A, -B)` (they depend on `A/B` only) and the principal
/// logarithm of `B` lowers F2 by `pi/2`.
pub fn case_two_constants(amp: f64, slope: f64) -> Result<CaseTwoConstants, QuadratureError> {
    check_constraint(amp, slope, -1.0)?;
    if slope < 0.0 {
        let mut c = case_two_constants(-amp, -slope)?;
        c.f2 -= PI / 2.0;
        return Ok(c);
    }
    let opts = QuadOptions::default();
    let ratio = amp / slope;
    if ratio < 0.0 {
        // The pole -1/(2 A/B) always lies beyond 1/sqrt 2 on the F1 contour.
        return Err(QuadratureError::PoleOnContour(-1.0 / (2.0 * ratio)));
    }
    let start1 = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let start2 = Complex64::new(0.0, FRAC_1_SQRT_2);
    let radical1 = |d: Complex64| sqrt_branch_near(start1, d, Radical::Minus).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let radical2 = |d: Complex64| sqrt_branch_near(start2, d, Radical::Minus).unwrap_or(Complex64::new(f64::NAN, 0.0));

    let f1 = if ratio == 0.0 {
        0.0
    } else {
        let first = quad_ray(
            |s, d| ratio * (1.0 - amp * amp) / ((2.0 * ratio * s + 1.0) * radical1(d)),
            start1,
            Complex64::new(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            opts,
        )?;
        let second = quad_ray(
            |s, d| s * (2.0 * ratio * s + 1.0).ln() / ((s * s + 0.5) * radical1(d)),
            start1,
            Complex64::new(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            opts,
        )?;
        (0.5 * first.value - 0.5 * second.value).re
    };

    let i = Complex64::i();
    let mut f2 = 0.5 * i * slope.ln();
    if ratio != 0.0 {
        let first = quad_ray(
            |s, d| ratio * (1.0 + amp * amp) / ((2.0 * ratio * s + 1.0) * radical2(d)),
            start2,
            Complex64::new(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            opts,
        )?;
        let second = quad_ray(
            |s, d| s * (2.0 * ratio * s + 1.0).ln() / ((s * s - 0.5) * radical2(d)),
            start2,
            Complex64::new(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            opts,
        )?;
        f2 += 0.5 * i * first.value - 0.5 * i * second.value;
    }
    if f2.im.abs() > F2_IMAG_TOL {
        return Err(QuadratureError::ImaginaryResidual(f2.im));
    }
    Ok(CaseTwoConstants { f1, f2: f2.re, f2_imag: f2.im })
}

/// The symmetrised integral
/// `(2A^2 - (B/A)^2)/8 * int_{alpha_1}^inf [1/(s + B/2A) + 1/(s - B/2A)] ds / sqrt(s^4 + 1/4)`,
/// whose closed form is `-ln|A| + i pi/4`.
pub fn check_k(amp: f64, slope: f64) -> Result<Complex64, QuadratureError> {
    check_constraint(amp, slope, 1.0)?;
    let pole = slope / (2.0 * amp);
    let pref = (2.0 * amp * amp - (slope / amp).powi(2)) / 8.0;
    let integral = quad_ray(
        |s, d| (1.0 / (s + pole) + 1.0 / (s - pole)) / plus_radical(d),
        alpha1(),
        Complex64::new(1.0, 0.0),
        EndpointSingularity::InverseSqrt,
        QuadOptions::default(),
    )?;
    Ok(pref * integral.value)
}

/// `lim [int_{1/sqrt 2}^eta 4 sqrt(s^4 - 1/4) ds - (4/3) eta^3]`, whose
/// closed form is `-(sqrt 2 / 6) B(1/2, 1/4)`.
pub fn regularized_radical_integral() -> Result<f64, QuadratureError> {
    let start = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let r = quad_ray(
        // 4 (sqrt(s^4 - 1/4) - s^2) written without cancellation.
        |s, d| {
            let r = sqrt_branch_near(start, d, Radical::Minus).unwrap_or(Complex64::new(f64::NAN, 0.0));
            -1.0 / (r + s * s)
        },
        start,
        Complex64::new(1.0, 0.0),
        EndpointSingularity::InverseSqrt,
        QuadOptions::default(),
    )?;
    Ok(r.value.re - 4.0 / 3.0 * FRAC_1_SQRT_2.powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn radical_on_real_axis() {
        let v = sqrt_branch(c(10.0, 0.0), Radical::Plus).unwrap();
        assert!(v.im.abs() < 1e-12 && v.re > 0.0);
        assert_relative_eq!(v.re, (1e4f64 + 0.25).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn radical_minus_at_origin_is_frozen() {
        // The principal-log product gives +i/2 at the origin.
        let v = sqrt_branch(c(0.0, 0.0), Radical::Minus).unwrap();
        assert!((v - c(0.0, 0.5)).norm() < 1e-15, "{v}");
    }

    #[test]
    fn radical_rejects_branch_points() {
        for r in Radical::Plus.roots() {
            assert!(sqrt_branch(r, Radical::Plus).is_err());
        }
        assert!(sqrt_branch(c(FRAC_1_SQRT_2, 0.0), Radical::Minus).is_err());
    }

    proptest! {
        #[test]
        fn radical_squares_back(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            for which in [Radical::Plus, Radical::Minus] {
                if let Ok(res) = radical_residual(c(re, im), which) {
                    prop_assert!(res < 1e-13);
                }
            }
        }

        #[test]
        fn radical_grows_like_s_squared(re in 3.0f64..50.0, im in -2.0f64..2.0) {
            let s = c(re, im);
            let v = sqrt_branch(s, Radical::Plus).unwrap();
            prop_assert!((v / (s * s) - 1.0).norm() < 0.05);
        }
    }

    #[test]
    fn quad_exponential() {
        let r =
            quad_ray(|s, _| (-s).exp(), c(0.0, 0.0), c(1.0, 0.0), EndpointSingularity::Regular, QuadOptions::default())
                .unwrap();
        assert!((r.value - 1.0).norm() < 1e-13);
    }

    #[test]
    fn quad_lemniscate_integral() {
        let r = quad_ray(
            |_, d| 1.0 / (d * (d + 2.0) * (d * d + 2.0 * d + 2.0)).sqrt(),
            c(1.0, 0.0),
            c(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value.re, 0.25 * beta_half_quarter(), max_relative = 1e-11);
    }

    #[test]
    fn quad_from_alpha1() {
        let r = quad_ray(
            |_, d| 1.0 / (2.0 * plus_radical(d)),
            alpha1(),
            c(1.0, 0.0),
            EndpointSingularity::InverseSqrt,
            QuadOptions::default(),
        )
        .unwrap();
        let expect = c(1.0, 1.0) / 8.0 * beta_half_quarter();
        assert!((r.value - expect).norm() < 1e-11, "{} vs {expect}", r.value);
    }

    #[test]
    fn quad_error_estimate_bounds_refined_value() {
        let loose = QuadOptions { abs_tol: 1e-6, rel_tol: 1e-6, max_intervals: 4000 };
        let tight = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-14, max_intervals: 8000 };
        let f = |s: Complex64, d: Complex64| 1.0 / ((s + 0.3) * plus_radical(d));
        let a = quad_ray(f, alpha1(), c(1.0, 0.0), EndpointSingularity::InverseSqrt, loose).unwrap();
        let b = quad_ray(f, alpha1(), c(1.0, 0.0), EndpointSingularity::InverseSqrt, tight).unwrap();
        assert!((a.value - b.value).norm() <= a.error);
    }

    #[test]
    fn quad_budget_exhaustion_reports_best() {
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 0.0, max_intervals: 3 };
        let err = quad_interval(|x| c(x.sin() / x.max(1e-300).sqrt().sqrt(), 0.0), 0.0, 50.0, opts).unwrap_err();
        assert!(matches!(err, QuadratureError::NoConvergence { .. }));
    }

    #[test]
    fn e_constants_special_cases() {
        let one = case_one_constants(1.0, 0.0).unwrap();
        assert_relative_eq!(one.e1, 0.874_019_184_764_04, max_relative = 1e-12);
        assert!(one.e2.abs() < 1e-10);
        assert!((one.e3 - PI / 4.0).abs() < 1e-10);
        let neg = case_one_constants(-1.0, 0.0).unwrap();
        assert!(neg.e2.abs() < 1e-10 && (neg.e3 - PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn e_constants_limit_from_small_b() {
        for b in [1e-6, -1e-6] {
            let a = (1.0f64 + b * b).powf(0.25);
            let k = case_one_constants(a, b).unwrap();
            assert!(k.e2.abs() < 1e-5 && (k.e3 - PI / 4.0).abs() < 1e-5);
        }
    }

    #[test]
    fn f_of_xi_path_independent() {
        for (a, b) in [(1.0f64, 0.0f64), (2f64.sqrt(), 3f64.sqrt()), (1.2, -(1.2f64.powi(4) - 1.0).sqrt())] {
            let h = f_of_xi_along(a, b, c(1.0, 0.0), QuadOptions::default()).unwrap();
            let t = f_of_xi_along(a, b, Complex64::from_polar(1.0, PI / 6.0), QuadOptions::default()).unwrap();
            assert!((h - t).norm() < 1e-8, "{h} vs {t}");
        }
    }

    #[test]
    fn case_one_constraint_enforced() {
        assert!(matches!(case_one_constants(1.0, 0.5), Err(QuadratureError::Constraint { .. })));
    }

    #[test]
    fn f_constants_special_cases() {
        let k = case_two_constants(0.0, 1.0).unwrap();
        assert!(k.f1.abs() < 1e-12 && k.f2.abs() < 1e-12);
        let k = case_two_constants(0.0, -1.0).unwrap();
        assert!((k.f2 + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn f_constants_regression() {
        // Frozen from an independent arbitrary-precision ray quadrature.
        let k = case_two_constants(1.0, 2f64.sqrt()).unwrap();
        assert!((k.f1 + 0.482_228).abs() < 1e-6, "{}", k.f1);
        assert!((k.f2 + 0.129_884).abs() < 1e-6, "{}", k.f2);
        assert!(k.f2_imag.abs() < 1e-8);
    }

    #[test]
    fn f_constants_reject_opposite_signs() {
        let err = case_two_constants(1.0, -(2f64.sqrt())).unwrap_err();
        assert!(matches!(err, QuadratureError::PoleOnContour(p) if p >= FRAC_1_SQRT_2));
    }

    #[test]
    fn k_identity() {
        let k = check_k(1.0, 0.0).unwrap();
        assert!((k - c(0.0, PI / 4.0)).norm() < 1e-10);
        let k = check_k(2f64.sqrt(), 3f64.sqrt()).unwrap();
        assert!((k - c(-(2f64.sqrt().ln()), PI / 4.0)).norm() < 1e-9);
        let a = 1.7f64;
        let b = (a.powi(4) - 1.0).sqrt();
        let (p, m) = (check_k(a, b).unwrap(), check_k(a, -b).unwrap());
        assert!((p - m).norm() < 1e-12);
    }

    #[test]
    fn regularized_integral_closed_form() {
        let v = regularized_radical_integral().unwrap();
        assert!((v + 2f64.sqrt() / 6.0 * beta_half_quarter()).abs() < 1e-10);
    }
}
