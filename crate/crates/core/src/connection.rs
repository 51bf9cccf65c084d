//! Scaling of the initial data, predicted Stokes multipliers, predicted
//! asymptotic families and the separatrix curves in the `(a, b)` plane.
//!
//! Predictions are leading order: every `o(1)` correction is dropped, so
//! comparisons against numerics are trend checks, never equalities.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::FamilyParams;
use crate::quadrature::{self, CaseOneConstants, CaseTwoConstants, QuadratureError};
use crate::specfun::{gamma, ln_gamma};

/// Version tag carried by every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectionError {
    #[error("degenerate scaling: a^4 = b^2 at (a, b) = ({0}, {1})")]
    Degenerate(f64, f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("no root of the curve-{n} phase equation for xi in [{lo}, {hi}]")]
    Range { n: u32, lo: f64, hi: f64 },
    #[error("curve index must be positive")]
    ZeroIndex,
    #[error("inconsistent prediction: {0}")]
    Inconsistent(String),
}

/// Which of the two regimes `A^4 - B^2 = +1` or `-1` the data fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    One,
    Two,
}

impl Case {
    fn constraint(self) -> f64 {
        match self {
            Case::One => 1.0,
            Case::Two => -1.0,
        }
    }
}

/// Initial data rewritten as `a = xi^{1/3} A`, `b = xi^{2/3} B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledData {
    pub xi: f64,
    #[serde(rename = "A")]
    pub amp: f64,
    #[serde(rename = "B")]
    pub slope: f64,
    pub case: Case,
}

impl ScaledData {
    fn from_xi(xi: f64, amp: f64, slope: f64, case: Case) -> Self {
        Self { xi, amp, slope, case }
    }

    /// The original `(a, b)`.
    pub fn initial(&self) -> (f64, f64) {
        (self.xi.cbrt() * self.amp, self.xi.powf(2.0 / 3.0) * self.slope)
    }
}

pub fn scale(a: f64, b: f64) -> Result<ScaledData, ConnectionError> {
    let gap = a.powi(4) - b * b;
    if gap == 0.0 || !gap.is_finite() {
        return Err(ConnectionError::Degenerate(a, b));
    }
    let m = gap.abs();
    let case = if gap > 0.0 { Case::One } else { Case::Two };
    Ok(ScaledData { xi: m.powf(0.75), amp: a * m.powf(-0.25), slope: b / m.sqrt(), case })
}

/// The contour constants of either case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Constants {
    One(CaseOneConstants),
    Two(CaseTwoConstants),
}

pub fn constants(sd: &ScaledData) -> Result<Constants, ConnectionError> {
    Ok(match sd.case {
        Case::One => Constants::One(quadrature::case_one_constants(sd.amp, sd.slope)?),
        Case::Two => Constants::Two(quadrature::case_two_constants(sd.amp, sd.slope)?),
    })
}

/// Leading-order Stokes multipliers at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedStokes {
    pub s1: Complex64,
    pub s2: Complex64,
    pub s3: Complex64,
    pub case: Case,
    pub constants: Constants,
}

/// The oscillation phase whose level sets are the curves: `2 xi E1 - 2 E3`
/// in case one, `2 sqrt2 xi E1 + 2 F2` in case two.
pub fn curve_phase(sd: &ScaledData, c: &Constants) -> f64 {
    let e1 = quadrature::e1();
    match c {
        Constants::One(k) => 2.0 * sd.xi * e1 - 2.0 * k.e3,
        Constants::Two(k) => 2.0 * SQRT_2 * sd.xi * e1 + 2.0 * k.f2,
    }
}

/// Case one as stated. In case two both multipliers carry an extra overall
/// minus sign: `s2 = -B e^{2 sqrt2 E1 xi - 2 F1}`, `s1 = -e^{-i(...)}`. Only
/// with that sign is `s1 = i eps` on the curves with `eps = sgn((-1)^{n-1} b)`,
/// and only then do the predictions agree with the Lax-pair numerics.
pub fn predict_stokes(sd: &ScaledData) -> Result<PredictedStokes, ConnectionError> {
    let c = constants(sd)?;
    let e1 = quadrature::e1();
    let i = Complex64::i();
    let phase = curve_phase(sd, &c);
    let (s1, s2) = match c {
        Constants::One(k) => {
            let growth = -2.0 * sd.xi * e1 + 2.0 * k.e2;
            let s2 = -2.0 * sd.amp * growth.exp() * phase.cos();
            let s1 = Complex64::new(-growth, phase).exp() / sd.amp;
            (s1, Complex64::new(s2, 0.0))
        }
        Constants::Two(k) => {
            let s2 = -sd.slope * (2.0 * SQRT_2 * e1 * sd.xi - 2.0 * k.f1).exp();
            let s1 = -(-i * phase).exp();
            (s1, Complex64::new(s2, 0.0))
        }
    };
    Ok(PredictedStokes { s1, s2, s3: s1.conj(), case: sd.case, constants: c })
}

/// Which half-axis a family describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Negative,
    Positive,
}

/// Below this `|Re s1 / s2|` (negative side) or `|s2|` relative to `|s1|`
/// (positive side) the data count as lying on a curve.
pub const ON_CURVE_TOL: f64 = 1e-10;

fn arg_gamma(z: Complex64) -> f64 {
    ln_gamma(z).map(|v| v.im).unwrap_or(0.0)
}

/// Asymptotic parameters implied by Stokes multipliers `(s1, s2)` of real
/// data (`s3 = conj s1`). `1 - |s1|^2` is taken from the constraint as
/// `2 Re s1 / s2`, which stays exact when `|s1| = 1` at leading order.
pub fn family_from_stokes(side: Side, s1: Complex64, s2: f64) -> FamilyParams {
    let s3 = s1.conj();
    match side {
        Side::Positive => {
            if s2.abs() <= ON_CURVE_TOL * s1.norm().max(1.0) {
                return FamilyParams::P2 { kappa: -s1.im };
            }
            let gamma_p = s2.abs().ln() / PI;
            let chi = 7.0 * gamma_p / 4.0 * 2f64.ln()
                - 0.5 * arg_gamma(Complex64::new(0.5, gamma_p))
                - 0.5 * (1.0 + s2 * s3).arg()
                + PI / 2.0;
            FamilyParams::P1 { sign: s2.signum(), gamma: gamma_p, chi: canonical_mod(chi, PI) }
        }
        Side::Negative => {
            let gap = if s2 != 0.0 { 2.0 * s1.re / s2 } else { 1.0 - s1.norm_sqr() };
            if gap.abs() <= ON_CURVE_TOL {
                return FamilyParams::N2 { sign: s1.im.signum(), tail: -s2 / (2f64.powf(1.75) * PI.sqrt()) };
            }
            if gap > 0.0 {
                let d2 = -gap.ln() / PI;
                // The extra -pi/4 matches the linear (Airy) limit and the fitted phases.
                let phi = -1.5 * d2 * 2f64.ln() + arg_gamma(Complex64::new(0.0, 0.5 * d2)) - s1.arg() - PI / 4.0;
                FamilyParams::N1 { amplitude: d2.max(0.0).sqrt(), phase: canonical_mod(phi, 2.0 * PI) }
            } else {
                // No -1 shift here: with it the pole train drifts by 3/2 ln(-t).
                let beta = (-gap).ln() / (2.0 * PI);
                let varphi = 3.0 * beta * 2f64.ln() - arg_gamma(Complex64::new(0.5, beta)) - s1.arg();
                FamilyParams::N3 { beta, phase: canonical_mod(varphi, 2.0 * PI) }
            }
        }
    }
}

/// Representative of `x` modulo `period` in `(-period/2, period/2]`.
pub fn canonical_mod(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).round();
    if r <= -period / 2.0 {
        r + period
    } else {
        r
    }
}

/// Predicted family on the half-axis the case speaks about: `t -> +inf` in
/// case one, `t -> -inf` in case two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedFamily {
    pub side: Side,
    pub params: FamilyParams,
    /// Index `n` of the last curve crossed (0 below the first one).
    pub curve_index: u32,
}

pub fn predict_parameters(sd: &ScaledData) -> Result<PredictedFamily, ConnectionError> {
    let ps = predict_stokes(sd)?;
    let side = match sd.case {
        Case::One => Side::Positive,
        Case::Two => Side::Negative,
    };
    let params = family_from_stokes(side, ps.s1, ps.s2.re);
    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(ConnectionError::Inconsistent(what.to_string()))
        }
    };
    match params {
        FamilyParams::N1 { amplitude, .. } => check(amplitude.is_finite(), "N1 amplitude")?,
        FamilyParams::N3 { beta, .. } => check(beta.is_finite(), "N3 beta")?,
        FamilyParams::P1 { gamma, .. } => check(gamma.is_finite(), "P1 gamma")?,
        _ => {}
    }
    Ok(PredictedFamily { side, params, curve_index: curve_index(sd, &ps.constants) })
}

/// Number of curves `Gamma_n` (case one) or `Sigma_n` (case two) lying below
/// the data along its own level set of the scaled constants.
pub fn curve_index(sd: &ScaledData, c: &Constants) -> u32 {
    let phase = curve_phase(sd, c);
    let offset = match sd.case {
        Case::One => -PI / 2.0,
        Case::Two => sd.slope.signum() * PI / 2.0 - PI,
    };
    ((phase - offset) / PI).floor().max(0.0) as u32
}

/// Constraint along which a curve point is sought.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CurveConstraint {
    FixedA(f64),
    FixedB(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub xi: f64,
    pub constraint: CurveConstraint,
    /// Phase-equation residual at the returned point.
    pub residual: f64,
}

const XI_MIN: f64 = 0.5;
const XI_MAX: f64 = 1e3;

/// Scaled data on the constraint at a given `xi`, if the constraint admits it.
fn on_constraint(case: Case, constraint: CurveConstraint, xi: f64) -> Option<ScaledData> {
    let sign = case.constraint();
    match constraint {
        CurveConstraint::FixedB(v) => {
            let slope = v / xi.powf(2.0 / 3.0);
            let q = slope * slope + sign;
            (q >= 0.0).then(|| ScaledData::from_xi(xi, q.sqrt().sqrt(), slope, case))
        }
        CurveConstraint::FixedA(v) => {
            let amp = v / xi.cbrt();
            let q = amp.powi(4) - sign;
            (q >= 0.0).then(|| ScaledData::from_xi(xi, amp, q.sqrt(), case))
        }
    }
}

fn phase_target(case: Case, n: u32, slope: f64) -> f64 {
    let n = n as f64;
    match case {
        Case::One => n * PI - PI / 2.0,
        Case::Two => (n - 1.0) * PI + slope.signum() * PI / 2.0,
    }
}

/// Solves the curve-`n` phase equation along `constraint` by bracketing
/// in `xi` on [0.5, 1e3] followed by bisection.
pub fn locate_curve(case: Case, n: u32, constraint: CurveConstraint) -> Result<CurvePoint, ConnectionError> {
    if n == 0 {
        return Err(ConnectionError::ZeroIndex);
    }
    let residual = |xi: f64| -> Result<Option<(f64, ScaledData)>, ConnectionError> {
        let Some(sd) = on_constraint(case, constraint, xi) else { return Ok(None) };
        let c = constants(&sd)?;
        Ok(Some((curve_phase(&sd, &c) - phase_target(case, n, sd.slope), sd)))
    };
    let hi_limit = match (case, constraint) {
        (Case::One, CurveConstraint::FixedA(v)) => XI_MAX.min(v.abs().powi(3)),
        (Case::Two, CurveConstraint::FixedB(v)) => XI_MAX.min(v.abs().powf(1.5)),
        _ => XI_MAX,
    };
    let range_err = ConnectionError::Range { n, lo: XI_MIN, hi: hi_limit };
    // March outward until the residual changes sign.
    let mut lo = XI_MIN;
    let mut f_lo = match residual(lo)? {
        Some((f, _)) => f,
        None => return Err(range_err),
    };
    let mut hi = lo;
    let mut bracket = None;
    while hi < hi_limit {
        hi = (hi * 1.05 + 0.05).min(hi_limit);
        let Some((f_hi, _)) = residual(hi)? else { break };
        if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, f_lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut lo, mut f_lo, mut hi) = bracket.ok_or(range_err)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (f_mid, _) = residual(mid)?.expect("interior of a feasible bracket");
        if f_mid == 0.0 || (f_mid.signum() == f_lo.signum()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let xi = 0.5 * (lo + hi);
    let (res, sd) = residual(xi)?.expect("interior of a feasible bracket");
    let (a, b) = sd.initial();
    Ok(CurvePoint { n, a, b, xi, constraint, residual: res })
}

/// Coefficient `3 sqrt(2 pi) Gamma(3/4) / Gamma(1/4)` of the literature
/// separatrix asymptotics.
pub fn bender_coefficient() -> f64 {
    3.0 * (2.0 * PI).sqrt() * gamma(0.75).expect("regular") / gamma(0.25).expect("regular")
}

/// Coefficient `pi / (2 sqrt2 E1)` of the case-two closed form.
pub fn corollary_coefficient() -> f64 {
    PI / (2.0 * SQRT_2 * quadrature::e1())
}

/// The two closed-form predictions of the `n`-th N2 slope at `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopePrediction {
    pub bender: f64,
    pub corollary: f64,
}

pub fn predict_bn(n: u32) -> SlopePrediction {
    let n = n as f64;
    SlopePrediction {
        bender: (bender_coefficient() * n).powf(2.0 / 3.0),
        corollary: (corollary_coefficient() * (n - 0.5)).powf(2.0 / 3.0),
    }
}

/// Symmetry applied by [`symmetry_reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Identity,
    Negate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reduced {
    pub a: f64,
    pub b: f64,
    pub transform: Symmetry,
    /// `F2(a, b) - F2(a', b')` for the original and reduced data.
    pub f2_shift: f64,
}

/// Maps `b < 0` to `(-a, -b)`. The principal logarithm in F2 makes
/// `F2(a, b) = F2(-a, -b) - pi/2` for `b < 0`, which leaves the curve
/// functions `g_n` invariant.
pub fn symmetry_reduce(a: f64, b: f64) -> Reduced {
    if b < 0.0 {
        Reduced { a: -a, b: -b, transform: Symmetry::Negate, f2_shift: -PI / 2.0 }
    } else {
        Reduced { a, b, transform: Symmetry::Identity, f2_shift: 0.0 }
    }
}

/// Right-hand side of the curve equation: `f_n` in case one, `g_n` in
/// case two, evaluated with the constants of the given data.
pub fn curve_function(sd: &ScaledData, c: &Constants, n: u32) -> f64 {
    let e1 = quadrature::e1();
    let n = n as f64;
    match c {
        Constants::One(k) => ((n * PI - PI / 2.0 + 2.0 * k.e3) / (2.0 * e1)).powf(4.0 / 3.0),
        Constants::Two(k) => {
            ((n * PI - PI + sd.slope.signum() * PI / 2.0 - 2.0 * k.f2) / (2.0 * SQRT_2 * e1)).powf(4.0 / 3.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearestCurves {
    /// Last curve crossed (0 if none).
    pub below: u32,
    pub above: u32,
}

/// Everything the connection formulas say about one initial datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionReport {
    pub schema_version: u32,
    pub input: (f64, f64),
    pub scaled: ScaledData,
    pub predicted_stokes: PredictedStokes,
    pub predicted_class: PredictedFamily,
    pub nearest_curves: NearestCurves,
    /// Set when `xi < 1`, below the asymptotic regime.
    pub warning: Option<String>,
}

pub fn connection_report(a: f64, b: f64) -> Result<ConnectionReport, ConnectionError> {
    let scaled = scale(a, b)?;
    let predicted_stokes = predict_stokes(&scaled)?;
    let predicted_class = predict_parameters(&scaled)?;
    let below = predicted_class.curve_index;
    let warning = (scaled.xi < 1.0).then(|| format!("xi = {:.4} is below the asymptotic regime", scaled.xi));
    Ok(ConnectionReport {
        schema_version: SCHEMA_VERSION,
        input: (a, b),
        scaled,
        predicted_stokes,
        predicted_class,
        nearest_curves: NearestCurves { below, above: below + 1 },
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn scale_examples() {
        let s = scale(1.0, 0.0).unwrap();
        assert_eq!((s.xi, s.amp, s.slope, s.case), (1.0, 1.0, 0.0, Case::One));
        let s = scale(0.0, 1.0).unwrap();
        assert_eq!((s.xi, s.amp, s.slope, s.case), (1.0, 0.0, 1.0, Case::Two));
        assert!(matches!(scale(1.0, 1.0), Err(ConnectionError::Degenerate(..))));
    }

    proptest! {
        #[test]
        fn scale_round_trip(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            prop_assume!((a.powi(4) - b * b).abs() > 1e-3);
            let s = scale(a, b).unwrap();
            let (ra, rb) = s.initial();
            prop_assert!((ra - a).abs() < 1e-12 * (1.0 + a.abs()));
            prop_assert!((rb - b).abs() < 1e-12 * (1.0 + b.abs()));
            let gap = s.amp.powi(4) - s.slope.powi(2);
            prop_assert!((gap - s.case.constraint()).abs() < 1e-12 * (1.0 + s.slope * s.slope));
            prop_assert!((s.xi.powf(4.0 / 3.0) - (a.powi(4) - b * b).abs()).abs() < 1e-12 * (1.0 + s.xi.powf(4.0 / 3.0)));
        }

        #[test]
        fn prediction_is_real_symmetric(a in 1.1f64..2.5, b in -1.0f64..1.0) {
            let p = predict_stokes(&scale(a, b).unwrap()).unwrap();
            prop_assert_eq!(p.s3, p.s1.conj());
            prop_assert_eq!(p.s2.im, 0.0);
            // 2 Re s1 + s2 |s1|^2 = 0 holds exactly at leading order in case one.
            let defect = 2.0 * p.s1.re + p.s2.re * p.s1.norm_sqr();
            prop_assert!(defect.abs() < 1e-12 * p.s1.norm_sqr().max(1.0));
        }
    }

    #[test]
    fn case_one_sign_rule() {
        for a in [1.2, 1.5, 1.9, 2.4] {
            let sd = scale(a, 0.3).unwrap();
            let p = predict_stokes(&sd).unwrap();
            let Constants::One(c) = p.constants else { panic!() };
            let cos = (2.0 * sd.xi * c.e1 - 2.0 * c.e3).cos();
            assert_eq!(p.s2.re.signum(), (-sd.amp * cos).signum());
        }
    }

    #[test]
    fn case_two_unit_modulus() {
        for b in [1.0, 1.7, 3.0] {
            let p = predict_stokes(&scale(0.0, b).unwrap()).unwrap();
            assert_abs_diff_eq!(p.s1.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn case_two_family_follows_cosine_sign() {
        for (a, b) in [(0.0, 1.0), (0.0, 2.0), (0.0, 2.6), (0.5, 2.0), (-0.3, -1.7)] {
            let sd = scale(a, b).unwrap();
            let c = constants(&sd).unwrap();
            let product = sd.slope * curve_phase(&sd, &c).cos();
            let fam = predict_parameters(&sd).unwrap().params;
            if product > 0.0 {
                assert!(matches!(fam, FamilyParams::N1 { .. }), "{a} {b}");
            } else {
                assert!(matches!(fam, FamilyParams::N3 { .. }), "{a} {b}");
            }
        }
    }

    #[test]
    fn corollary_closed_forms() {
        for n in 1..=4 {
            let p = locate_curve(Case::One, n, CurveConstraint::FixedB(0.0)).unwrap();
            let xi = n as f64 * PI / (2.0 * quadrature::e1());
            assert_abs_diff_eq!(p.xi, xi, epsilon = 1e-9);
            assert_abs_diff_eq!(p.a, xi.cbrt(), epsilon = 1e-9);
            assert!(p.residual.abs() < 1e-10);

            let p = locate_curve(Case::Two, n, CurveConstraint::FixedA(0.0)).unwrap();
            let xi = ((n as f64 - 1.0) * PI + PI / 2.0) / (2.0 * SQRT_2 * quadrature::e1());
            assert_abs_diff_eq!(p.xi, xi, epsilon = 1e-9);
            assert_abs_diff_eq!(p.b, xi.powf(2.0 / 3.0), epsilon = 1e-9);
            assert_abs_diff_eq!(p.b, predict_bn(n).corollary, epsilon = 1e-9);
        }
    }

    #[test]
    fn curves_increase_and_cancel_s2() {
        let mut last = 0.0;
        for n in 1..=5 {
            let p = locate_curve(Case::One, n, CurveConstraint::FixedB(0.7)).unwrap();
            assert!(p.xi > last);
            last = p.xi;
            let sd = scale(p.a, p.b).unwrap();
            let Constants::One(c) = constants(&sd).unwrap() else { panic!() };
            let s2 = predict_stokes(&sd).unwrap().s2.re;
            assert!(s2.abs() < 1e-9 * (-2.0 * sd.xi * c.e1 + 2.0 * c.e2).exp());
        }
    }

    #[test]
    fn fixed_a_case_one_and_fixed_b_case_two() {
        let p = locate_curve(Case::One, 1, CurveConstraint::FixedA(2.0)).unwrap();
        assert!(p.a == 2.0 || (p.a - 2.0).abs() < 1e-12);
        assert!(p.residual.abs() < 1e-10);
        let p = locate_curve(Case::Two, 2, CurveConstraint::FixedB(3.0)).unwrap();
        assert!((p.b - 3.0).abs() < 1e-12 && p.residual.abs() < 1e-10);
        assert!(locate_curve(Case::One, 0, CurveConstraint::FixedB(0.0)).is_err());
    }

    #[test]
    fn interlacing_along_fixed_b() {
        let g: Vec<_> = (1..=3).map(|n| locate_curve(Case::One, n, CurveConstraint::FixedB(0.0)).unwrap()).collect();
        let mut signs = Vec::new();
        for w in g.windows(2) {
            let mut seen = Vec::new();
            for f in [0.2, 0.5, 0.8] {
                let a = w[0].a + f * (w[1].a - w[0].a);
                seen.push(predict_stokes(&scale(a, 0.0).unwrap()).unwrap().s2.re.signum());
            }
            assert!(seen.iter().all(|&s| s == seen[0]));
            signs.push(seen[0]);
        }
        assert_eq!(signs[0], -signs[1]);
        let sd = scale(0.5 * (g[0].a + g[1].a), 0.0).unwrap();
        assert_eq!(curve_index(&sd, &constants(&sd).unwrap()), 1);
    }

    #[test]
    fn kappa_sign_on_curves() {
        for n in 1..=3 {
            let p = locate_curve(Case::One, n, CurveConstraint::FixedB(0.4)).unwrap();
            let ps = predict_stokes(&scale(p.a, p.b).unwrap()).unwrap();
            let kappa = -ps.s1.im;
            assert_eq!(kappa.signum(), (-1f64).powi(n as i32) * p.a.signum());
        }
    }

    #[test]
    fn n2_sign_rule_on_sigma_curves() {
        for n in 1..=4 {
            for v in [0.0, 0.6] {
                let p = locate_curve(Case::Two, n, CurveConstraint::FixedA(v)).unwrap();
                let ps = predict_stokes(&scale(p.a, p.b).unwrap()).unwrap();
                let eps = ps.s1.im.signum();
                assert_eq!(eps, ((-1f64).powi(n as i32 - 1) * p.b).signum(), "n {n} v {v}");
                assert!(ps.s1.re.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bn_coefficients() {
        assert_abs_diff_eq!(bender_coefficient(), 2.5416, epsilon = 1e-4);
        assert_abs_diff_eq!(corollary_coefficient(), 1.2709, epsilon = 1e-4);
        let ratio = bender_coefficient() / corollary_coefficient();
        assert!((ratio - 2.0).abs() < 0.01);
    }

    #[test]
    fn symmetry_reduction() {
        let r = symmetry_reduce(1.0, -2.0);
        assert_eq!((r.a, r.b, r.transform), (-1.0, 2.0, Symmetry::Negate));
        assert_abs_diff_eq!(r.f2_shift, -PI / 2.0);
        let r = symmetry_reduce(1.0, 2.0);
        assert_eq!((r.a, r.b, r.transform, r.f2_shift), (1.0, 2.0, Symmetry::Identity, 0.0));
        for (a, b) in [(0.0, 1.5), (0.4, 2.0), (0.2, 1.3)] {
            let plus = scale(a, b).unwrap();
            let minus = scale(-a, -b).unwrap();
            let (cp, cm) = (constants(&plus).unwrap(), constants(&minus).unwrap());
            let (Constants::Two(kp), Constants::Two(km)) = (cp, cm) else { panic!() };
            assert_abs_diff_eq!(km.f2 - kp.f2, symmetry_reduce(-a, -b).f2_shift, epsilon = 1e-10);
            for n in 1..=3 {
                assert_abs_diff_eq!(curve_function(&plus, &cp, n), curve_function(&minus, &cm, n), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn report_serializes() {
        let r = connection_report(0.0, 1.0).unwrap();
        assert_eq!(r.scaled.case, Case::Two);
        let json = serde_json::to_string(&r).unwrap();
        let back: ConnectionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn canonical_mod_range() {
        assert_abs_diff_eq!(canonical_mod(1.0 + 2.0 * PI, 2.0 * PI), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(canonical_mod(-PI, 2.0 * PI), PI);
    }
}
