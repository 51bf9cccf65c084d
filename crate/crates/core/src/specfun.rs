//! Gamma, beta and Airy functions.
//!
//! Real Airy values come from a table of nodes every half unit on [-12, 12]
//! plus one local Taylor expansion of `y'' = x y` from the nearest node.
//! Nodes themselves are produced by stepping the same expansion in the
//! numerically stable direction: forward from the origin for `Bi` and for
//! the oscillatory side, backward from `x = 12` (seeded by the asymptotic
//! series) for the recessive `Ai` on `x > 0`. Outside [-12, 12] the
//! asymptotic expansions are used directly; at that distance optimal
//! truncation is far below double precision.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("gamma function pole at {0}")]
    GammaPole(f64),
    #[error("beta function needs positive arguments, got ({0}, {1})")]
    BetaDomain(f64, f64),
    #[error("arg z = {arg:.6} is outside the {which:?} sector {sector:?}")]
    OutsideSector { arg: f64, which: AiryKind, sector: AirySector },
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Below this real part the upward recurrence would need too many terms and
/// reflection is used instead.
const RECURRENCE_FLOOR: f64 = -40.0;

fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Lanczos log-gamma for `Re z >= 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Complex log-gamma on the standard branch: continuous off the negative
/// real axis and real for positive real arguments.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecfunError> {
    if is_gamma_pole(z) {
        return Err(SpecfunError::GammaPole(z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    if z.re >= RECURRENCE_FLOOR {
        // lnG(z) = lnG(z+n) - sum ln(z+k); principal logs keep the branch cut
        // on the negative axis.
        let n = (0.5 - z.re).ceil() as usize;
        let mut acc = ln_gamma_right(z + n as f64);
        for k in 0..n {
            acc -= (z + k as f64).ln();
        }
        return Ok(acc);
    }
    // Far left half-plane: reflection, imaginary part reduced to (-pi, pi].
    let s = (z * PI).sin();
    let mut v = Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z);
    v.im -= 2.0 * PI * ((v.im + PI) / (2.0 * PI)).floor();
    if v.im <= -PI {
        v.im += 2.0 * PI;
    }
    Ok(v)
}

/// Real log-gamma, `ln |Gamma(x)|`.
pub fn ln_gamma_real(x: f64) -> Result<f64, SpecfunError> {
    if x <= 0.0 && x == x.round() {
        return Err(SpecfunError::GammaPole(x));
    }
    if x >= 0.5 {
        Ok(ln_gamma_right(Complex64::new(x, 0.0)).re)
    } else {
        let s = (PI * x).sin().abs();
        Ok(PI.ln() - s.ln() - ln_gamma_right(Complex64::new(1.0 - x, 0.0)).re)
    }
}

/// Gamma function of a real argument.
pub fn gamma(x: f64) -> Result<f64, SpecfunError> {
    let mag = ln_gamma_real(x)?.exp();
    let negative = x < 0.0 && (x.floor() as i64).rem_euclid(2) == 1;
    Ok(if negative { -mag } else { mag })
}

/// Euler beta function. The sum `lnG(x) + lnG(y)` is formed before the
/// subtraction so swapping the arguments gives a bitwise identical result.
pub fn beta(x: f64, y: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0 && y > 0.0) {
        return Err(SpecfunError::BetaDomain(x, y));
    }
    let num = ln_gamma_real(x)? + ln_gamma_real(y)?;
    Ok((num - ln_gamma_real(x + y)?).exp())
}

/// Values of Ai, Ai', Bi, Bi' at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

impl AiryValues {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Ai(0) = 3^{-2/3} / Gamma(2/3).
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -3^{-1/3} / Gamma(1/3).
pub const AI0_PRIME: f64 = -0.258_819_403_792_806_8;

/// Edge of the node table; beyond it the asymptotic series take over.
pub const AIRY_TABLE_EDGE: f64 = 12.0;
const NODE_SPACING: f64 = 0.5;
const NODE_COUNT: usize = (2.0 * AIRY_TABLE_EDGE / NODE_SPACING) as usize + 1;
const INTERNAL_STEP: f64 = 0.125;

/// Advances a solution of `y'' = x y` from `x0` by `h` with a Taylor series
/// summed to convergence.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // c_{k+2} (k+2)(k+1) = x0 c_k + c_{k-1}; track h^k c_k directly.
    let (mut cm1, mut c0, mut c1) = (0.0, y, yp * h);
    let mut val = c0 + c1;
    let mut der = c1;
    let h2 = h * h;
    let h3 = h2 * h;
    let mut k = 0usize;
    loop {
        let next = (x0 * h2 * c0 + h3 * cm1) / (((k + 2) * (k + 1)) as f64);
        val += next;
        der += (k + 2) as f64 * next;
        let small = next.abs() <= 1e-18 * val.abs().max(der.abs()).max(1e-300);
        cm1 = c0;
        c0 = c1;
        c1 = next;
        k += 1;
        if (small && c0.abs() <= 1e-18 * val.abs().max(1e-300)) || k > 200 {
            break;
        }
    }
    (val, if h == 0.0 { yp } else { der / h })
}

fn walk(mut x: f64, mut y: f64, mut yp: f64, target: f64) -> (f64, f64) {
    while (target - x).abs() > 1e-15 {
        let h = (target - x).clamp(-INTERNAL_STEP, INTERNAL_STEP);
        let (ny, nyp) = taylor_step(x, y, yp, h);
        x += h;
        y = ny;
        yp = nyp;
    }
    (y, yp)
}

fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
    }
    u
}

fn v_from_u(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, &uk)| if k == 0 { 1.0 } else { -uk * (6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) })
        .collect()
}

/// Sums `sum_k sign^k c_k zeta^{-k}` stopping at the smallest term.
fn optimal_series(c: &[f64], zeta: Complex64, sign: f64) -> Complex64 {
    let inv = 1.0 / zeta;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sgn = 1.0;
    let mut last = f64::INFINITY;
    for &ck in c {
        let term = pow * (sgn * ck);
        let mag = term.norm();
        if mag > last {
            break;
        }
        sum += term;
        last = mag;
        pow *= inv;
        sgn *= sign;
    }
    sum
}

const REAL_ASYMPTOTIC_TERMS: usize = 40;

fn real_asymptotic(x: f64) -> AiryValues {
    let u = u_coefficients(REAL_ASYMPTOTIC_TERMS);
    let v = v_from_u(&u);
    let sqrt_pi = PI.sqrt();
    if x > 0.0 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let z = Complex64::new(zeta, 0.0);
        let q = x.powf(0.25);
        let em = (-zeta).exp();
        let ep = zeta.exp();
        AiryValues {
            ai: em / (2.0 * sqrt_pi * q) * optimal_series(&u, z, -1.0).re,
            ai_prime: -q * em / (2.0 * sqrt_pi) * optimal_series(&v, z, -1.0).re,
            bi: ep / (sqrt_pi * q) * optimal_series(&u, z, 1.0).re,
            bi_prime: q * ep / sqrt_pi * optimal_series(&v, z, 1.0).re,
        }
    } else {
        let y = -x;
        let zeta = 2.0 / 3.0 * y.powf(1.5);
        let q = y.powf(0.25);
        let (even_u, odd_u) = split_alternating(&u, zeta);
        let (even_v, odd_v) = split_alternating(&v, zeta);
        let (s, c) = (zeta - PI / 4.0).sin_cos();
        AiryValues {
            ai: (c * even_u + s * odd_u) / (sqrt_pi * q),
            ai_prime: q * (s * even_v - c * odd_v) / sqrt_pi,
            bi: (-s * even_u + c * odd_u) / (sqrt_pi * q),
            bi_prime: q * (c * even_v + s * odd_v) / sqrt_pi,
        }
    }
}

/// Even and odd parts `sum (-1)^k c_{2k} zeta^{-2k}` and
/// `sum (-1)^k c_{2k+1} zeta^{-2k-1}`, truncated at the smallest term.
fn split_alternating(c: &[f64], zeta: f64) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut last = f64::INFINITY;
    let mut pow = 1.0;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        pow /= zeta;
    }
    (even, odd)
}

fn node_x(i: usize) -> f64 {
    -AIRY_TABLE_EDGE + NODE_SPACING * i as f64
}

fn node_table() -> &'static [AiryValues; NODE_COUNT] {
    static TABLE: OnceLock<[AiryValues; NODE_COUNT]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let zero = AiryValues { ai: 0.0, ai_prime: 0.0, bi: 0.0, bi_prime: 0.0 };
        let mut table = [zero; NODE_COUNT];
        let sqrt3 = 3f64.sqrt();
        let origin = NODE_COUNT / 2;
        let edge = real_asymptotic(AIRY_TABLE_EDGE);
        let (mut ai, mut aip) = (edge.ai, edge.ai_prime);
        let mut x = AIRY_TABLE_EDGE;
        for i in (origin..NODE_COUNT).rev() {
            let target = node_x(i);
            (ai, aip) = walk(x, ai, aip, target);
            x = target;
            table[i].ai = ai;
            table[i].ai_prime = aip;
        }
        let (mut bi, mut bip) = (sqrt3 * AI0, -sqrt3 * AI0_PRIME);
        x = 0.0;
        for (i, entry) in table.iter_mut().enumerate().skip(origin) {
            let target = node_x(i);
            (bi, bip) = walk(x, bi, bip, target);
            x = target;
            entry.bi = bi;
            entry.bi_prime = bip;
        }
        let (mut ai, mut aip, mut bi, mut bip) = (AI0, AI0_PRIME, sqrt3 * AI0, -sqrt3 * AI0_PRIME);
        x = 0.0;
        for i in (0..origin).rev() {
            let target = node_x(i);
            (ai, aip) = walk(x, ai, aip, target);
            (bi, bip) = walk(x, bi, bip, target);
            x = target;
            table[i] = AiryValues { ai, ai_prime: aip, bi, bi_prime: bip };
        }
        // Keep the origin exactly on the closed forms.
        table[origin] = AiryValues { ai: AI0, ai_prime: AI0_PRIME, bi: sqrt3 * AI0, bi_prime: -sqrt3 * AI0_PRIME };
        table
    })
}

/// Ai, Ai', Bi, Bi' at a real point.
pub fn airy(x: f64) -> AiryValues {
    if x.is_nan() {
        return AiryValues { ai: f64::NAN, ai_prime: f64::NAN, bi: f64::NAN, bi_prime: f64::NAN };
    }
    if x.abs() > AIRY_TABLE_EDGE {
        return real_asymptotic(x);
    }
    let table = node_table();
    let idx = ((x + AIRY_TABLE_EDGE) / NODE_SPACING).round() as usize;
    let idx = idx.min(NODE_COUNT - 1);
    let x0 = node_x(idx);
    let node = table[idx];
    let h = x - x0;
    if h == 0.0 {
        return node;
    }
    let (ai, ai_prime) = taylor_step(x0, node.ai, node.ai_prime, h);
    let (bi, bi_prime) = taylor_step(x0, node.bi, node.bi_prime, h);
    AiryValues { ai, ai_prime, bi, bi_prime }
}

/// Airy function selector for the sector expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AiryKind {
    Ai,
    Bi,
}

/// Angular range in which a sector expansion holds. The ranges depend on
/// the function:
///
/// | sector | Ai              | Bi              |
/// |--------|-----------------|-----------------|
/// | First  | (-pi, pi)       | (-pi/3, pi)     |
/// | Second | (pi/3, 5pi/3)   | (-pi, pi/3)     |
/// | Third  | (-5pi/3, -pi/3) | (pi/3, 5pi/3)   |
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AirySector {
    First,
    Second,
    Third,
}

impl AirySector {
    pub fn bounds(self, which: AiryKind) -> (f64, f64) {
        use AiryKind::*;
        use AirySector::*;
        match (which, self) {
            (Ai, First) => (-PI, PI),
            (Ai, Second) => (PI / 3.0, 5.0 * PI / 3.0),
            (Ai, Third) => (-5.0 * PI / 3.0, -PI / 3.0),
            (Bi, First) => (-PI / 3.0, PI),
            (Bi, Second) => (-PI, PI / 3.0),
            (Bi, Third) => (PI / 3.0, 5.0 * PI / 3.0),
        }
    }

    /// Representative of `arg z` (shifted by a multiple of 2 pi) inside the
    /// sector, if any.
    pub fn locate(self, which: AiryKind, z: Complex64) -> Option<f64> {
        let (lo, hi) = self.bounds(which);
        let base = z.arg();
        [base, base + 2.0 * PI, base - 2.0 * PI].into_iter().find(|&a| a > lo && a < hi)
    }
}

/// Minimum modulus accepted by [`airy_asymptotic`].
pub const AIRY_ASYMPTOTIC_MIN_MODULUS: f64 = 4.0;
/// Terms kept in each exponential's correction series.
pub const AIRY_SECTOR_TERMS: usize = 10;

/// Sector expansion of Ai or Bi together with its derivative. Each exponential
/// carries its ten-term correction series; powers of `z` use the argument
/// representative inside `sector`.
pub fn airy_asymptotic_pair(
    z: Complex64,
    which: AiryKind,
    sector: AirySector,
) -> Result<(Complex64, Complex64), SpecfunError> {
    let arg = sector.locate(which, z).ok_or(SpecfunError::OutsideSector { arg: z.arg(), which, sector })?;
    let r = z.norm();
    let z_m14 = Complex64::from_polar(r.powf(-0.25), -0.25 * arg);
    let z_14 = Complex64::from_polar(r.powf(0.25), 0.25 * arg);
    let zeta = Complex64::from_polar(2.0 / 3.0 * r.powf(1.5), 1.5 * arg);
    let u = u_coefficients(AIRY_SECTOR_TERMS);
    let v = v_from_u(&u);
    let i = Complex64::i();
    let sp = PI.sqrt();
    // (coefficient, exponent sign) pairs, written as in the sector formulas.
    let terms: [(Complex64, f64); 2] = match (which, sector) {
        (AiryKind::Ai, AirySector::First) => [(Complex64::new(0.5 / sp, 0.0), -1.0), (Complex64::new(0.0, 0.0), 1.0)],
        (AiryKind::Ai, AirySector::Second) => [(Complex64::new(0.5 / sp, 0.0), -1.0), (i * (0.5 / sp), 1.0)],
        (AiryKind::Ai, AirySector::Third) => [(Complex64::new(0.5 / sp, 0.0), -1.0), (-i * (0.5 / sp), 1.0)],
        (AiryKind::Bi, AirySector::First) => [(Complex64::new(1.0 / sp, 0.0), 1.0), (i * (0.5 / sp), -1.0)],
        (AiryKind::Bi, AirySector::Second) => [(Complex64::new(1.0 / sp, 0.0), 1.0), (-i * (0.5 / sp), -1.0)],
        (AiryKind::Bi, AirySector::Third) => [(Complex64::new(0.5 / sp, 0.0), 1.0), (i * (0.5 / sp), -1.0)],
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for (coef, s) in terms {
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        let e = (zeta * s).exp();
        value += coef * z_m14 * e * fixed_series(&u, zeta, s);
        deriv += coef * s * z_14 * e * fixed_series(&v, zeta, s);
    }
    Ok((value, deriv))
}

/// Sector expansion of Ai or Bi.
pub fn airy_asymptotic(z: Complex64, which: AiryKind, sector: AirySector) -> Result<Complex64, SpecfunError> {
    airy_asymptotic_pair(z, which, sector).map(|p| p.0)
}

fn fixed_series(c: &[f64], zeta: Complex64, sign: f64) -> Complex64 {
    let inv = 1.0 / zeta;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sgn = 1.0;
    for &ck in c {
        sum += pow * (sgn * ck);
        pow *= inv;
        sgn *= sign;
    }
    sum
}
