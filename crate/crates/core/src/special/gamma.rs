use std::f64::consts::PI;

use num_complex::Complex64;

use super::logcomplex::LogComplex;
use crate::error::{Error, Result};

/// Distance to a nonpositive integer below which `ln_gamma` refuses to
/// evaluate.
pub const POLE_RADIUS: f64 = 1e-3;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    0.083_333_333_333_333_33,
    -0.002_777_777_777_777_778,
    0.000_793_650_793_650_793_7,
    -0.000_595_238_095_238_095_2,
    0.000_841_750_841_750_841_8,
    -0.001_917_526_917_526_917_5,
    0.006_410_256_410_256_410,
    -0.029_550_653_594_771_24,
    0.179_644_372_368_830_57,
    -1.392_432_216_905_901_1,
];

/// Real part at which the asymptotic series is used directly.
const STIRLING_MIN_RE: f64 = 15.0;

/// Below this real part the reflection formula replaces the upward shift.
const REFLECT_BELOW: f64 = -100.0;

fn stirling(w: Complex64) -> Complex64 {
    let ln_w = w.ln();
    let mut acc = (w - 0.5) * ln_w - w + LN_SQRT_2PI;
    let w2inv = (w * w).inv();
    let mut wpow = w.inv();
    for c in STIRLING.iter() {
        acc += wpow * *c;
        wpow *= w2inv;
    }
    acc
}

fn pole_distance(z: Complex64) -> Option<f64> {
    if z.re > 0.5 {
        return None;
    }
    let k = z.re.round();
    if k > 0.0 {
        return None;
    }
    Some(Complex64::new(z.re - k, z.im).norm())
}

/// Principal branch of log Gamma(z).
///
/// The imaginary part is continuous off the negative real axis and obeys
/// `ln_gamma(z + 1) = ln_gamma(z) + Log(z)`. For `Re z < -100` the value is
/// obtained by reflection and its phase is only correct modulo 2*pi.
pub fn ln_gamma(z: Complex64) -> Result<LogComplex> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if let Some(d) = pole_distance(z) {
        if d < POLE_RADIUS {
            return Err(Error::PoleAdjacent {
                z,
                radius: POLE_RADIUS,
            });
        }
    }
    if z.re < REFLECT_BELOW {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let g = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        let s = ln_sin_pi(z);
        return Ok(LogComplex::new(PI.ln(), 0.0) / (s * g));
    }
    if z.re >= STIRLING_MIN_RE {
        return Ok(LogComplex::exp(stirling(z)));
    }
    let shift = (STIRLING_MIN_RE - z.re).ceil() as usize;
    let base = stirling(z + shift as f64);
    // subtract sum_{k<shift} Log(z + k); moduli multiplied with rescaling,
    // arguments summed individually so the branch stays principal
    let mut log_mod = 0.0;
    let mut prod = 1.0;
    let mut arg_sum = 0.0;
    for k in 0..shift {
        let w = z + k as f64;
        prod *= w.norm();
        if !(1e-100..=1e100).contains(&prod) {
            log_mod += prod.ln();
            prod = 1.0;
        }
        arg_sum += w.im.atan2(w.re);
    }
    log_mod += prod.ln();
    Ok(LogComplex::new(base.re - log_mod, base.im - arg_sum))
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.to_complex())
}

/// log sin(pi z) as a [`LogComplex`]; phase reduced only up to 2*pi.
pub fn ln_sin_pi(z: Complex64) -> LogComplex {
    let w = z * PI;
    if w.im > 20.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        let i = Complex64::i();
        let tail = Complex64::new(1.0, 0.0) - (i * w * 2.0).exp();
        LogComplex::new(-(2f64.ln()), PI / 2.0) * LogComplex::exp(-i * w) * tail
    } else if w.im < -20.0 {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        let i = Complex64::i();
        let tail = Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp();
        LogComplex::new(-(2f64.ln()), -PI / 2.0) * LogComplex::exp(i * w) * tail
    } else {
        // reduce the real part first so sin(pi k) is exactly zero at integers
        let k = z.re.round();
        let frac = Complex64::new(z.re - k, z.im) * PI;
        let mut s = frac.sin();
        if (k as i64).rem_euclid(2) == 1 {
            s = -s;
        }
        LogComplex::from_complex(s)
    }
}

/// 1/Gamma(z), entire; exactly zero at nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return match ln_gamma(z) {
            Ok(g) => g.inv().to_complex(),
            Err(_) => Complex64::new(0.0, 0.0),
        };
    }
    // 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
    let s = ln_sin_pi(z);
    if s.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    match ln_gamma(Complex64::new(1.0, 0.0) - z) {
        Ok(g) => (g * s / LogComplex::new(PI.ln(), 0.0)).to_complex(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}
