use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A nonzero complex number stored as `exp(log_modulus + i*phase)`.
///
/// The phase is kept unreduced so that products of many factors keep their
/// accumulated argument. Zero is represented by `log_modulus = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_modulus: 0.0,
        phase: 0.0,
    };
    pub const ZERO: LogComplex = LogComplex {
        log_modulus: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_modulus: f64, phase: f64) -> Self {
        LogComplex { log_modulus, phase }
    }

    /// `exp(w)` without evaluating it.
    pub fn exp(w: Complex64) -> Self {
        LogComplex::new(w.re, w.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            LogComplex::ZERO
        } else {
            LogComplex::new(z.norm().ln(), z.im.atan2(z.re))
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }

    /// The complex logarithm with the stored (unreduced) phase.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_modulus, self.phase)
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let r = self.log_modulus.exp();
        let (s, c) = reduce_phase(self.phase).sin_cos();
        Complex64::new(r * c, r * s)
    }

    pub fn modulus(&self) -> f64 {
        self.log_modulus.exp()
    }

    /// Phase reduced to (-pi, pi].
    pub fn arg(&self) -> f64 {
        reduce_phase(self.phase)
    }

    pub fn inv(&self) -> Self {
        LogComplex::new(-self.log_modulus, -self.phase)
    }

    pub fn powc(&self, w: Complex64) -> Self {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::exp(w * self.ln())
    }

    /// Multiply an ordinary complex number by this factor.
    pub fn scale(&self, z: Complex64) -> Complex64 {
        (*self * LogComplex::from_complex(z)).to_complex()
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_modulus + rhs.log_modulus, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.inv()
    }
}

impl Mul<Complex64> for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: Complex64) -> LogComplex {
        self * LogComplex::from_complex(rhs)
    }
}

pub(crate) fn reduce_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let two_pi = 2.0 * PI;
    let mut r = phase % two_pi;
    if r > PI {
        r -= two_pi;
    } else if r <= -PI {
        r += two_pi;
    }
    r
}

/// `base^exponent` on the principal branch, `arg(base)` in (-pi, pi].
pub fn principal_power(base: Complex64, exponent: Complex64) -> Result<LogComplex> {
    if base.re == 0.0 && base.im == 0.0 {
        if exponent.re > 0.0 {
            return Ok(LogComplex::ZERO);
        }
        return Err(Error::Domain(format!(
            "0^{exponent} is undefined (real part of exponent must be positive)"
        )));
    }
    let log_base = LogComplex::from_complex(base).ln();
    Ok(LogComplex::exp(exponent * log_base))
}
