//! Extended-precision summation of the smoothed twist over square indices.
//!
//! At negative sigma the terms of F_X grow like X^{2(e - sigma)} while the
//! sum minus Sigma_X stays O(1), so f64 terms lose most of their digits.
//! Lacunary forms have only O(X) terms, which makes 128-bit summation cheap.

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::Result;
use crate::lfun::{ComplexEval, Method};
use crate::qseries::isqrt;
use crate::special::LogComplex;
use crate::twist::context::TwistContext;

const PREC: u32 = 128;

struct WideSum {
    re: Float,
    im: Float,
    abs_sum: f64,
    tail: f64,
}

impl WideSum {
    fn rounding(&self) -> f64 {
        self.abs_sum * 2f64.powi(8 - PREC as i32)
    }

    /// Adds `exp(log_mag) * cis(angle)`.
    fn add_polar(&mut self, log_mag: Float, angle: Float) {
        let mag = log_mag.exp();
        self.abs_sum += mag.to_f64();
        let (sin, cos) = angle.sin_cos(Float::new(PREC));
        self.re += mag.clone() * cos;
        self.im += mag * sin;
    }

    fn finish(self) -> ComplexEval {
        let value = Complex64::new(self.re.to_f64(), self.im.to_f64());
        let error = self.tail + self.rounding() + f64::EPSILON * value.norm();
        ComplexEval::new(value, error, Method::Direct)
    }
}

fn wide(v: f64) -> Float {
    Float::with_val(PREC, v)
}

impl TwistContext {
    fn squares_sum(&self, s: Complex64, x: f64, target: f64, cap: f64) -> Result<WideSum> {
        let two_pi = Float::with_val(PREC, Constant::Pi) * 2u32;
        let expo = (wide(s.re) + wide(self.form.normalization_shift())) * 2u32;
        let freq = wide(s.im) * 2u32;
        let x_mp = wide(x);
        let (na_p, na_q) = (*self.alpha.n_alpha.numer(), *self.alpha.n_alpha.denom());
        // alpha = 2 sqrt(n_alpha / N)
        let alpha_mp =
            (Float::with_val(PREC, na_p) / Float::with_val(PREC, na_q * self.form.level as i128)).sqrt() * 2u32;

        let mut sum = WideSum {
            re: Float::new(PREC),
            im: Float::new(PREC),
            abs_sum: 0.0,
            tail: 0.0,
        };
        let mut lo = 0u64;
        let mut v = (8.0 * x).ceil();
        loop {
            let hi = (v * v) as u64;
            for (n, c) in self.form.terms(hi)?.into_iter().filter(|t| t.0 > lo) {
                let root = isqrt(n);
                let ln_v = Float::with_val(PREC, root).ln();
                let turns = match self.alpha.phase_exact(n) {
                    Some((num, q)) => Float::with_val(PREC, num) / Float::with_val(PREC, q),
                    None => (alpha_mp.clone() * root).fract(),
                };
                let mut angle = -(freq.clone() * &ln_v) - turns * &two_pi;
                if c < 0 {
                    angle += Float::with_val(PREC, Constant::Pi);
                }
                let log_mag = Float::with_val(PREC, c.unsigned_abs()).ln()
                    - expo.clone() * &ln_v
                    - Float::with_val(PREC, root) / &x_mp;
                sum.add_polar(log_mag, angle);
            }
            sum.tail = self.damped_tail(v, s.re, x);
            if sum.tail <= target * sum.abs_sum || v >= cap {
                return Ok(sum);
            }
            lo = hi;
            v = (2.0 * v).min(cap);
        }
    }

    /// F_X summed with 128-bit terms; `cap` bounds sqrt(n).
    pub(crate) fn f_x_squares_precise(&self, s: Complex64, x: f64, target: f64, cap: f64) -> Result<ComplexEval> {
        Ok(self.squares_sum(s, x, target, cap)?.finish())
    }

    /// `F_X - Sigma_X` with the subtraction done before rounding; `terms`
    /// are the pole terms `(C_l, e_l)` of Sigma_X.
    pub(crate) fn regularized_squares_precise(
        &self,
        s: Complex64,
        x: f64,
        terms: &[(LogComplex, Complex64)],
        target: f64,
        cap: f64,
    ) -> Result<ComplexEval> {
        let mut sum = self.squares_sum(s, x, target, cap)?;
        let ln_x = wide(x).ln();
        let pi = Float::with_val(PREC, Constant::Pi);
        for (c, e) in terms {
            let log_mag = wide(c.log_modulus) + wide(e.re) * &ln_x;
            let angle = wide(c.phase) + wide(e.im) * &ln_x + &pi;
            sum.add_polar(log_mag, angle);
        }
        let mut g = sum.finish();
        g.method = Method::Extrapolated;
        Ok(g)
    }
}
