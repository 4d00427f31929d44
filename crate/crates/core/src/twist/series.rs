//! The generalized Dirichlet series F^+-_l(s, alpha), their combinations
//! F*_l(s, alpha), the functional-equation side built from them, and the
//! twisted series itself where it converges.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfun::{ComplexEval, Method};
use crate::numerics::CompensatedSum;
use crate::qseries::{isqrt, Support};
use crate::special::{ln_gamma, principal_power, LogComplex};
use crate::twist::context::{SignedRoot, TwistContext};
use crate::twist::ladder::ratio_to_f64;
use crate::twist::tails::{binomials, ShiftedTails};

const TARGET: f64 = 1e-16;
const SQUARES_CAP: u64 = 3_000_000;
const DENSE_CAP: u64 = 1 << 23;
const MAX_ORDER: usize = 80;
/// The binomial tail starts once K / sqrt(n) is at most this.
const TAIL_RATIO: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// nu > -nu_alpha
    Plus,
    /// nu < -nu_alpha
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMode {
    Direct,
    Stratified,
    /// Direct far enough right of the abscissa, stratified otherwise.
    Auto,
}

impl TwistContext {
    /// Smallest real part accepted by the direct generalized series.
    pub fn twist_abscissa(&self) -> f64 {
        if self.form.lacunary_profile().is_some() {
            1.05
        } else {
            1.3
        }
    }

    /// Real part from which `SeriesMode::Auto` uses the direct series, which
    /// there is both faster and more accurate at large |t|.
    pub fn auto_direct_from(&self) -> f64 {
        if self.form.lacunary_profile().is_some() {
            2.5
        } else {
            2.0
        }
    }

    /// Signed roots on one side with `lo < n <= hi`, ordered by |nu| and
    /// then sign.
    fn side_roots(&self, side: Side, lo: u64, hi: u64) -> Result<Vec<SignedRoot>> {
        let mut out = Vec::new();
        for (n, _) in self.form.terms(hi)?.into_iter().filter(|t| t.0 > lo) {
            let off = self.alpha.offset(n);
            match side {
                Side::Plus => {
                    out.push(SignedRoot { n, negative: false });
                    if off < 0.0 {
                        out.push(SignedRoot { n, negative: true });
                    }
                }
                Side::Minus => {
                    if off > 0.0 {
                        out.push(SignedRoot { n, negative: true });
                    }
                }
            }
        }
        Ok(out)
    }

    /// One term `c*(nu^2) |nu|^{-1/2-l} |nu + nu_alpha|^rho`.
    fn pm_term(&self, nu: SignedRoot, l: u32, rho: Complex64) -> Result<Complex64> {
        let m = self.shifted_modulus(nu);
        let c = self.c_star(nu, l)?;
        let weight = (nu.n as f64).powf(-0.25 - 0.5 * l as f64);
        Ok(c * weight * (rho * m.ln()).exp())
    }

    fn pm_head(&self, side: Side, l: u32, rho: Complex64, lo: u64, hi: u64, acc: &mut CompensatedSum) -> Result<()> {
        for nu in self.side_roots(side, lo, hi)? {
            acc.add(self.pm_term(nu, l, rho)?);
        }
        Ok(())
    }

    /// Largest value of `(1 +- x)^{Re rho}` for `0 <= x <= x0`.
    fn binomial_envelope(side: Side, rho_re: f64, x0: f64) -> f64 {
        let base = match side {
            Side::Plus => 1.0 + x0,
            Side::Minus => 1.0 - x0,
        };
        base.powf(rho_re).max(1.0)
    }

    /// Tail bound for the direct series past `max_n`.
    fn pm_direct_tail(&self, s: Complex64, l: u32, side: Side, max_n: u64) -> f64 {
        let rho = Complex64::new(0.5 + l as f64, 0.0) - 2.0 * s;
        let v = isqrt(max_n) as f64;
        if v + 1.0 < 2.0 * self.nu_alpha {
            return f64::INFINITY;
        }
        let env = Self::binomial_envelope(side, rho.re, self.nu_alpha / (v + 1.0));
        match self.form.lacunary_profile() {
            Some((beta, b)) => {
                let gap = 2.0 * s.re - beta;
                if gap <= 0.0 {
                    return f64::INFINITY;
                }
                let w = Complex64::new(beta, 0.0) - 2.0 * s;
                b * env * (v + 1.0).powf(-gap) * (1.0 + (w.norm() + rho.norm()) / gap)
            }
            None => env * self.form.tail_bound(max_n, s.re),
        }
    }

    fn pm_direct(&self, s: Complex64, l: u32, side: Side) -> Result<ComplexEval> {
        if s.re < self.twist_abscissa() {
            return Err(Error::Domain(format!(
                "direct generalized series needs Re s >= {}, got {s}",
                self.twist_abscissa()
            )));
        }
        let rho = Complex64::new(0.5 + l as f64, 0.0) - 2.0 * s;
        let (mut m, cap) = match self.form.support {
            Support::Squares => (4096u64.max((4.0 * self.nu_alpha * self.nu_alpha) as u64), SQUARES_CAP * SQUARES_CAP),
            Support::Progression { .. } => (4096u64.max((4.0 * self.nu_alpha * self.nu_alpha) as u64), DENSE_CAP),
        };
        let mut acc = CompensatedSum::new();
        let mut lo = 0;
        loop {
            self.pm_head(side, l, rho, lo, m, &mut acc)?;
            let tail = self.pm_direct_tail(s, l, side, m);
            if tail <= TARGET * acc.value().norm() || m >= cap {
                return Ok(ComplexEval::new(acc.value(), tail + acc.rounding_error(), Method::Direct));
            }
            lo = m;
            m = match self.form.support {
                Support::Squares => {
                    let v = isqrt(m) * 4;
                    (v * v).min(cap)
                }
                Support::Progression { .. } => (m * 2).min(cap),
            };
        }
    }

    /// Head cutoff for a binomial expansion with parameter K.
    pub(crate) fn stratification_head(&self, k: f64) -> u64 {
        let paper = 2 * (k * k).ceil() as u64 + 1;
        let ratio = (k / TAIL_RATIO).powi(2).ceil() as u64;
        let past_alpha = self.alpha.n_alpha.floor().to_integer() as u64 + 2;
        paper.max(ratio).max(past_alpha)
    }

    fn pm_stratified(&self, s: Complex64, l: u32, side: Side) -> Result<ComplexEval> {
        let rho = Complex64::new(0.5 + l as f64, 0.0) - 2.0 * s;
        let k = (1.0 + rho.norm()) * self.nu_alpha;
        let head_n = self.stratification_head(k);
        let mut head = CompensatedSum::new();
        self.pm_head(side, l, rho, 0, head_n - 1, &mut head)?;

        let unit = |x: f64| Complex64::from_polar(1.0, PI * x);
        let (front, sign) = match side {
            Side::Plus => (-unit(self.mu), 1.0f64),
            Side::Minus => (unit(-self.mu), -1.0),
        };
        let binom = binomials(rho, MAX_ORDER);
        let mut tails = ShiftedTails::new(&self.lfun, s, head_n);
        let mut strat = Complex64::new(0.0, 0.0);
        let mut err = head.rounding_error();
        let ratio = k / (head_n as f64).sqrt();
        let mut weight = 1.0;
        for r in 0..=MAX_ORDER {
            let coef = front * binom[r] * sign.powi(r as i32) * weight;
            let t = tails.get(r)?;
            strat += coef * t.value;
            err += coef.norm() * t.error;
            weight *= self.nu_alpha;
            let rest = k.powi(r as i32 + 1) / (1.0 - ratio)
                * self.form.tail_bound(head_n - 1, s.re + 0.5 * (r as f64 + 1.0));
            let total = head.value() + strat;
            if rest <= TARGET * total.norm() || (r == MAX_ORDER && rest.is_finite()) {
                return Ok(ComplexEval::new(total, err + rest, Method::Stratified));
            }
        }
        Err(Error::AccuracyUnreachable {
            requested: TARGET,
            achieved: f64::INFINITY,
            context: format!("binomial tail of F_{l} at s = {s}"),
        })
    }

    /// F^+_l(s, alpha) or F^-_l(s, alpha).
    pub fn f_pm(&self, s: Complex64, l: u32, side: Side, mode: SeriesMode) -> Result<ComplexEval> {
        if l > self.h_star {
            return Err(Error::Precondition(format!("l must be at most {}, got {l}", self.h_star)));
        }
        match mode {
            SeriesMode::Direct => self.pm_direct(s, l, side),
            SeriesMode::Stratified => self.pm_stratified(s, l, side),
            SeriesMode::Auto if s.re >= self.auto_direct_from() => self.pm_direct(s, l, side),
            SeriesMode::Auto => self.pm_stratified(s, l, side),
        }
    }

    /// F*_l(s) scaled by a log-domain factor:
    /// `factor * (e^{-i pi s} F^+_l(s) + e^{i pi s} F^-_l(s))`.
    fn f_star_scaled(&self, s: Complex64, l: u32, factor: LogComplex, mode: SeriesMode) -> Result<ComplexEval> {
        let i = Complex64::i();
        let plus = self.f_pm(s, l, Side::Plus, mode)?;
        let minus = self.f_pm(s, l, Side::Minus, mode)?;
        let wp = (factor * LogComplex::exp(-i * PI * s)).to_complex();
        let wm = (factor * LogComplex::exp(i * PI * s)).to_complex();
        Ok(ComplexEval::new(
            wp * plus.value + wm * minus.value,
            wp.norm() * plus.error + wm.norm() * minus.error,
            Method::Assembled,
        ))
    }

    /// F*_l(s, alpha) = e^{-i pi s} F^+_l(s, alpha) + e^{i pi s} F^-_l(s, alpha).
    pub fn f_star_ell(&self, s: Complex64, l: u32, mode: SeriesMode) -> Result<ComplexEval> {
        self.f_star_scaled(s, l, LogComplex::ONE, mode)
    }

    /// The right side of the twisted functional equation,
    /// `omega / (i sqrt(2 pi)) (sqrt(N)/(4 pi))^{1-2s}
    ///  sum_l a_l Gamma(2(1-s) - 1/2 - l) F*_l(1-s, alpha)`.
    pub fn fe_rhs(&self, s: Complex64) -> Result<ComplexEval> {
        self.fe_rhs_with(s, SeriesMode::Auto)
    }

    pub fn fe_rhs_with(&self, s: Complex64, mode: SeriesMode) -> Result<ComplexEval> {
        let one = Complex64::new(1.0, 0.0);
        let g = 2.0 * (one - s) - 0.5;
        let gamma_g = ln_gamma(g)?;
        let front = principal_power(Complex64::new(self.half_q(), 0.0), one - 2.0 * s)?
            * gamma_g
            * (self.form.omega / (Complex64::i() * (2.0 * PI).sqrt()));
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut poly = one;
        for (l, a) in self.ladder.iter().enumerate() {
            if l > 0 {
                poly *= g - l as f64;
            }
            let factor = front * LogComplex::from_complex(Complex64::new(ratio_to_f64(a), 0.0) / poly);
            let part = self.f_star_scaled(one - s, l as u32, factor, mode)?;
            value += part.value;
            error += part.error;
        }
        Ok(ComplexEval::new(value, error, Method::FunctionalEquation))
    }

    /// The twisted series `sum a(n) e(-alpha sqrt(n)) n^{-s}` where it
    /// converges absolutely.
    pub fn twist_direct(&self, s: Complex64) -> Result<ComplexEval> {
        self.twist_direct_to(s, TARGET)
    }

    /// `twist_direct` stopped once the tail bound is below `target` relative.
    pub fn twist_direct_to(&self, s: Complex64, target: f64) -> Result<ComplexEval> {
        let exponent = self.form.normalized_bound().exponent;
        let needed = match self.form.support {
            Support::Squares => exponent + 0.5,
            Support::Progression { .. } => exponent + 1.0,
        };
        if s.re <= needed {
            return Err(Error::Domain(format!(
                "twisted series converges absolutely only for Re s > {needed}, got {s}"
            )));
        }
        let cap = match self.form.support {
            Support::Squares => SQUARES_CAP * SQUARES_CAP,
            Support::Progression { .. } => DENSE_CAP,
        };
        let mut acc = CompensatedSum::new();
        let mut lo = 0u64;
        let mut m = 1u64 << 12;
        loop {
            for (n, c) in self.form.terms(m)?.into_iter().filter(|t| t.0 > lo) {
                acc.add(self.twisted_term(n, c, s));
            }
            let tail = self.form.tail_bound(m, s.re);
            if tail <= target * acc.value().norm() || m >= cap {
                return Ok(ComplexEval::new(acc.value(), tail + acc.rounding_error(), Method::Direct));
            }
            lo = m;
            m = (m * 4).min(cap);
        }
    }

    /// `a(n) e(-alpha sqrt(n)) n^{-s}`.
    pub(crate) fn twisted_term(&self, n: u64, c: i128, s: Complex64) -> Complex64 {
        let ln_n = (n as f64).ln();
        let a = c as f64 * (-self.form.normalization_shift() * ln_n).exp();
        let phase = Complex64::from_polar(1.0, -2.0 * PI * self.alpha.phase(n));
        phase * a * (-s * ln_n).exp()
    }
}
