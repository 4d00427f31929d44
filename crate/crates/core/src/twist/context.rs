use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lfun::LSeriesEvaluator;
use crate::qseries::HalfIntegralForm;
use crate::special::principal_power;
use crate::twist::alpha::Alpha;
use crate::twist::ladder::{a_ladder, ratio_to_f64, Rational};

/// Default strip parameter: the basic formula is used for -2 delta < sigma < -delta.
pub const DEFAULT_DELTA: f64 = 0.4;

/// `nu = +sqrt(n)` or `nu = -sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedRoot {
    pub n: u64,
    pub negative: bool,
}

impl SignedRoot {
    pub fn value(&self) -> f64 {
        let r = (self.n as f64).sqrt();
        if self.negative {
            -r
        } else {
            r
        }
    }
}

pub fn s_ell(l: u32) -> f64 {
    0.75 - 0.5 * l as f64
}

/// Everything the twist evaluators need about one form and one alpha.
#[derive(Debug, Clone)]
pub struct TwistContext {
    pub form: Arc<HalfIntegralForm>,
    pub lfun: LSeriesEvaluator,
    pub alpha: Alpha,
    pub nu_alpha: f64,
    pub h: u32,
    pub h_star: u32,
    pub mu: f64,
    pub mu_star: f64,
    pub ladder: Vec<Rational>,
    pub in_spectrum: bool,
    /// a*(n_alpha), zero off the spectrum.
    pub a_star_n_alpha: Complex64,
    pub delta: f64,
}

impl TwistContext {
    pub fn new(form: Arc<HalfIntegralForm>, alpha: Alpha) -> Result<Self> {
        let a_star_n_alpha = match alpha.integral_n_alpha() {
            Some(n) if n >= 1 => form.a_star(n)?,
            _ => Complex64::new(0.0, 0.0),
        };
        let h_star = form.h_star();
        Ok(TwistContext {
            lfun: LSeriesEvaluator::new(Arc::clone(&form)),
            nu_alpha: alpha.nu_alpha(),
            h: form.h(),
            h_star,
            mu: form.mu(),
            mu_star: form.mu_star(),
            ladder: a_ladder(h_star),
            in_spectrum: a_star_n_alpha != Complex64::new(0.0, 0.0),
            a_star_n_alpha,
            delta: DEFAULT_DELTA,
            alpha,
            form,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.45) {
            return Err(Error::Config(format!("strip delta must lie in (0, 0.45], got {delta}")));
        }
        self.delta = delta;
        Ok(self)
    }

    /// Degree of the twisted function.
    pub fn degree(&self) -> u32 {
        2
    }

    /// Conductor.
    pub fn conductor(&self) -> u64 {
        self.form.level
    }

    pub fn ladder_f64(&self) -> Vec<f64> {
        self.ladder.iter().map(ratio_to_f64).collect()
    }

    /// sqrt(N) / (4 pi) = Q / 2.
    pub fn half_q(&self) -> f64 {
        self.lfun.q / 2.0
    }

    /// `z_X(n) = nu_alpha / sqrt(n) - i Q / (2 X sqrt(n))`.
    pub fn z_x(&self, n: u64, x: f64) -> Complex64 {
        let r = (n as f64).sqrt();
        Complex64::new(self.nu_alpha / r, -self.lfun.q / (2.0 * x * r))
    }

    /// `|nu + nu_alpha|`, free of cancellation near `nu = -nu_alpha`.
    pub fn shifted_modulus(&self, nu: SignedRoot) -> f64 {
        let r = (nu.n as f64).sqrt();
        if nu.negative {
            self.alpha.offset(nu.n).abs() / (r + self.nu_alpha)
        } else {
            r + self.nu_alpha
        }
    }

    /// True when `nu > -nu_alpha`.
    pub fn is_plus_side(&self, nu: SignedRoot) -> Result<bool> {
        if !nu.negative {
            return Ok(true);
        }
        let off = self.alpha.offset(nu.n);
        if off == 0.0 {
            return Err(Error::Domain(format!(
                "nu = -sqrt({}) equals -nu_alpha and is excluded",
                nu.n
            )));
        }
        Ok(off < 0.0)
    }

    /// Phase in front of a*(nu^2) in the twisted dual coefficient.
    pub fn c_star_phase(&self, nu: SignedRoot, l: u32) -> Result<Complex64> {
        let unit = |x: f64| Complex64::from_polar(1.0, PI * x);
        if !nu.negative {
            Ok(-unit(self.mu))
        } else if self.is_plus_side(nu)? {
            Ok(unit(0.5 + l as f64 - self.mu))
        } else {
            Ok(unit(-self.mu))
        }
    }

    /// c*_l(nu^2).
    pub fn c_star(&self, nu: SignedRoot, l: u32) -> Result<Complex64> {
        Ok(self.c_star_phase(nu, l)? * self.form.a_star(nu.n)?)
    }

    /// Residue of F(s, alpha) at s_l; zero off the spectrum.
    pub fn residue_kappa(&self, l: u32) -> Result<Complex64> {
        if l > self.h_star {
            return Err(Error::Precondition(format!(
                "residues exist for l <= {}, got {l}",
                self.h_star
            )));
        }
        if !self.in_spectrum {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let sl = s_ell(l);
        let n_alpha = self.alpha.integral_n_alpha().expect("spectral n_alpha") as f64;
        let a_l = ratio_to_f64(&self.ladder[l as usize]);
        let scale = principal_power(Complex64::new(self.half_q(), 0.0), Complex64::new(1.0 - 2.0 * sl, 0.0))?
            .to_complex();
        let phase = Complex64::from_polar(1.0, -PI * (sl + self.mu));
        Ok(Complex64::i() * self.form.omega * a_l / (2.0 * (2.0 * PI).sqrt())
            * self.a_star_n_alpha
            * n_alpha.powf(sl - 1.0)
            * scale
            * phase)
    }

    /// Real-part window in which the basic formula holds.
    pub fn strip(&self) -> (f64, f64) {
        let d = self.delta;
        if self.h_star <= 2 {
            (-2.0 * d, -d)
        } else {
            (s_ell(self.h_star + 1) + d, s_ell(self.h_star) - d)
        }
    }

    pub fn in_strip(&self, s: Complex64) -> bool {
        let (lo, hi) = self.strip();
        s.re > lo && s.re < hi
    }
}
