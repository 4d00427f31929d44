//! The normalized L-functions F(s) = L_f(s + (kappa-1)/2) and F*(s).

mod identities;

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::qseries::{isqrt, HalfIntegralForm, Support};
use crate::special::{ln_upper_incomplete_gamma_complex, principal_power, rgamma};

pub use identities::{
    asymmetric_fe_rhs, classical_fe_sides, dual_phase_residual, ladder_fe_rhs, FeCheck,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Completed,
    Stratified,
    Extrapolated,
    FunctionalEquation,
    Assembled,
}

/// A complex value with an error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexEval {
    pub value: Complex64,
    pub error: f64,
    pub method: Method,
}

impl ComplexEval {
    pub fn new(value: Complex64, error: f64, method: Method) -> Self {
        ComplexEval {
            value,
            error,
            method,
        }
    }
}

/// Relative accuracy aimed for by the truncation rules.
const TARGET: f64 = 1e-16;
const DIRECT_SQUARES_CAP: u64 = 3_000_000;
const DIRECT_DENSE_CAP: u64 = 1 << 23;

#[derive(Debug, Clone)]
pub struct LSeriesEvaluator {
    pub form: Arc<HalfIntegralForm>,
    /// sqrt(N) / (2 pi)
    pub q: f64,
    /// Smallest real part accepted by the direct series.
    pub safe_abscissa: f64,
    /// Modulus of the split point in the completed representation.
    pub split: f64,
    /// Replaces the form's dual phase; used for negative controls.
    pub dual_phase_override: Option<Complex64>,
}

impl LSeriesEvaluator {
    pub fn new(form: Arc<HalfIntegralForm>) -> Self {
        let safe_abscissa = if form.lacunary_profile().is_some() {
            0.9
        } else {
            1.25
        };
        let q = form.q_factor();
        LSeriesEvaluator {
            form,
            q,
            safe_abscissa,
            split: 1.0,
            dual_phase_override: None,
        }
    }

    pub fn with_split(&self, split: f64) -> Self {
        LSeriesEvaluator {
            split,
            ..self.clone()
        }
    }

    pub fn with_dual_phase(&self, eps: Complex64) -> Self {
        LSeriesEvaluator {
            dual_phase_override: Some(eps),
            ..self.clone()
        }
    }

    pub fn dual_phase(&self) -> Complex64 {
        self.dual_phase_override.unwrap_or(self.form.dual_phase)
    }

    fn normalized(&self, n: u64, c: i128, dual: bool) -> Complex64 {
        let a = c as f64 * (n as f64).powf(-self.form.normalization_shift());
        if dual {
            self.dual_phase() * a
        } else {
            Complex64::new(a, 0.0)
        }
    }

    /// Dirichlet polynomial `sum_{n <= max_n} a(n) n^{-s}` (or a*(n)).
    pub fn partial_sum(&self, s: Complex64, max_n: u64, dual: bool) -> Result<CompensatedSum> {
        let mut acc = CompensatedSum::new();
        for (n, c) in self.form.terms(max_n)? {
            let lnn = (n as f64).ln();
            acc.add(self.normalized(n, c, dual) * (-s * lnn).exp());
        }
        Ok(acc)
    }

    /// Abel-summation bound for the tail past `v` of a lacunary form.
    fn lacunary_tail(&self, s: Complex64, v: u64) -> Option<f64> {
        let (beta, b) = self.form.lacunary_profile()?;
        let gap = 2.0 * s.re - beta;
        if gap <= 0.0 {
            return Some(f64::INFINITY);
        }
        let w = Complex64::new(beta, 0.0) - 2.0 * s;
        Some(b * ((v + 1) as f64).powf(-gap) * (1.0 + w.norm() / gap))
    }

    /// Upper bound for the tail of the direct series past `max_n`.
    pub fn direct_tail(&self, s: Complex64, max_n: u64) -> f64 {
        match self.lacunary_tail(s, isqrt(max_n)) {
            Some(b) => b,
            None => self.form.tail_bound(max_n, s.re),
        }
    }

    /// Direct Dirichlet series with a truncation chosen from the tail bound.
    pub fn direct(&self, s: Complex64, dual: bool) -> Result<ComplexEval> {
        if s.re < self.safe_abscissa {
            return Err(Error::Domain(format!(
                "direct series needs Re s >= {}, got {s}",
                self.safe_abscissa
            )));
        }
        let max_n = match self.form.support {
            Support::Squares => {
                let mut v = 16u64;
                while v < DIRECT_SQUARES_CAP && self.direct_tail(s, v * v) > TARGET {
                    v = (v * 2).min(DIRECT_SQUARES_CAP);
                }
                v * v
            }
            Support::Progression { .. } => {
                let mut m = 1024u64;
                while m < DIRECT_DENSE_CAP && self.direct_tail(s, m) > TARGET {
                    m = (m * 2).min(DIRECT_DENSE_CAP);
                }
                m
            }
        };
        let acc = self.partial_sum(s, max_n, dual)?;
        Ok(ComplexEval::new(
            acc.value(),
            self.direct_tail(s, max_n) + acc.rounding_error(),
            Method::Direct,
        ))
    }

    /// Rotation of the split point that offsets the exp(-pi |t| / 2) decay
    /// of the gamma factor.
    fn rotation(t: f64) -> f64 {
        if t.abs() <= 4.0 {
            0.0
        } else {
            t.signum() * (FRAC_PI_2 - 2.5 / t.abs())
        }
    }

    /// One half of the completed representation:
    /// `sum coeff(n) (Q/n)^u Gamma(u, n x0)` with `x0 = A / Q`.
    fn incomplete_sum(
        &self,
        u: Complex64,
        x0: Complex64,
        dual_coeffs: bool,
        acc: &mut CompensatedSum,
    ) -> Result<f64> {
        // |A^u| with A = Q x0 bounds (Q/n)^u x^u
        let a_mod = (x0.norm() * self.q).powf(u.re) * (-u.im * x0.arg()).exp();
        let step = x0.re;
        let slack = (u.re - 1.0).max(0.0);
        let mut cap = ((60.0 + 2.0 * u.re.abs()) / step).ceil() as u64 + 32;
        let mut start = 0u64;
        let tail_at = |coeff_abs: f64, x_re: f64| -> f64 {
            coeff_abs * a_mod * (-x_re).exp() / (x_re - slack) * (2.0 + 2.0 / step)
        };
        loop {
            let terms = self.form.terms(cap)?;
            for (n, c) in terms.into_iter().filter(|t| t.0 > start) {
                let x = x0 * n as f64;
                let coeff = if dual_coeffs {
                    self.dual_phase() * c as f64
                } else {
                    Complex64::new(c as f64, 0.0)
                };
                if x.re > slack + 1.0 {
                    let tail = tail_at(c.unsigned_abs() as f64, x.re);
                    if tail <= TARGET * acc.value().norm().max(acc.abs_sum * 1e-3) {
                        return Ok(tail);
                    }
                }
                let g = ln_upper_incomplete_gamma_complex(u, x)?;
                let pw = principal_power(Complex64::new(self.q / n as f64, 0.0), u)?;
                acc.add(coeff * (g * pw).to_complex());
            }
            // past the last nonzero term: fall back to the coefficient bound
            let x_re = x0.re * cap as f64;
            if x_re > slack + 1.0 {
                let tail = tail_at(self.form.bound.at(cap), x_re);
                if tail <= TARGET * acc.value().norm().max(acc.abs_sum * 1e-3) {
                    return Ok(tail);
                }
            }
            start = cap;
            cap *= 2;
            if cap > 1 << 32 {
                return Err(Error::AccuracyUnreachable {
                    requested: TARGET,
                    achieved: f64::INFINITY,
                    context: format!("completed series at u = {u} did not reach its decay range"),
                });
            }
        }
    }

    /// Completed function Lambda_f(u) (or Lambda_{f*}(u)) by the split
    /// representation with split point `A = split * e^{i theta}`.
    pub fn lambda(&self, u: Complex64, dual: bool) -> Result<ComplexEval> {
        let theta = Self::rotation(u.im);
        let a = Complex64::from_polar(self.split, theta);
        let kappa = self.form.kappa();
        let omega = if dual {
            self.form.omega.conj()
        } else {
            self.form.omega
        };
        let mut first = CompensatedSum::new();
        let t1 = self.incomplete_sum(u, a / self.q, dual, &mut first)?;
        let mut second = CompensatedSum::new();
        let v = Complex64::new(kappa, 0.0) - u;
        let t2 = self.incomplete_sum(v, a.inv() / self.q, !dual, &mut second)?;
        let value = first.value() + omega * second.value();
        let error = t1 + t2 + first.rounding_error() + second.rounding_error();
        Ok(ComplexEval::new(value, error, Method::Completed))
    }

    /// F(s) (or F*(s)) from the completed function, valid for every s.
    pub fn complete(&self, s: Complex64, dual: bool) -> Result<ComplexEval> {
        let u = s + self.form.normalization_shift();
        let lam = self.lambda(u, dual)?;
        let factor = principal_power(Complex64::new(self.q, 0.0), -u)?.to_complex() * rgamma(u);
        Ok(ComplexEval::new(
            lam.value * factor,
            lam.error * factor.norm(),
            Method::Completed,
        ))
    }

    pub fn f_direct(&self, s: Complex64) -> Result<ComplexEval> {
        self.direct(s, false)
    }

    pub fn fstar_direct(&self, s: Complex64) -> Result<ComplexEval> {
        self.direct(s, true)
    }

    pub fn f_complete(&self, s: Complex64) -> Result<ComplexEval> {
        self.complete(s, false)
    }

    pub fn fstar_complete(&self, s: Complex64) -> Result<ComplexEval> {
        self.complete(s, true)
    }

    /// Direct series well inside its region, completed function elsewhere.
    pub fn eval(&self, s: Complex64, dual: bool) -> Result<ComplexEval> {
        let direct_from = match self.form.support {
            Support::Squares => self.safe_abscissa + 0.5,
            Support::Progression { .. } => 3.0,
        };
        if s.re >= direct_from {
            self.direct(s, dual)
        } else {
            self.complete(s, dual)
        }
    }
}
