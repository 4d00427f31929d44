use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexEval, LSeriesEvaluator, Method};
use crate::error::Result;
use crate::special::{ln_gamma, ln_sin_pi, principal_power, LogComplex};
use crate::twist::a_ladder_f64;

/// Two sides of an identity and their relative residual.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FeCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

impl FeCheck {
    pub fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        FeCheck {
            lhs,
            rhs,
            residual: (lhs - rhs).norm() / scale,
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Q^s Gamma(s + mu) F(s)` against `omega Q^{1-s} Gamma(1 - s + mu) F*(1-s)`.
///
/// F comes from `ev` and F* from `alt`; giving them different split points
/// keeps the check from being an identity of the representation.
pub fn classical_fe_sides(
    ev: &LSeriesEvaluator,
    alt: &LSeriesEvaluator,
    s: Complex64,
) -> Result<FeCheck> {
    let mu = ev.form.normalization_shift();
    let q = real(ev.q);
    let one = real(1.0);
    let f = ev.complete(s, false)?;
    let fs = alt.complete(one - s, true)?;
    let lhs = principal_power(q, s)? * ln_gamma(s + mu)?;
    let rhs = principal_power(q, one - s)? * ln_gamma(one - s + mu)?;
    Ok(FeCheck::new(
        lhs.scale(f.value),
        (rhs * ev.form.omega).scale(fs.value),
    ))
}

/// Asymmetric form: `omega Q^{1-2s} / pi * Gamma(1-s+mu*) Gamma(1-s-mu*)
/// sin(pi (s + mu)) F*(1-s)`.
pub fn asymmetric_fe_rhs(ev: &LSeriesEvaluator, s: Complex64) -> Result<ComplexEval> {
    let form = &ev.form;
    let one = real(1.0);
    let mu_star = form.mu_star();
    let fs = ev.complete(one - s, true)?;
    let factor = principal_power(real(ev.q), one - 2.0 * s)?
        * ln_gamma(one - s + mu_star)?
        * ln_gamma(one - s - mu_star)?
        * ln_sin_pi(s + form.mu())
        * LogComplex::from_real(1.0 / PI)
        * form.omega;
    let f = factor.to_complex();
    Ok(ComplexEval::new(
        f * fs.value,
        f.norm() * fs.error,
        Method::FunctionalEquation,
    ))
}

/// Ladder form: `2 omega / sqrt(2 pi) (Q/2)^{1-2s} sum_l a_l Gamma(2(1-s) -
/// 1/2 - l) sin(pi (s + mu)) F*(1-s)`.
pub fn ladder_fe_rhs(ev: &LSeriesEvaluator, s: Complex64) -> Result<ComplexEval> {
    let form = &ev.form;
    let one = real(1.0);
    let fs = ev.complete(one - s, true)?;
    let base = 2.0 * (one - s) - 0.5;
    let mut ladder = Complex64::new(0.0, 0.0);
    for (l, a) in a_ladder_f64(form.h_star()).into_iter().enumerate() {
        ladder += a * ln_gamma(base - l as f64)?.to_complex();
    }
    let factor = principal_power(real(ev.q / 2.0), one - 2.0 * s)?
        * ln_sin_pi(s + form.mu())
        * LogComplex::from_real(2.0 / (2.0 * PI).sqrt())
        * form.omega;
    let f = factor.scale(ladder);
    Ok(ComplexEval::new(
        f * fs.value,
        f.norm() * fs.error,
        Method::FunctionalEquation,
    ))
}

/// Relative residual of `Lambda_f(u) = omega Lambda_{f*}(kappa - u)`.
///
/// Both sides use a small split point, so the left side is carried mostly by
/// the coefficients of f and the right side mostly by those of f*; a wrong
/// dual phase then shows up at full size.
pub fn dual_phase_residual(ev: &LSeriesEvaluator, u: Complex64) -> Result<FeCheck> {
    let small = ev.with_split(0.25);
    let lhs = small.lambda(u, false)?;
    let rhs = small.lambda(real(ev.form.kappa()) - u, true)?;
    Ok(FeCheck::new(lhs.value, ev.form.omega * rhs.value))
}
