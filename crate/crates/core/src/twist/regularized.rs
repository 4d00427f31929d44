//! The smoothed twist F_X(s, alpha), the finite-X identity expressing it
//! through the dual coefficients, and the X -> infinity continuation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfun::{ComplexEval, Method};
use crate::numerics::CompensatedSum;
use crate::qseries::Support;
use crate::special::{ln_gamma, principal_power, LogComplex};
use crate::twist::context::{s_ell, TwistContext};
use crate::twist::ladder::ratio_to_f64;
use crate::twist::tails::{binomials, ShiftedTails};

const TARGET: f64 = 1e-16;
const DENSE_CAP: u64 = 1 << 23;
const SQUARES_CAP: u64 = 3_000_000;
const MAX_ORDER: usize = 80;
/// Below this real part the lacunary F_X is summed in extended precision.
const PRECISE_BELOW: f64 = 0.5;

/// One extrapolation run.
#[derive(Debug, Clone, Serialize)]
pub struct Extrapolation {
    pub value: Complex64,
    pub error: f64,
    pub grid: Vec<f64>,
}

impl TwistContext {
    /// Bound on `sum_{sqrt(n) > v} |a(n)| n^{-sigma} e^{-sqrt(n)/X}`.
    pub(crate) fn damped_tail(&self, v: f64, sigma: f64, x: f64) -> f64 {
        let b = self.form.normalized_bound();
        let g0 = 2.0 * (b.exponent - sigma);
        let (gamma, density) = match self.form.support {
            Support::Squares => (g0, 1.0),
            Support::Progression { modulus, .. } => (g0 + 1.0, 2.0 / modulus as f64),
        };
        let rise = gamma.max(0.0) * x;
        if v <= 2.0 * rise.max(g0.max(0.0) * x) {
            return f64::INFINITY;
        }
        let decay = (-v / x).exp();
        b.constant * (v.powf(g0) * decay + density * v.powf(gamma) * decay * x / (1.0 - rise / v))
    }

    /// `F_X(s, alpha) = sum a(n) e(-alpha sqrt(n)) e^{-sqrt(n)/X} n^{-s}`.
    pub fn f_x_twist(&self, s: Complex64, x: f64) -> Result<ComplexEval> {
        if !(x > 1.0) {
            return Err(Error::Precondition(format!("X must exceed 1, got {x}")));
        }
        let cap = match self.form.support {
            Support::Squares => SQUARES_CAP as f64,
            Support::Progression { .. } => (DENSE_CAP as f64).sqrt(),
        };
        if self.form.support == Support::Squares && s.re < PRECISE_BELOW {
            return self.f_x_squares_precise(s, x, TARGET, cap);
        }
        let mut acc = CompensatedSum::new();
        let mut lo = 0u64;
        let mut v = (8.0 * x).ceil();
        loop {
            let hi = (v * v) as u64;
            for (n, c) in self.form.terms(hi)?.into_iter().filter(|t| t.0 > lo) {
                let damp = (-(n as f64).sqrt() / x).exp();
                acc.add(self.twisted_term(n, c, s) * damp);
            }
            let tail = self.damped_tail(v, s.re, x);
            if tail <= TARGET * acc.abs_sum || v >= cap {
                return Ok(ComplexEval::new(
                    acc.value(),
                    tail + acc.rounding_error(),
                    Method::Direct,
                ));
            }
            lo = hi;
            v = (2.0 * v).min(cap);
        }
    }

    /// The gamma-weighted double series equal to F_X(s, alpha) inside the
    /// strip -2 delta < sigma < -delta.
    pub fn basic_formula_rhs(&self, s: Complex64, x: f64) -> Result<ComplexEval> {
        if !self.in_strip(s) {
            let (lo, hi) = self.strip();
            return Err(Error::Precondition(format!(
                "the identity holds for {lo} < Re s < {hi}, got {s}"
            )));
        }
        if !(x > 1.0) {
            return Err(Error::Precondition(format!("X must exceed 1, got {x}")));
        }
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        let zeta = Complex64::new(self.nu_alpha, -self.lfun.q / (2.0 * x));
        let base = principal_power(Complex64::new(self.half_q(), 0.0), one - 2.0 * s)?
            * (self.form.omega / (i * (2.0 * PI).sqrt()));
        let plus_phase = LogComplex::exp(i * PI * (s + self.mu));
        let minus_phase = LogComplex::exp(-i * PI * (s + self.mu));

        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (l, a) in self.ladder.iter().enumerate() {
            let w = 2.0 * (s - s_ell(l as u32));
            let front = base
                * ln_gamma(2.0 * (one - s) - 0.5 - l as f64)?
                * LogComplex::from_real(ratio_to_f64(a));
            let (sp, sm) = self.dual_pair_sums(s, w, zeta)?;
            let fp = (front * plus_phase).to_complex();
            let fm = (front * minus_phase).to_complex();
            value += fp * sp.value - fm * sm.value;
            error += fp.norm() * sp.error + fm.norm() * sm.error;
        }
        Ok(ComplexEval::new(value, error, Method::Assembled))
    }

    /// `sum_n a*(n) n^{s-1} (1 +- z_X(n))^w` for both signs.
    fn dual_pair_sums(&self, s: Complex64, w: Complex64, zeta: Complex64) -> Result<(ComplexEval, ComplexEval)> {
        let one = Complex64::new(1.0, 0.0);
        let k = (1.0 + w.norm()) * zeta.norm();
        let head_n = self.stratification_head(k);
        let mut plus = CompensatedSum::new();
        let mut minus = CompensatedSum::new();
        for (n, _) in self.form.terms(head_n - 1)? {
            let r = (n as f64).sqrt();
            let a = self.form.a_star(n)? * ((s - 1.0) * (n as f64).ln()).exp();
            let z_im = zeta.im / r;
            // 1 - nu_alpha / sqrt(n) without cancellation
            let minus_re = self.alpha.offset(n) / (r * (r + self.nu_alpha));
            let up = principal_power(Complex64::new(1.0 + self.nu_alpha / r, z_im), w)?;
            let down = principal_power(Complex64::new(minus_re, -z_im), w)?;
            plus.add(up.scale(a));
            minus.add(down.scale(a));
        }
        let binom = binomials(w, MAX_ORDER);
        let mut tails = ShiftedTails::new(&self.lfun, one - s, head_n);
        let ratio = k / (head_n as f64).sqrt();
        let mut tp = Complex64::new(0.0, 0.0);
        let mut tm = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut zpow = one;
        for r in 0..=MAX_ORDER {
            let t = tails.get(r)?;
            let coef = binom[r] * zpow;
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            tp += coef * t.value;
            tm += coef * sign * t.value;
            err += coef.norm() * t.error;
            zpow *= zeta;
            let rest = k.powi(r as i32 + 1) / (1.0 - ratio)
                * self.form.tail_bound(head_n - 1, 1.0 - s.re + 0.5 * (r as f64 + 1.0));
            let scale = (plus.value() + tp).norm().min((minus.value() + tm).norm());
            if rest <= TARGET * scale || (r == MAX_ORDER && rest.is_finite()) {
                return Ok((
                    ComplexEval::new(plus.value() + tp, plus.rounding_error() + err + rest, Method::Stratified),
                    ComplexEval::new(minus.value() + tm, minus.rounding_error() + err + rest, Method::Stratified),
                ));
            }
        }
        Err(Error::AccuracyUnreachable {
            requested: TARGET,
            achieved: f64::INFINITY,
            context: format!("binomial tail of the dual series at s = {s}"),
        })
    }

    /// The pole terms of Sigma_X as `(2 kappa_l Gamma(e_l), e_l)` with
    /// `e_l = 2(s_l - s)`; empty off the spectrum.
    pub(crate) fn sigma_terms(&self, s: Complex64) -> Result<Vec<(LogComplex, Complex64)>> {
        if !self.in_spectrum {
            return Ok(Vec::new());
        }
        (0..=self.h_star)
            .map(|l| {
                let e = 2.0 * (Complex64::new(s_ell(l), 0.0) - s);
                let kappa = self.residue_kappa(l)?;
                Ok((ln_gamma(e)? * LogComplex::from_complex(2.0 * kappa), e))
            })
            .collect()
    }

    /// `Sigma_X(s) = sum_l 2 kappa_l Gamma(2(s_l - s)) X^{2(s_l - s)}`.
    pub fn sigma_x(&self, s: Complex64, x: f64) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (c, e) in self.sigma_terms(s)? {
            total += (c * principal_power(Complex64::new(x, 0.0), e)?).to_complex();
        }
        Ok(total)
    }

    /// `F_X(s) - Sigma_X(s)`, whose X -> infinity limit is F(s, alpha). The
    /// error leaves out the rounding of the constants `2 kappa_l Gamma(e_l)`,
    /// which is returned separately as a bound relative to `|Sigma_X|`.
    fn regularized(&self, s: Complex64, x: f64, terms: &[(LogComplex, Complex64)]) -> Result<(ComplexEval, f64)> {
        let sx = self.sigma_x(s, x)?;
        let constants = 16.0 * f64::EPSILON * sx.norm();
        if self.form.support == Support::Squares && s.re < PRECISE_BELOW {
            let g = self.regularized_squares_precise(s, x, terms, TARGET, SQUARES_CAP as f64)?;
            return Ok((g, constants));
        }
        let fx = self.f_x_twist(s, x)?;
        let g = ComplexEval::new(
            fx.value - sx,
            fx.error + 4.0 * f64::EPSILON * sx.norm(),
            Method::Extrapolated,
        );
        Ok((g, constants))
    }

    /// Richardson extrapolation of `F_X - Sigma_X` on the given X values to
    /// 1/X = 0.
    pub fn extrapolate(&self, s: Complex64, grid: &[f64]) -> Result<Extrapolation> {
        let terms = self.sigma_terms(s)?;
        let samples = grid
            .iter()
            .map(|&x| {
                self.regularized(s, x, &terms)
                    .map(|(g, c)| ComplexEval::new(g.value, g.error + c, g.method))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(neville(grid, &samples))
    }

    /// Largest X the coefficient supply allows.
    pub fn max_x(&self) -> f64 {
        match self.form.support {
            Support::Squares => SQUARES_CAP as f64 / 40.0,
            Support::Progression { .. } => (DENSE_CAP as f64).sqrt() / 40.0,
        }
    }

    /// F(s, alpha) anywhere off the poles.
    pub fn f_twist_continued(&self, s: Complex64) -> Result<ComplexEval> {
        let c = self.continuation(s)?;
        Ok(ComplexEval::new(c.value, c.error, Method::Extrapolated))
    }

    /// The X -> infinity limit of `F_X - Sigma_X` with its diagnostics.
    ///
    /// The regularized sum is analytic in h = 1/X near the real segment, so
    /// it is interpolated at nested Chebyshev-Lobatto nodes in h and
    /// evaluated at h = 0. Each pole term `C_l X^{e_l}` of Sigma_X also gets
    /// a fitted multiple, which soaks up the f64 rounding of `C_l`; the
    /// fitted size is reported so a wrong residue cannot hide.
    /// Each run is checked against the next larger run of its family and
    /// the smallest combined estimate wins.
    pub fn continuation(&self, s: Complex64) -> Result<Continuation> {
        let terms = self.sigma_terms(s)?;
        let exps: Vec<Complex64> = terms.iter().map(|t| t.1).collect();
        let mut cache: BTreeMap<u64, ComplexEval> = BTreeMap::new();
        let mut best: Option<Continuation> = None;
        for &x_top in X_TOPS.iter().filter(|&&x| x <= self.max_x()) {
            for &h_top in H_TOPS {
                let mut runs: Vec<(usize, Fit)> = Vec::new();
                for &intervals in LOBATTO {
                    let h = lobatto(1.0 / x_top, h_top, intervals);
                    let mut samples = Vec::with_capacity(h.len());
                    for &hj in &h {
                        let x = 1.0 / hj;
                        let v = match cache.get(&x.to_bits()) {
                            Some(v) => *v,
                            None => {
                                let v = self.regularized(s, x, &terms)?.0;
                                cache.insert(x.to_bits(), v);
                                v
                            }
                        };
                        samples.push(v);
                    }
                    for step in [4, 2, 1] {
                        let idx: Vec<usize> = (0..=intervals).step_by(step).collect();
                        let hs: Vec<f64> = idx.iter().map(|&i| h[i]).collect();
                        let ss: Vec<ComplexEval> = idx.iter().map(|&i| samples[i]).collect();
                        if let Some(fit) = fit_at_zero(&hs, &ss, &exps) {
                            runs.push((hs.len(), fit));
                        }
                    }
                }
                runs.sort_by_key(|r| r.0);
                runs.dedup_by_key(|r| r.0);
                for pair in runs.windows(2) {
                    let fit = &pair[0].1;
                    let error = (fit.value - pair[1].1.value).norm() + fit.noise;
                    if best.as_ref().map_or(true, |b| error < b.error) {
                        best = Some(Continuation {
                            value: fit.value,
                            error,
                            nodes: pair[0].0,
                            x_range: (1.0 / h_top, x_top),
                            sigma_top: self.sigma_x(s, x_top)?.norm(),
                            sigma_fit: fit.extra.iter().map(|k| k.norm()).sum(),
                        });
                    }
                }
            }
        }
        best.ok_or_else(|| Error::NoConvergence(format!("no usable X range at s = {s}")))
    }
}

/// Result of [`TwistContext::continuation`].
#[derive(Debug, Clone, Serialize)]
pub struct Continuation {
    pub value: Complex64,
    pub error: f64,
    /// Number of interpolation nodes in the winning run.
    pub nodes: usize,
    pub x_range: (f64, f64),
    /// |Sigma_X| at the top of the X range.
    pub sigma_top: f64,
    /// Size of the fitted pole corrections there; rounding-sized next to
    /// `sigma_top` when the residues are right.
    pub sigma_fit: f64,
}

const X_TOPS: &[f64] = &[20.0, 40.0, 80.0];
const H_TOPS: &[f64] = &[0.5, 0.3];
const LOBATTO: &[usize] = &[24, 32];

/// Chebyshev-Lobatto nodes on [a, b], `intervals + 1` of them.
fn lobatto(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|j| 0.5 * (a + b) + 0.5 * (b - a) * (PI * j as f64 / intervals as f64).cos())
        .collect()
}

struct Fit {
    value: Complex64,
    noise: f64,
    /// Coefficients of the extra powers, scaled to 1 at the smallest h.
    extra: Vec<Complex64>,
}

/// Fits `P(h) + sum_l k_l (h / h_min)^{-e_l}` through the samples, with P a
/// polynomial of degree `len - 1 - exps.len()`, and returns `P(0)`, the
/// propagated sample error and the `k_l`.
fn fit_at_zero(h: &[f64], samples: &[ComplexEval], exps: &[Complex64]) -> Option<Fit> {
    let n = h.len();
    let m = exps.len();
    if n < m + 3 {
        return None;
    }
    let (lo, hi) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let chebyshev = |t: f64, k: usize| -> f64 {
        let (mut a, mut b) = (1.0, t);
        match k {
            0 => 1.0,
            _ => {
                for _ in 1..k {
                    (a, b) = (b, 2.0 * t * b - a);
                }
                b
            }
        }
    };
    let degree = n - 1 - m;
    let a = DMatrix::from_fn(n, n, |j, k| {
        if k <= degree {
            Complex64::new(chebyshev((h[j] - mid) / half, k), 0.0)
        } else {
            (-exps[k - degree - 1] * (h[j] / lo).ln()).exp()
        }
    });
    let t0 = -mid / half;
    let b = DVector::from_fn(n, |k, _| {
        if k <= degree {
            Complex64::new(chebyshev(t0, k), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let w = a.transpose().lu().solve(&b)?;
    let g = DVector::from_fn(n, |j, _| samples[j].value);
    let coef = a.lu().solve(&g)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut noise = 0.0;
    for j in 0..n {
        value += w[j] * samples[j].value;
        noise += w[j].norm() * samples[j].error;
    }
    Some(Fit {
        value,
        noise,
        extra: (degree + 1..n).map(|k| coef[k]).collect(),
    })
}

/// Polynomial extrapolation in h = 1/X to h = 0; the error combines the
/// last table correction with the propagated sample errors.
fn neville(grid: &[f64], samples: &[ComplexEval]) -> Extrapolation {
    let h: Vec<f64> = grid.iter().map(|x| 1.0 / x).collect();
    let n = h.len();
    let mut table: Vec<Complex64> = samples.iter().map(|e| e.value).collect();
    // the estimate from the finest n-1 samples
    let mut finer = table[n - 1];
    for m in 1..n {
        for i in 0..n - m {
            table[i] = (table[i + 1] * h[i] - table[i] * h[i + m]) / (h[i] - h[i + m]);
        }
        if m + 2 == n {
            finer = table[1];
        }
    }
    let last = table[0];
    // Lagrange weights at 0 bound the propagation of sample errors
    let mut propagated = 0.0;
    for j in 0..n {
        let mut wj = 1.0;
        for k in 0..n {
            if k != j {
                wj *= h[k] / (h[k] - h[j]);
            }
        }
        propagated += wj.abs() * samples[j].error;
    }
    Extrapolation {
        value: last,
        error: (last - finer).norm() + propagated,
        grid: grid.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_is_exact_on_polynomials() {
        let grid = [10.0, 20.0, 40.0, 80.0];
        let f = |x: f64| Complex64::new(3.0 + 2.0 / x - 5.0 / (x * x), 1.0 / (x * x * x));
        let samples: Vec<ComplexEval> = grid
            .iter()
            .map(|&x| ComplexEval::new(f(x), 0.0, Method::Direct))
            .collect();
        let e = neville(&grid, &samples);
        assert!((e.value - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }
}
