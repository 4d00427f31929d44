//! Geometry of the trivial zeros: the two dominant terms of F*_0 far to the
//! left, the line they balance on, and the zeros of their sum W(1 - s).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Roots;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::twist::{Rational, SignedRoot, TwistContext};

const ENUMERATION_CAP: u64 = 1 << 26;

/// One of the two dominant terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeSide {
    /// `nu` as a signed square root.
    pub n: u64,
    pub negative: bool,
    /// `|nu + nu_alpha|`
    pub m: f64,
    pub c: Complex64,
    pub rho: f64,
    /// In [0, 2 pi).
    pub theta: f64,
}

impl TubeSide {
    pub fn nu(&self) -> f64 {
        SignedRoot { n: self.n, negative: self.negative }.value()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeData {
    pub plus: TubeSide,
    pub minus: TubeSide,
    /// `m_+` and `m_-` as fractions when both are rational.
    #[serde(skip)]
    pub exact_m: Option<(Rational, Rational)>,
    pub slope: f64,
    pub intercept: f64,
}

/// Square root of a non-negative fraction when it is itself a fraction.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let (p, q) = (*r.numer(), *r.denom());
    if p < 0 {
        return None;
    }
    let (sp, sq) = (p.sqrt(), q.sqrt());
    (sp * sp == p && sq * sq == q).then(|| Rational::new(sp, sq))
}

fn make_side(ctx: &TwistContext, nu: SignedRoot) -> Result<TubeSide> {
    let m = ctx.shifted_modulus(nu);
    let c = ctx.c_star(nu, 0)? * m.sqrt() / (nu.n as f64).powf(0.25);
    let theta = c.arg().rem_euclid(2.0 * PI);
    Ok(TubeSide { n: nu.n, negative: nu.negative, m, c, rho: c.norm(), theta })
}

/// Finds the coefficients nearest to `-nu_alpha` on either side.
pub fn tube_data(ctx: &TwistContext) -> Result<TubeData> {
    let n_alpha = ctx.nu_alpha * ctx.nu_alpha;
    let mut hi = ((4.0 * n_alpha).ceil() as u64).max(64);
    loop {
        let mut plus: Option<(f64, SignedRoot)> = None;
        let mut minus: Option<(f64, SignedRoot)> = None;
        for (n, _) in ctx.form.terms(hi)? {
            let mut candidates = vec![SignedRoot { n, negative: true }];
            if plus.is_none() {
                // only the smallest positive root can win
                candidates.push(SignedRoot { n, negative: false });
            }
            for nu in candidates {
                let Ok(is_plus) = ctx.is_plus_side(nu) else {
                    continue;
                };
                let m = ctx.shifted_modulus(nu);
                let best = if is_plus { &mut plus } else { &mut minus };
                if best.map_or(true, |(bm, _)| m < bm) {
                    *best = Some((m, nu));
                }
            }
            if minus.is_some() {
                // minus-side moduli increase with n from here on
                break;
            }
        }
        if let (Some((_, p)), Some((_, q))) = (plus, minus) {
            return finish(ctx, p, q);
        }
        if hi >= ENUMERATION_CAP {
            return Err(Error::EnumerationCap(format!(
                "no coefficient on both sides of -nu_alpha below n = {hi}"
            )));
        }
        hi = (hi * 4).min(ENUMERATION_CAP);
    }
}

fn finish(ctx: &TwistContext, p: SignedRoot, q: SignedRoot) -> Result<TubeData> {
    let plus = make_side(ctx, p)?;
    let minus = make_side(ctx, q)?;
    let exact_m = rational_sqrt(&ctx.alpha.n_alpha).and_then(|nu_a| {
        let root = |nu: SignedRoot| {
            let v = (nu.n as i128).sqrt();
            (v * v == nu.n as i128).then(|| Rational::from_integer(if nu.negative { -v } else { v }))
        };
        Some(((root(p)? + nu_a).abs(), (root(q)? + nu_a).abs()))
    });
    let slope = (plus.m / minus.m).ln() / PI;
    let intercept = (plus.rho * minus.m * minus.m / (minus.rho * plus.m * plus.m)).ln() / (2.0 * PI);
    Ok(TubeData { plus, minus, exact_m, slope, intercept })
}

impl TubeData {
    /// The line `t = slope sigma + intercept`.
    pub fn line_t(&self, sigma: f64) -> f64 {
        self.slope * sigma + self.intercept
    }

    /// Euclidean distance from `s` to the line.
    pub fn distance(&self, s: Complex64) -> f64 {
        (s.im - self.line_t(s.re)).abs() / (1.0 + self.slope * self.slope).sqrt()
    }

    /// Vertical offset equivalent to a Euclidean distance `d`.
    pub fn vertical(&self, d: f64) -> f64 {
        d * (1.0 + self.slope * self.slope).sqrt()
    }

    /// Real part of the intersection with the k-th argument line; half-integer
    /// `k + 1/2` gives the points between consecutive zeros where the two
    /// terms of W have equal argument.
    pub fn crossing_sigma(&self, k: f64) -> f64 {
        let a = self.slope;
        ((2.0 * k + 1.0) * PI - (self.plus.theta - self.minus.theta) - 2.0 * PI * a * self.intercept)
            / (2.0 * PI * (1.0 + a * a))
    }

    /// `k` (real) at which the crossing has real part `sigma`.
    pub fn crossing_index(&self, sigma: f64) -> f64 {
        let a = self.slope;
        (sigma * 2.0 * PI * (1.0 + a * a) + (self.plus.theta - self.minus.theta) + 2.0 * PI * a * self.intercept)
            / (2.0 * PI)
            - 0.5
    }

    /// Zeros of W per unit of sigma.
    pub fn density(&self) -> f64 {
        1.0 + self.slope * self.slope
    }

    /// Logs of the moduli of the two terms of W(1 - s).
    fn log_terms(&self, s: Complex64) -> (f64, f64) {
        let u = 1.0 - s.re;
        let lp = -PI * s.im + self.plus.rho.ln() - 2.0 * u * self.plus.m.ln();
        let lm = PI * s.im + self.minus.rho.ln() - 2.0 * u * self.minus.m.ln();
        (lp, lm)
    }

    /// log of the larger of the two terms of W(1 - s).
    pub fn ln_rho(&self, s: Complex64) -> f64 {
        let (a, b) = self.log_terms(s);
        a.max(b)
    }

    /// W(1 - s) divided by its larger term's modulus.
    pub fn w_normalized(&self, s: Complex64) -> Complex64 {
        let i = Complex64::i();
        let u = 1.0 - s;
        let top = self.ln_rho(s);
        let term = |side: &TubeSide, sign: f64| {
            (sign * -i * PI * u + side.c.ln() - 2.0 * u * side.m.ln() - top).exp()
        };
        term(&self.plus, 1.0) + term(&self.minus, -1.0)
    }
}

/// Zeros of W(1 - s) with real part in `[-r, -sigma_min]`, ordered by real part.
pub fn predicted_trivial_zeros(tube: &TubeData, r: f64, sigma_min: f64) -> Result<Vec<Complex64>> {
    if !(r > 0.0) || sigma_min > r {
        return Err(Error::Precondition(format!(
            "need 0 < R and sigma_min <= R, got R = {r}, sigma_min = {sigma_min}"
        )));
    }
    let k0 = tube.crossing_index(-r).ceil() as i64;
    let k1 = tube.crossing_index(-sigma_min).floor() as i64;
    Ok((k0..=k1)
        .map(|k| {
            let sigma = tube.crossing_sigma(k as f64);
            Complex64::new(sigma, tube.line_t(sigma))
        })
        .filter(|s| s.re >= -r && s.re <= -sigma_min)
        .collect())
}
