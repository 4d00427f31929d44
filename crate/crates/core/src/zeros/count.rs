//! Zero counting by the argument principle, with adaptive phase tracking
//! along polygonal contours.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::twist::TwistContext;
use crate::zeros::tube::TubeData;

/// Initial sample spacing along each edge.
const START_STEP: f64 = 0.5;
/// Relative accuracy of the direct series on contours.
const CONTOUR_TARGET: f64 = 1e-10;
/// Segments shorter than this mean the contour passes too close to a zero.
const STEP_FLOOR: f64 = 1e-7;
const NUDGE: f64 = 1e-3;
const RETRIES: usize = 3;

fn wrapped(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Phase change of `f` along the segment, with both halves required to move
/// less than a quarter turn and to add up to the whole.
fn track<F>(f: &F, a: Complex64, fa: Complex64, b: Complex64, fb: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let whole = wrapped(fa, fb);
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let d1 = wrapped(fa, fm);
    let d2 = wrapped(fm, fb);
    if d1.abs() < PI / 2.0 && d2.abs() < PI / 2.0 && (d1 + d2 - whole).abs() < 1e-9 {
        return Ok(whole);
    }
    if (b - a).norm() < STEP_FLOOR {
        return Err(Error::NoConvergence(format!("phase tracking step floor reached near {m}")));
    }
    Ok(track(f, a, fa, m, fm)? + track(f, m, fm, b, fb)?)
}

/// Winding number of `f` around the closed polygon through `vertices`.
pub fn winding<F>(f: &F, vertices: &[Complex64]) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if vertices.len() < 3 {
        return Err(Error::Precondition("a contour needs at least three vertices".into()));
    }
    let mut total = 0.0;
    for (j, &a) in vertices.iter().enumerate() {
        let b = vertices[(j + 1) % vertices.len()];
        let pieces = ((b - a).norm() / START_STEP).ceil().max(1.0) as usize;
        let mut za = a;
        let mut fa = f(za)?;
        for p in 1..=pieces {
            let zb = a + (b - a) * (p as f64 / pieces as f64);
            let fb = f(zb)?;
            if fb == Complex64::new(0.0, 0.0) {
                return Err(Error::NoConvergence(format!("contour passes through a zero at {zb}")));
            }
            total += track(f, za, fa, zb, fb)?;
            za = zb;
            fa = fb;
        }
    }
    let turns = total / (2.0 * PI);
    let n = turns.round();
    if (turns - n).abs() > 1e-6 {
        return Err(Error::NoConvergence(format!("winding {turns} is not an integer")));
    }
    Ok(n as i64)
}

/// Winding number, retried on a slightly shifted contour when the walk
/// hits a zero.
pub fn winding_nudged<F>(f: &F, vertices: &[Complex64]) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut last = None;
    for attempt in 0..=RETRIES {
        let shift = Complex64::new(NUDGE, NUDGE * 0.7) * attempt as f64;
        let moved: Vec<Complex64> = vertices.iter().map(|v| v + shift).collect();
        match winding(f, &moved) {
            Ok(n) => return Ok(n),
            Err(e @ Error::NoConvergence(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// F(s, alpha) along a counting contour: the absolutely convergent series
/// right of `switch`, the functional equation elsewhere.
pub fn contour_value(ctx: &TwistContext, s: Complex64, switch: f64) -> Result<Complex64> {
    if s.re >= switch {
        Ok(ctx.twist_direct_to(s, CONTOUR_TARGET)?.value)
    } else {
        Ok(ctx.fe_rhs(s)?.value)
    }
}

/// Real part beyond which the direct series is used on contours.
pub fn direct_switch(ctx: &TwistContext) -> f64 {
    ctx.lfun.safe_abscissa + 0.5
}

/// Zeros minus poles of F(s, alpha) in the rectangle, counterclockwise.
pub fn count_zeros_rectangle(
    ctx: &TwistContext,
    sigma_left: f64,
    sigma_right: f64,
    t_low: f64,
    t_high: f64,
) -> Result<i64> {
    if !(sigma_left < sigma_right && t_low < t_high) {
        return Err(Error::Precondition("rectangle corners out of order".into()));
    }
    let switch = direct_switch(ctx);
    let f = |s: Complex64| contour_value(ctx, s, switch);
    winding_nudged(
        &f,
        &[
            Complex64::new(sigma_left, t_low),
            Complex64::new(sigma_right, t_low),
            Complex64::new(sigma_right, t_high),
            Complex64::new(sigma_left, t_high),
        ],
    )
}

/// Zeros of F(s, alpha) in the tube of vertical half-width `half_width`
/// between the equal-argument points with indices `k0 + 1/2` and `k1 + 1/2`.
pub fn count_zeros_in_tube(ctx: &TwistContext, tube: &TubeData, k0: i64, k1: i64, half_width: f64) -> Result<i64> {
    let s0 = tube.crossing_sigma(k0 as f64 + 0.5);
    let s1 = tube.crossing_sigma(k1 as f64 + 0.5);
    let (lo, hi) = if s0 < s1 { (s0, s1) } else { (s1, s0) };
    let at = |sigma: f64, d: f64| Complex64::new(sigma, tube.line_t(sigma) + d);
    let f = |s: Complex64| Ok(ctx.fe_rhs(s)?.value);
    winding(
        &f,
        &[at(lo, -half_width), at(hi, -half_width), at(hi, half_width), at(lo, half_width)],
    )
}

/// Number of poles of F(s, alpha) inside the rectangle.
pub fn poles_inside(ctx: &TwistContext, sigma_left: f64, sigma_right: f64, t_low: f64, t_high: f64) -> Result<i64> {
    if !ctx.in_spectrum || t_low >= 0.0 || t_high <= 0.0 {
        return Ok(0);
    }
    let mut n = 0;
    for l in 0..=ctx.h_star {
        let s = crate::twist::s_ell(l);
        if s > sigma_left && s < sigma_right && ctx.residue_kappa(l)?.norm() > 0.0 {
            n += 1;
        }
    }
    Ok(n)
}

/// Main terms of the zero count `N_F(T, alpha)`.
pub fn rvm_prediction(ctx: &TwistContext, tube: &TubeData, t: f64) -> Result<f64> {
    if !(t > std::f64::consts::E) {
        return Err(Error::Precondition(format!("T must exceed e, got {t}")));
    }
    let n_bar = first_nonzero(ctx)? as f64;
    let two_pi_e = 2.0 * PI * std::f64::consts::E;
    let inner = ctx.conductor() as f64 / (n_bar * tube.plus.m * tube.minus.m * two_pi_e * two_pi_e);
    Ok(2.0 / PI * t * t.ln() + t / PI * inner.ln())
}

/// Smallest n with a(n) != 0.
pub fn first_nonzero(ctx: &TwistContext) -> Result<u64> {
    let mut hi = 64;
    loop {
        if let Some(&(n, _)) = ctx.form.terms(hi)?.first() {
            return Ok(n);
        }
        if hi > 1 << 20 {
            return Err(Error::EnumerationCap("no nonzero coefficient".into()));
        }
        hi *= 4;
    }
}

/// Right edge for zero counting, one unit past the safe abscissa.
pub fn sigma_plus(ctx: &TwistContext) -> f64 {
    ctx.lfun.safe_abscissa + 1.0
}

/// True when `|a(n_bar)| n_bar^{-sigma}` exceeds the bound on the rest of
/// the series, so that F(s, alpha) has no zeros with real part >= sigma.
pub fn first_term_dominates(ctx: &TwistContext, sigma: f64) -> Result<bool> {
    let n = first_nonzero(ctx)?;
    let lead = ctx.form.a(n)?.abs() * (n as f64).powf(-sigma);
    Ok(ctx.form.tail_bound(n, sigma) < lead)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RvmComparison {
    pub t: f64,
    pub sigma_minus: f64,
    pub sigma_plus: f64,
    pub first_term_dominates: bool,
    /// Winding count of the rectangle.
    pub winding: i64,
    /// Poles inside, added back to the winding count.
    pub poles: i64,
    pub zeros: i64,
    pub prediction: f64,
    pub deviation: f64,
}

/// Zero count in `[-sigma_minus, sigma_plus] x [-T, T]` against the
/// prediction.
pub fn rvm_comparison(ctx: &TwistContext, tube: &TubeData, sigma_minus: f64, t: f64) -> Result<RvmComparison> {
    let sp = sigma_plus(ctx);
    let winding = count_zeros_rectangle(ctx, -sigma_minus, sp, -t, t)?;
    let poles = poles_inside(ctx, -sigma_minus, sp, -t, t)?;
    let zeros = winding + poles;
    let prediction = rvm_prediction(ctx, tube, t)?;
    Ok(RvmComparison {
        t,
        sigma_minus,
        sigma_plus: sp,
        first_term_dominates: first_term_dominates(ctx, sp)?,
        winding,
        poles,
        zeros,
        prediction,
        deviation: zeros as f64 - prediction,
    })
}
