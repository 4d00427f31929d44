//! Growth exponent of |F(sigma + it, alpha)| in t, fitted separately for
//! t -> +infinity and t -> -infinity.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::twist::TwistContext;
use crate::zeros::count::{contour_value, direct_switch};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub sigma: f64,
    /// Slope of log|F| against log t for t > 0.
    pub plus: f64,
    /// The same for t < 0, against log|t|.
    pub minus: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least-squares growth exponents over the positive values in `t_list`.
pub fn growth_probe(ctx: &TwistContext, sigma: f64, t_list: &[f64]) -> Result<GrowthFit> {
    let ts: Vec<f64> = t_list.iter().copied().filter(|t| *t > 0.0).collect();
    let (lo, hi) = ts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if ts.len() < 3 || hi < 10.0 * lo * (1.0 - 1e-9) {
        return Err(Error::Precondition(
            "growth fit needs at least three positive t spanning a decade".into(),
        ));
    }
    let switch = direct_switch(ctx);
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let fit = |sign: f64| -> Result<f64> {
        let mut ys = Vec::with_capacity(ts.len());
        for &t in &ts {
            let v = contour_value(ctx, Complex64::new(sigma, sign * t), switch)?;
            ys.push(v.norm().ln());
        }
        Ok(slope(&xs, &ys))
    };
    let plus = fit(1.0)?;
    let minus = fit(-1.0)?;
    Ok(GrowthFit { sigma, plus, minus })
}

/// `count` points spaced evenly in log t over `[t_min, t_max]`.
pub fn log_spaced(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..count)
        .map(|j| (a + (b - a) * j as f64 / (count - 1).max(1) as f64).exp())
        .collect()
}
