//! Newton refinement of zeros of F(s, alpha), classification, and the
//! off-tube lower-bound sweep.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{ln_gamma, principal_power};
use crate::twist::TwistContext;
use crate::zeros::tube::TubeData;

const DIFF_STEP: f64 = 1e-5;
const MAX_STEP: f64 = 0.5;
const MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    Trivial,
    Nontrivial,
    Unclassified,
}

/// Thresholds used to label zeros; reported with every zero list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classifier {
    pub eps: f64,
    pub sigma_eps: f64,
    pub sigma_minus: f64,
    pub sigma_plus: f64,
}

impl Classifier {
    pub fn kind(&self, s: Complex64, distance: f64) -> ZeroKind {
        if distance < self.eps && s.re < -self.sigma_eps {
            ZeroKind::Trivial
        } else if s.re >= -self.sigma_minus && s.re <= self.sigma_plus {
            ZeroKind::Nontrivial
        } else {
            ZeroKind::Unclassified
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub location: Complex64,
    /// Size of the last Newton step `|F / F'|`.
    pub residual: f64,
    pub kind: ZeroKind,
    pub seed: Complex64,
    pub distance_to_line: f64,
    pub iterations: usize,
}

/// F(s, alpha) on the left of the abscissa, through the functional equation.
pub fn f_left(ctx: &TwistContext, s: Complex64) -> Result<Complex64> {
    Ok(ctx.fe_rhs(s)?.value)
}

fn derivative(ctx: &TwistContext, s: Complex64) -> Result<Complex64> {
    let h = DIFF_STEP;
    let up = f_left(ctx, s + h)?;
    let down = f_left(ctx, s - h)?;
    Ok((up - down) / (2.0 * h))
}

/// Newton iteration from `seed` until the step drops below `tol`.
///
/// Fails rather than returning an unconverged point: a non-finite value,
/// a walk further than `max_wander` from the seed, or the iteration limit.
pub fn refine_zero(
    ctx: &TwistContext,
    tube: &TubeData,
    classifier: &Classifier,
    seed: Complex64,
    tol: f64,
    max_wander: f64,
) -> Result<ZeroRecord> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let mut z = seed;
    for it in 1..=MAX_ITER {
        let f = f_left(ctx, z)?;
        let df = derivative(ctx, z)?;
        let mut step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(Error::NoConvergence(format!("Newton step not finite at {z} (seed {seed})")));
        }
        let size = step.norm();
        if size > MAX_STEP {
            step *= MAX_STEP / size;
        }
        z -= step;
        if (z - seed).norm() > max_wander {
            return Err(Error::NoConvergence(format!(
                "Newton left the disc of radius {max_wander} around seed {seed}"
            )));
        }
        if size < tol {
            let distance = tube.distance(z);
            return Ok(ZeroRecord {
                location: z,
                residual: size,
                kind: classifier.kind(z, distance),
                seed,
                distance_to_line: distance,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence(format!("no convergence from seed {seed} in {MAX_ITER} steps")))
}

/// Refinements of many seeds, with pairs that landed on the same zero.
#[derive(Debug, Clone, Serialize)]
pub struct RefinedSet {
    pub zeros: Vec<ZeroRecord>,
    /// Seeds whose iteration failed, with the reason.
    pub failures: Vec<(Complex64, String)>,
    /// Index pairs into `zeros` closer than the collision radius.
    pub collisions: Vec<(usize, usize)>,
}

pub fn refine_all(
    ctx: &TwistContext,
    tube: &TubeData,
    classifier: &Classifier,
    seeds: &[Complex64],
    tol: f64,
    max_wander: f64,
) -> RefinedSet {
    let mut zeros = Vec::new();
    let mut failures = Vec::new();
    for &seed in seeds {
        match refine_zero(ctx, tube, classifier, seed, tol, max_wander) {
            Ok(z) => zeros.push(z),
            Err(e) => failures.push((seed, e.to_string())),
        }
    }
    let radius = (1e3 * tol).max(1e-6);
    let mut collisions = Vec::new();
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            if (zeros[i].location - zeros[j].location).norm() < radius {
                collisions.push((i, j));
            }
        }
    }
    RefinedSet { zeros, failures, collisions }
}

/// `|H(1 - s)| / rho(1 - s)`: F(s, alpha) stripped of the gamma factor and
/// the conductor power, relative to the larger term of W(1 - s).
pub fn tube_ratio(ctx: &TwistContext, tube: &TubeData, s: Complex64) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let f = f_left(ctx, s)?;
    let front = principal_power(Complex64::new(ctx.half_q(), 0.0), one - 2.0 * s)?
        * ln_gamma(2.0 * (one - s) - 0.5)?;
    let scale = front.modulus().ln() - 0.5 * (2.0 * PI).ln() + tube.ln_rho(s);
    Ok((f.norm().ln() - scale).exp())
}

/// Lower bound `|W(1-s)| >= (1 - e^{-2 pi |delta|}) rho(1-s)` at vertical
/// offset `delta` from the line, halved to leave room for the remainder.
pub fn sweep_threshold(delta: f64) -> f64 {
    0.5 * (1.0 - (-2.0 * PI * delta.abs()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepReport {
    pub points: usize,
    /// Smallest ratio of `tube_ratio` to its threshold.
    pub min_margin: f64,
    pub worst: Complex64,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.min_margin >= 1.0
    }
}

/// Vertical offsets probed at each sigma, for a tube of Euclidean width `eps`.
fn offsets(tube: &TubeData, eps: f64) -> Vec<f64> {
    let base = tube.vertical(eps);
    let mut out = Vec::new();
    for f in [1.0, 1.25, 1.5, 2.0, 3.0, 5.0] {
        out.push(base * f);
    }
    for d in [1.0, 2.0, 4.0] {
        if d > base {
            out.push(d);
        }
    }
    out.iter().flat_map(|&d| [d, -d]).collect()
}

/// Checks the lower bound at every sigma in `sigmas` on both sides of the tube.
pub fn off_tube_sweep(ctx: &TwistContext, tube: &TubeData, eps: f64, sigmas: &[f64]) -> Result<SweepReport> {
    let deltas = offsets(tube, eps);
    let mut report = SweepReport { points: 0, min_margin: f64::INFINITY, worst: Complex64::new(0.0, 0.0) };
    for &sigma in sigmas {
        for &d in &deltas {
            let s = Complex64::new(sigma, tube.line_t(sigma) + d);
            let margin = tube_ratio(ctx, tube, s)? / sweep_threshold(d);
            report.points += 1;
            if margin < report.min_margin {
                report.min_margin = margin;
                report.worst = s;
            }
        }
    }
    Ok(report)
}

/// Smallest `sigma_eps >= 0` such that the sweep holds on a `step` mesh from
/// `-floor` to `-sigma_eps`, the last failing cell refined by bisection.
pub fn sigma_epsilon(ctx: &TwistContext, tube: &TubeData, eps: f64, floor: f64, step: f64) -> Result<f64> {
    let ok = |sigma: f64| -> Result<bool> { Ok(off_tube_sweep(ctx, tube, eps, &[sigma])?.holds()) };
    if !ok(-floor)? {
        return Err(Error::Precondition(format!(
            "off-tube bound fails already at sigma = {}",
            -floor
        )));
    }
    let mut good = -floor;
    loop {
        let next = good + step;
        if next >= 0.0 {
            return Ok(0.0);
        }
        if !ok(next)? {
            let mut bad = next;
            while bad - good > 1e-3 {
                let mid = 0.5 * (good + bad);
                if ok(mid)? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            return Ok(-good);
        }
        good = next;
    }
}
