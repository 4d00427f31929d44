//! The verification suites behind each command. Every suite returns plain
//! records; rendering and exit codes live in the binary.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use twistlab::qseries::PRESET_NAMES;
use twistlab::twist::TwistContext;
use twistlab::zeros::{
    direct_switch, growth_probe, log_spaced, off_tube_sweep, predicted_trivial_zeros, refine_all, rvm_comparison,
    sigma_epsilon, sigma_plus, tube_data, Classifier, TubeData, ZeroRecord,
};

use crate::config::{AlphaSpec, ConfigError, RunConfig};
use crate::record::{point_label, Quantity, Record};

pub const BASIC_TOL: f64 = 1e-8;
pub const FE_TOL: f64 = 1e-6;
pub const DECAY_SLACK: f64 = 1e-2;
pub const RESIDUE_TOL: f64 = 1e-5;
pub const NO_POLE_TOL: f64 = 1e-6;
pub const RESIDUE_CONSTANT_TOL: f64 = 1e-6;
pub const TUBE_EPS: f64 = 0.05;
pub const SWEEP_EPS: f64 = 0.3;
pub const WINDOW_TOL: f64 = 0.1;
pub const ZERO_TOL: f64 = 1e-10;
pub const GROWTH_LEFT_TOL: f64 = 0.15;
pub const GROWTH_RIGHT_TOL: f64 = 0.1;

/// Ten points with -1.5 <= sigma <= -0.3 and |t| <= 10.
pub fn fe_grid() -> Vec<Complex64> {
    [
        (-1.5, 0.5),
        (-1.35, -1.5),
        (-1.2, 2.5),
        (-1.1, -3.5),
        (-0.95, 4.5),
        (-0.8, -5.5),
        (-0.7, 6.5),
        (-0.55, -7.5),
        (-0.4, 8.5),
        (-0.3, -10.0),
    ]
    .iter()
    .map(|&(re, im)| Complex64::new(re, im))
    .collect()
}

/// Three real parts across the strip of the basic formula, two heights each.
pub fn strip_points(ctx: &TwistContext) -> Vec<Complex64> {
    let (lo, hi) = ctx.strip();
    let mut out = Vec::new();
    for f in [0.15, 0.5, 0.85] {
        for t in [1.3, -4.0] {
            out.push(Complex64::new(lo + f * (hi - lo), t));
        }
    }
    out
}

/// Strip points close to the real axis, where the gap reaches its
/// asymptotic regime at moderate X.
pub fn decay_points(ctx: &TwistContext) -> Vec<Complex64> {
    let (lo, hi) = ctx.strip();
    [(0.1, 1.3), (0.5, -2.0), (0.875, 0.5), (0.25, 2.5), (0.75, -1.0)]
        .iter()
        .map(|&(f, t)| Complex64::new(lo + f * (hi - lo), t))
        .collect()
}

pub fn decay_grid(ctx: &TwistContext) -> Vec<f64> {
    if ctx.max_x() >= 320.0 {
        vec![20.0, 40.0, 80.0, 160.0, 320.0]
    } else {
        vec![20.0, 30.0, 45.0, 70.0]
    }
}

struct Scope<'a> {
    suite: &'a str,
    form: String,
    alpha: String,
}

impl Scope<'_> {
    fn new<'a>(suite: &'a str, cfg: &RunConfig) -> Scope<'a> {
        Scope { suite, form: cfg.form.clone(), alpha: cfg.alpha_label() }
    }

    fn base(&self, name: &str, point: Option<Complex64>) -> Record {
        Record {
            suite: self.suite.to_string(),
            paper_eq: name.to_string(),
            form: self.form.clone(),
            alpha: self.alpha.clone(),
            point: point.map(point_label),
            lhs: None,
            rhs: None,
            residual: None,
            tolerance: None,
            pass: None,
            note: None,
        }
    }

    fn check(
        &self,
        name: &str,
        point: Option<Complex64>,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        residual: f64,
        tolerance: f64,
    ) -> Record {
        Record {
            lhs: Some(lhs.into()),
            rhs: Some(rhs.into()),
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass: Some(residual <= tolerance),
            ..self.base(name, point)
        }
    }

    fn failure(&self, name: &str, point: Option<Complex64>, err: impl ToString) -> Record {
        Record { pass: Some(false), note: Some(err.to_string()), ..self.base(name, point) }
    }

    fn info(&self, name: &str, point: Option<Complex64>, value: impl Into<Quantity>, note: String) -> Record {
        Record { lhs: Some(value.into()), note: Some(note), ..self.base(name, point) }
    }
}

/// The preset table.
pub fn forms() -> Result<Vec<Record>, ConfigError> {
    let mut out = Vec::new();
    for name in PRESET_NAMES {
        let form = twistlab::qseries::build_preset(name)?;
        let scope = Scope { suite: "forms", form: name.to_string(), alpha: String::new() };
        let note = format!(
            "{name} k={}/2 N={} h*={} support={:?} lacunary={}",
            form.k,
            form.level,
            form.h_star(),
            form.support,
            form.lacunary_profile().is_some()
        );
        out.push(scope.info("form", None, form.level as i64, note));
    }
    Ok(out)
}

/// F(s, alpha) at one point: the direct series right of the abscissa,
/// the functional equation elsewhere.
pub fn evaluate(cfg: &RunConfig) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let s = cfg.s.ok_or_else(|| ConfigError("eval needs --s re,im".into()))?;
    let scope = Scope::new("eval", cfg);
    let result = if s.re >= direct_switch(&ctx) { ctx.twist_direct(s) } else { ctx.fe_rhs(s) };
    Ok(vec![match result {
        Ok(v) => Record {
            residual: Some(v.error),
            ..scope.info(
                "twisted_value",
                Some(s),
                v.value,
                format!("{} via {:?}, residual is the error estimate", point_label(v.value), v.method),
            )
        },
        Err(e) => scope.failure("twisted_value", Some(s), e),
    }])
}

/// F_X against the gamma-weighted double series inside the strip.
pub fn verify_basic(cfg: &RunConfig) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("verify-basic", cfg);
    let tol = cfg.tol.unwrap_or(BASIC_TOL);
    let points = cfg.points.clone().unwrap_or_else(|| strip_points(&ctx));
    let mut out = Vec::new();
    for &s in &points {
        for &x in &cfg.xgrid {
            let name = format!("basic_formula_x{x}");
            let pair = ctx.f_x_twist(s, x).and_then(|l| Ok((l.value, ctx.basic_formula_rhs(s, x)?.value)));
            out.push(match pair {
                Ok((lhs, rhs)) => scope.check(&name, Some(s), lhs, rhs, (lhs - rhs).norm() / lhs.norm(), tol),
                Err(e) => scope.failure(&name, Some(s), e),
            });
        }
    }
    Ok(out)
}

/// Least-squares exponent `p` in `ln g = a + p ln X + c / X`.
pub fn decay_exponent(xs: &[f64], gaps: &[f64]) -> f64 {
    let rows: Vec<[f64; 3]> = xs.iter().map(|x| [1.0, x.ln(), 1.0 / x]).collect();
    let mut m = [[0.0; 4]; 3];
    for (row, g) in rows.iter().zip(gaps) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            m[i][3] += row[i] * g.ln();
        }
    }
    // Gaussian elimination with partial pivoting on the normal equations
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, pivot);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for k in col..4 {
                m[r][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let tail: f64 = (r + 1..3).map(|k| m[r][k] * x[k]).sum();
        x[r] = (m[r][3] - tail) / m[r][r];
    }
    x[1]
}

/// The continued twist against the functional-equation side, and the decay
/// of the regularized gap at finite X.
pub fn verify_fe(cfg: &RunConfig) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("verify-fe", cfg);
    let tol = cfg.tol.unwrap_or(FE_TOL);
    let mut out = Vec::new();
    for s in cfg.points.clone().unwrap_or_else(fe_grid) {
        let pair = ctx.continuation(s).and_then(|l| Ok((l, ctx.fe_rhs(s)?.value)));
        out.push(match pair {
            Ok((cont, rhs)) => {
                let mut r = scope.check(
                    "twisted_functional_equation",
                    Some(s),
                    cont.value,
                    rhs,
                    (cont.value - rhs).norm() / rhs.norm().max(1.0),
                    tol,
                );
                r.note = Some(format!("continuation error estimate {:.1e}", cont.error));
                r
            }
            Err(e) => scope.failure("twisted_functional_equation", Some(s), e),
        });
    }
    let xs = decay_grid(&ctx);
    for s in decay_points(&ctx) {
        let gaps = ctx.fe_rhs(s).and_then(|rhs| {
            xs.iter()
                .map(|&x| Ok((ctx.f_x_twist(s, x)?.value - ctx.sigma_x(s, x)? - rhs.value).norm()))
                .collect::<twistlab::Result<Vec<f64>>>()
        });
        out.push(match gaps {
            Ok(g) => {
                let p = decay_exponent(&xs, &g);
                let mut r = scope.check("regularized_gap_decay", Some(s), p, -1.0, p + 1.0, DECAY_SLACK);
                r.note = Some(format!("X = {xs:?}"));
                r
            }
            Err(e) => scope.failure("regularized_gap_decay", Some(s), e),
        });
    }
    Ok(out)
}

/// `(1 / 2 pi i) \oint f` over a circle, by the trapezoid rule.
pub fn circle_residue<F>(f: F, center: Complex64, radius: f64, points: usize) -> twistlab::Result<Complex64>
where
    F: Fn(Complex64) -> twistlab::Result<Complex64>,
{
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..points {
        let w = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / points as f64);
        total += f(center + w)? * w;
    }
    Ok(total / points as f64)
}

fn spectral_indices(ctx: &TwistContext, count: usize) -> Result<Vec<u64>, ConfigError> {
    let mut hi = 256;
    loop {
        let terms = ctx.form.terms(hi)?;
        if terms.len() >= count {
            return Ok(terms.iter().take(count).map(|t| t.0).collect());
        }
        hi *= 4;
    }
}

/// Residue at s0 against the closed form, or its absence off the spectrum,
/// and the alpha-independence of the residue constant.
pub fn residues(cfg: &RunConfig) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("residues", cfg);
    let s0 = Complex64::new(0.75, 0.0);
    let circle = |t: &TwistContext| circle_residue(|s| Ok(t.fe_rhs(s)?.value), s0, 1e-3, 16);
    let mut out = Vec::new();
    let kappa = ctx.residue_kappa(0)?;
    out.push(match circle(&ctx) {
        Ok(got) if ctx.in_spectrum => scope.check(
            "residue_at_s0",
            Some(s0),
            got,
            kappa,
            (got - kappa).norm() / kappa.norm(),
            cfg.tol.unwrap_or(RESIDUE_TOL),
        ),
        Ok(got) => scope.check("no_pole_off_spectrum", Some(s0), got, kappa, got.norm(), NO_POLE_TOL),
        Err(e) => scope.failure("residue_at_s0", Some(s0), e),
    });
    let mut reference: Option<Complex64> = None;
    for n in spectral_indices(&ctx, 3)? {
        let spec = AlphaSpec::NAlpha { p: n as i128, q: 1 };
        let t = cfg.context_for(spec)?;
        let constant = t.residue_kappa(0)? * (n as f64).powf(0.25) / t.a_star_n_alpha;
        let r = *reference.get_or_insert(constant);
        let mut rec = scope.check(
            "residue_constant",
            None,
            constant,
            r,
            (constant - r).norm() / r.norm(),
            RESIDUE_CONSTANT_TOL,
        );
        rec.note = Some(format!("n_alpha={n}"));
        out.push(rec);
    }
    Ok(out)
}

/// Real part of the left edge used for zero counting: the equal-argument
/// point of the trivial-zero line nearest to sigma = -3.
pub fn sigma_minus(tube: &TubeData) -> f64 {
    -tube.crossing_sigma(tube.crossing_index(-3.0).floor() + 0.5)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrivialZeros {
    pub records: Vec<Record>,
    pub zeros: Vec<ZeroRecord>,
    pub classifier: Classifier,
    pub tube: TubeData,
}

/// Seeds from the tube geometry, refined by Newton, with the off-tube
/// sweep and the window counts.
pub fn trivial_zeros(cfg: &RunConfig) -> Result<TrivialZeros, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("trivial-zeros", cfg);
    let (a, b) = cfg.range;
    let tube = tube_data(&ctx)?;
    let mut records = vec![scope.info(
        "trivial_zero_line",
        None,
        tube.slope,
        format!(
            "slope={:.6} intercept={:.6} m+={:.6} m-={:.6} nu+={} nu-={}",
            tube.slope,
            tube.intercept,
            tube.plus.m,
            tube.minus.m,
            tube.plus.nu(),
            tube.minus.nu()
        ),
    )];
    let sigma_eps = sigma_epsilon(&ctx, &tube, TUBE_EPS, b, 0.25)?;
    let classifier = Classifier {
        eps: TUBE_EPS,
        sigma_eps,
        sigma_minus: sigma_minus(&tube),
        sigma_plus: sigma_plus(&ctx),
    };
    records.push(scope.info(
        "sigma_eps",
        None,
        sigma_eps,
        format!(
            "eps={TUBE_EPS} sigma-={:.6} sigma+={}",
            classifier.sigma_minus, classifier.sigma_plus
        ),
    ));
    let seeds = predicted_trivial_zeros(&tube, b, a)?;
    let set = refine_all(&ctx, &tube, &classifier, &seeds, ZERO_TOL, 1.0);
    for z in &set.zeros {
        let mut r = scope.check("trivial_zero_in_tube", Some(z.location), z.distance_to_line, 0.0, z.distance_to_line, TUBE_EPS);
        r.note = Some(format!("{:?}, step {:.1e}", z.kind, z.residual));
        records.push(r);
    }
    for (seed, err) in &set.failures {
        records.push(scope.failure("trivial_zero_in_tube", Some(*seed), err));
    }
    for (i, j) in &set.collisions {
        records.push(scope.failure(
            "trivial_zero_collision",
            Some(set.zeros[*i].location),
            format!("seeds {} and {} converge together", set.zeros[*i].seed, set.zeros[*j].seed),
        ));
    }
    let mesh: Vec<f64> = (0..)
        .map(|j| -b + 0.25 * j as f64)
        .take_while(|s| *s <= -a + 1e-12)
        .collect();
    let sweep = off_tube_sweep(&ctx, &tube, SWEEP_EPS, &mesh)?;
    let mut r = scope.check("off_tube_lower_bound", Some(sweep.worst), sweep.min_margin, 1.0, 1.0 / sweep.min_margin, 1.0);
    r.note = Some(format!("eps={SWEEP_EPS}, {} points", sweep.points));
    records.push(r);
    let width = 10.0f64.min((b - a) / 2.0);
    let count = |lo: f64, hi: f64| {
        set.zeros.iter().filter(|z| z.location.re >= lo && z.location.re < hi).count() as i64
    };
    let (far, near) = (count(-b, -b + width), count(-b + width, -b + 2.0 * width));
    let spread = (far - near).abs() as f64 / far.max(near).max(1) as f64;
    let mut r = scope.check("trivial_zero_density", None, far, near, spread, WINDOW_TOL);
    r.note = Some(format!("windows of width {width} from sigma = {}", -b));
    records.push(r);
    Ok(TrivialZeros { records, zeros: set.zeros, classifier, tube })
}

/// Zero counts on `[-sigma_minus, sigma_plus] x [-T, T]` at T/2 and T
/// against the main terms.
pub fn count_zeros(cfg: &RunConfig) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("count-zeros", cfg);
    let tube = tube_data(&ctx)?;
    let sm = sigma_minus(&tube);
    let mut out = Vec::new();
    let mut deviations = Vec::new();
    for t in [cfg.t / 2.0, cfg.t] {
        match rvm_comparison(&ctx, &tube, sm, t) {
            Ok(c) => {
                deviations.push(c.deviation);
                let mut r = scope.info(
                    "zero_count",
                    None,
                    c.zeros,
                    format!(
                        "T={} winding={} poles={} main={:.6} first_term_dominates={}",
                        c.t, c.winding, c.poles, c.prediction, c.first_term_dominates
                    ),
                );
                r.rhs = Some(c.prediction.into());
                r.residual = Some(c.deviation.abs());
                out.push(r);
            }
            Err(e) => out.push(scope.failure("zero_count", None, e)),
        }
    }
    if let [small, large] = deviations[..] {
        let ratio = large.abs() / small.abs();
        let bound = cfg.t.ln() / (cfg.t / 2.0).ln() + 0.5;
        let mut r = scope.check("zero_count_log_growth", None, ratio, bound, ratio, bound);
        r.note = Some(format!("T = {} and {}", cfg.t / 2.0, cfg.t));
        out.push(r);
    }
    Ok(out)
}

/// Growth exponents of |F(sigma + it)| in t on each side.
pub fn growth(cfg: &RunConfig, sigma: f64) -> Result<Vec<Record>, ConfigError> {
    let ctx = cfg.context()?;
    let scope = Scope::new("growth", cfg);
    let ts = log_spaced(cfg.tmin, cfg.tmax, 25);
    let expected = if sigma <= 0.0 {
        Some((1.0 - 2.0 * sigma, GROWTH_LEFT_TOL))
    } else if sigma >= direct_switch(&ctx) {
        Some((0.0, GROWTH_RIGHT_TOL))
    } else {
        None
    };
    let point = Some(Complex64::new(sigma, 0.0));
    Ok(match growth_probe(&ctx, sigma, &ts) {
        Ok(fit) => [("growth_exponent_plus", fit.plus), ("growth_exponent_minus", fit.minus)]
            .into_iter()
            .map(|(name, got)| {
                let mut r = match expected {
                    Some((want, tol)) => scope.check(name, point, got, want, (got - want).abs(), tol),
                    None => scope.info(name, point, got, "no exponent known in this range".into()),
                };
                r.note = Some(format!("t in [{}, {}], 25 points", cfg.tmin, cfg.tmax));
                r
            })
            .collect(),
        Err(e) => vec![scope.failure("growth_exponent", point, e)],
    })
}

/// Everything, for one form and alpha.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub zeros: Vec<ZeroRecord>,
    pub classifier: Classifier,
}

pub fn report(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let mut records = verify_basic(cfg)?;
    records.extend(verify_fe(cfg)?);
    records.extend(residues(cfg)?);
    let tz = trivial_zeros(cfg)?;
    records.extend(tz.records);
    records.extend(count_zeros(cfg)?);
    records.extend(growth(cfg, -1.0)?);
    records.extend(growth(cfg, 2.0)?);
    Ok(Report { records, zeros: tz.zeros, classifier: tz.classifier })
}
