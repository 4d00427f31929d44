//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use twistlab::qseries::{build_preset, HalfIntegralForm};
use twistlab::twist::{Alpha, ExactRational, Rational, TwistContext, DEFAULT_DELTA};

/// Configuration problems; they map to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<twistlab::Error> for ConfigError {
    fn from(e: twistlab::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// How alpha was given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSpec {
    Alpha { p: i128, q: i128 },
    NAlpha { p: i128, q: i128 },
}

/// Raw settings before validation; every field optional so that files and
/// flags can be merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub form: Option<String>,
    pub alpha: Option<String>,
    pub n_alpha: Option<String>,
    pub delta: Option<f64>,
    pub xgrid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub points: Option<String>,
    pub range: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub sigma: Option<f64>,
    pub tmin: Option<f64>,
    pub tmax: Option<f64>,
    pub max: Option<u64>,
    pub s: Option<String>,
}

fn parse_list(key: &str, text: &str) -> Result<Vec<f64>, ConfigError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("{key}: '{x}' is not a number")))
        })
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, ConfigError> {
    text.trim()
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse '{}'", text.trim())))
}

impl Settings {
    /// Reads a file of `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            let value = value.trim();
            if seen.insert(key.clone(), ()).is_some() {
                return Err(ConfigError(format!("config key '{key}' given twice")));
            }
            match key.as_str() {
                "form" => s.form = Some(value.to_string()),
                "alpha" => s.alpha = Some(value.to_string()),
                "n-alpha" => s.n_alpha = Some(value.to_string()),
                "delta" => s.delta = Some(parse_num(&key, value)?),
                "xgrid" => s.xgrid = Some(parse_list(&key, value)?),
                "tol" => s.tol = Some(parse_num(&key, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "points" => s.points = Some(value.to_string()),
                "range" => s.range = Some(parse_list(&key, value)?),
                "t" => s.t = Some(parse_num(&key, value)?),
                "sigma" => s.sigma = Some(parse_num(&key, value)?),
                "tmin" => s.tmin = Some(parse_num(&key, value)?),
                "tmax" => s.tmax = Some(parse_num(&key, value)?),
                "max" => s.max = Some(parse_num(&key, value)?),
                "s" => s.s = Some(value.to_string()),
                _ => return Err(ConfigError(format!("unknown config key '{key}'"))),
            }
        }
        Ok(s)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            form: self.form.or(base.form),
            alpha: self.alpha.or(base.alpha),
            n_alpha: self.n_alpha.or(base.n_alpha),
            delta: self.delta.or(base.delta),
            xgrid: self.xgrid.or(base.xgrid),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            points: self.points.or(base.points),
            range: self.range.or(base.range),
            t: self.t.or(base.t),
            sigma: self.sigma.or(base.sigma),
            tmin: self.tmin.or(base.tmin),
            tmax: self.tmax.or(base.tmax),
            max: self.max.or(base.max),
            s: self.s.or(base.s),
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub form: String,
    pub alpha: AlphaSpec,
    pub delta: f64,
    pub xgrid: Vec<f64>,
    pub tol: Option<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub points: Option<Vec<Complex64>>,
    /// Trivial-zero window `[-range.1, -range.0]`.
    pub range: (f64, f64),
    pub t: f64,
    pub sigma: f64,
    pub tmin: f64,
    pub tmax: f64,
    pub max: u64,
    pub s: Option<Complex64>,
}

/// Parses `re,im` or `re+imi` style points separated by `;`.
pub fn parse_points(text: &str) -> Result<Vec<Complex64>, ConfigError> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v = parse_list("points", p)?;
            match v.as_slice() {
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(ConfigError(format!("point '{p}' must be re,im"))),
            }
        })
        .collect()
}

fn positive_rational(key: &str, text: &str) -> Result<Rational, ConfigError> {
    let ExactRational(r) = text.parse::<ExactRational>()?;
    if *r.numer() <= 0 {
        return Err(ConfigError(format!("{key} must be positive, got {text}")));
    }
    Ok(r)
}

impl RunConfig {
    pub fn from_settings(s: Settings) -> Result<Self, ConfigError> {
        let form = s.form.unwrap_or_else(|| "ETA24".to_string());
        build_preset(&form)?;
        let alpha = match (&s.alpha, &s.n_alpha) {
            (Some(_), Some(_)) => return Err(ConfigError("give either --alpha or --n-alpha, not both".into())),
            (_, Some(n)) => {
                let r = positive_rational("n-alpha", n)?;
                AlphaSpec::NAlpha { p: *r.numer(), q: *r.denom() }
            }
            (a, None) => {
                let r = positive_rational("alpha", a.as_deref().unwrap_or("1/12"))?;
                AlphaSpec::Alpha { p: *r.numer(), q: *r.denom() }
            }
        };
        let delta = s.delta.unwrap_or(DEFAULT_DELTA);
        if !(delta > 0.0 && delta <= 0.45) {
            return Err(ConfigError(format!("delta must lie in (0, 0.45], got {delta}")));
        }
        let xgrid = s.xgrid.unwrap_or_else(|| vec![50.0, 100.0]);
        if xgrid.is_empty() || xgrid.iter().any(|x| !(*x > 1.0)) {
            return Err(ConfigError("xgrid values must exceed 1".into()));
        }
        if let Some(tol) = s.tol {
            if !(tol > 0.0) {
                return Err(ConfigError(format!("tol must be positive, got {tol}")));
            }
        }
        let points = match s.points.as_deref() {
            None | Some("default") => None,
            Some(text) => Some(parse_points(text)?),
        };
        let range = match s.range.as_deref() {
            None => (5.0, 30.0),
            Some([a, b]) if 0.0 <= *a && a < b => (*a, *b),
            Some(_) => return Err(ConfigError("range must be two increasing non-negative numbers a,b".into())),
        };
        let t = s.t.unwrap_or(30.0);
        if !(t > 2.0 * std::f64::consts::E) {
            return Err(ConfigError(format!("T must exceed 2e, got {t}")));
        }
        let (tmin, tmax) = (s.tmin.unwrap_or(20.0), s.tmax.unwrap_or(200.0));
        if !(tmin > 0.0 && tmax >= 10.0 * tmin) {
            return Err(ConfigError("growth needs 0 < tmin and tmax >= 10 tmin".into()));
        }
        let s_point = match s.s.as_deref() {
            None => None,
            Some(text) => match parse_points(text)?.as_slice() {
                [p] => Some(*p),
                _ => return Err(ConfigError("s must be a single point re,im".into())),
            },
        };
        Ok(RunConfig {
            form,
            alpha,
            delta,
            xgrid,
            tol: s.tol,
            out: s.out,
            points,
            range,
            t,
            sigma: s.sigma.unwrap_or(-1.0),
            tmin,
            tmax,
            max: s.max.unwrap_or(100),
            s: s_point,
        })
    }

    pub fn form(&self) -> Result<Arc<HalfIntegralForm>, ConfigError> {
        Ok(build_preset(&self.form)?)
    }

    pub fn context(&self) -> Result<TwistContext, ConfigError> {
        self.context_for(self.alpha)
    }

    pub fn context_for(&self, alpha: AlphaSpec) -> Result<TwistContext, ConfigError> {
        let form = self.form()?;
        let level = form.level;
        let a = match alpha {
            AlphaSpec::Alpha { p, q } => Alpha::rational(Rational::new(p, q), level)?,
            AlphaSpec::NAlpha { p, q } => Alpha::from_n_alpha(Rational::new(p, q), level)?,
        };
        Ok(TwistContext::new(form, a)?.with_delta(self.delta)?)
    }

    pub fn alpha_label(&self) -> String {
        match self.alpha {
            AlphaSpec::Alpha { p, q } => format!("alpha={p}/{q}"),
            AlphaSpec::NAlpha { p, q } => format!("n_alpha={p}/{q}"),
        }
    }
}
