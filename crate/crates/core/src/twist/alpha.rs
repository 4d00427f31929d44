use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::twist::Rational;

/// How the twist parameter was specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// alpha = p / q.
    Rational { p: i128, q: i128 },
    /// alpha = 2 sqrt(n_alpha / N), given through n_alpha = p / q.
    NAlpha { p: i128, q: i128 },
}

/// A rational number `p/q` as typed on a command line: `p/q`, an integer,
/// or a terminating decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactRational(pub Rational);

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("'{text}' is not an exact rational (use p/q)"));
        let text = text.trim();
        let value = if let Some((p, q)) = text.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Rational::new(p, q)
        } else if let Some((whole, frac)) = text.split_once('.') {
            if frac.is_empty() || frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let w: i128 = if whole.is_empty() || whole == "-" {
                0
            } else {
                whole.parse::<i128>().map_err(|_| bad())?.abs()
            };
            let scale = 10i128.pow(frac.len() as u32);
            let f: i128 = frac.parse().map_err(|_| bad())?;
            let r = Rational::new(w * scale + f, scale);
            if negative {
                -r
            } else {
                r
            }
        } else {
            Rational::from_integer(text.parse().map_err(|_| bad())?)
        };
        Ok(ExactRational(value))
    }
}

/// The twist parameter alpha together with the exact value of
/// `n_alpha = N alpha^2 / 4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alpha {
    pub source: AlphaSource,
    pub value: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub n_alpha: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl Alpha {
    pub fn rational(alpha: Rational, level: u64) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        let (p, q) = (*alpha.numer(), *alpha.denom());
        let n_alpha = Rational::new(level as i128 * p * p, 4 * q * q);
        Ok(Alpha {
            source: AlphaSource::Rational { p, q },
            value: p as f64 / q as f64,
            n_alpha,
        })
    }

    /// alpha = 2 sqrt(n_alpha / N); the only way to reach spectral points
    /// whose alpha is irrational.
    pub fn from_n_alpha(n_alpha: Rational, level: u64) -> Result<Self> {
        if !n_alpha.is_positive() {
            return Err(Error::Config(format!("n_alpha must be positive, got {n_alpha}")));
        }
        let value = 2.0 * (ratio_f64(&n_alpha) / level as f64).sqrt();
        Ok(Alpha {
            source: AlphaSource::NAlpha {
                p: *n_alpha.numer(),
                q: *n_alpha.denom(),
            },
            value,
            n_alpha,
        })
    }

    pub fn nu_alpha(&self) -> f64 {
        ratio_f64(&self.n_alpha).sqrt()
    }

    /// n_alpha when it is a positive integer.
    pub fn integral_n_alpha(&self) -> Option<u64> {
        if self.n_alpha.is_integer() {
            self.n_alpha.to_integer().to_u64()
        } else {
            None
        }
    }

    /// Exact `n - n_alpha` as a float.
    pub fn offset(&self, n: u64) -> f64 {
        ratio_f64(&(Rational::from_integer(n as i128) - self.n_alpha))
    }

    /// `alpha sqrt(n) mod 1` as an exact fraction, when alpha is rational
    /// and n is a square.
    pub fn phase_exact(&self, n: u64) -> Option<(i128, i128)> {
        if let AlphaSource::Rational { p, q } = self.source {
            let v = crate::qseries::isqrt(n);
            if v * v == n {
                return Some(((p * v as i128).mod_floor(&q), q));
            }
        }
        None
    }

    /// Reduced phase `alpha sqrt(n) mod 1` in [0, 1).
    pub fn phase(&self, n: u64) -> f64 {
        // exact when alpha and sqrt(n) are both rational
        if let Some((num, q)) = self.phase_exact(n) {
            return num as f64 / q as f64;
        }
        let x = self.value * (n as f64).sqrt();
        x - x.floor()
    }
}

pub(crate) fn ratio_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    *r.numer() as f64 / *r.denom() as f64
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.source {
            AlphaSource::Rational { p, q } => write!(f, "alpha = {p}/{q}"),
            AlphaSource::NAlpha { p, q } if q == 1 => write!(f, "n_alpha = {p}"),
            AlphaSource::NAlpha { p, q } => write!(f, "n_alpha = {p}/{q}"),
        }
    }
}
