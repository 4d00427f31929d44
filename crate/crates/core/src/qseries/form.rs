use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::Serialize;

use super::eta::EtaQuotient;
use crate::error::{Error, Result};

/// Where the nonzero coefficients of a form can live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Support {
    /// n = v^2 for v >= 1.
    Squares,
    /// n = residue mod modulus.
    Progression { modulus: u64, residue: u64 },
}

impl Support {
    pub fn contains(&self, n: u64) -> bool {
        match *self {
            Support::Squares => {
                let r = isqrt(n);
                r * r == n && n > 0
            }
            Support::Progression { modulus, residue } => n % modulus == residue,
        }
    }

    /// Upper bound for the number of support points in (a, b].
    pub fn count_between(&self, a: f64, b: f64) -> f64 {
        match *self {
            Support::Squares => b.sqrt().floor() - a.max(0.0).sqrt().floor(),
            Support::Progression { modulus, .. } => (b - a) / modulus as f64 + 1.0,
        }
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `|c(n)| <= constant * n^exponent` on the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffBound {
    pub constant: f64,
    pub exponent: f64,
    /// True when the bound is a theorem rather than fitted to data.
    pub proven: bool,
}

impl CoeffBound {
    pub fn at(&self, n: u64) -> f64 {
        self.constant * (n as f64).powf(self.exponent)
    }
}

#[derive(Debug)]
enum Provider {
    Zero,
    /// sum chi_12(v) q^{v^2}
    ThetaChi12,
    /// sum_{v odd} (-1)^{(v-1)/2} v q^{v^2}
    OddCubeTheta,
    Table {
        quotient: EtaQuotient,
        table: RwLock<Arc<Vec<i64>>>,
    },
}

fn chi12(v: u64) -> i128 {
    match v % 12 {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// A half-integral weight cusp form `f = sum c(n) q^n` of weight k/2 and
/// level N, with its dual `f* = eps * f`.
#[derive(Debug)]
pub struct HalfIntegralForm {
    pub name: String,
    pub k: u32,
    pub level: u64,
    pub quotient: EtaQuotient,
    pub dual_phase: Complex64,
    pub omega: Complex64,
    pub bound: CoeffBound,
    pub support: Support,
    provider: Provider,
}

const INITIAL_TABLE: u64 = 24 * 4096;

impl HalfIntegralForm {
    fn assemble(
        name: &str,
        k: u32,
        level: u64,
        quotient: EtaQuotient,
        bound: CoeffBound,
        support: Support,
        provider: Provider,
    ) -> Result<Self> {
        if k % 2 == 0 {
            return Err(Error::InvalidForm(format!("{name}: k = {k} must be odd")));
        }
        if level % 4 != 0 {
            return Err(Error::InvalidForm(format!("{name}: level {level} not divisible by 4")));
        }
        let kappa = k as f64 / 2.0;
        let omega = Complex64::from_polar(1.0, -PI * kappa / 2.0);
        // omega * eps = 1 for these self-dual theta-type forms
        let dual_phase = omega.conj();
        Ok(HalfIntegralForm {
            name: name.to_string(),
            k,
            level,
            quotient,
            dual_phase,
            omega,
            bound,
            support,
            provider,
        })
    }

    pub(crate) fn theta_chi12(name: &str) -> Result<Self> {
        Self::assemble(
            name,
            1,
            576,
            EtaQuotient::new(vec![(24, 1)])?,
            CoeffBound {
                constant: 1.0,
                exponent: 0.0,
                proven: true,
            },
            Support::Squares,
            Provider::ThetaChi12,
        )
    }

    pub(crate) fn odd_cube_theta(name: &str) -> Result<Self> {
        Self::assemble(
            name,
            3,
            64,
            EtaQuotient::new(vec![(8, 3)])?,
            CoeffBound {
                constant: 1.0,
                exponent: 0.5,
                proven: true,
            },
            Support::Squares,
            Provider::OddCubeTheta,
        )
    }

    /// Form backed by an exact coefficient table of an eta quotient; the
    /// bound `C n` is fitted on the initial table with a factor-2 margin.
    pub(crate) fn tabulated(
        name: &str,
        level: u64,
        quotient: EtaQuotient,
        support: Support,
    ) -> Result<Self> {
        let k = quotient.k() as u32;
        let table = tabulate(&quotient, INITIAL_TABLE)?;
        let fitted = table
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.unsigned_abs() as f64 / n as f64)
            .fold(0.0, f64::max);
        let bound = CoeffBound {
            constant: 2.0 * fitted,
            exponent: 1.0,
            proven: false,
        };
        let form = Self::assemble(
            name,
            k,
            level,
            quotient.clone(),
            bound,
            support,
            Provider::Table {
                quotient,
                table: RwLock::new(Arc::new(table)),
            },
        )?;
        Ok(form)
    }

    pub fn kappa(&self) -> f64 {
        self.k as f64 / 2.0
    }

    /// h with k = 2h + 1.
    pub fn h(&self) -> u32 {
        (self.k - 1) / 2
    }

    pub fn h_star(&self) -> u32 {
        self.h().saturating_sub(1)
    }

    /// mu = (2h - 1) / 4, which equals (kappa - 1) / 2.
    pub fn mu(&self) -> f64 {
        (2.0 * self.h() as f64 - 1.0) / 4.0
    }

    pub fn mu_star(&self) -> f64 {
        (2.0 * self.h_star() as f64 + 1.0) / 4.0
    }

    /// `(kappa - 1) / 2`, the shift between c(n) and the normalized a(n).
    pub fn normalization_shift(&self) -> f64 {
        (self.kappa() - 1.0) / 2.0
    }

    /// `Q = sqrt(N) / (2 pi)`.
    pub fn q_factor(&self) -> f64 {
        (self.level as f64).sqrt() / (2.0 * PI)
    }

    fn table_upto(&self, max_n: u64) -> Result<Option<Arc<Vec<i64>>>> {
        let Provider::Table { quotient, table } = &self.provider else {
            return Ok(None);
        };
        {
            let t = table.read().expect("coefficient table lock");
            if t.len() as u64 > max_n {
                return Ok(Some(Arc::clone(&t)));
            }
        }
        let mut t = table.write().expect("coefficient table lock");
        if t.len() as u64 <= max_n {
            let target = max_n.max(1).next_power_of_two();
            let fresh = tabulate(quotient, target)?;
            for (n, c) in fresh.iter().enumerate().skip(1) {
                if c.unsigned_abs() as f64 > self.bound.at(n as u64) {
                    return Err(Error::InvalidForm(format!(
                        "{}: fitted coefficient bound fails at n = {n}",
                        self.name
                    )));
                }
            }
            *t = Arc::new(fresh);
        }
        Ok(Some(Arc::clone(&t)))
    }

    /// Identically zero form with the shape of a weight k/2 level N form;
    /// a test double for the evaluators.
    pub fn zero(k: u32, level: u64) -> Result<Self> {
        Self::assemble(
            "ZERO",
            k,
            level,
            EtaQuotient::new(vec![(24, k as i32)])?,
            CoeffBound {
                constant: 0.0,
                exponent: 0.0,
                proven: true,
            },
            Support::Squares,
            Provider::Zero,
        )
    }

    /// Exact Fourier coefficient c(n).
    pub fn c(&self, n: u64) -> Result<i128> {
        match &self.provider {
            Provider::Zero => Ok(0),
            Provider::ThetaChi12 => {
                let v = isqrt(n);
                Ok(if v * v == n { chi12(v) } else { 0 })
            }
            Provider::OddCubeTheta => {
                let v = isqrt(n);
                if v * v != n || v % 2 == 0 {
                    return Ok(0);
                }
                let sign = if (v / 2) % 2 == 0 { 1 } else { -1 };
                Ok(sign * v as i128)
            }
            Provider::Table { .. } => {
                let t = self.table_upto(n)?.expect("table provider");
                Ok(t[n as usize] as i128)
            }
        }
    }

    /// For theta-type forms `a(v^2) = e_v v^beta` with a sign sequence e_v
    /// whose partial sums are bounded; returns `(beta, bound)`.
    pub fn lacunary_profile(&self) -> Option<(f64, f64)> {
        let beta = match self.provider {
            Provider::ThetaChi12 => 0.0,
            Provider::OddCubeTheta => 1.0,
            Provider::Table { .. } | Provider::Zero => return None,
        } - 2.0 * self.normalization_shift();
        Some((beta, 1.0))
    }

    /// Dual coefficient c*(n) = eps c(n).
    pub fn c_star(&self, n: u64) -> Result<Complex64> {
        Ok(self.dual_phase * self.c(n)? as f64)
    }

    /// Normalized coefficient a(n) = c(n) n^{-(kappa-1)/2}.
    pub fn a(&self, n: u64) -> Result<f64> {
        Ok(self.c(n)? as f64 * (n as f64).powf(-self.normalization_shift()))
    }

    pub fn a_star(&self, n: u64) -> Result<Complex64> {
        Ok(self.dual_phase * self.a(n)?)
    }

    /// Nonzero coefficients `(n, c(n))` with `n <= max_n`, increasing in n.
    pub fn terms(&self, max_n: u64) -> Result<Vec<(u64, i128)>> {
        match self.support {
            Support::Squares => {
                let vmax = isqrt(max_n);
                let mut out = Vec::with_capacity(vmax as usize);
                for v in 1..=vmax {
                    let c = self.c(v * v)?;
                    if c != 0 {
                        out.push((v * v, c));
                    }
                }
                Ok(out)
            }
            Support::Progression { modulus, residue } => {
                let mut out = Vec::new();
                if max_n < residue {
                    return Ok(out);
                }
                let t = self.table_upto(max_n)?;
                let mut n = if residue == 0 { modulus } else { residue };
                while n <= max_n {
                    let c = match &t {
                        Some(t) => t[n as usize] as i128,
                        None => self.c(n)?,
                    };
                    if c != 0 {
                        out.push((n, c));
                    }
                    n += modulus;
                }
                Ok(out)
            }
        }
    }

    /// Bound on |a(n)|: `constant * n^exponent`.
    pub fn normalized_bound(&self) -> CoeffBound {
        CoeffBound {
            exponent: self.bound.exponent - self.normalization_shift(),
            ..self.bound
        }
    }

    /// Bound on `sum_{n > m} |a(n)| n^{-sigma}`, or infinity when the sum is
    /// not absolutely convergent.
    pub fn tail_bound(&self, m: u64, sigma: f64) -> f64 {
        let b = self.normalized_bound();
        let e = b.exponent - sigma;
        match self.support {
            Support::Squares => {
                // sum_{v > V} C v^{2e} <= C V^{2e+1} / (-2e-1)
                let v = isqrt(m) as f64;
                if 2.0 * e + 1.0 >= 0.0 || v < 1.0 {
                    return f64::INFINITY;
                }
                b.constant * v.powf(2.0 * e + 1.0) / (-2.0 * e - 1.0)
            }
            Support::Progression { modulus, .. } => {
                if e + 1.0 >= 0.0 || m < 1 {
                    return f64::INFINITY;
                }
                let mf = m as f64;
                b.constant * (mf.powf(e + 1.0) / ((-e - 1.0) * modulus as f64) + mf.powf(e))
            }
        }
    }

    /// Write `n, c(n), a(n)` rows for `1 <= n <= max_n`.
    pub fn write_csv<W: Write>(&self, max_n: u64, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Config(format!("writing coefficients: {e}"));
        writeln!(out, "n,c(n),a(n)").map_err(io)?;
        for n in 1..=max_n {
            let c = self.c(n)?;
            let a = c as f64 * (n as f64).powf(-self.normalization_shift());
            writeln!(out, "{n},{c},{a:.17e}").map_err(io)?;
        }
        Ok(())
    }
}

fn tabulate(quotient: &EtaQuotient, truncation: u64) -> Result<Vec<i64>> {
    let e = quotient.expansion(truncation as usize)?;
    e.coefficients
        .iter()
        .map(|c| {
            i64::try_from(*c).map_err(|_| Error::InvalidForm(format!("{quotient}: coefficient overflow")))
        })
        .collect()
}
