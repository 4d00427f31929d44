use std::fmt;

use crate::error::{Error, Result};

/// A truncated q-series `q^{shift/24} * sum_{n=0..=M} c(n) q^n` with exact
/// integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    /// Prefactor exponent in units of 1/24.
    pub shift_24: i64,
    pub coefficients: Vec<i128>,
}

impl QExpansion {
    pub fn one(truncation: usize) -> Self {
        let mut coefficients = vec![0; truncation + 1];
        coefficients[0] = 1;
        QExpansion {
            shift_24: 0,
            coefficients,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> i128 {
        self.coefficients.get(n).copied().unwrap_or(0)
    }

    /// Product; the result is truncated to the smaller of the two lengths.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let m = self.truncation().min(other.truncation());
        let mut out = vec![0i128; m + 1];
        let sparse: Vec<(usize, i128)> = other.coefficients[..=m]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect();
        for (i, a) in self.coefficients[..=m].iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for &(j, b) in &sparse {
                if i + j > m {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        QExpansion {
            shift_24: self.shift_24 + other.shift_24,
            coefficients: out,
        }
    }

    /// Fold the prefactor into the series when it is a whole power of q.
    pub fn integral_shift(&self) -> Option<QExpansion> {
        if self.shift_24.rem_euclid(24) != 0 || self.shift_24 < 0 {
            return None;
        }
        let k = (self.shift_24 / 24) as usize;
        let m = self.truncation();
        let mut coefficients = vec![0i128; m + 1];
        for n in k..=m {
            coefficients[n] = self.coefficients[n - k];
        }
        Some(QExpansion {
            shift_24: 0,
            coefficients,
        })
    }
}

/// Sparse coefficients of prod_{m>=1} (1 - x^m) up to `degree`, from the
/// pentagonal number theorem.
fn euler_product_sparse(degree: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    let mut j: usize = 1;
    loop {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let p1 = j * (3 * j - 1) / 2;
        let p2 = j * (3 * j + 1) / 2;
        if p1 > degree {
            break;
        }
        terms.push((p1, sign));
        if p2 <= degree {
            terms.push((p2, sign));
        }
        j += 1;
    }
    terms.sort_unstable();
    terms
}

/// Sparse coefficients of prod (1 - x^m)^3 from Jacobi's identity.
fn euler_cube_sparse(degree: usize) -> Vec<(usize, i128)> {
    let mut terms = Vec::new();
    let mut j = 0usize;
    while j * (j + 1) / 2 <= degree {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        terms.push((j * (j + 1) / 2, sign * (2 * j as i128 + 1)));
        j += 1;
    }
    terms
}

fn mul_sparse(dense: &mut [i128], sparse: &[(usize, i128)]) {
    let m = dense.len() - 1;
    for n in (0..=m).rev() {
        let mut acc = 0i128;
        for &(j, b) in sparse {
            if j > n {
                break;
            }
            acc += b * dense[n - j];
        }
        dense[n] = acc;
    }
}

fn div_sparse(dense: &mut [i128], sparse: &[(usize, i128)]) {
    // sparse[0] is (0, 1), so division is a forward recurrence
    let m = dense.len() - 1;
    for n in 0..=m {
        let mut acc = dense[n];
        for &(j, b) in &sparse[1..] {
            if j > n {
                break;
            }
            acc -= b * dense[n - j];
        }
        dense[n] = acc;
    }
}

/// `q^{scale/24} prod (1 - q^{scale m})` up to `q^M` past the prefactor.
pub fn eta_expansion(scale: u64, truncation: usize) -> Result<QExpansion> {
    eta_power_expansion(scale, 1, truncation)
}

/// `eta(scale z)^exponent` for a nonzero integer exponent.
pub fn eta_power_expansion(scale: u64, exponent: i32, truncation: usize) -> Result<QExpansion> {
    if truncation < 1 {
        return Err(Error::Precondition("q-expansion truncation must be at least 1".into()));
    }
    if scale == 0 || exponent == 0 {
        return Err(Error::InvalidForm(format!(
            "eta factor needs positive scale and nonzero exponent, got ({scale}, {exponent})"
        )));
    }
    let scale = scale as usize;
    let degree = truncation / scale;
    let single = euler_product_sparse(degree);
    let cube = euler_cube_sparse(degree);
    let mut series = vec![0i128; degree + 1];
    series[0] = 1;
    let e = exponent.unsigned_abs();
    for (factor, times) in [(&cube, e / 3), (&single, e % 3)] {
        for _ in 0..times {
            if exponent > 0 {
                mul_sparse(&mut series, factor);
            } else {
                div_sparse(&mut series, factor);
            }
        }
    }
    let mut coefficients = vec![0i128; truncation + 1];
    for (i, c) in series.into_iter().enumerate() {
        coefficients[i * scale] = c;
    }
    Ok(QExpansion {
        shift_24: scale as i64 * exponent as i64,
        coefficients,
    })
}

/// prod eta(scale z)^exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    pub factors: Vec<(u64, i32)>,
}

impl EtaQuotient {
    pub fn new(factors: Vec<(u64, i32)>) -> Result<Self> {
        let q = EtaQuotient { factors };
        let k: i64 = q.factors.iter().map(|f| f.1 as i64).sum();
        if k <= 0 || k % 2 == 0 {
            return Err(Error::InvalidForm(format!(
                "{q}: weight {k}/2 is not a positive half-integer with odd numerator"
            )));
        }
        let lead = q.leading_exponent_24();
        if lead <= 0 || lead % 24 != 0 {
            return Err(Error::InvalidForm(format!(
                "{q}: leading exponent {lead}/24 is not a positive integer"
            )));
        }
        Ok(q)
    }

    /// Twice the weight.
    pub fn k(&self) -> i64 {
        self.factors.iter().map(|f| f.1 as i64).sum()
    }

    pub fn weight(&self) -> f64 {
        self.k() as f64 / 2.0
    }

    pub fn leading_exponent_24(&self) -> i64 {
        self.factors.iter().map(|f| f.0 as i64 * f.1 as i64).sum()
    }

    /// Integral q-expansion `sum_{n=0..=M} c(n) q^n`.
    pub fn expansion(&self, truncation: usize) -> Result<QExpansion> {
        let mut acc = QExpansion::one(truncation);
        for &(scale, exponent) in &self.factors {
            acc = acc.mul(&eta_power_expansion(scale, exponent, truncation)?);
        }
        acc.integral_shift().ok_or_else(|| {
            Error::InvalidForm(format!("{self}: expansion has a fractional prefactor"))
        })
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "eta({s}z)^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_start() {
        let e = eta_expansion(1, 10).unwrap();
        assert_eq!(e.shift_24, 1);
        assert_eq!(&e.coefficients[..6], &[1, -1, -1, 0, 0, 1]);
    }

    #[test]
    fn pentagonal_matches_direct_product() {
        let m = 40;
        let mut direct = QExpansion::one(m);
        for k in 1..=m {
            let mut f = vec![0i128; m + 1];
            f[0] = 1;
            f[k] = -1;
            direct = direct.mul(&QExpansion {
                shift_24: 0,
                coefficients: f,
            });
        }
        assert_eq!(direct.coefficients, eta_expansion(1, m).unwrap().coefficients);
    }

    #[test]
    fn scaled_support() {
        let e = eta_expansion(24, 2000).unwrap().integral_shift().unwrap();
        for (n, c) in e.coefficients.iter().enumerate() {
            if *c != 0 {
                assert_eq!(n % 24, 1, "n = {n}");
            }
        }
    }

    #[test]
    fn cube_of_eta8() {
        let q = EtaQuotient::new(vec![(8, 3)]).unwrap();
        let e = q.expansion(49).unwrap();
        for n in 0..=49usize {
            let want = match n {
                1 => 1,
                9 => -3,
                25 => 5,
                49 => -7,
                _ => 0,
            };
            assert_eq!(e.coefficient(n), want, "n = {n}");
        }
    }

    #[test]
    fn inverse_power_gives_partitions() {
        let p = eta_power_expansion(1, -1, 12).unwrap();
        assert_eq!(&p.coefficients[..], &[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        let one = p.mul(&eta_expansion(1, 12).unwrap());
        assert_eq!(one.shift_24, 0);
        assert_eq!(one, QExpansion::one(12));
    }

    #[test]
    fn cube_shortcut_matches_repeated_product() {
        let e = eta_expansion(1, 300).unwrap();
        let by_product = e.mul(&e).mul(&e).mul(&e).mul(&e);
        let direct = eta_power_expansion(1, 5, 300).unwrap();
        assert_eq!(by_product, direct);
        let inv = eta_power_expansion(1, -4, 300).unwrap();
        let one = inv.mul(&e).mul(&e).mul(&e).mul(&e);
        assert_eq!(one, QExpansion::one(300));
    }

    #[test]
    fn invalid_quotients() {
        // eta(8z)^5 starts at q^{5/3}
        assert!(matches!(EtaQuotient::new(vec![(8, 5)]), Err(Error::InvalidForm(_))));
        // integral weight
        assert!(EtaQuotient::new(vec![(24, 2)]).is_err());
    }
}
