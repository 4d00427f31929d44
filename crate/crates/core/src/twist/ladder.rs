use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i128>;

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    /// Multiply by `(X + c)`.
    pub fn times_linear(&self, c: i128) -> Poly {
        let mut out = vec![Rational::zero(); self.0.len() + 1];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a * Rational::from_integer(c);
            out[i + 1] += a;
        }
        Poly(out)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn scaled(&self, k: &Rational) -> Poly {
        Poly(self.0.iter().map(|a| a * k).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        Poly(out)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + ratio_to_f64(c))
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// prod_{1<=j<=h*} (X + 2j - 1)
pub fn ladder_target(h_star: u32) -> Poly {
    (1..=h_star as i128).fold(Poly::one(), |p, j| p.times_linear(2 * j - 1))
}

/// prod_{0<=v<=h*-1-l} (X + v), the basis polynomial paired with a_l.
pub fn ladder_basis(h_star: u32, l: u32) -> Poly {
    let top = h_star as i128 - 1 - l as i128;
    (0..=top).fold(Poly::one(), |p, v| p.times_linear(v))
}

/// Coefficients a_0..a_{h*} expressing the odd rising product in the
/// falling-degree basis. Solved top-down: the basis for a_l has degree
/// h* - l and leading coefficient 1.
pub fn a_ladder(h_star: u32) -> Vec<Rational> {
    let mut rest = ladder_target(h_star);
    let mut out = Vec::with_capacity(h_star as usize + 1);
    for l in 0..=h_star {
        let deg = (h_star - l) as usize;
        let lead = rest.0.get(deg).copied().unwrap_or_else(Rational::zero);
        rest = rest.sub(&ladder_basis(h_star, l).scaled(&lead));
        out.push(lead);
    }
    debug_assert!(rest.0.iter().all(|c| c.is_zero()));
    out
}

pub fn a_ladder_f64(h_star: u32) -> Vec<f64> {
    a_ladder(h_star).iter().map(ratio_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|x| Rational::from_integer(*x)).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(a_ladder(0), ints(&[1]));
        assert_eq!(a_ladder(1), ints(&[1, 1]));
        assert_eq!(a_ladder(2), ints(&[1, 3, 3]));
    }

    #[test]
    fn leading_coefficient_is_one() {
        for h in 0..=6 {
            assert_eq!(a_ladder(h)[0], Rational::one());
        }
    }
}
