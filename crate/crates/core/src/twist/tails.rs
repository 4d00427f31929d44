use num_complex::Complex64;

use crate::error::Result;
use crate::lfun::{ComplexEval, LSeriesEvaluator, Method};
use crate::numerics::CompensatedSum;
use crate::qseries::Support;

/// Shifts far enough right that the tail is summed term by term.
const DIRECT_MARGIN: f64 = 3.0;
const DENSE_TAIL_CAP: u64 = 1 << 23;
const SQUARES_TAIL_CAP: u64 = 3_000_000 * 3_000_000;

/// `T_r = sum_{n >= H} a*(n) n^{-(u + r/2)}` for r = 0, 1, ..., computed
/// lazily and cached.
pub(crate) struct ShiftedTails<'a> {
    lfun: &'a LSeriesEvaluator,
    u: Complex64,
    head: u64,
    cache: Vec<ComplexEval>,
}

impl<'a> ShiftedTails<'a> {
    pub fn new(lfun: &'a LSeriesEvaluator, u: Complex64, head: u64) -> Self {
        ShiftedTails {
            lfun,
            u,
            head,
            cache: Vec::new(),
        }
    }

    pub fn get(&mut self, r: usize) -> Result<ComplexEval> {
        while self.cache.len() <= r {
            let w = self.u + 0.5 * self.cache.len() as f64;
            let t = self.compute(w)?;
            self.cache.push(t);
        }
        Ok(self.cache[r])
    }

    fn compute(&self, w: Complex64) -> Result<ComplexEval> {
        let exponent = self.lfun.form.normalized_bound().exponent;
        if w.re - exponent >= DIRECT_MARGIN {
            if let Some(t) = self.direct(w)? {
                return Ok(t);
            }
        }
        let full = self.lfun.complete(w, true)?;
        let head = self.lfun.partial_sum(w, self.head - 1, true)?;
        let value = full.value - head.value();
        Ok(ComplexEval::new(
            value,
            full.error + head.rounding_error() + 2.0 * f64::EPSILON * full.value.norm(),
            Method::Stratified,
        ))
    }

    fn direct(&self, w: Complex64) -> Result<Option<ComplexEval>> {
        let form = &self.lfun.form;
        let cap = match form.support {
            Support::Squares => SQUARES_TAIL_CAP,
            Support::Progression { .. } => DENSE_TAIL_CAP,
        };
        let mut acc = CompensatedSum::new();
        let mut lo = self.head - 1;
        let mut hi = 4 * self.head;
        loop {
            for (n, c) in form.terms(hi)?.into_iter().filter(|t| t.0 > lo) {
                let a = c as f64 * (n as f64).powf(-form.normalization_shift());
                acc.add(self.lfun.dual_phase() * a * (-w * (n as f64).ln()).exp());
            }
            let tail = form.tail_bound(hi, w.re);
            if tail <= 1e-16 * acc.abs_sum.max(f64::MIN_POSITIVE) {
                return Ok(Some(ComplexEval::new(
                    acc.value(),
                    tail + acc.rounding_error(),
                    Method::Direct,
                )));
            }
            if hi >= cap {
                return Ok(None);
            }
            lo = hi;
            hi = (4 * hi).min(cap);
        }
    }
}

/// `binom(rho, r)` for r = 0..=rmax.
pub(crate) fn binomials(rho: Complex64, rmax: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rmax + 1);
    let mut b = Complex64::new(1.0, 0.0);
    out.push(b);
    for r in 0..rmax {
        b = b * (rho - r as f64) / (r as f64 + 1.0);
        out.push(b);
    }
    out
}
