//! Small numerical helpers shared by the evaluators.

use num_complex::Complex64;

/// Neumaier-compensated complex summation that also tracks sum |term|.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
    pub abs_sum: f64,
    pub count: usize,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let (re, ere) = two_sum(self.sum.re, x.re);
        let (im, eim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp += Complex64::new(ere, eim);
        self.abs_sum += x.norm();
        self.count += 1;
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    /// A conservative rounding-error estimate for the accumulated terms.
    pub fn rounding_error(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs_sum
    }
}
