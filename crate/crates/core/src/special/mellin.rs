use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::logcomplex::{principal_power, LogComplex};
use super::quad::integrate;
use crate::error::{Error, Result};

/// `Gamma(xi) (1 + z)^{-xi}` on the principal branch.
pub fn mellin_barnes_closed_form(xi: Complex64, z: Complex64) -> Result<Complex64> {
    let g = ln_gamma(xi)?;
    let p = principal_power(z + 1.0, -xi)?;
    Ok((g * p).to_complex())
}

/// `(1/2 pi i) int_{(c)} Gamma(xi - w) Gamma(w) z^{-w} dw` by quadrature.
///
/// The integrand decays like `exp(-(pi - |arg z|) |t|)`, so the line is cut
/// where that factor drops below the double-precision floor.
pub fn mellin_barnes_numeric(xi: Complex64, z: Complex64, c: f64) -> Result<Complex64> {
    if !(c > 0.0 && c < xi.re) {
        return Err(Error::Precondition(format!(
            "contour abscissa must satisfy 0 < c < Re xi, got c = {c}, xi = {xi}"
        )));
    }
    let arg = z.im.atan2(z.re);
    if z.norm() == 0.0 || arg.abs() >= PI {
        return Err(Error::Domain(format!("need |arg z| < pi, got z = {z}")));
    }
    let decay = PI - arg.abs();
    let width = (40.0 + (xi.re + 2.0) * 5f64.ln() + 40f64.ln()) / decay;
    let ln_z = z.ln();
    let integrand = |t: f64| -> Complex64 {
        let w = Complex64::new(c, t);
        match (ln_gamma(xi - w), ln_gamma(w)) {
            (Ok(a), Ok(b)) => (a * b * LogComplex::exp(-w * ln_z)).to_complex(),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    // split at the origin and at unit-ish breakpoints so the peak is resolved
    let cuts = [-width, -4.0, 0.0, 4.0, width];
    for win in cuts.windows(2) {
        let q = integrate(integrand, win[0], win[1], 1e-13)?;
        total += q.value;
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(Error::NoConvergence(format!(
            "Mellin-Barnes integrand not finite on Re w = {c}"
        )));
    }
    // dw = i dt cancels the i in 1/(2 pi i)
    Ok(total / (2.0 * PI))
}
