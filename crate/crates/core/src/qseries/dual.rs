use num_complex::Complex64;

use super::form::HalfIntegralForm;
use crate::error::{Error, Result};
use crate::lfun::{dual_phase_residual, LSeriesEvaluator};
use std::sync::Arc;

/// Residual above which a preset's dual data is rejected.
pub const DUAL_PHASE_TOLERANCE: f64 = 1e-10;

/// Largest relative residual of the completed functional equation at the
/// sample points, with the dual phase optionally replaced.
pub fn dual_phase_check(
    form: &Arc<HalfIntegralForm>,
    samples: &[Complex64],
    dual_phase: Option<Complex64>,
) -> Result<f64> {
    let mut ev = LSeriesEvaluator::new(Arc::clone(form));
    if let Some(eps) = dual_phase {
        ev = ev.with_dual_phase(eps);
    }
    let mut worst: f64 = 0.0;
    for &s in samples {
        worst = worst.max(dual_phase_residual(&ev, s)?.residual);
    }
    Ok(worst)
}

/// Reject a form whose dual data fails the functional equation.
pub fn certify_dual(form: &Arc<HalfIntegralForm>, samples: &[Complex64]) -> Result<f64> {
    let r = dual_phase_check(form, samples, None)?;
    if r > DUAL_PHASE_TOLERANCE {
        return Err(Error::InvalidForm(format!(
            "{}: dual phase residual {r:e} exceeds {DUAL_PHASE_TOLERANCE:e}",
            form.name
        )));
    }
    Ok(r)
}
