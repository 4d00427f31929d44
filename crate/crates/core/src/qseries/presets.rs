use std::sync::Arc;

use super::eta::EtaQuotient;
use super::form::{HalfIntegralForm, Support};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 3] = ["ETA24", "ETA8_CUBED", "ETA24_FIFTH"];

/// Look up a test form by name.
pub fn build_preset(name: &str) -> Result<Arc<HalfIntegralForm>> {
    let form = match name.to_ascii_uppercase().as_str() {
        // eta(24z), weight 1/2
        "ETA24" => HalfIntegralForm::theta_chi12("ETA24")?,
        // eta(8z)^3, weight 3/2
        "ETA8_CUBED" => HalfIntegralForm::odd_cube_theta("ETA8_CUBED")?,
        // eta(24z)^5, weight 5/2, supported on n = 5 mod 24
        "ETA24_FIFTH" => HalfIntegralForm::tabulated(
            "ETA24_FIFTH",
            576,
            EtaQuotient::new(vec![(24, 5)])?,
            Support::Progression {
                modulus: 24,
                residue: 5,
            },
        )?,
        // eta(8z)^5 has exponents in 5/3 + 8Z and is rejected by the quotient check
        "ETA8_FIFTH" => {
            EtaQuotient::new(vec![(8, 5)])?;
            unreachable!("eta(8z)^5 passed the integrality check")
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(Arc::new(form))
}
