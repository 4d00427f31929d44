//! Exact q-expansions of eta quotients and the test forms built from them.

mod dual;
mod eta;
mod form;
mod presets;

pub use dual::{certify_dual, dual_phase_check, DUAL_PHASE_TOLERANCE};
pub use eta::{eta_expansion, eta_power_expansion, EtaQuotient, QExpansion};
pub use form::{isqrt, CoeffBound, HalfIntegralForm, Support};
pub use presets::{build_preset, PRESET_NAMES};
