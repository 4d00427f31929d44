//! Complex special functions used throughout the crate.
//!
//! Everything that can leave the native floating range is returned as a
//! [`LogComplex`] so that products of gamma factors can be assembled in the
//! log domain and exponentiated once.

mod gamma;
mod incomplete;
mod logcomplex;
mod mellin;
pub mod quad;

pub use gamma::{gamma, ln_gamma, ln_sin_pi, rgamma, POLE_RADIUS};
pub use incomplete::{ln_upper_incomplete_gamma, ln_upper_incomplete_gamma_complex, upper_incomplete_gamma};
pub use logcomplex::{principal_power, LogComplex};
pub use mellin::{mellin_barnes_closed_form, mellin_barnes_numeric};
