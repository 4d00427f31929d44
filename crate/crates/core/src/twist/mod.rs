//! The standard twist F(s, alpha) and the objects around its functional
//! equation.

mod alpha;
mod context;
pub mod ladder;
mod precise;
mod regularized;
mod series;
mod tails;

pub use alpha::{Alpha, AlphaSource, ExactRational};
pub use context::{s_ell, SignedRoot, TwistContext, DEFAULT_DELTA};
pub use ladder::{a_ladder, a_ladder_f64, Rational};
pub use series::{SeriesMode, Side};
pub use regularized::{Continuation, Extrapolation};
