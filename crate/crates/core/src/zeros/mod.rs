//! Zeros of the twisted function: the trivial zeros along a line far to
//! the left, zero counts by the argument principle, and growth in t.

mod count;
mod growth;
mod refine;
mod tube;

pub use count::{
    contour_value, count_zeros_in_tube, count_zeros_rectangle, direct_switch, first_nonzero, first_term_dominates,
    poles_inside, rvm_comparison, rvm_prediction, sigma_plus, winding, winding_nudged, RvmComparison,
};
pub use growth::{growth_probe, log_spaced, GrowthFit};
pub use refine::{
    f_left, off_tube_sweep, refine_all, refine_zero, sigma_epsilon, sweep_threshold, tube_ratio, Classifier,
    RefinedSet, SweepReport, ZeroKind, ZeroRecord,
};
pub use tube::{predicted_trivial_zeros, tube_data, TubeData, TubeSide};
