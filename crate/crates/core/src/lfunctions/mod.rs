//! Hecke L-series, root numbers, the smoothed summation identity and the moment experiments.

mod density;
mod dual;
mod gauss;
mod lvalue;
mod moments;
mod poisson;

pub use density::{density_exponent_g, g_curve, g_high, g_low, Q64};
pub use dual::{dual_kernel, DualKernel};
pub use gauss::{gauss_epsilon, gauss_epsilon_residue, gauss_sum};
pub use lvalue::{
    conductor_scale, l_central, l_partial, l_partial_avoiding, l_partial_with_tail, l_value, mollifier_mx, tail_bound,
    AfeParams, LATTICE_C,
};
pub use moments::{is_nonzero, moment_ratio, nonvanishing_count, second_moment, LRecord, LReport, NONZERO_FLOOR};
pub use poisson::{decay_profile, dual_side, dual_sum, smoothed_sum, smoothed_sum_check, PoissonCheck};
