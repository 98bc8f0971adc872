//! The large-sieve quantities Σ₁–Σ₄, lower bounds for their operator norms, and the exponent
//! recursion.

mod coeff;
mod estimate;
mod recursion;
mod sigma;

pub use coeff::{dyadic_ideals, CoeffVector};
pub use estimate::{
    b_norm_estimate, large_sieve_ratio, large_sieve_rhs, stats_for, trial_rng, write_stats_csv, EstimateConfig, SieveStats,
    Strategy, DEFAULT_EPSILON, POWER_STEPS,
};
pub use recursion::{aitken_limit, exponent_recursion, four_thirds, recursion_step, to_f64};
pub use sigma::{
    check_j, check_tuple, dyadic_tuples, in_xi, sigma, sigma1, sigma2, sigma3, sigma3_window, sigma4, tuple_of, twisted_pair,
    CharMatrix, Sigma3Form, SigmaExtra,
};
