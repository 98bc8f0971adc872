//! The double Dirichlet series layer: the correction factor 𝔄, L*, the coefficients
//! g(𝔭^α,𝔭^β), D(w,𝔞,ψ), truncated Z₁/Z₂, the Γ-factors G₁/G₂, the conductor measures and
//! the weights used for the approximate functional equation.

mod gamma;
mod gauss_coeff;
mod psi;
mod series;
mod weights;

pub use gamma::{gamma_factor, quotient_check, quotient_rhs, POLE_DISTANCE};
pub use gauss_coeff::{gauss_coeff, gauss_coeff_bound, gauss_coeff_ideals, gauss_coeff_local, SqrtValue};
pub use psi::{ClassChar, MdsPoint};
pub use series::{
    coprime_part, correction_a, correction_bound_exponent, dirichlet_d, fe11_residual, l_star, root_number_of,
    write_grid_csv, z_eval, z_grid, zeta_k_at_s, zeta_ks, MdsGridRow, Series,
};
pub use weights::{
    c1_measure, conductor_measure, r_choice, v_decay_constant, weight_h, weight_p, weight_v, weight_v_on, Sign,
    WeightSpec,
};
