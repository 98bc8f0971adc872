//! Exact arithmetic in Z[ζ₃] and Z[i].

mod cycint;
mod decompose;
mod field;
mod ideal;
mod residue;

pub use cycint::CycInt;
pub use decompose::{canonical_decompose, exponent_pattern, nth_power_free_part, Decomposition, DecompositionMode};
pub use field::{Field, SplitType};
pub use ideal::{
    factor_ideal, for_each_ideal, ideal_list, ideals_up_to, ideals_up_to_avoiding, primes_above, primes_up_to_norm, IdealK, IdealList, Prime,
};
pub use residue::{find_unit_congruent, residue_exp, Hnf, ResidueRing};

/// Field norm of an element.
pub fn norm(x: &CycInt) -> i128 {
    x.norm()
}
