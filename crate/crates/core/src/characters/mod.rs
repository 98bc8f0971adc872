//! Power residue symbols and the primitive characters χ_𝔞.

mod hecke;
mod residue_char;
mod setup;
mod symbol;
mod unity;

pub use hecke::HeckeChar;
pub use residue_char::ResidueChar;
pub use setup::{sufficient_exponent, units_near_one_are_powers, RayClassSetup, Sufficiency, SUFFICIENCY_SLACK};
pub use symbol::{power_residue_symbol, symbol_at_prime};
pub use unity::UnityRoot;
