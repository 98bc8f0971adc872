//! Floating-point plumbing: error-tracked complex values, Γ, contour quadrature, windows.

mod gamma;
mod quad;
mod value;
mod window;

pub use gamma::{gamma, gamma_real, lgamma, upper_gamma};
pub use quad::{line_integral, simpson, LineRule};
pub use value::ComplexVal;
pub use window::Window;
