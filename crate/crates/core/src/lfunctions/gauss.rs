use std::f64::consts::PI;

use num_complex::Complex64;

use crate::characters::{HeckeChar, ResidueChar};
use crate::numerics::ComplexVal;
use crate::{Error, Result};

/// τ(χ) = Σ_{x mod 𝔣} χ(x) e(Tr(x/γ)) with γ = f·δ, f generating 𝔣 and δ the different.
pub fn gauss_sum(ch: &ResidueChar) -> Complex64 {
    let ring = ch.ring();
    let field = ring.field();
    let gamma = ring.modulus().gen() * field.different();
    let gbar = gamma.conj();
    let ng = gamma.norm();
    let n = ch.n() as i128;
    let period = n * ng;
    let mut sum = Complex64::new(0.0, 0.0);
    for (idx, &v) in ch.table().iter().enumerate() {
        if v < 0 {
            continue;
        }
        let x = ring.element(idx);
        // Tr(x/γ) = Tr(x·γ̄)/N(γ); combine with v/n into one exact fraction mod 1
        let k = (x * gbar).trace().rem_euclid(ng);
        let num = (v as i128 * ng + k * n).rem_euclid(period);
        let theta = 2.0 * PI * num as f64 / period as f64;
        sum += Complex64::new(theta.cos(), theta.sin());
    }
    sum
}

/// ε(χ) = τ(χ)/√𝒩𝔣 for a primitive residue character.
pub fn gauss_epsilon_residue(ch: &ResidueChar) -> Result<ComplexVal> {
    if ch.conductor() != *ch.modulus() {
        return Err(Error::InvalidArgument(format!("character modulo {:?} is not primitive", ch.modulus())));
    }
    let nf = ch.modulus().norm() as f64;
    let tau = gauss_sum(ch);
    let err = 8.0 * f64::EPSILON * nf.sqrt();
    Ok(ComplexVal::new(tau / nf.sqrt(), err))
}

pub fn gauss_epsilon(ch: &HeckeChar) -> Result<ComplexVal> {
    gauss_epsilon_residue(ch.residue_char())
}
