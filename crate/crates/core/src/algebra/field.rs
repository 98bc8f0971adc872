use serde::{Deserialize, Serialize};

use super::CycInt;
use crate::{Error, Result};

/// The two supported imaginary quadratic cyclotomic fields.
///
/// `Eisenstein` is Q(ζ₃) with ζ = ω, ω² = -1 - ω; `Gaussian` is Q(i).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Eisenstein,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl Field {
    pub fn from_n(n: u32) -> Result<Field> {
        match n {
            3 => Ok(Field::Eisenstein),
            4 => Ok(Field::Gaussian),
            _ => Err(Error::UnsupportedField(n)),
        }
    }

    /// Order of the characters attached to this field.
    pub fn n(self) -> u32 {
        match self {
            Field::Eisenstein => 3,
            Field::Gaussian => 4,
        }
    }

    pub fn degree(self) -> u32 {
        2
    }

    /// |d_K|.
    pub fn disc_abs(self) -> u64 {
        match self {
            Field::Eisenstein => 3,
            Field::Gaussian => 4,
        }
    }

    /// Number of roots of unity in O_K.
    pub fn num_units(self) -> usize {
        match self {
            Field::Eisenstein => 6,
            Field::Gaussian => 4,
        }
    }

    /// The primitive n-th root of unity ζ = (0, 1).
    pub fn zeta(self) -> CycInt {
        CycInt::new(self, 0, 1)
    }

    /// Generator of the torsion unit group: 1+ω = -ω² for Q(ζ₃), i for Q(i).
    pub fn unit_generator(self) -> CycInt {
        match self {
            Field::Eisenstein => CycInt::new(self, 1, 1),
            Field::Gaussian => CycInt::new(self, 0, 1),
        }
    }

    /// All units, in the fixed order g⁰, g¹, … of the torsion generator.
    pub fn units(self) -> Vec<CycInt> {
        let g = self.unit_generator();
        let mut out = Vec::with_capacity(self.num_units());
        let mut u = CycInt::one(self);
        for _ in 0..self.num_units() {
            out.push(u);
            u = u * g;
        }
        out
    }

    /// Generator of the different: √-3 = 1 + 2ω, or 2.
    pub fn different(self) -> CycInt {
        match self {
            Field::Eisenstein => CycInt::new(self, 1, 2),
            Field::Gaussian => CycInt::new(self, 2, 0),
        }
    }

    /// The unique rational prime that ramifies.
    pub fn ramified_prime(self) -> u64 {
        match self {
            Field::Eisenstein => 3,
            Field::Gaussian => 2,
        }
    }

    /// Generator of the prime above the ramified rational prime.
    pub fn ramified_generator(self) -> CycInt {
        match self {
            Field::Eisenstein => CycInt::new(self, 1, -1),
            Field::Gaussian => CycInt::new(self, 1, 1),
        }
    }

    pub fn split_type(self, p: u64) -> SplitType {
        if p == self.ramified_prime() {
            return SplitType::Ramified;
        }
        let m = self.n() as u64;
        if p % m == 1 {
            SplitType::Split
        } else {
            SplitType::Inert
        }
    }

    /// Residue of ζ_K at s = 1: 2πh/(w√|d|) with h = 1.
    pub fn zeta_residue(self) -> f64 {
        2.0 * std::f64::consts::PI / (self.num_units() as f64 * (self.disc_abs() as f64).sqrt())
    }

    /// ζ_K(0) = -h/w.
    pub fn zeta_at_zero(self) -> f64 {
        -1.0 / self.num_units() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_are_units_and_distinct() {
        for f in [Field::Eisenstein, Field::Gaussian] {
            let us = f.units();
            assert_eq!(us.len(), f.num_units());
            for (i, u) in us.iter().enumerate() {
                assert_eq!(u.norm(), 1);
                for v in &us[..i] {
                    assert_ne!(u, v);
                }
            }
            assert!(us.contains(&f.zeta()));
            assert!(us.contains(&-CycInt::one(f)));
        }
    }

    #[test]
    fn different_squares_to_discriminant() {
        let d = Field::Eisenstein.different();
        assert_eq!(d * d, CycInt::from_int(Field::Eisenstein, -3));
        assert_eq!(Field::Gaussian.different().norm(), 4);
        assert_eq!(Field::Eisenstein.ramified_generator().norm(), 3);
        assert_eq!(Field::Gaussian.ramified_generator().norm(), 2);
    }
}
