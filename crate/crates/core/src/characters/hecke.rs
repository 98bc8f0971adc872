use super::{ResidueChar, UnityRoot};
use crate::algebra::{CycInt, IdealK};

/// A primitive character on ideals, given by a residue character modulo its conductor.
///
/// When the underlying residue character is trivial on global units the value at an ideal does
/// not depend on the generator, and the result is a genuine Hecke character. Otherwise (the CRT
/// components returned by `decompose_char`) ideals are evaluated at their normalized generator.
#[derive(Clone, Debug)]
pub struct HeckeChar {
    source: Option<IdealK>,
    ch: ResidueChar,
    unit_trivial: bool,
}

impl HeckeChar {
    /// Wraps a residue character, reducing it to its conductor.
    pub fn new(source: Option<IdealK>, ch: &ResidueChar) -> HeckeChar {
        let ch = ch.primitive();
        let unit_trivial = ch.is_trivial_on(&ch.modulus().field().units());
        HeckeChar { source, ch, unit_trivial }
    }

    pub fn source(&self) -> Option<&IdealK> {
        self.source.as_ref()
    }

    pub fn conductor(&self) -> &IdealK {
        self.ch.modulus()
    }

    pub fn residue_char(&self) -> &ResidueChar {
        &self.ch
    }

    pub fn n(&self) -> u32 {
        self.ch.n()
    }

    pub fn is_unit_trivial(&self) -> bool {
        self.unit_trivial
    }

    pub fn is_trivial(&self) -> bool {
        self.ch.is_trivial()
    }

    pub fn eval(&self, b: &IdealK) -> UnityRoot {
        self.ch.value(&b.gen())
    }

    pub fn eval_element(&self, x: &CycInt) -> UnityRoot {
        self.ch.value(x)
    }

    pub fn pow(&self, j: i64) -> HeckeChar {
        HeckeChar::new(None, &self.ch.pow(j))
    }

    pub fn conj(&self) -> HeckeChar {
        self.pow(-1)
    }

    pub fn mul(&self, other: &HeckeChar) -> HeckeChar {
        HeckeChar::new(None, &self.ch.mul(&other.ch).expect("lcm modulus"))
    }
}
