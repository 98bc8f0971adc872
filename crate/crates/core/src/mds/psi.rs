use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{CycInt, IdealK};
use crate::characters::{RayClassSetup, UnityRoot};
use crate::numerics::ComplexVal;
use crate::{Error, Result};

/// A character of R_𝔠, stored as exponents of ζₙ indexed by class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassChar {
    n: u32,
    table: Arc<Vec<u8>>,
}

impl ClassChar {
    pub fn trivial(setup: &RayClassSetup) -> ClassChar {
        ClassChar { n: setup.n(), table: Arc::new(vec![0; setup.r().order()]) }
    }

    /// Checks the homomorphism property on the basis and on all products with it.
    pub fn from_table(setup: &RayClassSetup, table: Vec<u8>) -> Result<ClassChar> {
        let r = setup.r();
        let n = setup.n();
        if table.len() != r.order() {
            return Err(Error::InvalidArgument(format!("{} entries for {} classes", table.len(), r.order())));
        }
        if table[r.identity() as usize] != 0 || table.iter().any(|&e| e as u32 >= n) {
            return Err(Error::Inconsistent("table is not a character".into()));
        }
        for &g in r.basis() {
            for c in 0..r.order() as u32 {
                let lhs = table[r.mul(c, g) as usize] as u32;
                if lhs != (table[c as usize] as u32 + table[g as usize] as u32) % n {
                    return Err(Error::Inconsistent(format!("not multiplicative at classes {c}, {g}")));
                }
            }
        }
        Ok(ClassChar { n, table: Arc::new(table) })
    }

    /// Every character of R_𝔠, the trivial one first.
    pub fn all(setup: &RayClassSetup) -> Vec<ClassChar> {
        setup
            .r()
            .characters(setup.n())
            .into_iter()
            .map(|t| ClassChar { n: setup.n(), table: Arc::new(t) })
            .collect()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&e| e == 0)
    }

    pub fn conj(&self) -> ClassChar {
        let t = self.table.iter().map(|&e| ((self.n - e as u32) % self.n) as u8).collect();
        ClassChar { n: self.n, table: Arc::new(t) }
    }

    pub fn mul(&self, other: &ClassChar) -> ClassChar {
        let t = self.table.iter().zip(other.table.iter()).map(|(a, b)| ((a + b) as u32 % self.n) as u8).collect();
        ClassChar { n: self.n, table: Arc::new(t) }
    }

    pub fn eval_class(&self, class: u32) -> UnityRoot {
        UnityRoot::root(self.n, self.table[class as usize] as i64)
    }

    /// ψ at the ideal generated by x, which must be coprime to 𝔠.
    pub fn eval_element(&self, setup: &RayClassSetup, x: &CycInt) -> Result<UnityRoot> {
        let c = setup.r().class_of(x).ok_or_else(|| Error::NotCoprime(format!("{x:?} is not coprime to 𝔠")))?;
        Ok(self.eval_class(c))
    }

    pub fn eval(&self, setup: &RayClassSetup, a: &IdealK) -> Result<UnityRoot> {
        Ok(self.eval_class(setup.class_of(a)?))
    }
}

/// A point (s, w) with its pair of class characters.
#[derive(Clone, Debug)]
pub struct MdsPoint {
    pub s: ComplexVal,
    pub w: ComplexVal,
    pub psi: ClassChar,
    pub psi2: ClassChar,
}

impl MdsPoint {
    pub fn new(s: Complex64, w: Complex64, psi: ClassChar, psi2: ClassChar) -> MdsPoint {
        MdsPoint { s: ComplexVal::exact(s), w: ComplexVal::exact(w), psi, psi2 }
    }
}
