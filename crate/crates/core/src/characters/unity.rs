use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

/// A value in {0} ∪ μₙ, stored exactly as an exponent of ζₙ.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnityRoot {
    n: u8,
    exp: Option<u8>,
}

impl UnityRoot {
    pub fn zero(n: u32) -> UnityRoot {
        UnityRoot { n: n as u8, exp: None }
    }

    pub fn one(n: u32) -> UnityRoot {
        UnityRoot::root(n, 0)
    }

    pub fn root(n: u32, k: i64) -> UnityRoot {
        UnityRoot { n: n as u8, exp: Some(k.rem_euclid(n as i64) as u8) }
    }

    pub fn from_table(n: u32, v: i8) -> UnityRoot {
        if v < 0 {
            UnityRoot::zero(n)
        } else {
            UnityRoot::root(n, v as i64)
        }
    }

    pub fn n(&self) -> u32 {
        self.n as u32
    }

    pub fn exponent(&self) -> Option<u32> {
        self.exp.map(|e| e as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.exp.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.exp == Some(0)
    }

    pub fn pow(&self, e: i64) -> UnityRoot {
        match self.exp {
            None if e == 0 => UnityRoot::one(self.n()),
            None => *self,
            Some(k) => UnityRoot::root(self.n(), k as i64 * e),
        }
    }

    /// Complex conjugate (= inverse on nonzero values).
    pub fn conj(&self) -> UnityRoot {
        match self.exp {
            None => *self,
            Some(k) => UnityRoot::root(self.n(), -(k as i64)),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.exp {
            None => Complex64::new(0.0, 0.0),
            Some(k) => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / self.n as f64),
        }
    }
}

impl Mul for UnityRoot {
    type Output = UnityRoot;
    fn mul(self, o: UnityRoot) -> UnityRoot {
        debug_assert_eq!(self.n, o.n);
        match (self.exp, o.exp) {
            (Some(a), Some(b)) => UnityRoot::root(self.n(), a as i64 + b as i64),
            _ => UnityRoot::zero(self.n()),
        }
    }
}

impl fmt::Debug for UnityRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            None => write!(f, "0"),
            Some(k) => write!(f, "ζ{}^{}", self.n, k),
        }
    }
}
