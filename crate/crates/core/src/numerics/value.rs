use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A complex value together with a bound on its absolute error.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexVal {
    pub v: Complex64,
    pub err: f64,
}

impl ComplexVal {
    pub fn new(v: Complex64, err: f64) -> ComplexVal {
        ComplexVal { v, err }
    }

    pub fn exact(v: Complex64) -> ComplexVal {
        ComplexVal { v, err: 0.0 }
    }

    pub fn real(x: f64) -> ComplexVal {
        ComplexVal::exact(Complex64::new(x, 0.0))
    }

    pub fn zero() -> ComplexVal {
        ComplexVal::real(0.0)
    }

    pub fn re(&self) -> f64 {
        self.v.re
    }

    pub fn im(&self) -> f64 {
        self.v.im
    }

    pub fn abs(&self) -> f64 {
        self.v.norm()
    }

    pub fn conj(&self) -> ComplexVal {
        ComplexVal::new(self.v.conj(), self.err)
    }

    pub fn with_err(self, err: f64) -> ComplexVal {
        ComplexVal::new(self.v, self.err + err)
    }

    pub fn scale(self, k: f64) -> ComplexVal {
        ComplexVal::new(self.v * k, self.err * k.abs())
    }

    /// Whether |self − other| is within the combined error plus `tol`.
    pub fn agrees(&self, other: &ComplexVal, tol: f64) -> bool {
        (self.v - other.v).norm() <= self.err + other.err + tol
    }
}

impl Add for ComplexVal {
    type Output = ComplexVal;
    fn add(self, o: ComplexVal) -> ComplexVal {
        ComplexVal::new(self.v + o.v, self.err + o.err)
    }
}

impl Sub for ComplexVal {
    type Output = ComplexVal;
    fn sub(self, o: ComplexVal) -> ComplexVal {
        ComplexVal::new(self.v - o.v, self.err + o.err)
    }
}

impl Neg for ComplexVal {
    type Output = ComplexVal;
    fn neg(self) -> ComplexVal {
        ComplexVal::new(-self.v, self.err)
    }
}

impl Mul for ComplexVal {
    type Output = ComplexVal;
    fn mul(self, o: ComplexVal) -> ComplexVal {
        let err = self.v.norm() * o.err + o.v.norm() * self.err + self.err * o.err;
        ComplexVal::new(self.v * o.v, err)
    }
}

impl Mul<Complex64> for ComplexVal {
    type Output = ComplexVal;
    fn mul(self, o: Complex64) -> ComplexVal {
        ComplexVal::new(self.v * o, self.err * o.norm())
    }
}

impl From<Complex64> for ComplexVal {
    fn from(v: Complex64) -> ComplexVal {
        ComplexVal::exact(v)
    }
}

impl fmt::Debug for ComplexVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12e}{:+.12e}i ±{:.1e}", self.v.re, self.v.im, self.err)
    }
}
