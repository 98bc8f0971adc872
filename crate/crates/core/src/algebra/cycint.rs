use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Field;

/// Element a + b·ζ of Z[ζ] with ζ = ω (ω² = -1 - ω) or ζ = i.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycInt {
    pub a: i128,
    pub b: i128,
    pub field: Field,
}

impl CycInt {
    pub fn new(field: Field, a: i128, b: i128) -> CycInt {
        CycInt { a, b, field }
    }

    pub fn zero(field: Field) -> CycInt {
        CycInt::new(field, 0, 0)
    }

    pub fn one(field: Field) -> CycInt {
        CycInt::new(field, 1, 0)
    }

    pub fn from_int(field: Field, a: i128) -> CycInt {
        CycInt::new(field, a, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn norm(&self) -> i128 {
        let (a, b) = (self.a, self.b);
        match self.field {
            Field::Eisenstein => a * a - a * b + b * b,
            Field::Gaussian => a * a + b * b,
        }
    }

    pub fn conj(&self) -> CycInt {
        match self.field {
            Field::Eisenstein => CycInt::new(self.field, self.a - self.b, -self.b),
            Field::Gaussian => CycInt::new(self.field, self.a, -self.b),
        }
    }

    pub fn trace(&self) -> i128 {
        match self.field {
            Field::Eisenstein => 2 * self.a - self.b,
            Field::Gaussian => 2 * self.a,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn pow(&self, mut e: u64) -> CycInt {
        let mut base = *self;
        let mut acc = CycInt::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Exact quotient self / d, if d divides self.
    pub fn div_exact(&self, d: &CycInt) -> Option<CycInt> {
        assert!(!d.is_zero(), "division by zero");
        let num = *self * d.conj();
        let nd = d.norm();
        if num.a % nd == 0 && num.b % nd == 0 {
            Some(CycInt::new(self.field, num.a / nd, num.b / nd))
        } else {
            None
        }
    }

    pub fn divides(&self, x: &CycInt) -> bool {
        x.div_exact(self).is_some()
    }

    /// Euclidean division: q with N(self - q·d) < N(d).
    pub fn div_round(&self, d: &CycInt) -> (CycInt, CycInt) {
        let num = *self * d.conj();
        let nd = d.norm();
        let q = CycInt::new(self.field, round_div(num.a, nd), round_div(num.b, nd));
        let r = *self - q * *d;
        debug_assert!(r.norm() < nd);
        (q, r)
    }

    pub fn gcd(&self, other: &CycInt) -> CycInt {
        let (mut x, mut y) = (*self, *other);
        while !y.is_zero() {
            let (_, r) = x.div_round(&y);
            x = y;
            y = r;
        }
        x
    }

    /// Returns (g, s, t) with s·self + t·other = g = gcd.
    pub fn xgcd(&self, other: &CycInt) -> (CycInt, CycInt, CycInt) {
        let f = self.field;
        let (mut r0, mut r1) = (*self, *other);
        let (mut s0, mut s1) = (CycInt::one(f), CycInt::zero(f));
        let (mut t0, mut t1) = (CycInt::zero(f), CycInt::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_round(&r1);
            r0 = r1;
            r1 = r;
            let s = s0 - q * s1;
            s0 = s1;
            s1 = s;
            let t = t0 - q * t1;
            t0 = t1;
            t1 = t;
        }
        (r0, s0, t0)
    }

    fn sort_key(&self) -> (i128, i128, bool, bool) {
        (self.a.abs(), self.b.abs(), self.a < 0, self.b < 0)
    }

    /// The associate minimal under (|a|, |b|, a<0, b<0).
    pub fn normalized(&self) -> CycInt {
        if self.is_zero() {
            return *self;
        }
        let mut best = *self;
        let mut key = best.sort_key();
        for u in self.field.units() {
            let c = *self * u;
            let k = c.sort_key();
            if k < key {
                best = c;
                key = k;
            }
        }
        best
    }

    /// The unit u with self = u · self.normalized().
    pub fn unit_part(&self) -> CycInt {
        let nz = self.normalized();
        self.div_exact(&nz).expect("associate")
    }

    pub fn is_associate(&self, other: &CycInt) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let (a, b) = (self.a as f64, self.b as f64);
        match self.field {
            Field::Eisenstein => num_complex::Complex64::new(a - 0.5 * b, b * 0.75f64.sqrt()),
            Field::Gaussian => num_complex::Complex64::new(a, b),
        }
    }
}

fn round_div(x: i128, d: i128) -> i128 {
    // nearest integer to x/d, d > 0
    let q = x.div_euclid(d);
    let r = x.rem_euclid(d);
    if 2 * r >= d {
        q + 1
    } else {
        q
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, o: CycInt) -> CycInt {
        debug_assert_eq!(self.field, o.field);
        CycInt::new(self.field, self.a + o.a, self.b + o.b)
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, o: CycInt) -> CycInt {
        debug_assert_eq!(self.field, o.field);
        CycInt::new(self.field, self.a - o.a, self.b - o.b)
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt::new(self.field, -self.a, -self.b)
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, o: CycInt) -> CycInt {
        debug_assert_eq!(self.field, o.field);
        let (a, b, c, d) = (self.a, self.b, o.a, o.b);
        match self.field {
            Field::Eisenstein => CycInt::new(self.field, a * c - b * d, a * d + b * c - b * d),
            Field::Gaussian => CycInt::new(self.field, a * c - b * d, a * d + b * c),
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = match self.field {
            Field::Eisenstein => "ω",
            Field::Gaussian => "i",
        };
        write!(f, "({}{:+}{})", self.a, self.b, z)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
