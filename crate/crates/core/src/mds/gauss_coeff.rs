use std::fmt;

use crate::algebra::{IdealK, Prime};
use crate::{Error, Result};

/// An exact value c·√r with r squarefree in the norms that occur.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SqrtValue {
    pub coeff: i128,
    pub root: u128,
}

impl SqrtValue {
    pub const ZERO: SqrtValue = SqrtValue { coeff: 0, root: 1 };
    pub const ONE: SqrtValue = SqrtValue { coeff: 1, root: 1 };

    /// c·(√q)^k.
    fn monomial(c: i128, q: u64, k: u32) -> SqrtValue {
        let q = q as u128;
        let root = if k % 2 == 1 { q } else { 1 };
        SqrtValue { coeff: c * q.pow(k / 2) as i128, root }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff as f64 * (self.root as f64).sqrt()
    }

    /// Product, assuming the roots are coprime or equal (true for distinct prime norms).
    pub fn mul(&self, o: &SqrtValue) -> SqrtValue {
        if self.is_zero() || o.is_zero() {
            return SqrtValue::ZERO;
        }
        let g = num_integer::gcd(self.root, o.root);
        SqrtValue { coeff: self.coeff * o.coeff * g as i128, root: (self.root / g) * (o.root / g) }
    }
}

impl fmt::Debug for SqrtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root == 1 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}·√{}", self.coeff, self.root)
        }
    }
}

/// g(𝔭^α, 𝔭^β) from the five-case table.
pub fn gauss_coeff_local(alpha: u32, beta: u32, norm: u64, n: u32) -> SqrtValue {
    if beta == 0 {
        return SqrtValue::ONE;
    }
    let divisible = beta % n == 0;
    if divisible && alpha >= beta {
        // 𝒩𝔭^{β/2−1}(𝒩𝔭 − 1)
        return SqrtValue::monomial(norm as i128 - 1, norm, beta - 2);
    }
    if alpha + 1 == beta {
        return if divisible { SqrtValue::monomial(-1, norm, beta - 2) } else { SqrtValue::monomial(1, norm, beta - 1) };
    }
    SqrtValue::ZERO
}

pub fn gauss_coeff(alpha: u32, beta: u32, p: &Prime, n: u32) -> SqrtValue {
    gauss_coeff_local(alpha, beta, p.norm, n)
}

/// g(𝔞, 𝔟) = Π g(𝔭^α, 𝔭^β) over the primes of 𝔟 (the factor is 1 where β = 0).
pub fn gauss_coeff_ideals(a: &IdealK, b: &IdealK, n: u32) -> Result<SqrtValue> {
    if a.field() != b.field() {
        return Err(Error::InvalidArgument("ideals from different fields".into()));
    }
    let mut out = SqrtValue::ONE;
    for &(p, beta) in b.factors() {
        out = out.mul(&gauss_coeff(a.valuation(&p), beta, &p, n));
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// |g(𝔞, 𝔟)| ≤ 𝒩𝔟^{1/2}, which is what the tail bounds for D use.
pub fn gauss_coeff_bound(b: &IdealK) -> f64 {
    (b.norm() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_cases() {
        let n = 3;
        assert_eq!(gauss_coeff_local(5, 0, 7, n), SqrtValue::ONE);
        assert_eq!(gauss_coeff_local(0, 1, 7, n), SqrtValue::ONE);
        assert_eq!(gauss_coeff_local(1, 1, 7, n), SqrtValue::ZERO);
        // α ≥ β = 3: 7^{1/2}·6
        assert_eq!(gauss_coeff_local(3, 3, 7, n), SqrtValue { coeff: 6, root: 7 });
        assert_eq!(gauss_coeff_local(2, 3, 7, n), SqrtValue { coeff: -1, root: 7 });
        assert_eq!(gauss_coeff_local(1, 2, 7, n), SqrtValue { coeff: 1, root: 7 });
        assert_eq!(gauss_coeff_local(2, 2, 7, n), SqrtValue::ZERO);
        // n = 4, β = 4: α ≥ 4 gives 7·6, α = 3 gives −7
        assert_eq!(gauss_coeff_local(4, 4, 7, 4), SqrtValue { coeff: 42, root: 1 });
        assert_eq!(gauss_coeff_local(3, 4, 7, 4), SqrtValue { coeff: -7, root: 1 });
    }

    #[test]
    fn bound_holds() {
        for n in [3, 4] {
            for q in [4u64, 7, 13, 25] {
                for b in 0..10 {
                    for a in 0..10 {
                        let g = gauss_coeff_local(a, b, q, n).to_f64().abs();
                        assert!(g <= (q as f64).powf(b as f64 / 2.0) + 1e-9);
                    }
                }
            }
        }
    }
}
