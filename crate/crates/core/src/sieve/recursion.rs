use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::{Error, Result};

/// α ↦ 2 − 2/(3α − 1).
pub fn recursion_step(a: &BigRational) -> BigRational {
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    int(2) - int(2) / (int(3) * a - int(1))
}

pub fn four_thirds() -> BigRational {
    BigRational::new(BigInt::from(4), BigInt::from(3))
}

/// [α₀, α₁, …, α_k], exact. The map is defined only above its fixed point 4/3.
pub fn exponent_recursion(alpha0: &BigRational, k: usize) -> Result<Vec<BigRational>> {
    if *alpha0 <= four_thirds() {
        return Err(Error::Domain(format!("α₀ = {alpha0} must exceed 4/3")));
    }
    let mut out = vec![alpha0.clone()];
    for _ in 0..k {
        let next = recursion_step(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Aitken's Δ² extrapolation from the last three terms.
pub fn aitken_limit(seq: &[BigRational]) -> Option<BigRational> {
    let n = seq.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (&seq[n - 3], &seq[n - 2], &seq[n - 1]);
    let den = c - b - (b - a);
    if den == BigRational::from_integer(BigInt::from(0)) {
        return Some(c.clone());
    }
    let d = c - b;
    Some(c - &d * &d / den)
}
