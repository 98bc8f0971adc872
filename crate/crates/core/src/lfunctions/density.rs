use num_rational::Ratio;

use crate::{Error, Result};

pub type Q64 = Ratio<i64>;

/// 8(1−σ)/(7−6σ), the branch used on (1/2, 5/6].
pub fn g_low(sigma: Q64) -> Q64 {
    let one = Q64::from_integer(1);
    Q64::from_integer(8) * (one - sigma) / (Q64::from_integer(7) - Q64::from_integer(6) * sigma)
}

/// 2(10σ−7)(1−σ)/(24σ−12σ²−11), the branch used on (5/6, 1].
pub fn g_high(sigma: Q64) -> Q64 {
    let one = Q64::from_integer(1);
    let int = Q64::from_integer;
    int(2) * (int(10) * sigma - int(7)) * (one - sigma) / (int(24) * sigma - int(12) * sigma * sigma - int(11))
}

/// The zero density exponent g(σ) for 1/2 < σ ≤ 1.
pub fn density_exponent_g(sigma: Q64) -> Result<Q64> {
    let half = Q64::new(1, 2);
    if sigma <= half || sigma > Q64::from_integer(1) {
        return Err(Error::Domain(format!("σ = {sigma} is outside (1/2, 1]")));
    }
    Ok(if sigma <= Q64::new(5, 6) { g_low(sigma) } else { g_high(sigma) })
}

/// (σ, g(σ)) at `points` equally spaced σ in (1/2, 1], as floats for plotting.
pub fn g_curve(points: u32) -> Vec<(f64, f64)> {
    let den = 2 * points as i64;
    (1..=points as i64)
        .map(|k| {
            let sigma = Q64::new(points as i64 + k, den);
            let g = density_exponent_g(sigma).expect("in range");
            (*sigma.numer() as f64 / *sigma.denom() as f64, *g.numer() as f64 / *g.denom() as f64)
        })
        .collect()
}
