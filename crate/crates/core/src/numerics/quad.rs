use std::f64::consts::PI;

use num_complex::Complex64;

use super::ComplexVal;
use crate::{Error, Result};

/// Parameters for integrals over vertical lines Re s = c.
#[derive(Clone, Copy, Debug)]
pub struct LineRule {
    pub h: f64,
    /// Hard limit on |Im s|.
    pub max_height: f64,
    /// Stop once |f| stays below this for a full unit of height on both sides.
    pub cutoff: f64,
}

impl Default for LineRule {
    fn default() -> LineRule {
        LineRule { h: 0.05, max_height: 400.0, cutoff: 1e-18 }
    }
}

/// (1/2πi) ∫_{(c)} f(s) ds by the trapezoid rule. The error estimate compares step h with 2h
/// and adds the size of the integrand where the range was cut off.
pub fn line_integral<F>(f: F, c: f64, rule: LineRule) -> Result<ComplexVal>
where
    F: Fn(Complex64) -> Complex64,
{
    let h = rule.h;
    let per_unit = (1.0 / h).ceil() as usize;
    let mut fine = f(Complex64::new(c, 0.0));
    let mut coarse = fine;
    let mut quiet = 0usize;
    let mut k = 1usize;
    let mut edge;
    loop {
        let y = k as f64 * h;
        let a = f(Complex64::new(c, y));
        let b = f(Complex64::new(c, -y));
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Quadrature(format!("integrand not finite at {c}±{y}i")));
        }
        fine += a + b;
        if k % 2 == 0 {
            coarse += a + b;
        }
        edge = a.norm().max(b.norm());
        if edge < rule.cutoff {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet > per_unit {
            break;
        }
        if y > rule.max_height {
            if edge > 1e-12 {
                return Err(Error::Quadrature(format!("integrand still {edge:.2e} at height {y}")));
            }
            break;
        }
        k += 1;
    }
    let i_fine = fine * h / (2.0 * PI);
    let i_coarse = coarse * (2.0 * h) / (2.0 * PI);
    let err = (i_fine - i_coarse).norm() + edge;
    Ok(ComplexVal::new(i_fine, err))
}

/// ∫_a^b f by composite Simpson with m (even) panels.
pub fn simpson<F>(f: F, a: f64, b: f64, m: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = m + m % 2;
    let h = (b - a) / m as f64;
    let mut sum = f(a) + f(b);
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(a + k as f64 * h) * w;
    }
    sum * (h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma;

    #[test]
    fn inverse_mellin_of_gamma_is_exponential() {
        // (1/2πi)∫Γ(s)x^{−s}ds = e^{−x}
        for &x in &[0.1, 1.0, 3.0, 10.0] {
            let got = line_integral(|s| gamma(s) * (-s * f64::ln(x)).exp(), 0.5, LineRule::default()).unwrap();
            assert!((got.v.re - (-x as f64).exp()).abs() < 1e-12, "x={x}: {got:?}");
            assert!(got.v.im.abs() < 1e-12);
            assert!(got.err < 1e-8);
        }
    }

    #[test]
    fn slow_integrand_is_reported() {
        let r = line_integral(|s| 1.0 / (s * s), 1.0, LineRule { max_height: 50.0, ..LineRule::default() });
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn simpson_polynomial() {
        let v = simpson(|x| Complex64::new(x * x * x, 0.0), 0.0, 2.0, 10);
        assert!((v.re - 4.0).abs() < 1e-13);
    }
}
