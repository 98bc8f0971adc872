use std::f64::consts::PI;

use num_complex::Complex64;

use super::series::Series;
use crate::numerics::{lgamma, ComplexVal};
use crate::{Error, Result};

/// Arguments closer than this to a pole of Γ are rejected.
pub const POLE_DISTANCE: f64 = 1e-6;

fn pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let k = z.re.round().min(0.0);
    Complex64::new(z.re - k, z.im).norm()
}

fn check_poles(args: &[Complex64]) -> Result<()> {
    for z in args {
        if pole_distance(*z) < POLE_DISTANCE {
            return Err(Error::Domain(format!("Γ argument {z} is within {POLE_DISTANCE:e} of a pole")));
        }
    }
    Ok(())
}

/// (Σ ± ln Γ(·) − linear terms)·d/2 exponentiated. With d = 2 the power is the identity, so
/// the branch of ln Γ does not matter.
fn assemble(num: &[Complex64], den: &[Complex64], linear: Complex64, d: u32) -> Result<ComplexVal> {
    check_poles(num)?;
    check_poles(den)?;
    let mut log = -linear;
    let mut scale = linear.norm();
    for z in num {
        let l = lgamma(*z);
        scale += l.norm();
        log += l;
    }
    for z in den {
        let l = lgamma(*z);
        scale += l.norm();
        log -= l;
    }
    let half = d as f64 / 2.0;
    let v = (log * half).exp();
    Ok(ComplexVal::new(v, v.norm() * 4.0 * f64::EPSILON * half * (scale + 10.0)))
}

/// G₁ or G₂ at (s, w) as displayed, for K of degree d and n-th order characters.
pub fn gamma_factor(which: Series, s: Complex64, w: Complex64, n: u32, d: u32) -> Result<ComplexVal> {
    let nf = n as f64;
    let ln2pi = (2.0 * PI).ln();
    let ln2pin = (2.0 * PI * nf).ln();
    match which {
        Series::Z1 => {
            let v = s + w - 1.0;
            let linear = 1.5 * ln2pi + (nf * v - 0.5) * ln2pin;
            assemble(&[s, w, v * nf], &[v], Complex64::new(linear.re, linear.im), d)
        }
        Series::Z2 => {
            let h = w - 0.5;
            let linear = (2.0 * s + 1.0) * ln2pi + (nf * h - 0.5) * ln2pin;
            assemble(&[s, s + h, h * nf], &[h], linear, d)
        }
    }
}

/// (Γ(1−s)/(Γ(s)(2π)^{3/2−2s}))^{d/2}.
pub fn quotient_rhs(s: Complex64, d: u32) -> Result<ComplexVal> {
    let one = Complex64::new(1.0, 0.0);
    let linear = (1.5 - 2.0 * s) * (2.0 * PI).ln();
    assemble(&[one - s], &[s], linear, d)
}

/// |G₂(1−s, w+s−1/2)/G₁(s,w) − (Γ(1−s)/(Γ(s)(2π)^{3/2−2s}))^{d/2}|, plus the propagated error.
pub fn quotient_check(s: Complex64, w: Complex64, n: u32, d: u32) -> Result<(f64, f64)> {
    let one = Complex64::new(1.0, 0.0);
    let g2 = gamma_factor(Series::Z2, one - s, w + s - 0.5, n, d)?;
    let g1 = gamma_factor(Series::Z1, s, w, n, d)?;
    let rhs = quotient_rhs(s, d)?;
    let q = g2.v / g1.v;
    let qerr = q.norm() * (g2.err / g2.abs() + g1.err / g1.abs());
    Ok(((q - rhs.v).norm(), qerr + rhs.err))
}
