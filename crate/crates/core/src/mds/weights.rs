use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::gamma_factor;
use super::series::Series;
use crate::numerics::{line_integral, ComplexVal, LineRule};
use crate::{Error, Result};

/// C = (|s||s+w|^{n−1}|w|)^d on Re s = Re w = 1/2.
pub fn conductor_measure(s: Complex64, w: Complex64, n: u32, d: u32) -> Result<f64> {
    if (s.re - 0.5).abs() > 1e-12 || (w.re - 0.5).abs() > 1e-12 {
        return Err(Error::Domain(format!("C is defined on Re s = Re w = 1/2, got {s}, {w}")));
    }
    Ok((s.norm() * (s + w).norm().powi(n as i32 - 1) * w.norm()).powi(d as i32))
}

/// C₁ = ((1+|u|)(1+|u+t|)^{n−1})^d.
pub fn c1_measure(t: f64, u: f64, n: u32, d: u32) -> f64 {
    ((1.0 + u.abs()) * (1.0 + (u + t).abs()).powi(n as i32 - 1)).powi(d as i32)
}

/// R = (1+|t|)^{d/2}√P.
pub fn r_choice(t: f64, p: f64, d: u32) -> f64 {
    (1.0 + t.abs()).powf(d as f64 / 2.0) * p.sqrt()
}

fn two_pow(z: Complex64) -> Complex64 {
    (z * std::f64::consts::LN_2).exp()
}

/// P_z(w) = (1 − 2^{z−w})(1 − 2^{z+w})(1 − 2^z)^{−2}, Re z ≠ 0.
pub fn weight_p(z: Complex64, w: Complex64) -> Result<Complex64> {
    if z.re == 0.0 {
        return Err(Error::Domain(format!("P_z needs Re z ≠ 0, got {z}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let den = one - two_pow(z);
    Ok((one - two_pow(z - w)) * (one - two_pow(z + w)) / (den * den))
}

/// Parameters of H_{t,u} and V±.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSpec {
    pub t: f64,
    pub u: f64,
    /// The decay order A.
    pub a: u32,
    pub n: u32,
    pub d: u32,
}

impl WeightSpec {
    pub fn new(t: f64, u: f64, a: u32, n: u32, d: u32) -> Result<WeightSpec> {
        if a == 0 || n < 2 || d == 0 {
            return Err(Error::InvalidArgument(format!("A = {a}, n = {n}, d = {d}")));
        }
        let spec = WeightSpec { t, u, a, n, d };
        if spec.zero_set().iter().any(|z| z.re == 0.0) {
            return Err(Error::Domain("zero set meets Re z = 0".into()));
        }
        Ok(spec)
    }

    /// 𝔷 = {±1/2 − iu, ±1/n − i(u+t)}.
    pub fn zero_set(&self) -> [Complex64; 4] {
        let nf = self.n as f64;
        [
            Complex64::new(0.5, -self.u),
            Complex64::new(-0.5, -self.u),
            Complex64::new(1.0 / nf, -(self.u + self.t)),
            Complex64::new(-1.0 / nf, -(self.u + self.t)),
        ]
    }

    pub fn c1(&self) -> f64 {
        c1_measure(self.t, self.u, self.n, self.d)
    }
}

/// H_{t,u}(w) = cos(πw/3A)^{−3And}·Π_{z∈𝔷} P_z(w), holomorphic for |Re w| < 3A/2.
pub fn weight_h(spec: &WeightSpec, w: Complex64) -> Result<Complex64> {
    let a = spec.a as f64;
    if w.re.abs() >= 1.5 * a {
        return Err(Error::Domain(format!("H is holomorphic only for |Re w| < {}", 1.5 * a)));
    }
    let power = 3 * spec.a * spec.n * spec.d;
    let mut h = (w * PI / (3.0 * a)).cos().powi(-(power as i32));
    for z in spec.zero_set() {
        h *= weight_p(z, w)?;
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// G₁(1/2 ± it, 1/2 ± iu + w)/G₁(1/2 + it, 1/2 + iu)·H(w)/w, without the y-dependence.
fn v_kernel(spec: &WeightSpec, sign: Sign, w: Complex64, g0: Complex64) -> Result<Complex64> {
    let sg = if sign == Sign::Plus { 1.0 } else { -1.0 };
    let s = Complex64::new(0.5, sg * spec.t);
    let ww = Complex64::new(0.5, sg * spec.u) + w;
    let g = gamma_factor(Series::Z1, s, ww, spec.n, spec.d)?;
    Ok(g.v / g0 * weight_h(spec, w)? / w)
}

fn v_rule() -> LineRule {
    LineRule { h: 0.05, max_height: 200.0, cutoff: 1e-20 }
}

fn base_g1(spec: &WeightSpec) -> Result<Complex64> {
    Ok(gamma_factor(Series::Z1, Complex64::new(0.5, spec.t), Complex64::new(0.5, spec.u), spec.n, spec.d)?.v)
}

/// V±(y) on the line Re w = c, 0 < c < 3A/2 (the value does not depend on c).
pub fn weight_v_on(spec: &WeightSpec, sign: Sign, y: f64, c: f64) -> Result<ComplexVal> {
    if y <= 0.0 {
        return Err(Error::Domain(format!("V needs y > 0, got {y}")));
    }
    if c <= 0.0 || c >= 1.5 * spec.a as f64 {
        return Err(Error::Domain(format!("contour Re w = {c} outside (0, 3A/2)")));
    }
    let g0 = base_g1(spec)?;
    let ln_x = (spec.c1().sqrt() * y).ln();
    let failure = RefCell::new(None);
    let v = line_integral(
        |w| match v_kernel(spec, sign, w, g0) {
            Ok(k) => k * (-w * ln_x).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        c,
        v_rule(),
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// V±(y) by quadrature on Re w = 1.
pub fn weight_v(spec: &WeightSpec, sign: Sign, y: f64) -> Result<ComplexVal> {
    weight_v_on(spec, sign, y, 1.0)
}

/// A constant c_A with (1+y)^A|V±(y)| ≤ c_A for y ≥ 1, from the contour Re w = A:
/// c_A = 2^A·C₁^{−A/2}·(1/2π)∫|kernel(A+iv)|dv.
pub fn v_decay_constant(spec: &WeightSpec, sign: Sign) -> Result<ComplexVal> {
    let a = spec.a as f64;
    let g0 = base_g1(spec)?;
    let failure = RefCell::new(None);
    let j = line_integral(
        |w| match v_kernel(spec, sign, w, g0) {
            Ok(k) => Complex64::new(k.norm(), 0.0),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        a,
        v_rule(),
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(j.scale(2f64.powf(a) * spec.c1().powf(-a / 2.0)))
}
