use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::gauss_epsilon;
use crate::algebra::{for_each_ideal, ideal_list, primes_up_to_norm, Field, Prime};
use crate::characters::HeckeChar;
use crate::numerics::{gamma, upper_gamma, ComplexVal};
use crate::Result;

/// |#{𝒩𝔞 ≤ y} − κy| ≤ LATTICE_C·√y for y ≥ 1 (checked in the tests up to 10⁶).
pub const LATTICE_C: f64 = 3.0;

/// Σ_{𝒩𝔟 ≤ X} χ(𝔟)𝒩𝔟^{−s}, exact up to rounding.
pub fn l_partial(ch: &HeckeChar, s: Complex64, x: u64) -> ComplexVal {
    let list = ideal_list(ch.conductor().field(), x);
    let mut sum = Complex64::new(0.0, 0.0);
    for (g, nm) in list.iter() {
        let c = ch.eval_element(g);
        if c.is_zero() {
            continue;
        }
        sum += c.to_complex() * (-s * (*nm as f64).ln()).exp();
    }
    ComplexVal::exact(sum)
}

/// Bound on Σ_{𝒩𝔟 > X} 𝒩𝔟^{−σ} for σ > 1 by partial summation against the ideal count.
pub fn tail_bound(field: Field, sigma: f64, x: u64) -> f64 {
    assert!(sigma > 1.0, "tail bound needs σ > 1");
    let x = (x.max(1)) as f64;
    let k = field.zeta_residue();
    k * x.powf(1.0 - sigma) / (sigma - 1.0) + LATTICE_C * x.powf(0.5 - sigma) * (sigma / (sigma - 0.5) + 1.0)
}

/// The partial sum with the tail bound attached as err; the bound needs Re s > 1.
pub fn l_partial_with_tail(ch: &HeckeChar, s: Complex64, x: u64) -> ComplexVal {
    let v = l_partial(ch, s, x);
    v.with_err(tail_bound(ch.conductor().field(), s.re, x))
}

/// Σ over 𝒩𝔟 ≤ X, 𝔟 coprime to the given primes, of χ(𝔟)·f(𝔟)·𝒩𝔟^{−s}, with f the Möbius
/// function when `mobius` is set.
fn sum_avoiding(ch: &HeckeChar, s: Complex64, x: u64, avoid: &[Prime], mobius: bool) -> ComplexVal {
    let field = ch.conductor().field();
    let primes: Vec<Prime> = primes_up_to_norm(field, x).into_iter().filter(|p| !avoid.contains(p)).collect();
    let mut terms = Vec::new();
    if primes.is_empty() && x >= 1 {
        terms.push((crate::algebra::CycInt::one(field), 1u64, 1.0));
    }
    for_each_ideal(&primes, x, |g, nm, fac| {
        let mu = if !mobius {
            1.0
        } else if fac.iter().any(|(_, e)| *e > 1) {
            0.0
        } else if fac.len() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        if mu != 0.0 {
            terms.push((*g, nm, mu));
        }
    });
    // fixed summation order, independent of the enumeration
    terms.sort_by_key(|(g, nm, _)| (*nm, g.a, g.b));
    let mut sum = Complex64::new(0.0, 0.0);
    for (g, nm, mu) in terms {
        let c = ch.eval_element(&g);
        if c.is_zero() {
            continue;
        }
        sum += c.to_complex() * mu * (-s * (nm as f64).ln()).exp();
    }
    ComplexVal::exact(sum)
}

/// L_S partial sum: only 𝔟 coprime to S.
pub fn l_partial_avoiding(ch: &HeckeChar, s: Complex64, x: u64, avoid: &[Prime]) -> ComplexVal {
    sum_avoiding(ch, s, x, avoid, false)
}

/// M_X(s) = Σ_{𝒩𝔟 ≤ X, 𝔟 ∈ 𝓘(S)} μ(𝔟)χ(𝔟)𝒩𝔟^{−s}.
pub fn mollifier_mx(ch: &HeckeChar, s: Complex64, x: u64, avoid: &[Prime]) -> ComplexVal {
    sum_avoiding(ch, s, x, avoid, true)
}

/// Approximate functional equation settings.
#[derive(Clone, Copy, Debug)]
pub struct AfeParams {
    /// Balance between the two sides; the value does not depend on it.
    pub balance: f64,
    /// Multiplies the default truncation length.
    pub length_factor: f64,
}

impl Default for AfeParams {
    fn default() -> AfeParams {
        AfeParams { balance: 1.0, length_factor: 1.0 }
    }
}

/// Q = √(|d|·𝒩𝔣)/(2π), the analytic conductor scale in Λ(s) = Q^s Γ(s) L(s,χ).
pub fn conductor_scale(ch: &HeckeChar) -> f64 {
    let field = ch.conductor().field();
    ((field.disc_abs() * ch.conductor().norm()) as f64).sqrt() / (2.0 * PI)
}

/// Dirichlet coefficients c_k = Σ_{𝒩𝔟=k} χ(𝔟) for k ≤ x (index 0 unused).
fn coefficients(ch: &HeckeChar, x: u64) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); x as usize + 1];
    for (g, nm) in ideal_list(ch.conductor().field(), x).iter() {
        let v = ch.eval_element(g);
        if !v.is_zero() {
            c[*nm as usize] += v.to_complex();
        }
    }
    c
}

/// L(s,χ) for a primitive character trivial on units, by the incomplete-gamma approximate
/// functional equation:
///   Γ(s)L(s) = Σ c_k k^{−s}Γ(s, k/(QK)) + εQ^{1−2s} Σ c̄_k k^{s−1}Γ(1−s, kK/Q) − Q^{−s}R,
/// with R = Qκ(K^{1−s}/(1−s) + K^{−s}/s) for the trivial character and 0 otherwise.
pub fn l_value(ch: &HeckeChar, s: Complex64, params: AfeParams) -> Result<ComplexVal> {
    let field = ch.conductor().field();
    let q = conductor_scale(ch);
    let kb = params.balance;
    let eps = gauss_epsilon(ch)?;
    let one = Complex64::new(1.0, 0.0);
    let len = q * kb.max(1.0 / kb) * (50.0 + 2.0 * s.im.abs()) * params.length_factor;
    let x = len.ceil().max(1.0) as u64;
    let c = coefficients(ch, x);
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (k, ck) in c.iter().enumerate().skip(1) {
        if *ck == Complex64::new(0.0, 0.0) {
            continue;
        }
        let kf = k as f64;
        let lk = kf.ln();
        let a = *ck * (-s * lk).exp() * upper_gamma(s, kf / (q * kb));
        let b = ck.conj() * ((s - 1.0) * lk).exp() * upper_gamma(one - s, kf * kb / q);
        mass += a.norm() + b.norm();
        first += a;
        second += b;
    }
    let lq = q.ln();
    let mut total = first + eps.v * ((one - 2.0 * s) * lq).exp() * second;
    if ch.is_trivial() {
        let r = q * field.zeta_residue() * ((one - s) * kb.ln()).exp() / (one - s)
            + q * field.zeta_residue() * (-s * kb.ln()).exp() / s;
        total -= (-s * lq).exp() * r;
        mass += ((-s * lq).exp() * r).norm();
    }
    let g = gamma(s);
    let v = total / g;
    // rounding in the sums and in the special functions, relative to the largest terms
    let err = (mass + total.norm()) * 1e-14 / g.norm() + eps.err * v.norm();
    Ok(ComplexVal::new(v, err))
}

/// L(1/2 + it, χ).
pub fn l_central(ch: &HeckeChar, t: f64) -> Result<ComplexVal> {
    l_value(ch, Complex64::new(0.5, t), AfeParams::default())
}
