use num_complex::Complex64;

use super::dual::{dual_kernel, DualKernel};
use super::gauss::gauss_epsilon;
use crate::algebra::ideal_list;
use crate::characters::HeckeChar;
use crate::numerics::{ComplexVal, Window};
use crate::{Error, Result};

/// Size below which window values and dual weights are dropped.
const NEGLIGIBLE: f64 = 1e-18;
/// Largest dual sum that is attempted before giving up on the kernel's decay.
const MAX_DUAL_NORM: u64 = 4_000_000;

/// Both sides of the smoothed summation identity for one character.
#[derive(Clone, Debug)]
pub struct PoissonCheck {
    pub left: ComplexVal,
    pub right: ComplexVal,
    pub residual: f64,
    /// Quadrature and truncation error carried by the right side.
    pub quad_err: f64,
    pub left_terms: usize,
    pub dual_terms: usize,
}

/// Σ_𝔞 W(𝒩𝔞/M)χ(𝔞), directly.
pub fn smoothed_sum(ch: &HeckeChar, window: Window, m: f64) -> (ComplexVal, usize) {
    if matches!(window, Window::Zero) {
        return (ComplexVal::zero(), 0);
    }
    let field = ch.conductor().field();
    let x = (window.support_end(NEGLIGIBLE) * m).floor() as u64;
    let list = ideal_list(field, x);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (g, nm) in list.iter() {
        let w = window.eval(*nm as f64 / m);
        if w == 0.0 {
            continue;
        }
        mass += w;
        sum += ch.eval_element(g).to_complex() * w;
    }
    let err = mass * 4.0 * f64::EPSILON + NEGLIGIBLE * m * 10.0;
    (ComplexVal::new(sum, err), list.len())
}

/// Σ_𝔞 χ̄(𝔞)Ẇ(M𝒩𝔞/𝒩𝔣), truncated where Ẇ has dropped below 10⁻¹⁸.
pub fn dual_sum(ch: &HeckeChar, kernel: &DualKernel, m: f64) -> Result<(ComplexVal, usize)> {
    let field = kernel.field();
    let nf = ch.conductor().norm() as f64;
    let x_end = kernel.decay_point(NEGLIGIBLE);
    let cut = (x_end * nf / m).floor();
    if cut > MAX_DUAL_NORM as f64 {
        return Err(Error::Quadrature(format!(
            "dual weight needs ideals up to norm {cut:.3e} before dropping below {NEGLIGIBLE:e}"
        )));
    }
    let list = ideal_list(field, cut as u64);
    let mut sum = ComplexVal::zero();
    for (g, nm) in list.iter() {
        let c = ch.eval_element(g).conj();
        if c.is_zero() {
            continue;
        }
        let w = kernel.eval(m * *nm as f64 / nf);
        sum = sum + w * c.to_complex();
    }
    sum.err += NEGLIGIBLE * 10.0;
    Ok((sum, list.len()))
}

/// The dual side: main terms at s = 1 and s = 0 plus (Mε/√𝒩𝔣)·Σ χ̄(𝔞)Ẇ(M𝒩𝔞/𝒩𝔣).
pub fn dual_side(ch: &HeckeChar, kernel: &DualKernel, m: f64) -> Result<(ComplexVal, usize)> {
    let window = kernel.window();
    if matches!(window, Window::Zero) {
        return Ok((ComplexVal::zero(), 0));
    }
    let field = kernel.field();
    if !ch.is_unit_trivial() {
        return Err(Error::InvalidArgument("character is not trivial on units".into()));
    }
    let nf = ch.conductor().norm() as f64;
    let eps = gauss_epsilon(ch)?;
    let (sum, terms) = dual_sum(ch, kernel, m)?;
    let mut right = eps * sum.scale(m / nf.sqrt());
    if ch.is_trivial() {
        let one = Complex64::new(1.0, 0.0);
        let main = field.zeta_residue() * m * window.mellin(one).re;
        let at_zero = field.zeta_at_zero() * window.residue_at_zero();
        right = right + ComplexVal::new(Complex64::new(main + at_zero, 0.0), 1e-15 * main.abs());
    }
    Ok((right, terms))
}

/// Evaluates both sides of the identity and returns their difference. Quadrature failures come
/// back as `Error::Quadrature`, never as a large residual.
pub fn smoothed_sum_check(ch: &HeckeChar, window: Window, m: f64) -> Result<PoissonCheck> {
    if m <= 0.0 {
        return Err(Error::InvalidArgument(format!("M = {m} must be positive")));
    }
    let field = ch.conductor().field();
    let (left, left_terms) = smoothed_sum(ch, window, m);
    let (right, dual_terms) = if matches!(window, Window::Zero) {
        (ComplexVal::zero(), 0)
    } else {
        dual_side(ch, &*dual_kernel(window, field)?, m)?
    };
    Ok(PoissonCheck {
        residual: (left.v - right.v).norm(),
        quad_err: right.err,
        left,
        right,
        left_terms,
        dual_terms,
    })
}

/// x^A·|Ẇ(x)| at the given points, for checking that the dual weight decays faster than x^{−A}.
pub fn decay_profile(kernel: &DualKernel, a: f64, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| x.powf(a) * kernel.eval(x).abs()).collect()
}
