use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::gauss_coeff::gauss_coeff_ideals;
use super::psi::ClassChar;
use crate::algebra::{canonical_decompose, ideal_list, nth_power_free_part, primes_up_to_norm, DecompositionMode, Field, IdealK};
use crate::characters::RayClassSetup;
use crate::lfunctions::{gauss_epsilon, tail_bound};
use crate::numerics::ComplexVal;
use crate::{Error, Result};

const ROUNDING: f64 = 1e-14;
/// Euler products stop once the log-tail bound drops below this, or at norm 2^22.
const EULER_TAIL: f64 = 1e-16;
const EULER_MAX: u64 = 1 << 22;

fn pow_neg(norm: u64, s: Complex64) -> Complex64 {
    (-s * (norm as f64).ln()).exp()
}

fn euler_cut(field: Field, sigma: f64) -> u64 {
    let mut x = 256u64;
    while x < EULER_MAX && tail_bound(field, sigma, x) > EULER_TAIL {
        x *= 2;
    }
    x
}

/// Π over primes 𝒩𝔭 ≤ X outside `avoid` of (1 − 𝒩𝔭^{−z})⁻¹, with the tail of log ζ bounded by
/// Σ_{𝒩𝔞>X} 𝒩𝔞^{−σ}.
fn euler_product(field: Field, z: Complex64, avoid: &[crate::algebra::Prime]) -> Result<ComplexVal> {
    if z.re <= 1.0 {
        return Err(Error::Domain(format!("Euler product at Re z = {} ≤ 1", z.re)));
    }
    let x = euler_cut(field, z.re);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut count = 0usize;
    for p in primes_up_to_norm(field, x) {
        if avoid.contains(&p) {
            continue;
        }
        prod /= Complex64::new(1.0, 0.0) - pow_neg(p.norm, z);
        count += 1;
    }
    let tb = tail_bound(field, z.re, x);
    let err = prod.norm() * (tb.exp_m1() + ROUNDING * (count as f64).sqrt());
    Ok(ComplexVal::new(prod, err))
}

/// ζ_{K,S}(z): the Dedekind zeta function without the Euler factors at S, Re z > 1.
pub fn zeta_ks(setup: &RayClassSetup, z: Complex64) -> Result<ComplexVal> {
    euler_product(setup.field(), z, setup.s())
}

/// ζ_K^S(z) = Π_{𝔭 ∈ S} (1 − 𝒩𝔭^{−z})⁻¹, a finite product.
pub fn zeta_k_at_s(setup: &RayClassSetup, z: Complex64) -> ComplexVal {
    let mut prod = Complex64::new(1.0, 0.0);
    for p in setup.s() {
        prod /= Complex64::new(1.0, 0.0) - pow_neg(p.norm, z);
    }
    ComplexVal::new(prod, ROUNDING * prod.norm())
}

/// Upper bound for ζ_{K,S}(σ), σ > 1 real.
fn zeta_ks_upper(setup: &RayClassSetup, sigma: f64) -> Result<f64> {
    let v = zeta_ks(setup, Complex64::new(sigma, 0.0))?;
    Ok(v.re() + v.err)
}

/// The bound exponent max(0, n(1 − σ) − 1) + 0.1 for |𝔄| in terms of 𝒩𝔞₂.
pub fn correction_bound_exponent(n: u32, sigma: f64) -> f64 {
    (n as f64 * (1.0 - sigma) - 1.0).max(0.0) + 0.1
}

fn check_is(setup: &RayClassSetup, a: &IdealK) -> Result<()> {
    if !setup.in_is(a) {
        return Err(Error::NotCoprime(format!("{a:?} is not in I(S)")));
    }
    Ok(())
}

/// 𝔄(s, ψ, 𝔞) = Σ_{𝔟₁𝔟₂𝔟₃ = 𝔞₂} χ_𝔞(𝔟₃)μ(𝔟₃)ψ(𝔟₃) 𝒩𝔟₁^{−(ns−n+1)} 𝒩𝔟₃^{−s}, for 𝔞 = 𝔞₁𝔞₂ⁿ
/// with 𝔞₁ n-th power free.
pub fn correction_a(s: Complex64, psi: &ClassChar, a: &IdealK, setup: &RayClassSetup) -> Result<ComplexVal> {
    check_is(setup, a)?;
    let n = setup.n();
    let a2 = canonical_decompose(a, n, DecompositionMode::NthPowerFree).nth_power_root;
    let e1 = -(s * n as f64 - n as f64 + 1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for b3 in a2.divisors() {
        let mu = b3.mobius();
        if mu == 0 {
            continue;
        }
        let c3 = setup.chi_eval(a, &b3)? * psi.eval(setup, &b3)?;
        if c3.is_zero() {
            continue;
        }
        let c3 = c3.to_complex() * mu as f64 * pow_neg(b3.norm(), s);
        let rest = a2.div_exact(&b3).expect("divisor");
        for b1 in rest.divisors() {
            let t = c3 * pow_neg(b1.norm(), -e1);
            mass += t.norm();
            sum += t;
        }
    }
    Ok(ComplexVal::new(sum, ROUNDING * mass))
}

/// Σ over 𝒩𝔟 ≤ X, 𝔟 coprime to S and to the conductor of χ_𝔞, of ψχ_𝔞(𝔟)𝒩𝔟^{−s}.
fn l_truncated(s: Complex64, psi: &ClassChar, a: &IdealK, x: u64, setup: &RayClassSetup) -> Result<(Complex64, f64)> {
    let ch = setup.hecke_char(a)?;
    let r = setup.r();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (g, nm) in ideal_list(setup.field(), x).iter() {
        // outside S exactly when the class is defined; outside S_𝔞 exactly when χ_𝔞 ≠ 0
        let Some(cls) = r.class_of(g) else { continue };
        let c = ch.eval_element(g);
        if c.is_zero() {
            continue;
        }
        let t = (c * psi.eval_class(cls)).to_complex() * pow_neg(*nm, s);
        mass += t.norm();
        sum += t;
    }
    Ok((sum, mass))
}

/// L*(s, ψ, 𝔞) = L_{S∪S_𝔞}(s, ψχ_𝔞)·𝔄(s, ψ, 𝔞) with the L-series truncated at 𝒩𝔟 ≤ X.
/// err carries the tail bound when Re s > 1 and is infinite otherwise.
pub fn l_star(s: Complex64, psi: &ClassChar, a: &IdealK, x: u64, setup: &RayClassSetup) -> Result<ComplexVal> {
    let corr = correction_a(s, psi, a, setup)?;
    let (sum, mass) = l_truncated(s, psi, a, x, setup)?;
    let tail = if s.re > 1.0 { tail_bound(setup.field(), s.re, x) } else { f64::INFINITY };
    Ok(ComplexVal::new(sum, tail + ROUNDING * mass) * corr)
}

/// 𝔞*: the part of 𝔞 coprime to the n-th power free part of 𝔟.
pub fn coprime_part(a: &IdealK, b: &IdealK, n: u32) -> IdealK {
    let b1 = nth_power_free_part(b, n);
    let f: Vec<_> = a.factors().iter().filter(|(p, _)| b1.valuation(p) == 0).copied().collect();
    IdealK::from_factors(a.field(), &f)
}

/// ε(χ_𝔟) for the primitive character attached to 𝔟; 1 when χ_𝔟 is trivial.
pub fn root_number_of(b: &IdealK, setup: &RayClassSetup) -> Result<ComplexVal> {
    let ch = setup.hecke_char(b)?;
    if ch.conductor().is_one() {
        return Ok(ComplexVal::real(1.0));
    }
    gauss_epsilon(&ch)
}

/// The 𝔟 side of D, independent of 𝔞: ideals in I(S) up to the cutoff with ε(χ_𝔟) and ψ(𝔟).
struct DTable {
    entries: Vec<(IdealK, ComplexVal, Complex64)>,
}

impl DTable {
    fn new(w: Complex64, psi: &ClassChar, x: u64, setup: &RayClassSetup) -> Result<DTable> {
        let ideals: Vec<IdealK> = ideal_list(setup.field(), x)
            .iter()
            .filter(|(g, _)| setup.r().class_of(g).is_some())
            .map(|(g, _)| IdealK::new(*g))
            .collect::<Result<_>>()?;
        let entries = ideals
            .into_par_iter()
            .map(|b| {
                let eps = root_number_of(&b, setup)?;
                let coef = psi.eval(setup, &b)?.to_complex() * pow_neg(b.norm(), w);
                Ok((b, eps, coef))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DTable { entries })
    }

    /// The truncated sum without the ζ factor, and its rounding mass.
    fn sum(&self, a: &IdealK, setup: &RayClassSetup) -> Result<(ComplexVal, f64)> {
        let n = setup.n();
        let mut sum = ComplexVal::zero();
        let mut mass = 0.0;
        for (b, eps, coef) in &self.entries {
            let g = gauss_coeff_ideals(a, b, n)?;
            if g.is_zero() {
                continue;
            }
            let chi = setup.chi_eval(b, &coprime_part(a, b, n))?.conj();
            let t = *eps * (*coef * chi.to_complex() * g.to_f64());
            mass += t.abs();
            sum = sum + t;
        }
        Ok((sum, mass))
    }
}

fn d_tail(setup: &RayClassSetup, w: Complex64, x: u64) -> f64 {
    // |g(𝔞,𝔟)| ≤ 𝒩𝔟^{1/2} and |ε| = 1
    if w.re > 1.5 {
        tail_bound(setup.field(), w.re - 0.5, x)
    } else {
        f64::INFINITY
    }
}

/// D(w, 𝔞, ψ) = ζ_{K,S}(nw − n/2 + 1)·Σ_{𝒩𝔟 ≤ X} ε(χ_𝔟)χ̄_𝔟(𝔞*)ψ(𝔟)g(𝔞,𝔟)𝒩𝔟^{−w}.
pub fn dirichlet_d(w: Complex64, a: &IdealK, psi: &ClassChar, x: u64, setup: &RayClassSetup) -> Result<ComplexVal> {
    check_is(setup, a)?;
    let table = DTable::new(w, psi, x, setup)?;
    let z = zeta_ks(setup, w * setup.n() as f64 - setup.n() as f64 / 2.0 + 1.0)?;
    let (sum, mass) = table.sum(a, setup)?;
    Ok(z * sum.with_err(d_tail(setup, w, x) + ROUNDING * mass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    Z1,
    Z2,
}

impl Series {
    pub fn from_index(i: u8) -> Result<Series> {
        match i {
            1 => Ok(Series::Z1),
            2 => Ok(Series::Z2),
            _ => Err(Error::InvalidArgument(format!("no series Z_{i}"))),
        }
    }
}

/// Truncation of Z₁ or Z₂: the outer sum over 𝒩𝔞 ≤ cutoffs.0, inner sums over 𝒩𝔟 ≤ cutoffs.1.
/// err bounds both truncations where the series converge absolutely (Re s, Re w > 1, and
/// Re w > 3/2 for Z₂) and is infinite elsewhere.
pub fn z_eval(
    which: Series,
    s: Complex64,
    w: Complex64,
    psi: &ClassChar,
    psi2: &ClassChar,
    cutoffs: (u64, u64),
    setup: &RayClassSetup,
) -> Result<ComplexVal> {
    let (xa, xb) = cutoffs;
    let outer: Vec<IdealK> = ideal_list(setup.field(), xa)
        .iter()
        .filter(|(g, _)| setup.r().class_of(g).is_some())
        .map(|(g, _)| IdealK::new(*g))
        .collect::<Result<_>>()?;
    let field = setup.field();
    match which {
        Series::Z1 => {
            let terms = outer
                .par_iter()
                .map(|a| {
                    let l = l_star(s, psi, a, xb, setup)?;
                    Ok(l * (psi2.eval(setup, a)?.to_complex() * pow_neg(a.norm(), w)))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut total = terms.iter().fold(ComplexVal::zero(), |acc, t| acc + *t);
            if s.re > 1.0 && w.re > 1.0 {
                // Σ_{𝒩𝔞>X}|L*(𝔞)|𝒩𝔞^{−σ} ≤ ζ_{K,S}(Re s)·Σ_{𝒩𝔞>X} τ₃(𝔞₂)𝒩𝔞^{−σ}, and the full τ₃ series
                // over I(S) is at most ζ_{K,S}(σ)ζ_{K,S}(nσ)³
                let n = setup.n();
                let full = zeta_ks_upper(setup, w.re)? * zeta_ks_upper(setup, n as f64 * w.re)?.powi(3);
                let head: f64 = outer
                    .iter()
                    .map(|a| {
                        let a2 = canonical_decompose(a, n, DecompositionMode::NthPowerFree).nth_power_root;
                        tau3(&a2) * (a.norm() as f64).powf(-w.re)
                    })
                    .sum();
                total = total.with_err(zeta_ks_upper(setup, s.re)? * (full - head).max(0.0));
            } else {
                total.err = f64::INFINITY;
            }
            Ok(total)
        }
        Series::Z2 => {
            let table = DTable::new(w, psi2, xb, setup)?;
            let n = setup.n() as f64;
            let z = zeta_ks(setup, w * n - n / 2.0 + 1.0)?;
            let inner_tail = d_tail(setup, w, xb);
            let terms = outer
                .par_iter()
                .map(|a| {
                    let (sum, mass) = table.sum(a, setup)?;
                    Ok(sum.with_err(inner_tail + ROUNDING * mass) * (psi.eval(setup, a)?.to_complex() * pow_neg(a.norm(), s)))
                })
                .collect::<Result<Vec<_>>>()?;
            let sum = terms.iter().fold(ComplexVal::zero(), |acc, t| acc + *t);
            let mut total = z * sum;
            if s.re > 1.0 && w.re > 1.5 {
                let d_max = (z.abs() + z.err) * zeta_ks_upper(setup, w.re - 0.5)?;
                total = total.with_err(d_max * tail_bound(field, s.re, xa));
            } else {
                total.err = f64::INFINITY;
            }
            Ok(total)
        }
    }
}

/// Number of ordered factorizations into three ideals.
fn tau3(a: &IdealK) -> f64 {
    a.factors().iter().map(|&(_, e)| ((e + 1) * (e + 2) / 2) as f64).product()
}

/// Z₁(s,w;ψ,ψ') − Σ_{ρ,ρ'} α(ψ,ψ',ρ,ρ')·Z₁(w,s;ρ,ρ') for externally supplied coefficients α.
/// The coefficients are not computed here.
pub fn fe11_residual<F>(
    s: Complex64,
    w: Complex64,
    psi: &ClassChar,
    psi2: &ClassChar,
    cutoffs: (u64, u64),
    setup: &RayClassSetup,
    alpha: F,
) -> Result<ComplexVal>
where
    F: Fn(&ClassChar, &ClassChar, &ClassChar, &ClassChar) -> Complex64,
{
    let mut out = z_eval(Series::Z1, s, w, psi, psi2, cutoffs, setup)?;
    let chars = ClassChar::all(setup);
    for rho in &chars {
        for rho2 in &chars {
            let a = alpha(psi, psi2, rho, rho2);
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            out = out - z_eval(Series::Z1, w, s, rho, rho2, cutoffs, setup)? * a;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MdsGridRow {
    pub re_s: f64,
    pub im_s: f64,
    pub re_w: f64,
    pub im_w: f64,
    #[serde(rename = "re_Z")]
    pub re_z: f64,
    #[serde(rename = "im_Z")]
    pub im_z: f64,
    pub err: f64,
    pub cutoff_a: u64,
    pub cutoff_b: u64,
}

pub fn z_grid(
    which: Series,
    points: &[(Complex64, Complex64)],
    psi: &ClassChar,
    psi2: &ClassChar,
    cutoffs: (u64, u64),
    setup: &RayClassSetup,
) -> Result<Vec<MdsGridRow>> {
    points
        .iter()
        .map(|&(s, w)| {
            let z = z_eval(which, s, w, psi, psi2, cutoffs, setup)?;
            Ok(MdsGridRow {
                re_s: s.re,
                im_s: s.im,
                re_w: w.re,
                im_w: w.im,
                re_z: z.re(),
                im_z: z.im(),
                err: z.err,
                cutoff_a: cutoffs.0,
                cutoff_b: cutoffs.1,
            })
        })
        .collect()
}

pub fn write_grid_csv<W: Write>(rows: &[MdsGridRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    if rows.is_empty() {
        w.write_record(["re_s", "im_s", "re_w", "im_w", "re_Z", "im_Z", "err", "cutoff_a", "cutoff_b"]).map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(())
}
