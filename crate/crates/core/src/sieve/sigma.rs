use num_complex::Complex64;
use rayon::prelude::*;

use super::coeff::{dyadic_ideals, CoeffVector};
use crate::algebra::{exponent_pattern, IdealK};
use crate::characters::{HeckeChar, RayClassSetup, UnityRoot};
use crate::lfunctions::{dual_kernel, dual_sum, gauss_epsilon, smoothed_sum};
use crate::numerics::{ComplexVal, Window};
use crate::{Error, Result};

/// The window in Σ₃: the standard bump stretched to [1/2, 5/2] so that it is nonzero on [1, 2].
pub fn sigma3_window() -> Window {
    Window::Bump { lo: 0.5, hi: 2.5 }
}

pub fn check_j(n: u32, j: i64) -> Result<()> {
    if j.rem_euclid(n as i64) == 0 {
        return Err(Error::InvalidArgument(format!("j = {j} is divisible by n = {n}")));
    }
    Ok(())
}

/// A matrix of roots of unity (or zeros), rows indexed by 𝔞 and columns by the support of λ.
/// Entries are exponents k for e(k/n), −1 for 0.
#[derive(Clone, Debug)]
pub struct CharMatrix {
    pub rows: Vec<IdealK>,
    entries: Vec<Vec<i8>>,
    roots: Vec<Complex64>,
}

impl CharMatrix {
    fn build<F>(rows: Vec<IdealK>, cols: &[IdealK], n: u32, f: F) -> Result<CharMatrix>
    where
        F: Fn(&IdealK, &IdealK) -> Result<UnityRoot> + Sync,
    {
        let entries = rows
            .par_iter()
            .map(|a| cols.iter().map(|b| f(a, b).map(|u| u.exponent().map_or(-1, |e| e as i8))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let roots = (0..n).map(|k| UnityRoot::root(n, k as i64).to_complex()).collect();
        Ok(CharMatrix { rows, entries, roots })
    }

    /// Rows 𝔞 squarefree ~ M, entries χ_𝔞ʲ(𝔟).
    pub fn sigma1(setup: &RayClassSetup, m: f64, cols: &[IdealK], j: i64) -> Result<CharMatrix> {
        check_j(setup.n(), j)?;
        let rows = dyadic_ideals(setup, m, true);
        for a in &rows {
            setup.hecke_char(a)?;
        }
        CharMatrix::build(rows, cols, setup.n(), |a, b| Ok(setup.chi_eval(a, b)?.pow(j)))
    }

    /// Rows all 𝔞 ∈ 𝓘(S) ~ M, entries χ_𝔟ʲ(𝔞).
    pub fn sigma2(setup: &RayClassSetup, m: f64, cols: &[IdealK], j: i64) -> Result<CharMatrix> {
        check_j(setup.n(), j)?;
        for b in cols {
            setup.hecke_char(b)?;
        }
        CharMatrix::build(dyadic_ideals(setup, m, false), cols, setup.n(), |a, b| Ok(setup.chi_eval(b, a)?.pow(j)))
    }

    pub fn ncols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    fn row_dot(&self, r: usize, v: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, x) in self.entries[r].iter().zip(v) {
            if *e >= 0 {
                s += self.roots[*e as usize] * x;
            }
        }
        s
    }

    /// A·v.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.entries.len()).map(|r| self.row_dot(r, v)).collect()
    }

    /// A*·w.
    pub fn apply_adjoint(&self, w: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.ncols()];
        for (row, x) in self.entries.iter().zip(w) {
            for (o, e) in out.iter_mut().zip(row) {
                if *e >= 0 {
                    *o += self.roots[*e as usize].conj() * x;
                }
            }
        }
        out
    }

    /// Σ_rows |Σ_cols entry·λ|².
    pub fn form(&self, v: &[Complex64]) -> f64 {
        (0..self.entries.len()).map(|r| self.row_dot(r, v).norm_sqr()).sum()
    }

    /// The same sum accumulated in reverse order, for checking rounding.
    pub fn form_reversed(&self, v: &[Complex64]) -> f64 {
        let mut total = 0.0;
        for r in (0..self.entries.len()).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for (e, x) in self.entries[r].iter().zip(v).rev() {
                if *e >= 0 {
                    s += self.roots[*e as usize] * x;
                }
            }
            total += s.norm_sqr();
        }
        total
    }
}

pub fn sigma1(setup: &RayClassSetup, m: f64, lambda: &CoeffVector, j: i64) -> Result<f64> {
    Ok(CharMatrix::sigma1(setup, m, lambda.support(), j)?.form(lambda.values()))
}

pub fn sigma2(setup: &RayClassSetup, m: f64, lambda: &CoeffVector, j: i64) -> Result<f64> {
    Ok(CharMatrix::sigma2(setup, m, lambda.support(), j)?.form(lambda.values()))
}

/// The primitive character inducing χ_{𝔟₁}ʲ·χ̄_{𝔟₂}ʲ.
pub fn twisted_pair(setup: &RayClassSetup, b1: &IdealK, b2: &IdealK, j: i64) -> Result<HeckeChar> {
    let x = setup.hecke_char(b1)?.pow(j);
    let y = setup.hecke_char(b2)?.pow(-j);
    Ok(x.mul(&y))
}

/// The Hermitian form behind Σ₃ for one class: H[𝔟₁][𝔟₂] = Σ_𝔞 W(𝒩𝔞/M)χ_{𝔟₁,𝔟₂}ʲ(𝔞) on
/// coprime pairs in the class, zero elsewhere. Indices refer to the support of λ.
#[derive(Clone, Debug)]
pub struct Sigma3Form {
    pub class: u32,
    pub members: Vec<usize>,
    pub h: Vec<Vec<ComplexVal>>,
}

fn class_members(setup: &RayClassSetup, support: &[IdealK], class: u32) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, b) in support.iter().enumerate() {
        if setup.class_of(b)? == class {
            out.push(i);
        }
    }
    Ok(out)
}

fn pair_form<F>(setup: &RayClassSetup, support: &[IdealK], class: u32, j: i64, f: F) -> Result<Sigma3Form>
where
    F: Fn(&IdealK, &IdealK, &HeckeChar) -> Result<ComplexVal> + Sync,
{
    check_j(setup.n(), j)?;
    if class as usize >= setup.r().order() {
        return Err(Error::InvalidArgument(format!("class {class} out of range")));
    }
    let members = class_members(setup, support, class)?;
    for &i in &members {
        setup.hecke_char(&support[i])?;
    }
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .enumerate()
        .flat_map(|(p, &a)| members[p + 1..].iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| support[a].is_coprime(&support[b]))
        .collect();
    let vals = pairs
        .par_iter()
        .map(|&(a, b)| {
            let ch = twisted_pair(setup, &support[a], &support[b], j)?;
            f(&support[a], &support[b], &ch)
        })
        .collect::<Result<Vec<_>>>()?;
    let k = members.len();
    let pos = |i: usize| members.iter().position(|&m| m == i).unwrap();
    let mut h = vec![vec![ComplexVal::zero(); k]; k];
    for (&(a, b), v) in pairs.iter().zip(vals) {
        let (pa, pb) = (pos(a), pos(b));
        h[pa][pb] = v;
        h[pb][pa] = v.conj();
    }
    Ok(Sigma3Form { class, members, h })
}

impl Sigma3Form {
    /// Direct evaluation of the smoothed inner sums.
    pub fn direct(setup: &RayClassSetup, m: f64, support: &[IdealK], class: u32, j: i64, window: Window) -> Result<Sigma3Form> {
        pair_form(setup, support, class, j, |_, _, ch| Ok(smoothed_sum(ch, window, m).0))
    }

    /// The inner sums after the summation formula, with the root number written as
    /// η·ε((χ^(𝔟₁))ʲ)·ε((χ̄^(𝔟₂))ʲ)·ψ̄_(𝔟₂)(𝔟₂)ʲ·ψ_(𝔟₁)(𝔟₁)ʲ and η = χ_{𝔟₁}(𝔟₂)ʲ·χ̄_{𝔟₂}(𝔟₁)ʲ.
    pub fn dual(setup: &RayClassSetup, m: f64, support: &[IdealK], class: u32, j: i64, window: Window) -> Result<Sigma3Form> {
        let kernel = dual_kernel(window, setup.field())?;
        pair_form(setup, support, class, j, |b1, b2, ch| {
            let (x1, p1) = setup.decompose_char(b1)?;
            let (x2, p2) = setup.decompose_char(b2)?;
            let eta = setup.chi_eval(b1, b2)?.pow(j) * setup.chi_eval(b2, b1)?.conj().pow(j);
            let eps = gauss_epsilon(&x1.pow(j))?
                * gauss_epsilon(&x2.conj().pow(j))?
                * (eta * p2.eval(b2).conj().pow(j) * p1.eval(b1).pow(j)).to_complex();
            let nf = b1.norm() as f64 * b2.norm() as f64;
            let (sum, _) = dual_sum(ch, &kernel, m)?;
            Ok(eps * sum.scale(m / nf.sqrt()))
        })
    }

    /// Σ₃ = |Σ λ_{𝔟₁}λ̄_{𝔟₂}H[𝔟₁][𝔟₂]|, with the propagated error.
    pub fn value(&self, lambda: &[Complex64]) -> ComplexVal {
        let mut s = ComplexVal::zero();
        for (p, &a) in self.members.iter().enumerate() {
            for (q, &b) in self.members.iter().enumerate() {
                if p != q {
                    s = s + self.h[p][q] * (lambda[a] * lambda[b].conj());
                }
            }
        }
        ComplexVal::new(Complex64::new(s.abs(), 0.0), s.err)
    }

    /// μ ↦ Hμ on the class members.
    pub fn apply(&self, mu: &[Complex64]) -> Vec<Complex64> {
        self.h.iter().map(|row| row.iter().zip(mu).map(|(h, x)| h.v * x).sum()).collect()
    }
}

pub fn sigma3(setup: &RayClassSetup, m: f64, lambda: &CoeffVector, j: i64, class: u32, window: Window) -> Result<f64> {
    let form = Sigma3Form::direct(setup, m, lambda.support(), class, j, window)?;
    Ok(form.value(lambda.values()).re())
}

/// Rejects X-tuples that are not n dyadic values 2^k/2 ≥ 1/2.
pub fn check_tuple(n: u32, xs: &[f64]) -> Result<()> {
    if xs.len() != n as usize {
        return Err(Error::InvalidArgument(format!("X-tuple has {} entries, expected {n}", xs.len())));
    }
    for &x in xs {
        let k = (2.0 * x).log2();
        if !(x >= 0.5) || k.fract() != 0.0 {
            return Err(Error::InvalidArgument(format!("X-tuple entry {x} is not of the form 2^k/2")));
        }
    }
    Ok(())
}

/// Whether X lies in Ξ(M): Π X_iⁱ < M ≤ ½Π(2X_i)ⁱ.
pub fn in_xi(m: f64, xs: &[f64]) -> bool {
    let lo: f64 = xs.iter().enumerate().map(|(i, x)| x.powi(i as i32 + 1)).product();
    let hi: f64 = xs.iter().enumerate().map(|(i, x)| (2.0 * x).powi(i as i32 + 1)).product::<f64>() / 2.0;
    lo < m && m <= hi
}

/// The dyadic X-tuple of 𝔞 = 𝔞₁𝔞₂²⋯𝔞ₙⁿ.
pub fn tuple_of(a: &IdealK, n: u32) -> Vec<f64> {
    exponent_pattern(a, n)
        .iter()
        .map(|p| {
            let nm = p.norm() as f64;
            // X with X < 𝒩 ≤ 2X
            2f64.powi((nm.log2()).ceil() as i32 - 1)
        })
        .collect()
}

/// Σ₄ by enumerating tuples (𝔞₁, …, 𝔞ₙ) with 𝔞_i ~ X_i, 𝔞₁…𝔞ₙ₋₁ squarefree, pairwise coprime
/// and coprime to S, 𝔞ₙ ∈ 𝓘(S), and 𝔞 = Π𝔞_iⁱ ~ M.
pub fn sigma4(setup: &RayClassSetup, m: f64, lambda: &CoeffVector, j: i64, xs: &[f64]) -> Result<f64> {
    let n = setup.n();
    check_j(n, j)?;
    check_tuple(n, xs)?;
    let lists: Vec<Vec<IdealK>> =
        xs.iter().enumerate().map(|(i, &x)| dyadic_ideals(setup, x, i + 1 < n as usize)).collect();
    let mut tuples: Vec<IdealK> = vec![crate::algebra::IdealK::one(setup.field())];
    let mut used: Vec<Vec<IdealK>> = vec![Vec::new()];
    for (i, list) in lists.iter().enumerate() {
        let mut next = Vec::new();
        let mut next_used = Vec::new();
        for (a, parts) in tuples.iter().zip(&used) {
            for p in list {
                if i + 1 < n as usize && parts.iter().any(|q| !q.is_coprime(p)) {
                    continue;
                }
                let prod = a.mul(&p.pow(i as u32 + 1));
                if prod.norm() as f64 > 2.0 * m {
                    continue;
                }
                let mut ps = parts.clone();
                ps.push(p.clone());
                next.push(prod);
                next_used.push(ps);
            }
        }
        tuples = next;
        used = next_used;
    }
    let rows: Vec<IdealK> = tuples.into_iter().filter(|a| a.norm() as f64 > m).collect();
    let cols = lambda.support();
    let mat = CharMatrix::build(rows, cols, n, |a, b| Ok(setup.chi_eval(b, a)?.pow(j)))?;
    Ok(mat.form(lambda.values()))
}

/// All dyadic X-tuples of ideals 𝔞 ∈ 𝓘(S) ~ M, sorted.
pub fn dyadic_tuples(setup: &RayClassSetup, m: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = dyadic_ideals(setup, m, false).iter().map(|a| tuple_of(a, setup.n())).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// Extra inputs for Σ₃ and Σ₄.
#[derive(Clone, Debug, Default)]
pub struct SigmaExtra {
    pub class: Option<u32>,
    pub xs: Option<Vec<f64>>,
    pub window: Option<Window>,
}

/// Σ_kind for kind ∈ {1, 2, 3, 4}.
pub fn sigma(kind: u8, setup: &RayClassSetup, m: f64, lambda: &CoeffVector, j: i64, extra: &SigmaExtra) -> Result<f64> {
    match kind {
        1 => sigma1(setup, m, lambda, j),
        2 => sigma2(setup, m, lambda, j),
        3 => {
            let class = extra.class.ok_or_else(|| Error::InvalidArgument("Σ₃ needs a class".into()))?;
            sigma3(setup, m, lambda, j, class, extra.window.unwrap_or_else(sigma3_window))
        }
        4 => {
            let xs = extra.xs.as_ref().ok_or_else(|| Error::InvalidArgument("Σ₄ needs an X-tuple".into()))?;
            sigma4(setup, m, lambda, j, xs)
        }
        _ => Err(Error::InvalidArgument(format!("no Σ_{kind}"))),
    }
}
