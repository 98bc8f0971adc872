use super::{IdealK, Prime};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionMode {
    /// 𝔞 = 𝔞₁·𝔞₂ⁿ with 𝔞₁ n-th power free.
    NthPowerFree,
    /// 𝔞 = 𝔞₀·𝔞₁·𝔞₂ⁿ with 𝔞₀ squarefree, 𝔞₁ squarefull and n-th power free, (𝔞₀,𝔞₁) = 1.
    SquarefreeSquarefull,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub squarefree_part: IdealK,
    pub squarefull_part: IdealK,
    pub nth_power_root: IdealK,
    pub mode: DecompositionMode,
}

impl Decomposition {
    pub fn recompose(&self, n: u32) -> IdealK {
        self.squarefree_part.mul(&self.squarefull_part).mul(&self.nth_power_root.pow(n))
    }
}

pub fn canonical_decompose(a: &IdealK, n: u32, mode: DecompositionMode) -> Decomposition {
    let field = a.field();
    let mut f0: Vec<(Prime, u32)> = Vec::new();
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    for &(p, e) in a.factors() {
        let (q, r) = (e / n, e % n);
        if q > 0 {
            f2.push((p, q));
        }
        match (mode, r) {
            (_, 0) => {}
            (DecompositionMode::SquarefreeSquarefull, 1) => f0.push((p, 1)),
            _ => f1.push((p, r)),
        }
    }
    Decomposition {
        squarefree_part: IdealK::from_factors(field, &f0),
        squarefull_part: IdealK::from_factors(field, &f1),
        nth_power_root: IdealK::from_factors(field, &f2),
        mode,
    }
}

/// The n-th power free part 𝔞₁ of 𝔞 = 𝔞₁𝔞₂ⁿ.
pub fn nth_power_free_part(a: &IdealK, n: u32) -> IdealK {
    canonical_decompose(a, n, DecompositionMode::NthPowerFree).squarefull_part
}

/// Splits 𝔞 = 𝔞₁𝔞₂²⋯𝔞ₙⁿ with 𝔞₁,…,𝔞ₙ₋₁ squarefree and pairwise coprime.
pub fn exponent_pattern(a: &IdealK, n: u32) -> Vec<IdealK> {
    let field = a.field();
    let mut parts: Vec<Vec<(Prime, u32)>> = vec![Vec::new(); n as usize];
    for &(p, e) in a.factors() {
        let (q, r) = (e / n, e % n);
        if r > 0 {
            parts[(r - 1) as usize].push((p, 1));
        }
        if q > 0 {
            parts[(n - 1) as usize].push((p, q));
        }
    }
    parts.iter().map(|f| IdealK::from_factors(field, f)).collect()
}
