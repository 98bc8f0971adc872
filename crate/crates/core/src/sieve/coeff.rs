use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{ideals_up_to_avoiding, IdealK};
use crate::characters::RayClassSetup;
use crate::{Error, Result};

/// 𝔞 ∈ 𝓘(S) with X < 𝒩𝔞 ≤ 2X, sorted; squarefree only when asked.
pub fn dyadic_ideals(setup: &RayClassSetup, x: f64, squarefree: bool) -> Vec<IdealK> {
    let hi = (2.0 * x).floor();
    if hi < 1.0 {
        return Vec::new();
    }
    ideals_up_to_avoiding(setup.field(), hi as u64, setup.s())
        .into_iter()
        .filter(|a| a.norm() as f64 > x && (!squarefree || a.is_squarefree()))
        .collect()
}

/// Coefficients λ_𝔟 on the squarefree 𝔟 ∈ 𝓘(S) with N < 𝒩𝔟 ≤ 2N, stored densely over that
/// support in sorted order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    n: f64,
    support: Arc<Vec<IdealK>>,
    values: Vec<Complex64>,
}

impl CoeffVector {
    pub fn support_for(setup: &RayClassSetup, n: f64) -> Arc<Vec<IdealK>> {
        Arc::new(dyadic_ideals(setup, n, true))
    }

    pub fn zeros(support: Arc<Vec<IdealK>>, n: f64) -> CoeffVector {
        let values = vec![Complex64::new(0.0, 0.0); support.len()];
        CoeffVector { n, support, values }
    }

    pub fn from_values(support: Arc<Vec<IdealK>>, n: f64, values: Vec<Complex64>) -> Result<CoeffVector> {
        if values.len() != support.len() {
            return Err(Error::InvalidArgument(format!("{} values for {} ideals", values.len(), support.len())));
        }
        Ok(CoeffVector { n, support, values })
    }

    /// Builds λ from explicit entries; every key must lie in the support.
    pub fn from_entries(support: Arc<Vec<IdealK>>, n: f64, entries: &[(IdealK, Complex64)]) -> Result<CoeffVector> {
        let mut v = CoeffVector::zeros(support, n);
        for (b, x) in entries {
            let i = v.index(b).ok_or_else(|| {
                Error::InvalidArgument(format!("{b:?} is not a squarefree ideal in I(S) with {n} < norm <= {}", 2.0 * n))
            })?;
            v.values[i] = *x;
        }
        Ok(v)
    }

    /// Independent uniformly random phases on the whole support.
    pub fn random_unimodular<R: Rng>(support: Arc<Vec<IdealK>>, n: f64, rng: &mut R) -> CoeffVector {
        let values = (0..support.len())
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        CoeffVector { n, support, values }
    }

    pub fn index(&self, b: &IdealK) -> Option<usize> {
        self.support.binary_search(b).ok()
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn support(&self) -> &Arc<Vec<IdealK>> {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn rotate(&self, theta: f64) -> CoeffVector {
        let r = Complex64::from_polar(1.0, theta);
        CoeffVector { values: self.values.iter().map(|v| v * r).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> CoeffVector {
        CoeffVector { values: self.values.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    /// Zeroes the entries outside the given ray class mod n.
    pub fn restrict_to_class(&self, setup: &RayClassSetup, class: u32) -> Result<CoeffVector> {
        let mut out = self.clone();
        for (i, b) in self.support.iter().enumerate() {
            if setup.class_of(b)? != class {
                out.values[i] = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }
}
