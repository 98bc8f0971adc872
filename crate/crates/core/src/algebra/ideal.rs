use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use super::{CycInt, Field, SplitType};
use crate::arith;
use crate::{Error, Result};

/// A prime ideal of O_K, stored by its normalized generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime {
    pub gen: CycInt,
    pub norm: u64,
    /// The rational prime below.
    pub p: u64,
    pub kind: SplitType,
}

impl Prime {
    pub fn ideal(&self) -> IdealK {
        IdealK::from_parts(self.gen, vec![(*self, 1)])
    }

    fn key(&self) -> (u64, i128, i128) {
        (self.norm, self.gen.a, self.gen.b)
    }
}

impl Ord for Prime {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for Prime {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.gen)
    }
}

type PrimeCache = RwLock<HashMap<(Field, u64), Vec<Prime>>>;

fn prime_cache() -> &'static PrimeCache {
    static CACHE: OnceLock<PrimeCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The prime ideals above the rational prime p, sorted.
pub fn primes_above(field: Field, p: u64) -> Vec<Prime> {
    if let Some(v) = prime_cache().read().unwrap().get(&(field, p)) {
        return v.clone();
    }
    let kind = field.split_type(p);
    let mut out = match kind {
        SplitType::Ramified => vec![Prime { gen: field.ramified_generator().normalized(), norm: p, p, kind }],
        SplitType::Inert => vec![Prime { gen: CycInt::from_int(field, p as i128), norm: p * p, p, kind }],
        SplitType::Split => {
            let r = arith::root_of_unity_mod(field.n() as u64, p).expect("split prime has roots of unity");
            let g = CycInt::from_int(field, p as i128).gcd(&CycInt::new(field, -(r as i128), 1));
            assert_eq!(g.norm(), p as i128, "splitting {p}");
            let a = g.normalized();
            let b = g.conj().normalized();
            assert_ne!(a, b);
            vec![Prime { gen: a, norm: p, p, kind }, Prime { gen: b, norm: p, p, kind }]
        }
    };
    out.sort();
    prime_cache().write().unwrap().insert((field, p), out.clone());
    out
}

/// All prime ideals of norm at most x, sorted by (norm, generator).
pub fn primes_up_to_norm(field: Field, x: u64) -> Vec<Prime> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(x) {
        for q in primes_above(field, p) {
            if q.norm <= x {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// Nonzero integral ideal, represented by its normalized generator.
#[derive(Clone)]
pub struct IdealK {
    gen: CycInt,
    norm: u64,
    factors: Arc<OnceLock<Vec<(Prime, u32)>>>,
}

impl IdealK {
    pub fn new(x: CycInt) -> Result<IdealK> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let norm = u64::try_from(x.norm()).map_err(|_| Error::InvalidArgument("norm exceeds u64".into()))?;
        Ok(IdealK { gen: x.normalized(), norm, factors: Arc::new(OnceLock::new()) })
    }

    pub fn one(field: Field) -> IdealK {
        IdealK::from_parts(CycInt::one(field), Vec::new())
    }

    pub fn from_int(field: Field, k: i128) -> Result<IdealK> {
        IdealK::new(CycInt::from_int(field, k))
    }

    /// Builds an ideal from a generator and a known factorization.
    pub fn from_parts(gen: CycInt, mut factors: Vec<(Prime, u32)>) -> IdealK {
        factors.sort();
        let gen = gen.normalized();
        let norm = gen.norm() as u64;
        let cell = OnceLock::new();
        let _ = cell.set(factors);
        IdealK { gen, norm, factors: Arc::new(cell) }
    }

    pub fn from_factors(field: Field, factors: &[(Prime, u32)]) -> IdealK {
        let mut g = CycInt::one(field);
        for (p, e) in factors {
            g = g * p.gen.pow(*e as u64);
        }
        IdealK::from_parts(g, factors.to_vec())
    }

    pub fn gen(&self) -> CycInt {
        self.gen
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn field(&self) -> Field {
        self.gen.field
    }

    pub fn is_one(&self) -> bool {
        self.norm == 1
    }

    /// Prime factorization, computed on first use.
    pub fn factors(&self) -> &[(Prime, u32)] {
        self.factors.get_or_init(|| factor_generator(&self.gen))
    }

    pub fn primes(&self) -> Vec<Prime> {
        self.factors().iter().map(|(p, _)| *p).collect()
    }

    pub fn valuation(&self, p: &Prime) -> u32 {
        self.factors().iter().find(|(q, _)| q == p).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn contains(&self, x: &CycInt) -> bool {
        self.gen.divides(x)
    }

    pub fn divides(&self, other: &IdealK) -> bool {
        self.gen.divides(&other.gen)
    }

    pub fn mul(&self, other: &IdealK) -> IdealK {
        let gen = self.gen * other.gen;
        match (self.factors.get(), other.factors.get()) {
            (Some(a), Some(b)) => IdealK::from_parts(gen, merge_factors(a, b)),
            _ => IdealK::new(gen).expect("nonzero"),
        }
    }

    pub fn pow(&self, e: u32) -> IdealK {
        let gen = self.gen.pow(e as u64);
        let f = self.factors().iter().map(|&(p, k)| (p, k * e)).filter(|x| x.1 > 0).collect();
        IdealK::from_parts(gen, f)
    }

    pub fn div_exact(&self, d: &IdealK) -> Option<IdealK> {
        let q = self.gen.div_exact(&d.gen)?;
        let mut f = Vec::new();
        for &(p, e) in self.factors() {
            let k = d.valuation(&p);
            if k > e {
                return None;
            }
            if e > k {
                f.push((p, e - k));
            }
        }
        Some(IdealK::from_parts(q, f))
    }

    pub fn gcd(&self, other: &IdealK) -> IdealK {
        let f: Vec<(Prime, u32)> = self
            .factors()
            .iter()
            .filter_map(|&(p, e)| {
                let k = other.valuation(&p).min(e);
                (k > 0).then_some((p, k))
            })
            .collect();
        IdealK::from_factors(self.field(), &f)
    }

    pub fn is_coprime(&self, other: &IdealK) -> bool {
        self.gen.gcd(&other.gen).is_unit()
    }

    pub fn is_coprime_to_primes(&self, ps: &[Prime]) -> bool {
        ps.iter().all(|p| !p.gen.divides(&self.gen))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors().iter().all(|(_, e)| *e == 1)
    }

    /// Every prime exponent is below n.
    pub fn is_nth_power_free(&self, n: u32) -> bool {
        self.factors().iter().all(|(_, e)| *e < n)
    }

    pub fn radical(&self) -> IdealK {
        let f: Vec<(Prime, u32)> = self.factors().iter().map(|&(p, _)| (p, 1)).collect();
        IdealK::from_factors(self.field(), &f)
    }

    /// Möbius function of the ideal.
    pub fn mobius(&self) -> i32 {
        if self.is_squarefree() {
            if self.factors().len() % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    /// All divisors, sorted.
    pub fn divisors(&self) -> Vec<IdealK> {
        let field = self.field();
        let mut out: Vec<Vec<(Prime, u32)>> = vec![Vec::new()];
        for &(p, e) in self.factors() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for d in &out {
                for k in 0..=e {
                    let mut d2 = d.clone();
                    if k > 0 {
                        d2.push((p, k));
                    }
                    next.push(d2);
                }
            }
            out = next;
        }
        let mut ds: Vec<IdealK> = out.iter().map(|f| IdealK::from_factors(field, f)).collect();
        ds.sort();
        ds
    }

    fn key(&self) -> (u64, i128, i128) {
        (self.norm, self.gen.a, self.gen.b)
    }
}

fn merge_factors(a: &[(Prime, u32)], b: &[(Prime, u32)]) -> Vec<(Prime, u32)> {
    let mut out: Vec<(Prime, u32)> = a.to_vec();
    for &(p, e) in b {
        if let Some(x) = out.iter_mut().find(|(q, _)| *q == p) {
            x.1 += e;
        } else {
            out.push((p, e));
        }
    }
    out.sort();
    out
}

impl PartialEq for IdealK {
    fn eq(&self, o: &Self) -> bool {
        self.gen == o.gen
    }
}

impl Eq for IdealK {}

impl Hash for IdealK {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.gen.hash(h)
    }
}

impl Ord for IdealK {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for IdealK {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for IdealK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{:?}", self.gen)
    }
}

fn factor_generator(x: &CycInt) -> Vec<(Prime, u32)> {
    let field = x.field;
    let mut rest = *x;
    let mut out = Vec::new();
    for (p, k) in arith::factor(x.norm() as u64) {
        let ps = primes_above(field, p);
        match ps[0].kind {
            SplitType::Ramified => out.push((ps[0], k)),
            SplitType::Inert => {
                assert!(k % 2 == 0, "inert prime with odd exponent");
                out.push((ps[0], k / 2))
            }
            SplitType::Split => {
                let mut e0 = 0;
                while let Some(q) = rest.div_exact(&ps[0].gen) {
                    rest = q;
                    e0 += 1;
                }
                if e0 > 0 {
                    out.push((ps[0], e0));
                }
                if k > e0 {
                    out.push((ps[1], k - e0));
                }
            }
        }
    }
    out.sort();
    out
}

/// Factorization of a nonzero ideal into prime ideals.
pub fn factor_ideal(a: &IdealK) -> Vec<(IdealK, u32)> {
    a.factors().iter().map(|(p, e)| (p.ideal(), *e)).collect()
}

/// Visits every ideal of norm ≤ x once (depth-first over prime powers, deterministic order).
pub fn for_each_ideal<F: FnMut(&CycInt, u64, &[(Prime, u32)])>(primes: &[Prime], x: u64, mut f: F) {
    fn rec<F: FnMut(&CycInt, u64, &[(Prime, u32)])>(
        primes: &[Prime],
        start: usize,
        x: u64,
        gen: CycInt,
        norm: u64,
        stack: &mut Vec<(Prime, u32)>,
        f: &mut F,
    ) {
        f(&gen, norm, stack);
        for i in start..primes.len() {
            let p = primes[i];
            if norm.saturating_mul(p.norm) > x {
                break;
            }
            let mut g = gen;
            let mut nm = norm;
            let mut e = 0;
            while nm.saturating_mul(p.norm) <= x {
                g = g * p.gen;
                nm *= p.norm;
                e += 1;
                stack.push((p, e));
                rec(primes, i + 1, x, g, nm, stack, f);
                stack.pop();
            }
        }
    }
    if x == 0 {
        return;
    }
    let field = match primes.first() {
        Some(p) => p.gen.field,
        None => {
            return;
        }
    };
    let mut stack = Vec::new();
    rec(primes, 0, x, CycInt::one(field), 1, &mut stack, &mut f);
}

/// All ideals of norm ≤ x, sorted by (norm, generator).
pub fn ideals_up_to(field: Field, x: u64) -> Vec<IdealK> {
    ideals_up_to_avoiding(field, x, &[])
}

/// All ideals of norm ≤ x coprime to the given primes, sorted.
pub fn ideals_up_to_avoiding(field: Field, x: u64, avoid: &[Prime]) -> Vec<IdealK> {
    if x == 0 {
        return Vec::new();
    }
    let primes: Vec<Prime> = primes_up_to_norm(field, x).into_iter().filter(|p| !avoid.contains(p)).collect();
    let mut out = Vec::new();
    if primes.is_empty() {
        out.push(IdealK::one(field));
        return out;
    }
    for_each_ideal(&primes, x, |g, _, f| out.push(IdealK::from_parts(*g, f.to_vec())));
    out.sort();
    out
}

/// The ideals of norm ≤ x as (normalized generator, norm), sorted; backed by a per-field cache.
#[derive(Clone, Debug)]
pub struct IdealList {
    all: Arc<Vec<(CycInt, u64)>>,
    len: usize,
}

impl std::ops::Deref for IdealList {
    type Target = [(CycInt, u64)];
    fn deref(&self) -> &[(CycInt, u64)] {
        &self.all[..self.len]
    }
}

static IDEAL_LISTS: RwLock<Vec<(Field, Arc<Vec<(CycInt, u64)>>, u64)>> = RwLock::new(Vec::new());

pub fn ideal_list(field: Field, x: u64) -> IdealList {
    let cut = |all: &Arc<Vec<(CycInt, u64)>>| IdealList { all: all.clone(), len: all.partition_point(|e| e.1 <= x) };
    if let Some((_, all, _)) = IDEAL_LISTS.read().unwrap().iter().find(|(f, _, b)| *f == field && *b >= x) {
        return cut(all);
    }
    let bound = x.max(1024).next_power_of_two();
    let mut out = Vec::new();
    let primes = primes_up_to_norm(field, bound);
    if primes.is_empty() {
        out.push((CycInt::one(field), 1));
    }
    for_each_ideal(&primes, bound, |g, nm, _| out.push((g.normalized(), nm)));
    out.sort_by_key(|(g, nm)| (*nm, g.a, g.b));
    let all = Arc::new(out);
    let mut lists = IDEAL_LISTS.write().unwrap();
    lists.retain(|(f, _, _)| *f != field);
    lists.push((field, all.clone(), bound));
    cut(&all)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Field = Field::Eisenstein;
    const G: Field = Field::Gaussian;

    #[test]
    fn factor_examples() {
        assert!(factor_ideal(&IdealK::one(E)).is_empty());
        let f7 = factor_ideal(&IdealK::from_int(E, 7).unwrap());
        assert_eq!(f7.len(), 2);
        assert!(f7.iter().all(|(p, e)| p.norm() == 7 && *e == 1));
        assert_ne!(f7[0].0, f7[1].0);
        let f5 = factor_ideal(&IdealK::from_int(E, 5).unwrap());
        assert_eq!(f5.len(), 1);
        assert_eq!(f5[0].0.norm(), 25);
        assert_eq!(f5[0].1, 1);
        assert_eq!(IdealK::new(CycInt::zero(E)).unwrap_err(), Error::ZeroIdeal);
    }

    #[test]
    fn no_element_of_norm_five() {
        for a in -5i128..=5 {
            for b in -5i128..=5 {
                assert_ne!(CycInt::new(E, a, b).norm(), 5);
            }
        }
    }

    #[test]
    fn split_primes_match_brute_force() {
        // Oracle: all elements of norm p by exhaustive search, up to associates.
        for (field, p) in [(E, 7u64), (E, 13), (E, 31), (G, 5), (G, 13), (G, 29)] {
            let bound = (p as f64).sqrt().ceil() as i128 * 2;
            let mut found: Vec<CycInt> = Vec::new();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let x = CycInt::new(field, a, b);
                    if x.norm() == p as i128 && !found.contains(&x.normalized()) {
                        found.push(x.normalized());
                    }
                }
            }
            found.sort_by_key(|x| (x.a, x.b));
            let mut ours: Vec<CycInt> = primes_above(field, p).iter().map(|q| q.gen).collect();
            ours.sort_by_key(|x| (x.a, x.b));
            assert_eq!(found, ours);
        }
    }

    #[test]
    fn factorizations_recompose_up_to_ten_thousand() {
        for field in [E, G] {
            let ideals = ideals_up_to(field, 10_000);
            for a in &ideals {
                let fresh = IdealK::new(a.gen()).unwrap();
                let f = fresh.factors();
                assert_eq!(f, a.factors());
                let rec = IdealK::from_factors(field, f);
                assert_eq!(rec, *a);
                let nprod: u64 = f.iter().map(|(p, e)| p.norm.pow(*e)).product();
                assert_eq!(nprod, a.norm());
                for (p, _) in f {
                    let ok = arith::is_prime(p.norm) || (p.norm == p.p * p.p && arith::is_prime(p.p));
                    assert!(ok);
                }
                for w in f.windows(2) {
                    assert_ne!(w[0].0, w[1].0);
                }
            }
        }
    }

    #[test]
    fn ideal_counts_match_divisor_sums() {
        // #ideals of norm k = Σ_{d|k} χ(d) with χ the quadratic character of the field.
        for field in [E, G] {
            let chi = |d: u64| -> i64 {
                match field {
                    Field::Eisenstein => [0, 1, -1][(d % 3) as usize],
                    Field::Gaussian => [0, 1, 0, -1][(d % 4) as usize],
                }
            };
            let ideals = ideals_up_to(field, 3000);
            let mut counts = vec![0i64; 3001];
            for a in &ideals {
                counts[a.norm() as usize] += 1;
            }
            for k in 1..=3000u64 {
                let s: i64 = (1..=k).filter(|d| k % d == 0).map(chi).sum();
                assert_eq!(counts[k as usize], s, "norm {k}");
            }
        }
    }

    #[test]
    fn ideal_equality_is_associate_check() {
        let x = CycInt::new(G, 3, 2);
        let a = IdealK::new(x).unwrap();
        let b = IdealK::new(x * G.zeta()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, IdealK::new(x.conj()).unwrap());
    }

    #[test]
    fn divisors_and_gcd() {
        let a = IdealK::from_int(E, 84).unwrap();
        let ds = a.divisors();
        let n_div: u32 = a.factors().iter().map(|(_, e)| e + 1).product();
        assert_eq!(ds.len() as u32, n_div);
        assert!(ds.iter().all(|d| d.divides(&a)));
        let b = IdealK::from_int(E, 63).unwrap();
        assert_eq!(a.gcd(&b), IdealK::from_int(E, 21).unwrap());
        assert_eq!(a.div_exact(&IdealK::from_int(E, 12).unwrap()).unwrap(), IdealK::from_int(E, 7).unwrap());
    }
}
