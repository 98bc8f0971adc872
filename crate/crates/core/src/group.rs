//! Finite abelian quotients of (O/𝔪)ˣ with explicit bases.

use std::sync::Arc;

use crate::algebra::{CycInt, ResidueRing};
use crate::{Error, Result};

const NONE: u32 = u32::MAX;

/// Q = (O/𝔪)ˣ / T where T is generated by the given elements and all n-th powers.
#[derive(Clone, Debug)]
pub struct UnitQuotient {
    ring: Arc<ResidueRing>,
    label: Vec<u32>,
    reps: Vec<usize>,
    subgroup: Vec<usize>,
    identity: u32,
    basis: Vec<u32>,
    orders: Vec<u32>,
    coords: Vec<Vec<u32>>,
}

impl UnitQuotient {
    /// Quotient by ⟨gens⟩·Gⁿ (pass n = 0 to skip the n-th powers).
    pub fn new(ring: Arc<ResidueRing>, gens: &[CycInt], n: u32) -> UnitQuotient {
        let units = ring.unit_indices();
        let mut in_t = vec![false; ring.size()];
        let one = ring.one_index();
        let mut t = vec![one];
        in_t[one] = true;
        let mut gen_idx: Vec<usize> = gens.iter().map(|g| ring.index(g)).collect();
        if n > 0 {
            for &u in &units {
                gen_idx.push(ring.pow_idx(u, n as u64));
            }
        }
        gen_idx.sort_unstable();
        gen_idx.dedup();
        for g in gen_idx {
            if in_t[g] {
                continue;
            }
            // extend T by ⟨g⟩
            let old = t.clone();
            let mut gp = g;
            while !in_t[gp] {
                for &h in &old {
                    let x = ring.mul_idx(h, gp);
                    if !in_t[x] {
                        in_t[x] = true;
                        t.push(x);
                    }
                }
                gp = ring.mul_idx(gp, g);
            }
        }
        t.sort_unstable();
        let mut label = vec![NONE; ring.size()];
        let mut reps = Vec::new();
        for &u in &units {
            if label[u] != NONE {
                continue;
            }
            let l = reps.len() as u32;
            reps.push(u);
            for &h in &t {
                label[ring.mul_idx(u, h)] = l;
            }
        }
        let identity = label[one];
        let mut q = UnitQuotient {
            ring,
            label,
            reps,
            subgroup: t,
            identity,
            basis: Vec::new(),
            orders: Vec::new(),
            coords: Vec::new(),
        };
        let cands: Vec<u32> = (0..q.reps.len() as u32).collect();
        q.set_basis_from(&cands).expect("greedy basis over all elements");
        q
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn class_of_index(&self, i: usize) -> Option<u32> {
        let l = self.label[i];
        (l != NONE).then_some(l)
    }

    pub fn class_of(&self, x: &CycInt) -> Option<u32> {
        self.class_of_index(self.ring.index(x))
    }

    pub fn rep(&self, c: u32) -> usize {
        self.reps[c as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.label[self.ring.mul_idx(self.reps[a as usize], self.reps[b as usize])]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        self.label[self.ring.pow_idx(self.reps[a as usize], e)]
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Exponent vector of a class with respect to the basis.
    pub fn coords(&self, c: u32) -> &[u32] {
        &self.coords[c as usize]
    }

    /// Chooses a basis greedily: repeatedly the first candidate of maximal order whose cyclic
    /// subgroup meets the current span trivially. Fails if the candidates do not suffice.
    pub fn set_basis_from(&mut self, candidates: &[u32]) -> Result<()> {
        let m = self.order();
        let mut in_span = vec![false; m];
        in_span[self.identity as usize] = true;
        let mut span = vec![self.identity];
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        while span.len() < m {
            let mut best: Option<(u32, u32)> = None;
            for &c in candidates {
                let ord = self.element_order(c);
                if best.map_or(false, |(_, o)| o >= ord) {
                    continue;
                }
                let mut x = c;
                let mut ok = true;
                for _ in 1..ord {
                    if in_span[x as usize] {
                        ok = false;
                        break;
                    }
                    x = self.mul(x, c);
                }
                if ok {
                    best = Some((c, ord));
                }
            }
            let (c, ord) = best.ok_or_else(|| Error::Inconsistent("candidates do not generate quotient".into()))?;
            let old = span.clone();
            let mut x = c;
            for _ in 1..ord {
                for &h in &old {
                    let y = self.mul(h, x);
                    if !in_span[y as usize] {
                        in_span[y as usize] = true;
                        span.push(y);
                    }
                }
                x = self.mul(x, c);
            }
            basis.push(c);
            orders.push(ord);
        }
        let prod: u64 = orders.iter().map(|&o| o as u64).product();
        if prod != m as u64 {
            return Err(Error::Inconsistent(format!("basis orders {orders:?} do not multiply to {m}")));
        }
        let mut coords = vec![Vec::new(); m];
        let mut stack: Vec<(u32, Vec<u32>)> = vec![(self.identity, Vec::new())];
        for (i, &b) in basis.iter().enumerate() {
            let mut next = Vec::new();
            for (c, v) in &stack {
                let mut x = *c;
                for k in 0..orders[i] {
                    let mut v2 = v.clone();
                    v2.push(k);
                    next.push((x, v2));
                    x = self.mul(x, b);
                }
            }
            stack = next;
        }
        for (c, v) in stack {
            coords[c as usize] = v;
        }
        self.basis = basis;
        self.orders = orders;
        self.coords = coords;
        Ok(())
    }

    /// All homomorphisms Q → Z/n, as exponent tables indexed by class (requires each basis order | n).
    pub fn characters(&self, n: u32) -> Vec<Vec<u8>> {
        assert!(self.orders.iter().all(|o| n % o == 0));
        let mut out = Vec::new();
        let total: u32 = self.orders.iter().product();
        for code in 0..total {
            let mut k = code;
            let mut ex = Vec::new();
            for &o in &self.orders {
                ex.push((k % o) * (n / o));
                k /= o;
            }
            let table = (0..self.order() as u32)
                .map(|c| {
                    let v: u32 = self.coords(c).iter().zip(&ex).map(|(a, b)| a * b).sum();
                    (v % n) as u8
                })
                .collect();
            out.push(table);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, IdealK};

    #[test]
    fn quotient_is_consistent() {
        let f = Field::Eisenstein;
        for k in [7i128, 9, 13, 21, 49] {
            let m = IdealK::from_int(f, k).unwrap();
            let ring = Arc::new(ResidueRing::new(&m));
            let q = UnitQuotient::new(ring.clone(), &f.units(), 3);
            assert_eq!(q.order() * q.subgroup().len(), ring.phi() as usize);
            let prod: u32 = q.orders().iter().product();
            assert_eq!(prod as usize, q.order());
            assert!(q.orders().iter().all(|o| 3 % o == 0));
            for a in 0..q.order() as u32 {
                for b in 0..q.order() as u32 {
                    let ab = q.mul(a, b);
                    let ca = q.coords(a);
                    let cb = q.coords(b);
                    let cab = q.coords(ab);
                    for i in 0..ca.len() {
                        assert_eq!((ca[i] + cb[i]) % q.orders()[i], cab[i]);
                    }
                }
            }
            let chars = q.characters(3);
            assert_eq!(chars.len(), q.order());
        }
    }

    #[test]
    fn mixed_orders_basis() {
        // (Z[i]/(1+i)^7)ˣ modulo units and fourth powers has elements of order 2 and 4.
        let f = Field::Gaussian;
        let m = IdealK::new(CycInt::new(f, 1, 1).pow(7)).unwrap();
        let ring = Arc::new(ResidueRing::new(&m));
        let q = UnitQuotient::new(ring, &f.units(), 4);
        let prod: u32 = q.orders().iter().product();
        assert_eq!(prod as usize, q.order());
    }
}
