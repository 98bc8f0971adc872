use std::sync::Arc;

use super::UnityRoot;
use crate::algebra::{CycInt, IdealK, ResidueRing};
use crate::{Error, Result};

/// A character (O/𝔪)ˣ → μₙ stored as an exponent table over all residues (-1 off the units).
#[derive(Clone, Debug)]
pub struct ResidueChar {
    ring: Arc<ResidueRing>,
    table: Arc<Vec<i8>>,
    n: u32,
}

const UNKNOWN: i8 = -2;

impl ResidueChar {
    pub fn trivial(ring: Arc<ResidueRing>, n: u32) -> ResidueChar {
        let table = (0..ring.size()).map(|i| if ring.is_unit_idx(i) { 0 } else { -1 }).collect();
        ResidueChar { ring, table: Arc::new(table), n }
    }

    pub fn from_table(ring: Arc<ResidueRing>, table: Vec<i8>, n: u32) -> ResidueChar {
        assert_eq!(table.len(), ring.size());
        ResidueChar { ring, table: Arc::new(table), n }
    }

    /// Grows the character from prescribed values on generators, checking consistency along the
    /// way. Stops as soon as the whole unit group is covered. A value clash gives
    /// `Error::Inconsistent`; running out of generators gives `Error::Domain`.
    pub fn from_generators<I>(ring: Arc<ResidueRing>, n: u32, gens: I) -> Result<ResidueChar>
    where
        I: IntoIterator<Item = (CycInt, u32)>,
    {
        let size = ring.size();
        let phi = ring.phi() as usize;
        let mut table: Vec<i8> = (0..size).map(|i| if ring.is_unit_idx(i) { UNKNOWN } else { -1 }).collect();
        let one = ring.one_index();
        table[one] = 0;
        let mut members = vec![one];
        let mut gens = gens.into_iter();
        while members.len() < phi {
            let (g, v) = gens
                .next()
                .ok_or_else(|| Error::Domain(format!("generators exhausted modulo {:?}", ring.modulus())))?;
            let gi = ring.index(&g);
            let v = (v % n) as i64;
            match table[gi] {
                -1 => return Err(Error::NotCoprime(format!("{g:?} is not a unit modulo {:?}", ring.modulus()))),
                UNKNOWN => {}
                t => {
                    if t as i64 != v {
                        return Err(Error::Inconsistent(format!("value clash at {g:?}")));
                    }
                    continue;
                }
            }
            let mut powers = vec![gi];
            let mut gp = gi;
            loop {
                gp = ring.mul_idx(gp, gi);
                if table[gp] != UNKNOWN {
                    break;
                }
                powers.push(gp);
            }
            let m = powers.len() as i64 + 1;
            if table[gp] as i64 != (m * v).rem_euclid(n as i64) {
                return Err(Error::Inconsistent(format!("{g:?} has no consistent value {v}")));
            }
            let old = members.clone();
            for (k, &p) in powers.iter().enumerate() {
                let kv = (k as i64 + 1) * v;
                for &h in &old {
                    let x = ring.mul_idx(h, p);
                    table[x] = ((table[h] as i64 + kv).rem_euclid(n as i64)) as i8;
                    members.push(x);
                }
            }
        }
        Ok(ResidueChar { ring, table: Arc::new(table), n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn modulus(&self) -> &IdealK {
        self.ring.modulus()
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn value(&self, x: &CycInt) -> UnityRoot {
        self.value_idx(self.ring.index(x))
    }

    pub fn value_idx(&self, i: usize) -> UnityRoot {
        UnityRoot::from_table(self.n, self.table[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&t| t <= 0)
    }

    pub fn is_trivial_on(&self, xs: &[CycInt]) -> bool {
        xs.iter().all(|x| self.value(x).is_one())
    }

    pub fn pow(&self, j: i64) -> ResidueChar {
        let n = self.n as i64;
        let table = self.table.iter().map(|&t| if t < 0 { t } else { ((t as i64 * j).rem_euclid(n)) as i8 }).collect();
        ResidueChar { ring: self.ring.clone(), table: Arc::new(table), n: self.n }
    }

    pub fn conj(&self) -> ResidueChar {
        self.pow(-1)
    }

    /// The same character viewed modulo a multiple 𝔪' of the modulus.
    pub fn lift_to(&self, m: &IdealK) -> Result<ResidueChar> {
        if !self.modulus().divides(m) {
            return Err(Error::InvalidArgument(format!("{:?} does not divide {m:?}", self.modulus())));
        }
        if m == self.modulus() {
            return Ok(self.clone());
        }
        let ring = Arc::new(ResidueRing::new(m));
        let table = (0..ring.size())
            .map(|i| {
                if ring.is_unit_idx(i) {
                    self.table[self.ring.index(&ring.element(i))]
                } else {
                    -1
                }
            })
            .collect();
        Ok(ResidueChar { ring, table: Arc::new(table), n: self.n })
    }

    pub fn mul(&self, other: &ResidueChar) -> Result<ResidueChar> {
        let g = self.modulus().gcd(other.modulus());
        let l = self.modulus().mul(other.modulus()).div_exact(&g).expect("gcd divides");
        let a = self.lift_to(&l)?;
        let b = other.lift_to(&l)?;
        let n = self.n as i16;
        let table = a
            .table
            .iter()
            .zip(b.table.iter())
            .map(|(&x, &y)| if x < 0 || y < 0 { -1 } else { ((x as i16 + y as i16) % n) as i8 })
            .collect();
        Ok(ResidueChar { ring: a.ring, table: Arc::new(table), n: self.n })
    }

    /// Whether the character is trivial on {x ≡ 1 mod 𝔣'} for a divisor 𝔣' of the modulus.
    pub fn factors_through(&self, f: &IdealK) -> bool {
        let m = self.modulus();
        let Some(cof) = m.div_exact(f) else { return false };
        let fgen = f.gen();
        let cring = ResidueRing::new(&cof);
        let one = CycInt::one(m.field());
        (0..cring.size()).all(|r| {
            let t = self.table[self.ring.index(&(one + fgen * cring.element(r)))];
            t <= 0
        })
    }

    /// The conductor: the smallest 𝔣 | 𝔪 modulo which the character is defined.
    pub fn conductor(&self) -> IdealK {
        let mut f = self.modulus().clone();
        for p in self.modulus().primes() {
            let pi = p.ideal();
            while f.valuation(&p) > 0 {
                let smaller = f.div_exact(&pi).expect("p divides f");
                if self.factors_through(&smaller) {
                    f = smaller;
                } else {
                    break;
                }
            }
        }
        f
    }

    /// The induced character modulo a divisor 𝔣 through which it factors.
    pub fn restrict_to(&self, f: &IdealK) -> Result<ResidueChar> {
        if !f.divides(self.modulus()) {
            return Err(Error::InvalidArgument(format!("{f:?} does not divide {:?}", self.modulus())));
        }
        if f == self.modulus() {
            return Ok(self.clone());
        }
        let ring = Arc::new(ResidueRing::new(f));
        let mut table = vec![UNKNOWN; ring.size()];
        for (i, &t) in self.table.iter().enumerate() {
            if t < 0 {
                continue;
            }
            let j = ring.index(&self.ring.element(i));
            if table[j] == UNKNOWN {
                table[j] = t;
            } else if table[j] != t {
                return Err(Error::Inconsistent(format!("character is not defined modulo {f:?}")));
            }
        }
        for t in table.iter_mut() {
            if *t == UNKNOWN {
                *t = -1;
            }
        }
        Ok(ResidueChar { ring, table: Arc::new(table), n: self.n })
    }

    pub fn primitive(&self) -> ResidueChar {
        let f = self.conductor();
        self.restrict_to(&f).expect("conductor is a defining modulus")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{primes_up_to_norm, Field};
    use crate::group::UnitQuotient;

    #[test]
    fn table_characters_of_a_prime_power() {
        let f = Field::Eisenstein;
        let m = IdealK::from_int(f, 9).unwrap();
        let ring = Arc::new(ResidueRing::new(&m));
        let q = UnitQuotient::new(ring.clone(), &[], 3);
        for tab in q.characters(3) {
            let table: Vec<i8> =
                (0..ring.size()).map(|i| q.class_of_index(i).map_or(-1, |c| tab[c as usize] as i8)).collect();
            let chi = ResidueChar::from_table(ring.clone(), table, 3);
            let units = ring.unit_indices();
            for &a in units.iter().step_by(5) {
                for &b in units.iter().step_by(7) {
                    assert_eq!(chi.value_idx(ring.mul_idx(a, b)), chi.value_idx(a) * chi.value_idx(b));
                }
            }
            let cond = chi.conductor();
            assert!(cond.divides(&m));
            let prim = chi.primitive();
            for &a in &units {
                assert_eq!(prim.value(&ring.element(a)), chi.value_idx(a));
            }
            assert_eq!(chi.is_trivial(), cond.is_one());
        }
    }

    #[test]
    fn generator_growth_matches_symbols() {
        use crate::characters::symbol_at_prime;
        let f = Field::Eisenstein;
        let p = primes_up_to_norm(f, 13).into_iter().find(|p| p.norm == 13).unwrap();
        let ring = Arc::new(ResidueRing::new(&p.ideal()));
        // x ↦ (x/𝔭) from values on a few small elements
        let gens: Vec<(CycInt, u32)> = (2..20)
            .map(|k| CycInt::from_int(f, k))
            .filter(|x| ring.is_unit(x))
            .map(|x| (x, symbol_at_prime(&x, &p).exponent().unwrap()))
            .collect();
        let chi = ResidueChar::from_generators(ring.clone(), 3, gens).unwrap();
        for u in ring.unit_indices() {
            assert_eq!(chi.value_idx(u), symbol_at_prime(&ring.element(u), &p));
        }
        assert_eq!(chi.conductor(), p.ideal());
        let bad = vec![(CycInt::from_int(f, 4), 1), (CycInt::from_int(f, 2), 1)];
        assert!(ResidueChar::from_generators(ring, 3, bad).is_err());
    }

    #[test]
    fn lift_and_multiply() {
        let f = Field::Gaussian;
        let m1 = IdealK::new(CycInt::new(f, 2, 1)).unwrap();
        let m2 = IdealK::new(CycInt::new(f, 1, 1).pow(3)).unwrap();
        let r1 = Arc::new(ResidueRing::new(&m1));
        let r2 = Arc::new(ResidueRing::new(&m2));
        let gen1 = CycInt::from_int(f, 2);
        let c1 = ResidueChar::from_generators(r1, 4, [(gen1, 1)]).unwrap();
        let c2 = ResidueChar::trivial(r2, 4);
        let prod = c1.mul(&c2).unwrap();
        assert_eq!(prod.modulus().norm(), 5 * 8);
        assert_eq!(prod.conductor(), m1);
        assert_eq!(prod.primitive().table(), c1.table());
    }
}
