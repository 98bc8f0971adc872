use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{power_residue_symbol, symbol_at_prime, HeckeChar, ResidueChar, UnityRoot};
use crate::algebra::{
    ideals_up_to_avoiding, nth_power_free_part, primes_above, primes_up_to_norm, CycInt, Field, IdealK, Prime,
    ResidueRing,
};
use crate::group::UnitQuotient;
use crate::{Error, Result};

/// Extra precision used when checking that units ≡ 1 mod 𝔭ᵉ are n-th powers.
pub const SUFFICIENCY_SLACK: u32 = 3;

/// Result of the brute-force search for e_𝔭.
#[derive(Clone, Debug)]
pub struct Sufficiency {
    pub prime: Prime,
    pub exponent: u32,
    /// Exponent of the modulus 𝔭^{e+v} on which the check was run.
    pub checked_modulus: u32,
}

/// Whether every unit x ≡ 1 mod 𝔭ᵉ is an n-th power in (O/𝔭^{e+v})ˣ.
pub fn units_near_one_are_powers(p: &Prime, n: u32, e: u32, v: u32) -> bool {
    let field = p.gen.field;
    let m = p.ideal().pow(e + v);
    let ring = ResidueRing::new(&m);
    let mut powers = vec![false; ring.size()];
    for u in ring.unit_indices() {
        powers[ring.pow_idx(u, n as u64)] = true;
    }
    let step = p.gen.pow(e as u64);
    let cof = ResidueRing::new(&p.ideal().pow(v));
    let one = CycInt::one(field);
    (0..cof.size()).all(|r| {
        let x = ring.index(&(one + step * cof.element(r)));
        !ring.is_unit_idx(x) || powers[x]
    })
}

/// Smallest e with the n-th power property at 𝔭, checked modulo 𝔭^{e+slack}. The modulus is
/// raised to at least 𝔭^{2·ord_𝔭(n)+1} so that the check is decided by Hensel's lemma.
pub fn sufficient_exponent(p: &Prime, n: u32, slack: u32) -> Sufficiency {
    let vn = IdealK::from_int(p.gen.field, n as i128).unwrap().valuation(p);
    let floor = 2 * vn + 1;
    let mut e = 0;
    loop {
        let v = slack.max(floor.saturating_sub(e)).max(1);
        if units_near_one_are_powers(p, n, e, v) {
            return Sufficiency { prime: *p, exponent: e, checked_modulus: e + v };
        }
        e += 1;
    }
}

#[derive(Clone, Debug)]
struct ClassRep {
    ideal: IdealK,
    m: CycInt,
    m_inv_idx: usize,
}

/// The global data fixed once per run: S, 𝔠, H_𝔠, R_𝔠 and the representatives ℰ with m_E.
#[derive(Debug)]
pub struct RayClassSetup {
    field: Field,
    n: u32,
    s: Vec<Prime>,
    sufficiency: Vec<Sufficiency>,
    c: IdealK,
    ring: Arc<ResidueRing>,
    ray_group: UnitQuotient,
    r: UnitQuotient,
    nth_powers: Vec<bool>,
    unit_idx: Vec<usize>,
    e0: Vec<IdealK>,
    reps: Vec<ClassRep>,
    chars: RwLock<HashMap<IdealK, Arc<HeckeChar>>>,
}

impl RayClassSetup {
    /// Builds the setup for S = the primes above n.
    pub fn standard(n: u32) -> Result<RayClassSetup> {
        let field = Field::from_n(n)?;
        RayClassSetup::build(n, field, &primes_above(field, field.ramified_prime()))
    }

    pub fn build(n: u32, field: Field, s: &[Prime]) -> Result<RayClassSetup> {
        if field.n() != n {
            return Err(Error::UnsupportedField(n));
        }
        for p in primes_above(field, field.ramified_prime()) {
            if !s.contains(&p) {
                return Err(Error::InvalidArgument(format!("S is missing {p:?}, a divisor of {n}")));
            }
        }
        let mut s = s.to_vec();
        s.sort();
        s.dedup();
        let sufficiency: Vec<Sufficiency> = s
            .iter()
            .map(|p| {
                if p.p == field.ramified_prime() {
                    sufficient_exponent(p, n, SUFFICIENCY_SLACK)
                } else {
                    Sufficiency { prime: *p, exponent: 1, checked_modulus: 1 }
                }
            })
            .collect();
        let c = IdealK::from_factors(
            field,
            &sufficiency.iter().filter(|x| x.exponent > 0).map(|x| (x.prime, x.exponent)).collect::<Vec<_>>(),
        );
        let ring = Arc::new(ResidueRing::new(&c));
        let units = field.units();
        let ray_group = UnitQuotient::new(ring.clone(), &units, 0);
        let mut r = UnitQuotient::new(ring.clone(), &units, n);

        let mut nth_powers = vec![false; ring.size()];
        for u in ring.unit_indices() {
            nth_powers[ring.pow_idx(u, n as u64)] = true;
        }
        let unit_idx = units.iter().map(|u| ring.index(u)).collect();

        // smallest ideals of each class, in (norm, generator) order
        let mut first: Vec<Option<IdealK>> = vec![None; r.order()];
        let mut candidates = Vec::new();
        let mut bound = 64;
        while first.iter().any(Option::is_none) {
            for a in ideals_up_to_avoiding(field, bound, &s) {
                let k = r.class_of(&a.gen()).expect("coprime to c") as usize;
                if first[k].is_none() {
                    first[k] = Some(a);
                    candidates.push(k as u32);
                }
            }
            bound *= 2;
        }
        r.set_basis_from(&candidates)?;
        let e0: Vec<IdealK> = r.basis().iter().map(|&b| first[b as usize].clone().unwrap()).collect();
        let mut reps = Vec::with_capacity(r.order());
        for cls in 0..r.order() as u32 {
            let mut ideal = IdealK::one(field);
            for (i, &k) in r.coords(cls).iter().enumerate() {
                ideal = ideal.mul(&e0[i].pow(k));
            }
            let mut m = CycInt::one(field);
            for (i, &k) in r.coords(cls).iter().enumerate() {
                m = m * e0[i].gen().pow(k as u64);
            }
            debug_assert_eq!(r.class_of(&m), Some(cls));
            let m_inv_idx = ring.inverse_idx(ring.index(&m));
            reps.push(ClassRep { ideal, m, m_inv_idx });
        }
        Ok(RayClassSetup {
            field,
            n,
            s,
            sufficiency,
            c,
            ring,
            ray_group,
            r,
            nth_powers,
            unit_idx,
            e0,
            reps,
            chars: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> &[Prime] {
        &self.s
    }

    pub fn sufficiency(&self) -> &[Sufficiency] {
        &self.sufficiency
    }

    pub fn c(&self) -> &IdealK {
        &self.c
    }

    pub fn c_ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    /// H_𝔠 = (O/𝔠)ˣ / image of the global units.
    pub fn ray_group(&self) -> &UnitQuotient {
        &self.ray_group
    }

    /// R_𝔠 = H_𝔠 / H_𝔠ⁿ with the basis given by ℰ₀.
    pub fn r(&self) -> &UnitQuotient {
        &self.r
    }

    pub fn e0(&self) -> &[IdealK] {
        &self.e0
    }

    /// The representative E ∈ ℰ of a class and its generator m_E.
    pub fn rep(&self, class: u32) -> (&IdealK, &CycInt) {
        let r = &self.reps[class as usize];
        (&r.ideal, &r.m)
    }

    pub fn in_is(&self, a: &IdealK) -> bool {
        a.is_coprime_to_primes(&self.s)
    }

    pub fn class_of(&self, a: &IdealK) -> Result<u32> {
        self.r
            .class_of(&a.gen())
            .ok_or_else(|| Error::NotCoprime(format!("{a:?} is not coprime to {:?}", self.c)))
    }

    /// Units u with u·a·m_E⁻¹ an n-th power modulo 𝔠, where E is the class of (a).
    pub fn admissible_units(&self, a: &CycInt) -> Vec<CycInt> {
        let idx = self.ring.index(a);
        let cls = self.r.class_of_index(idx).expect("a coprime to c");
        let y = self.ring.mul_idx(idx, self.reps[cls as usize].m_inv_idx);
        self.field
            .units()
            .into_iter()
            .zip(&self.unit_idx)
            .filter(|(_, &ui)| self.nth_powers[self.ring.mul_idx(ui, y)])
            .map(|(u, _)| u)
            .collect()
    }

    /// x·m_E for 𝔞 = (x)·E·𝔤ⁿ, up to an n-th power: the element u'·a with u' the first
    /// admissible unit.
    pub fn twisted_generator(&self, a: &IdealK) -> Result<CycInt> {
        if !self.in_is(a) {
            return Err(Error::NotCoprime(format!("{a:?} is not in I(S)")));
        }
        let g = a.gen();
        let u = self.admissible_units(&g)[0];
        Ok(u * g)
    }

    /// χ_𝔞(𝔟).
    pub fn chi_eval(&self, a: &IdealK, b: &IdealK) -> Result<UnityRoot> {
        if !self.in_is(a) {
            return Err(Error::NotCoprime(format!("{a:?} is not in I(S)")));
        }
        if self.in_is(b) && a.is_coprime(b) {
            return power_residue_symbol(&self.twisted_generator(a)?, b);
        }
        let a1 = nth_power_free_part(a, self.n);
        if !a1.is_coprime(b) {
            return Ok(UnityRoot::zero(self.n));
        }
        Ok(self.hecke_char(a)?.eval(b))
    }

    /// The primitive character χ_𝔞 (cached by the n-th power free part).
    pub fn hecke_char(&self, a: &IdealK) -> Result<Arc<HeckeChar>> {
        if !self.in_is(a) {
            return Err(Error::NotCoprime(format!("{a:?} is not in I(S)")));
        }
        let a1 = nth_power_free_part(a, self.n);
        if let Some(ch) = self.chars.read().unwrap().get(&a1) {
            return Ok(ch.clone());
        }
        let ch = Arc::new(HeckeChar::new(Some(a1.clone()), &self.character_mod(&a1)?));
        self.chars.write().unwrap().insert(a1, ch.clone());
        Ok(ch)
    }

    /// χ_𝔞 as a residue character modulo 𝔠·rad(𝔞), grown from its values at units (trivial)
    /// and at primes outside S ∪ supp(𝔞).
    pub fn character_mod(&self, a: &IdealK) -> Result<ResidueChar> {
        let m = self.c.mul(&a.radical());
        let ring = Arc::new(ResidueRing::new(&m));
        let t = self.twisted_generator(a)?;
        let support = a.primes();
        let mut bound = 2 * m.norm() + 100;
        loop {
            let primes: Vec<Prime> = primes_up_to_norm(self.field, bound)
                .into_iter()
                .filter(|p| !self.s.contains(p) && !support.contains(p))
                .collect();
            let gens = self
                .field
                .units()
                .into_iter()
                .map(|u| (u, 0))
                .chain(primes.iter().map(|p| (p.gen, symbol_at_prime(&t, p).exponent().expect("coprime"))));
            match ResidueChar::from_generators(ring.clone(), self.n, gens) {
                Err(Error::Domain(_)) => bound *= 2,
                other => return other,
            }
        }
    }

    /// Splits χ_𝔟 = χ^(𝔟)·ψ_(𝔟) along (O/𝔠𝔟)ˣ ≅ (O/𝔟)ˣ × (O/𝔠)ˣ.
    pub fn decompose_char(&self, b: &IdealK) -> Result<(HeckeChar, HeckeChar)> {
        if !self.in_is(b) {
            return Err(Error::NotCoprime(format!("{b:?} is not in I(S)")));
        }
        if !b.is_squarefree() {
            return Err(Error::InvalidArgument(format!("{b:?} is not squarefree")));
        }
        let full = self.character_mod(b)?;
        let (bg, cg) = (b.gen(), self.c.gen());
        let (g, s, t) = bg.xgcd(&cg);
        debug_assert!(g.is_unit());
        let ginv = g.conj();
        // e_b ≡ 1 mod 𝔟, ≡ 0 mod 𝔠 and e_c the other way round
        let e_b = t * cg * ginv;
        let e_c = s * bg * ginv;
        let rb = Arc::new(ResidueRing::new(b));
        let tb: Vec<i8> = (0..rb.size())
            .map(|i| if rb.is_unit_idx(i) { full.table()[full.ring().index(&(rb.element(i) * e_b + e_c))] } else { -1 })
            .collect();
        let tc: Vec<i8> = (0..self.ring.size())
            .map(|i| {
                if self.ring.is_unit_idx(i) {
                    full.table()[full.ring().index(&(e_b + self.ring.element(i) * e_c))]
                } else {
                    -1
                }
            })
            .collect();
        let chi_b = HeckeChar::new(Some(b.clone()), &ResidueChar::from_table(rb, tb, self.n));
        let psi_b = HeckeChar::new(Some(b.clone()), &ResidueChar::from_table(self.ring.clone(), tc, self.n));
        // the class group is trivial, so the split is unique once the product matches
        debug_assert!({
            let prod = chi_b.residue_char().mul(psi_b.residue_char()).unwrap().lift_to(full.modulus()).unwrap();
            prod.table() == full.table()
        });
        Ok((chi_b, psi_b))
    }

    /// χ_𝔞(𝔟)·χ_𝔟(𝔞)⁻¹.
    pub fn reciprocity_factor(&self, a: &IdealK, b: &IdealK) -> Result<UnityRoot> {
        if !a.is_coprime(b) {
            return Err(Error::NotCoprime(format!("{a:?} and {b:?}")));
        }
        Ok(self.chi_eval(a, b)? * self.chi_eval(b, a)?.conj())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_modulus_is_nine() {
        let setup = RayClassSetup::standard(3).unwrap();
        assert_eq!(setup.c(), &IdealK::from_int(Field::Eisenstein, 9).unwrap());
        assert_eq!(setup.ring.phi() % 6, 0);
        assert!(setup.r().orders().iter().all(|o| 3 % o == 0));
        // minimality: one less does not work
        let lam = setup.s()[0];
        assert!(!units_near_one_are_powers(&lam, 3, 3, 6));
        assert!(units_near_one_are_powers(&lam, 3, 4, 6));
        let one = IdealK::one(Field::Eisenstein);
        assert_eq!(setup.class_of(&one).unwrap(), setup.r().identity());
        let (e, m) = setup.rep(setup.r().identity());
        assert!(e.is_one() && *m == CycInt::one(Field::Eisenstein));
    }

    #[test]
    fn gaussian_setup() {
        let setup = RayClassSetup::standard(4).unwrap();
        let e = setup.sufficiency()[0].exponent;
        assert!(units_near_one_are_powers(&setup.s()[0], 4, e, 8));
        assert!(e == 0 || !units_near_one_are_powers(&setup.s()[0], 4, e - 1, 8));
        assert!(setup.r().orders().iter().all(|o| 4 % o == 0));
        for cls in 0..setup.r().order() as u32 {
            let (e, m) = setup.rep(cls);
            assert_eq!(setup.class_of(e).unwrap(), cls);
            assert_eq!(IdealK::new(*m).unwrap(), *e);
        }
    }

    #[test]
    fn missing_divisor_is_rejected() {
        let f = Field::Eisenstein;
        assert!(RayClassSetup::build(3, f, &[]).is_err());
        assert!(RayClassSetup::build(3, Field::Gaussian, &primes_above(Field::Gaussian, 2)).is_err());
    }
}
