use super::UnityRoot;
use crate::algebra::{CycInt, IdealK, Prime, ResidueRing};
use crate::{Error, Result};

/// (a/𝔭) at a prime 𝔭 with 𝒩𝔭 ≡ 1 mod n, by the Euler criterion.
pub fn symbol_at_prime(a: &CycInt, p: &Prime) -> UnityRoot {
    let field = a.field;
    let n = field.n();
    let ring = ResidueRing::new(&p.ideal());
    let x = ring.index(a);
    if x == 0 {
        return UnityRoot::zero(n);
    }
    debug_assert_eq!((p.norm - 1) % n as u64, 0);
    let y = ring.pow_idx(x, (p.norm - 1) / n as u64);
    let z = ring.index(&field.zeta());
    let mut zk = ring.one_index();
    for k in 0..n {
        if zk == y {
            return UnityRoot::root(n, k as i64);
        }
        zk = ring.mul_idx(zk, z);
    }
    panic!("Euler criterion produced a non-root of unity modulo {p:?}")
}

/// The n-th power residue symbol (a/𝔟), multiplicative in 𝔟.
pub fn power_residue_symbol(a: &CycInt, b: &IdealK) -> Result<UnityRoot> {
    let n = a.field.n();
    let mut acc = UnityRoot::one(n);
    for &(p, e) in b.factors() {
        if p.p == a.field.ramified_prime() {
            return Err(Error::NotCoprime(format!("{b:?} is divisible by a prime above {n}")));
        }
        acc = acc * symbol_at_prime(a, &p).pow(e as i64);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{primes_up_to_norm, residue_exp, Field};

    const E: Field = Field::Eisenstein;

    #[test]
    fn examples() {
        let p7 = primes_up_to_norm(E, 7).into_iter().find(|p| p.norm == 7).unwrap();
        assert!(power_residue_symbol(&CycInt::one(E), &p7.ideal()).unwrap().is_one());
        let five = IdealK::from_int(E, 5).unwrap();
        // 2^8 ≡ 1 mod 5, so 2 is a cube modulo (5)
        assert_eq!(residue_exp(&CycInt::from_int(E, 2), 8, &five), CycInt::one(E));
        assert!(power_residue_symbol(&CycInt::from_int(E, 2), &five).unwrap().is_one());
        let w = E.zeta();
        let s = power_residue_symbol(&w, &p7.ideal()).unwrap();
        let oracle = residue_exp(&w, 2, &p7.ideal());
        let r = ResidueRing::new(&p7.ideal());
        let k = s.exponent().unwrap();
        assert!(r.congruent(&oracle, &w.pow(k as u64)));
        assert!(s.pow(3).is_one());
        let lam = IdealK::new(CycInt::new(E, 1, -1)).unwrap();
        assert!(power_residue_symbol(&w, &lam).is_err());
    }

    #[test]
    fn symbol_detects_nth_powers() {
        for field in [Field::Eisenstein, Field::Gaussian] {
            let n = field.n();
            for p in primes_up_to_norm(field, 200) {
                if p.p == field.ramified_prime() {
                    continue;
                }
                let ring = ResidueRing::new(&p.ideal());
                let mut powers = vec![false; ring.size()];
                for u in ring.unit_indices() {
                    powers[ring.pow_idx(u, n as u64)] = true;
                }
                for u in ring.unit_indices() {
                    let s = symbol_at_prime(&ring.element(u), &p);
                    assert_eq!(s.is_one(), powers[u]);
                }
            }
        }
    }
}
