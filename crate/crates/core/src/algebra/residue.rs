use super::{CycInt, Field, IdealK};

/// Hermite basis {(A,0), (B,D)} of the lattice γ·O in coordinates (1, ζ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl Hnf {
    pub fn of(gamma: &CycInt) -> Hnf {
        let f = gamma.field;
        let (c, d) = (gamma.a, gamma.b);
        let v1 = (c, d);
        let v2 = match f {
            Field::Eisenstein => (-d, c - d),
            Field::Gaussian => (-d, c),
        };
        let (g, s, t) = xgcd_i128(v1.1, v2.1);
        let det = (v1.0 * v2.1 - v1.1 * v2.0).abs();
        assert!(det > 0, "HNF of zero element");
        let (bx, by) = if g == 0 {
            (0, 0)
        } else {
            (s * v1.0 + t * v2.0, s * v1.1 + t * v2.1)
        };
        let (mut bx, by) = if by < 0 { (-bx, -by) } else { (bx, by) };
        let dd = by;
        let aa = det / dd;
        bx = bx.rem_euclid(aa);
        Hnf { a: aa as i64, b: bx as i64, d: dd as i64 }
    }

    pub fn size(&self) -> u64 {
        (self.a * self.d) as u64
    }

    pub fn reduce(&self, x: i128, y: i128) -> (i64, i64) {
        let q = y.div_euclid(self.d as i128);
        let x1 = x - q * self.b as i128;
        let y1 = y - q * self.d as i128;
        (x1.rem_euclid(self.a as i128) as i64, y1 as i64)
    }

    pub fn is_zero(&self, x: &CycInt) -> bool {
        self.reduce(x.a, x.b) == (0, 0)
    }
}

fn xgcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
        let t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// The finite ring O/𝔪 with canonical representatives a + bζ, 0 ≤ a < A, 0 ≤ b < D.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: IdealK,
    hnf: Hnf,
    prime_hnfs: Vec<Hnf>,
}

impl ResidueRing {
    pub fn new(modulus: &IdealK) -> ResidueRing {
        let hnf = Hnf::of(&modulus.gen());
        let prime_hnfs = modulus.factors().iter().map(|(p, _)| Hnf::of(&p.gen)).collect();
        ResidueRing { modulus: modulus.clone(), hnf, prime_hnfs }
    }

    pub fn modulus(&self) -> &IdealK {
        &self.modulus
    }

    pub fn field(&self) -> Field {
        self.modulus.field()
    }

    pub fn hnf(&self) -> Hnf {
        self.hnf
    }

    pub fn size(&self) -> usize {
        self.hnf.size() as usize
    }

    /// |(O/𝔪)ˣ|.
    pub fn phi(&self) -> u64 {
        self.modulus.factors().iter().map(|(p, e)| p.norm.pow(e - 1) * (p.norm - 1)).product()
    }

    pub fn index(&self, x: &CycInt) -> usize {
        let (a, b) = self.hnf.reduce(x.a, x.b);
        (a + self.hnf.a * b) as usize
    }

    pub fn element(&self, idx: usize) -> CycInt {
        let i = idx as i64;
        CycInt::new(self.field(), (i % self.hnf.a) as i128, (i / self.hnf.a) as i128)
    }

    pub fn reduce(&self, x: &CycInt) -> CycInt {
        self.element(self.index(x))
    }

    pub fn one_index(&self) -> usize {
        self.index(&CycInt::one(self.field()))
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        let x = self.element(i);
        let y = self.element(j);
        self.index(&(x * y))
    }

    pub fn pow_idx(&self, i: usize, mut e: u64) -> usize {
        let mut base = i;
        let mut acc = self.one_index();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: &CycInt) -> bool {
        self.prime_hnfs.iter().all(|h| !h.is_zero(x))
    }

    pub fn is_unit_idx(&self, i: usize) -> bool {
        self.is_unit(&self.element(i))
    }

    pub fn congruent(&self, x: &CycInt, y: &CycInt) -> bool {
        self.index(x) == self.index(y)
    }

    /// Indices of all units, ascending.
    pub fn unit_indices(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.is_unit_idx(i)).collect()
    }

    /// Multiplicative inverse of a unit (by the group order).
    pub fn inverse_idx(&self, i: usize) -> usize {
        let phi = self.phi();
        self.pow_idx(i, phi - 1)
    }
}

/// aᵉ reduced modulo 𝔪.
pub fn residue_exp(a: &CycInt, e: u64, m: &IdealK) -> CycInt {
    let r = ResidueRing::new(m);
    r.element(r.pow_idx(r.index(a), e))
}

/// The first unit u (in `Field::units` order) with u·x ≡ 1 mod 𝔠.
pub fn find_unit_congruent(x: &CycInt, c: &IdealK) -> Option<CycInt> {
    let r = ResidueRing::new(c);
    let one = r.one_index();
    x.field.units().into_iter().find(|u| r.index(&(*u * *x)) == one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ideals_up_to, primes_up_to_norm};
    use rand::{Rng, SeedableRng};

    const E: Field = Field::Eisenstein;

    #[test]
    fn hnf_lattice_is_correct() {
        for field in [Field::Eisenstein, Field::Gaussian] {
            for m in ideals_up_to(field, 400) {
                let r = ResidueRing::new(&m);
                assert_eq!(r.size() as u64, m.norm());
                // every multiple of the generator reduces to zero
                for u in -3..=3 {
                    for v in -3..=3 {
                        let z = m.gen() * CycInt::new(field, u, v);
                        assert_eq!(r.index(&z), 0);
                    }
                }
                // distinct canonical representatives are incongruent
                if m.norm() <= 60 {
                    for i in 0..r.size() {
                        for j in 0..i {
                            let d = r.element(i) - r.element(j);
                            assert!(!m.contains(&d));
                        }
                    }
                }
                assert_eq!(r.unit_indices().len() as u64, r.phi());
            }
        }
    }

    #[test]
    fn residue_exp_examples() {
        let five = IdealK::from_int(E, 5).unwrap();
        assert_eq!(residue_exp(&CycInt::from_int(E, 2), 8, &five), CycInt::one(E));
        let m = IdealK::new(CycInt::new(E, 7, 3)).unwrap();
        let a = CycInt::new(E, 100, -41);
        assert_eq!(residue_exp(&a, 1, &m), ResidueRing::new(&m).reduce(&a));
        assert_eq!(residue_exp(&CycInt::one(E), 12345, &m), CycInt::one(E));
    }

    #[test]
    fn lagrange_at_primes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Eisenstein, Field::Gaussian] {
            let primes: Vec<_> = primes_up_to_norm(field, 1000).into_iter().take(20).collect();
            for p in primes {
                let m = p.ideal();
                let r = ResidueRing::new(&m);
                let mut done = 0;
                while done < 100 {
                    let a = CycInt::new(field, rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
                    if !r.is_unit(&a) {
                        continue;
                    }
                    assert_eq!(residue_exp(&a, p.norm - 1, &m), CycInt::one(field));
                    done += 1;
                }
            }
        }
    }

    #[test]
    fn unit_congruences() {
        let lam = CycInt::new(E, 1, -1);
        let c = IdealK::new(lam.pow(4)).unwrap();
        assert_eq!(find_unit_congruent(&CycInt::one(E), &c), Some(CycInt::one(E)));
        let x = CycInt::new(E, 4, 3);
        let r = ResidueRing::new(&c);
        let brute = E.units().into_iter().find(|u| r.congruent(&(*u * x), &CycInt::one(E)));
        assert_eq!(find_unit_congruent(&x, &c), brute);
        // 1 + λ is congruent to no inverse unit modulo λ⁴
        let y = CycInt::one(E) + lam;
        let hits = E.units().into_iter().filter(|u| r.congruent(&(*u * y), &CycInt::one(E))).count();
        assert_eq!(find_unit_congruent(&y, &c).is_some(), hits > 0);
    }
}
