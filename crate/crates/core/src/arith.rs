//! Rational integer helpers: primality, factoring, modular powers.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, finishing with a primality test.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if is_prime(n) {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let x = x as usize;
    let mut sieve = vec![true; x + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= x {
        if sieve[i] {
            let mut j = i * i;
            while j <= x {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// An element of exact multiplicative order `n` modulo the prime `p` (requires n | p-1).
pub fn root_of_unity_mod(n: u64, p: u64) -> Option<u64> {
    if p < 2 || (p - 1) % n != 0 {
        return None;
    }
    let ps: Vec<u64> = factor(n).into_iter().map(|(q, _)| q).collect();
    for g in 2..p {
        let r = pow_mod(g, (p - 1) / n, p);
        if ps.iter().all(|&q| pow_mod(r, n / q, p) != 1) {
            return Some(r);
        }
    }
    None
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let ps = primes_up_to(1000);
        for n in 0..1000u64 {
            assert_eq!(is_prime(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(18446744073709551557));
    }

    #[test]
    fn factor_recomposes() {
        for n in 1..5000u64 {
            let f = factor(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factor(999_983 * 999_979), vec![(999_979, 1), (999_983, 1)]);
    }

    #[test]
    fn roots_of_unity() {
        for p in [7u64, 13, 19, 31, 37] {
            let r = root_of_unity_mod(3, p).unwrap();
            assert_eq!((r * r + r + 1) % p, 0);
        }
        for p in [5u64, 13, 17, 29] {
            let r = root_of_unity_mod(4, p).unwrap();
            assert_eq!((r * r + 1) % p, 0);
        }
        assert!(root_of_unity_mod(3, 5).is_none());
    }
}
