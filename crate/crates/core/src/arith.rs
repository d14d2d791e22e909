//! Small integer helpers: primality, factorization, modular inverses and
//! primitive roots. Inputs are desk-scale, so trial division is enough.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, e))` when `q = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// A generator of `(Z/p^k)^×` for an odd prime `p`.
pub fn primitive_root_prime_power(p: u64, k: u32) -> u64 {
    let phi = p - 1;
    let factors = factorize(phi);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&(q, _)| mod_pow(g, phi / q, p) != 1))
        .unwrap_or(1);
    if k <= 1 {
        return g % p.pow(k.max(1));
    }
    // g lifts to a generator mod p^k unless g^(p-1) = 1 mod p^2.
    if mod_pow(g, phi, p * p) == 1 {
        g + p
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(45), vec![(3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(15), None);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inv(2, 9), Some(5));
        assert_eq!(mod_inv(3, 9), None);
    }

    #[test]
    fn primitive_roots_generate() {
        for &(p, k) in &[(3u64, 1u32), (3, 2), (3, 3), (5, 2), (7, 2), (29, 2)] {
            let m = p.pow(k);
            let g = primitive_root_prime_power(p, k);
            let order = (1..=m).find(|&e| mod_pow(g, e, m) == 1).unwrap();
            assert_eq!(order, m / p * (p - 1), "p={p} k={k} g={g}");
        }
    }
}
