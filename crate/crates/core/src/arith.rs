//! Small integer helpers: gcds, modular products and powers, linear
//! congruences and a deterministic primality test for `u64`.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, s, t)` with `a*s + b*t = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `v mod m` in `0..m`.
pub fn rem_euclid_u64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// All solutions `x` in `0..m` of `a x = c (mod m)`, ascending, or `None`
/// when `gcd(a, m)` does not divide `c`.
pub fn solve_linear_congruence(a: u64, c: u64, m: u64) -> Option<Vec<u64>> {
    assert!(m >= 1);
    let (a, c) = (a % m, c % m);
    let g = gcd(a, m);
    if c % g != 0 {
        return None;
    }
    let step = m / g;
    // a/g is invertible modulo m/g
    let (_, s, _) = ext_gcd((a / g) as i128, step as i128);
    let inv = s.rem_euclid(step as i128) as u64;
    let x0 = mod_mul(c / g, inv, step);
    Some((0..g).map(|i| x0 + i * step).collect())
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcds() {
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(27, 161), 1);
        assert_eq!(gcd(7, 161), 7);
        let (g, s, t) = ext_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * s + 46 * t, 2);
    }

    #[test]
    fn congruences() {
        assert_eq!(solve_linear_congruence(7, 0, 161).unwrap().len(), 7);
        assert_eq!(solve_linear_congruence(7, 0, 23), Some(vec![0]));
        assert_eq!(solve_linear_congruence(0, 0, 7).unwrap().len(), 7);
        assert_eq!(solve_linear_congruence(2, 1, 4), None);
        assert_eq!(solve_linear_congruence(3, 2, 7), Some(vec![3]));
        assert_eq!(solve_linear_congruence(5, 3, 1), Some(vec![0]));
    }

    #[test]
    fn primes_agree_with_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    proptest! {
        #[test]
        fn congruence_solutions_are_exact(a in 0u64..60, c in 0u64..60, m in 1u64..60) {
            let brute: Vec<u64> = (0..m).filter(|x| (a * x) % m == c % m).collect();
            match solve_linear_congruence(a, c, m) {
                Some(v) => prop_assert_eq!(v, brute),
                None => prop_assert!(brute.is_empty()),
            }
        }
    }
}
