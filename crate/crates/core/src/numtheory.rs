//! Small exact integer helpers: factorization by trial division, Möbius and
//! Euler functions, divisor lists and aperiodic necklace counts.
//!
//! All inputs are positive 64-bit integers; passing zero is a caller bug and
//! panics.

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize: n must be positive");
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first() == Some(&(n, 1))
}

/// Splits `q = p^e` into `(p, e)`; `None` unless `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1, "moebius: n must be positive");
    let mut sign = 1;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi: n must be positive");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors: n must be positive");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// 2-adic valuation.
pub fn ord2(n: u64) -> u32 {
    assert!(n >= 1, "ord2: n must be positive");
    n.trailing_zeros()
}

pub fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// Number of aperiodic necklaces of length `b` over an alphabet of `a` letters,
/// `M_a(b) = (1/b) Σ_{d|b} μ(b/d) a^d`.
pub fn necklace_count(a: u64, b: u64) -> Result<u64> {
    assert!(
        a >= 1 && b >= 1,
        "necklace_count: arguments must be positive"
    );
    let mut total: i128 = 0;
    for d in divisors(b) {
        let mu = moebius(b / d);
        if mu == 0 {
            continue;
        }
        let term = checked_pow(a, d).ok_or(Error::Overflow("necklace_count"))?;
        total += i128::from(mu) * i128::from(term);
    }
    let b = i128::from(b);
    assert!(total % b == 0, "necklace sum not divisible by length");
    u64::try_from(total / b).map_err(|_| Error::Overflow("necklace_count"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve_moebius(limit: usize) -> Vec<i64> {
        let mut mu = alloc::vec![1i64; limit + 1];
        let mut is_comp = alloc::vec![false; limit + 1];
        for p in 2..=limit {
            if is_comp[p] {
                continue;
            }
            for m in (p..=limit).step_by(p) {
                if m > p {
                    is_comp[m] = true;
                }
                mu[m] = -mu[m];
            }
            let pp = p * p;
            for m in (pp..=limit).step_by(pp) {
                mu[m] = 0;
            }
        }
        mu
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        let sieve = sieve_moebius(2000);
        for n in 1..=2000u64 {
            assert_eq!(moebius(n), sieve[n as usize], "n = {n}");
        }
    }

    #[test]
    fn moebius_delta_identity() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).into_iter().map(moebius).sum();
            assert_eq!(s, i64::from(n == 1), "n = {n}");
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(12), 4);
        for n in 1..300u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute);
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), [1]);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(13), [1, 13]);
        assert_eq!(divisors(36), [1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn ord2_values() {
        assert_eq!(ord2(1), 0);
        assert_eq!(ord2(40), 3);
        assert_eq!(ord2(4), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert!(is_prime(13) && !is_prime(1) && !is_prime(15));
    }

    #[test]
    fn necklace_examples() {
        assert_eq!(necklace_count(2, 1).unwrap(), 2);
        assert_eq!(necklace_count(2, 3).unwrap(), 2);
        assert_eq!(necklace_count(3, 4).unwrap(), 18);
        assert!(matches!(necklace_count(10, 40), Err(Error::Overflow(_))));
    }

    /// Counts aperiodic words of length `b` up to rotation by direct enumeration.
    fn brute_necklaces(a: u64, b: u32) -> u64 {
        let total = a.pow(b);
        let mut count = 0u64;
        let digits = |mut w: u64| {
            let mut v = alloc::vec![0u64; b as usize];
            for slot in v.iter_mut() {
                *slot = w % a;
                w /= a;
            }
            v
        };
        for w in 0..total {
            let v = digits(w);
            let rotations: Vec<Vec<u64>> = (0..b as usize)
                .map(|r| v[r..].iter().chain(&v[..r]).copied().collect())
                .collect();
            let aperiodic = rotations[1..].iter().all(|r| *r != v);
            let is_min = rotations.iter().all(|r| v <= *r);
            if aperiodic && is_min {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn necklaces_match_enumeration() {
        for a in 1..=5u64 {
            for b in 1..=16u32 {
                if a.pow(b) > 200_000 {
                    continue;
                }
                assert_eq!(
                    necklace_count(a, b as u64).unwrap(),
                    brute_necklaces(a, b),
                    "a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn necklace_sum_identity() {
        for a in 1..=5u64 {
            for b in 1..=16u64 {
                let s: u64 = divisors(b)
                    .into_iter()
                    .map(|d| d * necklace_count(a, d).unwrap())
                    .sum();
                assert_eq!(s, a.pow(b as u32));
            }
        }
    }

    #[test]
    fn phi_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 500 {
            let m = rng.gen_range(1..=1000u64);
            let n = rng.gen_range(1..=1000u64);
            if gcd(m, n) != 1 {
                continue;
            }
            assert_eq!(euler_phi(m * n), euler_phi(m) * euler_phi(n));
            checked += 1;
        }
    }
}
