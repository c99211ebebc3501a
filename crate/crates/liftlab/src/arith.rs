//! Prime sieving, the Moebius function, divisor enumeration and the
//! Kronecker symbol.
//!
//! Everything here is exact integer arithmetic on machine words; the
//! quantities involved (moduli, levels, prime cutoffs) are small even when
//! the coefficient tables upstream are huge.

use crate::error::{Error, Result};

/// Ascending primes up to an inclusive limit.
#[derive(Debug, Clone)]
pub struct PrimeSet {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeSet {
    /// Segmented sieve of Eratosthenes up to `x` inclusive.
    ///
    /// Memory stays `O(sqrt(x) + segment)`: only the base primes and one
    /// segment bitmap are live at a time (the result vector aside).
    pub fn sieve(x: u64) -> Result<PrimeSet> {
        if x < 2 {
            return Err(Error::InvalidParameter(format!(
                "sieve limit must be at least 2, got {x}"
            )));
        }
        let root = (x as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root);

        let segment_len = (root as usize).max(1 << 16);
        let mut primes = Vec::with_capacity(estimate_pi(x));
        let mut is_composite = vec![false; segment_len];

        let mut low = 2u64;
        while low <= x {
            let high = (low + segment_len as u64 - 1).min(x);
            let len = (high - low + 1) as usize;
            is_composite[..len].fill(false);
            for &p in &base {
                if p * p > high {
                    break;
                }
                let mut m = (low.div_ceil(p) * p).max(p * p);
                while m <= high {
                    is_composite[(m - low) as usize] = true;
                    m += p;
                }
            }
            for i in 0..len {
                if !is_composite[i] {
                    primes.push(low + i as u64);
                }
            }
            low = high + 1;
        }
        Ok(PrimeSet { limit: x, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// pi(limit): the number of primes in the set.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// pi(y) for y <= limit, by binary search.
    pub fn count_up_to(&self, y: u64) -> usize {
        self.primes.partition_point(|&p| p <= y)
    }
}

/// Plain sieve used for the base primes of the segmented sieve (and as a
/// cross-check oracle in tests).
fn simple_sieve(x: u64) -> Vec<u64> {
    let n = x as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn estimate_pi(x: u64) -> usize {
    let xf = x as f64;
    (xf / xf.ln() * 1.2) as usize + 16
}

/// Moebius function: 0 unless `n` is square-free, otherwise (-1)^(#prime factors).
pub fn moebius(n: u64) -> i32 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let mut n = n;
    let mut factors = 0u32;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Is `n` square-free? (|n| for negative inputs; 0 is not square-free.)
pub fn is_square_free(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    moebius(n.unsigned_abs()) != 0
}

/// Kronecker symbol (a|n), the full extension of the Jacobi symbol to all
/// integer pairs: n may be zero, negative or even.
///
/// Completely multiplicative in the top argument, and in the bottom over
/// positive arguments; agrees with the Legendre symbol when n is an odd
/// prime.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }

    let mut a = a;
    let mut n = n;
    // Pull the 2-part out of n; each factor contributes (a|2).
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    let mut acc: i32 = if twos % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0, // a even with odd 2-part
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            acc = -acc; // (a|-1) = sign(a)
        }
    }
    // n is now odd and positive: the classical Jacobi loop.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n % 8 {
                3 | 5 => acc = -acc,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            acc = -acc;
        }
        a %= n;
    }
    if n == 1 {
        acc
    } else {
        0
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Divisors of p^nu, i.e. [1, p, ..., p^nu]. The hot paths only ever
/// enumerate divisors of prime powers; this avoids the trial division.
pub fn prime_power_divisors(p: u64, nu: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(nu as usize + 1);
    let mut v = 1u64;
    for _ in 0..=nu {
        out.push(v);
        v = v.saturating_mul(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        let p = PrimeSet::sieve(10).unwrap();
        assert_eq!(p.primes(), &[2, 3, 5, 7]);
        assert_eq!(p.limit(), 10);
    }

    #[test]
    fn sieve_pi_known_values() {
        // Oracle: independent naive sieve.
        let naive = simple_sieve(100_000);
        assert_eq!(naive.len(), 9_592);
        let seg = PrimeSet::sieve(100_000).unwrap();
        assert_eq!(seg.primes(), &naive[..]);
        assert_eq!(PrimeSet::sieve(1_000_000).unwrap().count(), 78_498);
    }

    #[test]
    fn sieve_rejects_tiny_limit() {
        assert!(PrimeSet::sieve(1).is_err());
    }

    #[test]
    fn count_up_to_matches_partition() {
        let p = PrimeSet::sieve(1000).unwrap();
        assert_eq!(p.count_up_to(10), 4);
        assert_eq!(p.count_up_to(2), 1);
        assert_eq!(p.count_up_to(1), 0);
        assert_eq!(p.count_up_to(1000), p.count());
    }

    /// Factor-count oracle for moebius.
    fn moebius_oracle(mut n: u64) -> i32 {
        let mut k = 0;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                if e > 1 {
                    return 0;
                }
                k += 1;
            }
            d += 1;
        }
        if n > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(30), moebius_oracle(30));
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn moebius_divisor_sum_identity() {
        // sum_{d|n} mu(d) = [n == 1], for n <= 10^4.
        for n in 1..=10_000u64 {
            let s: i32 = divisors(n).iter().map(|&d| moebius(d)).sum();
            assert_eq!(s, i32::from(n == 1), "n = {n}");
        }
    }

    /// Legendre symbol oracle: enumerate squares mod an odd prime.
    fn legendre_oracle(a: i64, p: u64) -> i32 {
        let r = a.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        for x in 1..p {
            if (x * x) % p == r {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        let primes = simple_sieve(200);
        for &p in primes.iter().filter(|&&p| p > 2) {
            for a in -50..=50i64 {
                assert_eq!(
                    kronecker(a, p as i64),
                    legendre_oracle(a, p),
                    "a = {a}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        for d in [-7i64, -2, -1, 2, 3, 100] {
            assert_eq!(kronecker(1, d), 1);
        }
        assert_eq!(kronecker(-4, 5), 1); // -4 = 1 mod 5, a square
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(2, 3), -1);
        assert_eq!(kronecker(0, 1), 1);
        assert_eq!(kronecker(0, 5), 0);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(6, 4), 0);
    }

    #[test]
    fn kronecker_multiplicative_over_odd_bottoms() {
        // Both-argument multiplicativity on the domain the characters use:
        // odd positive bottoms, arbitrary tops.
        for a in -30..=30i64 {
            for b in -30..=30i64 {
                for n in (1..60i64).step_by(2) {
                    assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
                }
            }
        }
        for a in -30..=30i64 {
            for m in (1..40i64).step_by(2) {
                for n in (1..40i64).step_by(2) {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_power_divisors(3, 4), vec![1, 3, 9, 27, 81]);
        // prime-power fast path agrees with the general one
        for &(p, nu) in &[(2u64, 6u32), (3, 4), (5, 3), (97, 2)] {
            assert_eq!(prime_power_divisors(p, nu), divisors(p.pow(nu)));
        }
    }

    #[test]
    fn divisors_trial_division_oracle() {
        for n in 1..=2000u64 {
            let oracle: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), oracle, "n = {n}");
        }
    }

    #[test]
    fn square_free_flags() {
        assert!(is_square_free(1));
        assert!(is_square_free(-1));
        assert!(is_square_free(6));
        assert!(is_square_free(-15));
        assert!(!is_square_free(0));
        assert!(!is_square_free(12));
        assert!(!is_square_free(-4));
    }
}
