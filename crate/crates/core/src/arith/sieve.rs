use crate::error::{invalid, Error, Result};

/// Largest accepted sieve bound.
pub const MAX_SIEVE_LIMIT: u64 = 200_000_000;

/// Linear sieve tabulating Euler's totient, the Möbius function and the
/// least prime factor of every integer up to a bound.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    phi: Vec<u32>,
    mu: Vec<i8>,
    lpf: Vec<u32>,
    primes: Vec<u32>,
}

fn alloc<T: Clone>(len: usize, fill: T) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| Error::Capacity {
        what: "sieve allocation",
        required: len as u128,
        limit: MAX_SIEVE_LIMIT as u128 + 1,
    })?;
    v.resize(len, fill);
    Ok(v)
}

impl Sieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 1 {
            return invalid("sieve limit must be at least 1");
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Capacity {
                what: "sieve limit",
                required: limit as u128,
                limit: MAX_SIEVE_LIMIT as u128,
            });
        }
        let n = limit as usize;
        let mut phi = alloc(n + 1, 0u32)?;
        let mut mu = alloc(n + 1, 0i8)?;
        let mut lpf = alloc(n + 1, 0u32)?;
        let mut primes = Vec::new();
        phi[1] = 1;
        mu[1] = 1;
        for i in 2..=n {
            if lpf[i] == 0 {
                lpf[i] = i as u32;
                phi[i] = i as u32 - 1;
                mu[i] = -1;
                primes.push(i as u32);
            }
            let li = lpf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > li || j > n {
                    break;
                }
                lpf[j] = p;
                if p == li {
                    phi[j] = phi[i] * p;
                    mu[j] = 0;
                } else {
                    phi[j] = phi[i] * (p - 1);
                    mu[j] = -mu[i];
                }
            }
        }
        Ok(Sieve {
            limit,
            phi,
            mu,
            lpf,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// φ(n) for `1 <= n <= limit`.
    #[inline]
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize] as u64
    }

    /// μ(n) for `1 <= n <= limit`.
    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// Least prime factor of `2 <= n <= limit`.
    #[inline]
    pub fn lpf(&self, n: u64) -> u64 {
        self.lpf[n as usize] as u64
    }

    /// φ(1), …, φ(limit).
    pub fn phi_values(&self) -> &[u32] {
        &self.phi[1..]
    }

    /// μ(1), …, μ(limit).
    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes up to `x`, ascending.
    pub fn primes_up_to(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as u64) <= x);
        &self.primes[..end]
    }

    pub fn check_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return invalid(format!(
                "value {n} exceeds the sieve limit {}",
                self.limit
            ));
        }
        Ok(())
    }

    /// Prime factorisation of `1 <= n <= limit` as (prime, exponent) pairs.
    pub fn factorize(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return invalid("cannot factorise 0");
        }
        self.check_covers(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.lpf(n);
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    /// Distinct prime divisors of `1 <= n <= limit`.
    pub fn prime_divisors(&self, mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.lpf(n);
            while n % p == 0 {
                n /= p;
            }
            out.push(p);
        }
        out
    }
}

/// Distinct prime divisors of any `n >= 1` by trial division, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let s = Sieve::new(30).unwrap();
        let phi: Vec<u32> = s.phi_values()[..10].to_vec();
        assert_eq!(phi, [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
        let mu: Vec<i8> = s.mu_values()[..10].to_vec();
        assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(s.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(s.primes_up_to(12), &[2, 3, 5, 7, 11]);
        assert_eq!(s.factorize(24).unwrap(), vec![(2, 3), (3, 1)]);
        assert_eq!(s.factorize(1).unwrap(), vec![]);
    }

    #[test]
    fn limits_are_enforced() {
        assert!(matches!(Sieve::new(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            Sieve::new(MAX_SIEVE_LIMIT + 1),
            Err(Error::Capacity { .. })
        ));
        assert!(Sieve::new(1).unwrap().primes().is_empty());
    }

    #[test]
    fn trial_division() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1_000_003), vec![1_000_003]);
    }
}
