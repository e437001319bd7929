use num_rational::Ratio;
use serde::Serialize;

use super::gcd;
use super::sieve::{prime_factors, Sieve};
use crate::error::{invalid, Result};
use crate::numeric::CompensatedSum;

/// Default prime cutoff for truncated Euler products.
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    /// Leading constant of the Mertens congruence sum.
    Mertens,
    /// Euler product for the Mirsky congruence sum.
    MirskyProduct,
    /// Leading constant of the Euler-weighted mass growth.
    Asymptote,
    /// Σ g(d)/d² for the multiplicative function g = f * μ.
    C1,
}

/// A numerically evaluated arithmetic constant with an error envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArithmeticConstant {
    pub kind: ConstantKind,
    pub a: u64,
    pub b: u64,
    pub k: Option<u64>,
    pub prime_cutoff: u64,
    pub value: f64,
    /// Absolute bound on the truncation error of `value`.
    pub tail_bound: f64,
}

fn check_ab(a: u64, b: u64) -> Result<()> {
    if a == 0 || b == 0 {
        return invalid("a and b must be positive");
    }
    Ok(())
}

fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// c_{a,b}, the constant in Σ_{n<=x, n≡a (b)} φ(n) ~ (3 c_{a,b}/π²) x².
///
/// The product runs over the primes dividing `b` only, so the value is exact.
pub fn c_ab(a: u64, b: u64, prime_cutoff: u64) -> Result<ArithmeticConstant> {
    check_ab(a, b)?;
    if prime_cutoff < 2 {
        return invalid("prime cutoff must be at least 2");
    }
    let g = gcd(a, b);
    let mut value = totient(g) as f64 / (b * g) as f64;
    for p in prime_factors(b) {
        let p = p as f64;
        value /= 1.0 - 1.0 / (p * p);
    }
    Ok(ArithmeticConstant {
        kind: ConstantKind::Mertens,
        a,
        b,
        k: None,
        prime_cutoff,
        value,
        tail_bound: 0.0,
    })
}

/// Main term c_{a,b,k}·(x³/3 + k x²/2) of the Mirsky congruence sum.
pub fn mirsky_asymptotic(
    sieve: &Sieve,
    x: f64,
    a: u64,
    b: u64,
    k: u64,
    prime_cutoff: u64,
) -> Result<f64> {
    let c = c_abk_product(sieve, a, b, k, prime_cutoff)?;
    Ok(mirsky_main_term(c.value, x, k))
}

/// c·(x³/3 + k x²/2).
pub fn mirsky_main_term(c: f64, x: f64, k: u64) -> f64 {
    c * (x * x * x / 3.0 + k as f64 * x * x / 2.0)
}

/// The exact factor Λ(a, b, k) contributed by the prime 2.
pub fn lambda_abk(a: u64, b: u64, k: u64) -> Result<Ratio<u64>> {
    check_ab(a, b)?;
    let even_k = k % 2 == 0;
    let r = match (b % 2 == 0, a % 2 == 0, even_k) {
        (false, _, true) => Ratio::new(5, 8),
        (false, _, false) => Ratio::new(1, 2),
        (true, false, true) => Ratio::new(1, 1),
        (true, false, false) => Ratio::new(1, 2),
        (true, true, true) => Ratio::new(1, 4),
        (true, true, false) => Ratio::new(1, 2),
    };
    Ok(r)
}

/// Logarithm of the local Euler factor at the prime `p`.
fn abk_local_log(p: u64, a: u64, b: u64, k: u64) -> f64 {
    let g = gcd(p, b);
    let pf = p as f64;
    let p2 = pf * pf;
    let u = g as f64 / p2;
    let mut log = 0.0;
    let first = (k + a) % g == 0;
    if first {
        log += (-u).ln_1p();
    }
    if a % g == 0 {
        let kappa = if first { 1.0 / (1.0 - u) } else { 1.0 };
        let kappa_prime = if k % p == 0 { 1.0 - 1.0 / pf } else { 1.0 };
        log += (-u * kappa * kappa_prime).ln_1p();
    }
    log
}

/// Local Euler factor of c_{a,b,k} at the prime `p`.
pub fn abk_local_factor(p: u64, a: u64, b: u64, k: u64) -> f64 {
    abk_local_log(p, a, b, k).exp()
}

/// c_{a,b,k} as an Euler product truncated at `prime_cutoff`.
///
/// Primes above the cutoff dividing `b` or `k` are included exactly.
pub fn c_abk_product(
    sieve: &Sieve,
    a: u64,
    b: u64,
    k: u64,
    prime_cutoff: u64,
) -> Result<ArithmeticConstant> {
    if prime_cutoff > sieve.limit() {
        return invalid(format!(
            "prime cutoff {prime_cutoff} exceeds the sieve limit {}",
            sieve.limit()
        ));
    }
    c_abk_product_with_primes(sieve.primes_up_to(prime_cutoff), a, b, k, prime_cutoff)
}

/// As [`c_abk_product`], given every prime up to `prime_cutoff` in ascending order.
pub fn c_abk_product_with_primes(
    primes: &[u32],
    a: u64,
    b: u64,
    k: u64,
    prime_cutoff: u64,
) -> Result<ArithmeticConstant> {
    check_ab(a, b)?;
    if prime_cutoff < 2 {
        return invalid("prime cutoff must be at least 2");
    }
    let mut log = CompensatedSum::new();
    for &p in primes.iter().take_while(|&&p| p as u64 <= prime_cutoff) {
        log.add(abk_local_log(p as u64, a, b, k));
    }
    let mut special = prime_factors(b);
    if k > 0 {
        special.extend(prime_factors(k));
    }
    special.sort_unstable();
    special.dedup();
    for p in special.into_iter().filter(|&p| p > prime_cutoff) {
        log.add(abk_local_log(p, a, b, k));
    }
    let value = log.total().exp() / b as f64;
    Ok(ArithmeticConstant {
        kind: ConstantKind::MirskyProduct,
        a,
        b,
        k: Some(k),
        prime_cutoff,
        value,
        tail_bound: value * 2.0 / (prime_cutoff - 1).max(1) as f64,
    })
}

/// Explicit lower bound (1/b) Λ Π(...) over the odd primes up to the cutoff.
pub fn c_abk_lower_bound(sieve: &Sieve, a: u64, b: u64, k: u64, prime_cutoff: u64) -> Result<f64> {
    let lambda = lambda_abk(a, b, k)?;
    if prime_cutoff > sieve.limit() {
        return invalid("prime cutoff exceeds the sieve limit");
    }
    let mut log = CompensatedSum::new();
    for &p in sieve.primes_up_to(prime_cutoff).iter().skip(1) {
        let p = p as u64;
        let g = gcd(p, b);
        let u = g as f64 / (p * p) as f64;
        if (a + k) % g == 0 {
            log.add((-u).ln_1p());
        }
        if a % g == 0 {
            log.add((-2.0 * u).ln_1p());
        }
    }
    let lambda = *lambda.numer() as f64 / *lambda.denom() as f64;
    Ok(lambda * log.total().exp() / b as f64)
}
