use super::constants::{ArithmeticConstant, ConstantKind};
use super::sieve::Sieve;
use crate::error::{invalid, Result};
use crate::numeric::CompensatedSum;

fn local_f(p: u64) -> f64 {
    let p = p as f64;
    1.0 / (p * (p * p - 2.0))
}

/// f(n) = Π_{p|n} (1 + 1/(p(p²−2))).
pub fn mult_f(sieve: &Sieve, n: u64) -> Result<f64> {
    if n == 0 {
        return invalid("n must be positive");
    }
    sieve.check_covers(n)?;
    Ok(sieve
        .prime_divisors(n)
        .into_iter()
        .map(|p| 1.0 + local_f(p))
        .product())
}

/// (f * μ)(n) = μ(n)² Π_{p|n} 1/(p(p²−2)).
pub fn mult_f_mobius(sieve: &Sieve, n: u64) -> Result<f64> {
    if n == 0 {
        return invalid("n must be positive");
    }
    sieve.check_covers(n)?;
    if sieve.mu(n) == 0 {
        return Ok(0.0);
    }
    Ok(sieve.prime_divisors(n).into_iter().map(local_f).product())
}

/// Σ_{d|n} f(d) g(n/d).
pub fn dirichlet_convolution<F, G>(f: F, g: G, n: u64) -> f64
where
    F: Fn(u64) -> f64,
    G: Fn(u64) -> f64,
{
    let mut acc = CompensatedSum::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            let e = n / d;
            acc.add(f(d) * g(e));
            if e != d {
                acc.add(f(e) * g(d));
            }
        }
        d += 1;
    }
    acc.total()
}

/// Σ_{n<=x} n³ f(n).
pub fn sum_n3_f(sieve: &Sieve, x: f64) -> Result<f64> {
    if x.is_nan() {
        return invalid("x must not be NaN");
    }
    if x < 1.0 {
        return Ok(0.0);
    }
    let n_max = x.floor() as u64;
    sieve.check_covers(n_max)?;
    let mut acc = CompensatedSum::new();
    for n in 1..=n_max {
        let nf = n as f64;
        acc.add(nf * nf * nf * mult_f(sieve, n)?);
    }
    Ok(acc.total())
}

fn check_cutoff(sieve: &Sieve, prime_cutoff: u64) -> Result<()> {
    if prime_cutoff < 2 {
        return invalid("prime cutoff must be at least 2");
    }
    if prime_cutoff > sieve.limit() {
        return invalid("prime cutoff exceeds the sieve limit");
    }
    Ok(())
}

fn log_product<F: Fn(f64) -> f64>(sieve: &Sieve, prime_cutoff: u64, log_factor: F) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in sieve.primes_up_to(prime_cutoff) {
        acc.add(log_factor(p as f64));
    }
    acc.total()
}

/// C₁ = Σ_d g(d)/d² = Π_p (1 + 1/(p²(p²−2))).
pub fn c1_constant(sieve: &Sieve, prime_cutoff: u64) -> Result<ArithmeticConstant> {
    check_cutoff(sieve, prime_cutoff)?;
    let value = log_product(sieve, prime_cutoff, |p| (1.0 / (p * p * (p * p - 2.0))).ln_1p()).exp();
    let pc = prime_cutoff as f64;
    Ok(ArithmeticConstant {
        kind: ConstantKind::C1,
        a: 1,
        b: 1,
        k: None,
        prime_cutoff,
        value,
        tail_bound: value * (2.0 / (3.0 * pc * pc * pc)).exp_m1(),
    })
}

/// (1/4) Π_p (1 − 2/p²)(1 + 1/(p²(p²−2))), the limit of the Euler-weighted
/// linear pair correlation function at infinity.
pub fn asymptote_constant(sieve: &Sieve, prime_cutoff: u64) -> Result<ArithmeticConstant> {
    check_cutoff(sieve, prime_cutoff)?;
    let log = log_product(sieve, prime_cutoff, |p| {
        let p2 = p * p;
        (-2.0 / p2).ln_1p() + (1.0 / (p2 * (p2 - 2.0))).ln_1p()
    });
    let value = 0.25 * log.exp();
    let pc = prime_cutoff as f64;
    let rel = (2.0 / (pc - 1.0)).max((1.0 / (pc - 1.0)).exp_m1());
    Ok(ArithmeticConstant {
        kind: ConstantKind::Asymptote,
        a: 1,
        b: 1,
        k: None,
        prime_cutoff,
        value,
        tail_bound: value * rel,
    })
}

/// Π_p (1 − 2/p² + 1/p³), the constant of Σ φ(n)² ~ (value/3) x³.
pub fn totient_square_constant(sieve: &Sieve, prime_cutoff: u64) -> Result<f64> {
    check_cutoff(sieve, prime_cutoff)?;
    Ok(log_product(sieve, prime_cutoff, |p| (-2.0 / (p * p) + 1.0 / (p * p * p)).ln_1p()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_values() {
        let s = Sieve::new(100).unwrap();
        assert_eq!(mult_f(&s, 1).unwrap(), 1.0);
        let f6 = (5.0 / 4.0) * (22.0 / 21.0);
        assert!((mult_f(&s, 6).unwrap() - f6).abs() < 1e-15);
        assert_eq!(mult_f_mobius(&s, 12).unwrap(), 0.0);
    }

    #[test]
    fn convolution_of_f_with_mu() {
        let s = Sieve::new(500).unwrap();
        for n in 1..=500 {
            let conv = dirichlet_convolution(
                |d| mult_f(&s, d).unwrap(),
                |e| s.mu(e) as f64,
                n,
            );
            assert!((conv - mult_f_mobius(&s, n).unwrap()).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn asymptote_regroups() {
        let s = Sieve::new(100_000).unwrap();
        let a = asymptote_constant(&s, 100_000).unwrap();
        let c1 = c1_constant(&s, 100_000).unwrap();
        let prod = log_product(&s, 100_000, |p| (-2.0 / (p * p)).ln_1p()).exp();
        assert!((a.value - 0.25 * c1.value * prod).abs() < 1e-15);
        assert!((a.value - 0.09239).abs() < 1e-5);
        assert!(a.value > 0.0 && a.value < 0.25);
    }
}
