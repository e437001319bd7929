use super::sieve::Sieve;
use crate::error::{invalid, Error, Result};

/// Hard cap on the argument of the Mirsky sums.
pub const MIRSKY_MAX_X: u64 = 10_000_000;

fn floor_arg(x: f64) -> Result<u64> {
    if x.is_nan() {
        return invalid("x must not be NaN");
    }
    if x < 1.0 {
        return Ok(0);
    }
    if x > MIRSKY_MAX_X as f64 {
        return Err(Error::Capacity {
            what: "sum argument",
            required: x as u128,
            limit: MIRSKY_MAX_X as u128,
        });
    }
    Ok(x.floor() as u64)
}

fn check_progression(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return invalid("progression parameters a and b must be positive");
    }
    Ok((a - 1) % b + 1)
}

fn sorted_order(xs: &[f64]) -> Result<(Vec<usize>, Vec<u64>)> {
    let floors = xs.iter().map(|&x| floor_arg(x)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by_key(|&i| floors[i]);
    Ok((order, floors))
}

/// Σ φ(n) over `n <= x`, `n ≡ a (mod b)`.
pub fn mertens_congruence_sum(sieve: &Sieve, x: f64, a: u64, b: u64) -> Result<u128> {
    Ok(mertens_congruence_sums_at(sieve, &[x], a, b)?[0])
}

/// Mertens congruence sums at several checkpoints in a single pass.
pub fn mertens_congruence_sums_at(sieve: &Sieve, xs: &[f64], a: u64, b: u64) -> Result<Vec<u128>> {
    progression_sums(sieve, xs, a, b, 0, |s, n| s.phi(n) as u128)
}

/// Σ φ(n) φ(n+k) over `n <= x`, `n ≡ a (mod b)`.
pub fn mirsky_sum(sieve: &Sieve, x: f64, a: u64, b: u64, k: u64) -> Result<u128> {
    Ok(mirsky_sums_at(sieve, &[x], a, b, k)?[0])
}

/// Mirsky sums at several checkpoints in a single pass.
pub fn mirsky_sums_at(sieve: &Sieve, xs: &[f64], a: u64, b: u64, k: u64) -> Result<Vec<u128>> {
    progression_sums(sieve, xs, a, b, k, |s, n| {
        s.phi(n) as u128 * s.phi(n + k) as u128
    })
}

fn progression_sums<F: Fn(&Sieve, u64) -> u128>(
    sieve: &Sieve,
    xs: &[f64],
    a: u64,
    b: u64,
    k: u64,
    term: F,
) -> Result<Vec<u128>> {
    let first = check_progression(a, b)?;
    let (order, floors) = sorted_order(xs)?;
    let max = floors.iter().copied().max().unwrap_or(0);
    sieve.check_covers(max.saturating_add(k))?;
    let mut out = vec![0u128; xs.len()];
    let mut acc = 0u128;
    let mut n = first;
    for &i in &order {
        while n <= floors[i] {
            acc += term(sieve, n);
            n += b;
        }
        out[i] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_oracles() {
        let s = Sieve::new(100).unwrap();
        assert_eq!(mertens_congruence_sum(&s, 10.0, 1, 1).unwrap(), 32);
        assert_eq!(mertens_congruence_sum(&s, 10.0, 1, 4).unwrap(), 11);
        assert_eq!(mertens_congruence_sum(&s, 10.0, 5, 4).unwrap(), 11);
        assert_eq!(mirsky_sum(&s, 10.0, 1, 1, 1).unwrap(), 147);
        assert_eq!(mirsky_sum(&s, 10.0, 1, 1, 0).unwrap(), 134);
        assert_eq!(mirsky_sum(&s, 0.5, 1, 1, 1).unwrap(), 0);
        assert_eq!(mirsky_sum(&s, 10.9, 1, 1, 1).unwrap(), 147);
    }

    #[test]
    fn checkpoints_match_single_calls() {
        let s = Sieve::new(1000).unwrap();
        let xs = [500.0, 10.0, 200.5, 0.0];
        let batch = mirsky_sums_at(&s, &xs, 2, 3, 4).unwrap();
        for (x, v) in xs.iter().zip(batch) {
            assert_eq!(mirsky_sum(&s, *x, 2, 3, 4).unwrap(), v);
        }
    }

    #[test]
    fn argument_errors() {
        let s = Sieve::new(100).unwrap();
        assert!(mirsky_sum(&s, f64::NAN, 1, 1, 1).is_err());
        assert!(mirsky_sum(&s, 10.0, 0, 1, 1).is_err());
        assert!(mirsky_sum(&s, 100.0, 1, 1, 1).is_err());
        assert!(matches!(
            mirsky_sum(&s, 1e8, 1, 1, 1),
            Err(Error::Capacity { .. })
        ));
    }
}
