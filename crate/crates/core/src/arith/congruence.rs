use num_integer::Integer;

use super::gcd;
use crate::error::{invalid, Error, Result};

/// ψ_d(δ) = gcd(δ, (b/(d,b))·(d,δ)).
pub fn psi_d(d: u64, b: u64, delta: u64) -> u64 {
    gcd(delta, b / gcd(d, b) * gcd(d, delta))
}

/// χ_d(δ): 1 when (d, δ) divides k, else 0.
pub fn chi_d(d: u64, k: u64, delta: u64) -> u8 {
    (k % gcd(d, delta) == 0) as u8
}

/// χ*_d(δ): 1 when ψ_d(δ) divides (d/(d,b))·(k+a), else 0.
pub fn chi_star_d(d: u64, b: u64, a: u64, k: u64, delta: u64) -> u8 {
    let rhs = (d / gcd(d, b)) as u128 * (k + a) as u128;
    (rhs % psi_d(d, b, delta) as u128 == 0) as u8
}

fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<Option<(i128, i128)>> {
    let eg = m1.extended_gcd(&m2);
    let g = eg.gcd;
    if (r2 - r1).rem_euclid(g) != 0 {
        return Some(None);
    }
    let m2g = m2 / g;
    let l = m1.checked_mul(m2g)?;
    let t = ((r2 - r1) / g)
        .rem_euclid(m2g)
        .checked_mul(eg.x.rem_euclid(m2g))?
        % m2g;
    let r = (r1 + m1.checked_mul(t)?).rem_euclid(l);
    Some(Some((r, l)))
}

/// Number of integers `1 <= m <= y` with m ≡ α₀ (mod α) and m ≡ β₀ (mod β).
pub fn count_bi_congruence(y: f64, alpha0: i64, alpha: u64, beta0: i64, beta: u64) -> Result<u64> {
    if alpha == 0 || beta == 0 {
        return invalid("moduli must be positive");
    }
    if y.is_nan() {
        return invalid("y must not be NaN");
    }
    if y < 1.0 {
        return Ok(0);
    }
    let (alpha, beta) = (alpha as i128, beta as i128);
    let combined = crt(
        (alpha0 as i128).rem_euclid(alpha),
        alpha,
        (beta0 as i128).rem_euclid(beta),
        beta,
    )
    .ok_or(Error::Capacity {
        what: "combined modulus",
        required: u128::MAX,
        limit: i128::MAX as u128,
    })?;
    let Some((mut r, l)) = combined else {
        return Ok(0);
    };
    if r == 0 {
        r = l;
    }
    let y = y.floor().min(i128::MAX as f64) as i128;
    Ok(if r > y { 0 } else { ((y - r) / l + 1) as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(y: u64, r1: i64, m1: u64, r2: i64, m2: u64) -> u64 {
        (1..=y as i64)
            .filter(|m| (m - r1).rem_euclid(m1 as i64) == 0 && (m - r2).rem_euclid(m2 as i64) == 0)
            .count() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(count_bi_congruence(100.0, 1, 2, 0, 2).unwrap(), 0);
        assert_eq!(count_bi_congruence(100.0, 1, 3, 2, 5).unwrap(), 7);
        assert_eq!(count_bi_congruence(57.9, 0, 1, 0, 1).unwrap(), 57);
        assert_eq!(count_bi_congruence(0.5, 0, 1, 0, 1).unwrap(), 0);
    }

    #[test]
    fn matches_brute_force() {
        for m1 in 1..=12 {
            for m2 in 1..=12 {
                for r1 in -3..4 {
                    for r2 in -5..3 {
                        assert_eq!(
                            count_bi_congruence(150.0, r1, m1, r2, m2).unwrap(),
                            brute(150, r1, m1, r2, m2)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn prime_values() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=30 {
                for b in 1..=12 {
                    let expect = if d % p == 0 { p } else { gcd(p, b) };
                    assert_eq!(psi_d(d, b, p), expect);
                }
            }
        }
    }
}
