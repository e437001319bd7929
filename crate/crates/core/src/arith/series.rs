use super::gcd;
use super::sieve::{prime_factors, Sieve};
use crate::error::{invalid, Result};
use crate::numeric::CompensatedSum;

fn check(sieve: &Sieve, a: u64, b: u64, depth: u64) -> Result<()> {
    if a == 0 || b == 0 {
        return invalid("a and b must be positive");
    }
    if depth == 0 {
        return invalid("series depth must be positive");
    }
    sieve.check_covers(depth)
}

/// The double Möbius series for c_{a,b,k}, truncated to d, δ <= `depth`,
/// summed term by term.
pub fn c_abk_series_direct(
    sieve: &Sieve,
    a: u64,
    b: u64,
    k: u64,
    depth: u64,
) -> Result<f64> {
    check(sieve, a, b, depth)?;
    let squarefree: Vec<u64> = (1..=depth).filter(|&n| sieve.mu(n) != 0).collect();
    let mut total = CompensatedSum::new();
    for &d in &squarefree {
        let e = gcd(d, b);
        if a % e != 0 {
            continue;
        }
        let lhs = d as u128 * (k + a) as u128;
        let mut row = CompensatedSum::new();
        for &delta in &squarefree {
            let g = gcd(d, delta);
            if k % g != 0 {
                continue;
            }
            let big_g = gcd(delta * e, b * g);
            if lhs % big_g as u128 != 0 {
                continue;
            }
            let sign = (sieve.mu(d) * sieve.mu(delta)) as f64;
            let dd = (d * delta) as f64;
            row.add(sign * big_g as f64 / (dd * dd * b as f64));
        }
        total.merge(&row);
    }
    Ok(total.total())
}

fn subset_products(primes: &[u64]) -> Vec<(u64, bool)> {
    let mut out = vec![(1u64, false)];
    for &p in primes {
        let len = out.len();
        for i in 0..len {
            let (v, odd) = out[i];
            out.push((v * p, !odd));
        }
    }
    out
}

fn smooth_numbers(primes: &[u64], bound: u64, out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for &p in primes {
        let len = out.len();
        for i in 0..len {
            let mut v = out[i] * p;
            while v <= bound {
                out.push(v);
                v *= p;
            }
        }
    }
}

/// The same truncated double series, evaluated by grouping δ = g·r·w with
/// g = (d, δ), r = (δ/g, b/(d,b)) and w coprime to d·b.
///
/// The inner sums over w reduce to Σ_{s smooth} P(y/s)/s² with
/// P(y) = Σ_{w<=y} μ(w)/w². Agrees with [`c_abk_series_direct`] up to rounding.
pub fn c_abk_series(
    sieve: &Sieve,
    a: u64,
    b: u64,
    k: u64,
    depth: u64,
) -> Result<f64> {
    check(sieve, a, b, depth)?;
    let mut prefix = vec![0.0f64; depth as usize + 1];
    let mut acc = CompensatedSum::new();
    for w in 1..=depth {
        let m = sieve.mu(w);
        if m != 0 {
            let wf = w as f64;
            acc.add(m as f64 / (wf * wf));
        }
        prefix[w as usize] = acc.total();
    }
    let b_primes = prime_factors(b);
    let ka = (k + a) as u128;
    let mut smooth = Vec::new();
    let mut total = CompensatedSum::new();
    for d in 1..=depth {
        let mu_d = sieve.mu(d);
        if mu_d == 0 {
            continue;
        }
        let e = gcd(d, b);
        if a % e != 0 {
            continue;
        }
        let b_rest = b / e;
        let d_primes = sieve.prime_divisors(d);
        let mut m_primes: Vec<u64> = d_primes.clone();
        for &p in &b_primes {
            if b_rest % p == 0 && d % p != 0 {
                m_primes.push(p);
            }
        }
        let r_primes: Vec<u64> = m_primes[d_primes.len()..].to_vec();
        smooth_numbers(&m_primes, depth, &mut smooth);
        smooth.sort_unstable();
        let g_primes: Vec<u64> = if k == 0 {
            d_primes.clone()
        } else {
            d_primes.iter().copied().filter(|p| k % p == 0).collect()
        };
        let mut row = CompensatedSum::new();
        for (g, g_odd) in subset_products(&g_primes) {
            let u = (d / g) as u128;
            for &(r, r_odd) in &subset_products(&r_primes) {
                if g * r > depth || (u * ka) % (e * r) as u128 != 0 {
                    continue;
                }
                let y = depth / (g * r);
                let mut inner = CompensatedSum::new();
                for &s in smooth.iter().take_while(|&&s| s <= y) {
                    let sf = s as f64;
                    inner.add(prefix[(y / s) as usize] / (sf * sf));
                }
                let sign = if g_odd != r_odd { -1.0 } else { 1.0 };
                row.add(sign * inner.total() / (g * r) as f64);
            }
        }
        let df = d as f64;
        total.add(mu_d as f64 * e as f64 / (df * df) * row.total());
    }
    Ok(total.total() / b as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouped_matches_direct() {
        let s = Sieve::new(400).unwrap();
        for b in 1..=6 {
            for a in 1..=b {
                for k in [0, 1, 2, 3, 6, 7] {
                    let x = c_abk_series_direct(&s, a, b, k, 150).unwrap();
                    let y = c_abk_series(&s, a, b, k, 150).unwrap();
                    assert!((x - y).abs() < 1e-13, "a={a} b={b} k={k}: {x} vs {y}");
                }
            }
        }
    }
}
