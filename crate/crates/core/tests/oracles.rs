//! Library results against independent brute-force or closed-form oracles
//! written directly in the tests.

use logpair::arith::*;
use logpair::family::*;
use logpair::limits::*;
use logpair::measures::*;
use logpair::verify::*;

fn naive_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| naive_gcd(k, n) == 1).count() as u64
}

fn naive_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        naive_gcd(b, a % b)
    }
}

fn naive_mu(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn naive_primes(limit: u64) -> Vec<u64> {
    let mut composite = vec![false; limit as usize + 1];
    let mut out = Vec::new();
    for p in 2..=limit as usize {
        if !composite[p] {
            out.push(p as u64);
            for m in (p * p..=limit as usize).step_by(p) {
                composite[m] = true;
            }
        }
    }
    out
}

#[test]
fn sieve_matches_trial_division() {
    let s = Sieve::new(3000).unwrap();
    for n in 1..=3000 {
        assert_eq!(s.phi(n), naive_phi(n), "phi({n})");
        assert_eq!(s.mu(n), naive_mu(n), "mu({n})");
    }
    let primes: Vec<u64> = s.primes_up_to(3000).iter().map(|&p| p as u64).collect();
    assert_eq!(primes, naive_primes(3000));
}

#[test]
fn progression_sums_match_loops() {
    let s = Sieve::new(2100).unwrap();
    for (a, b, k) in [(1, 1, 0), (1, 1, 3), (2, 3, 1), (5, 5, 10), (4, 7, 2)] {
        for x in [1.0, 17.5, 500.0, 2000.0] {
            let xi = x as u64;
            let mertens: u128 = (1..=xi).filter(|n| n % b == a % b).map(|n| naive_phi(n) as u128).sum();
            let mirsky: u128 = (1..=xi)
                .filter(|n| n % b == a % b)
                .map(|n| (s.phi(n) * s.phi(n + k)) as u128)
                .sum();
            assert_eq!(mertens_congruence_sum(&s, x, a, b).unwrap(), mertens);
            assert_eq!(mirsky_sum(&s, x, a, b, k).unwrap(), mirsky);
        }
    }
}

#[test]
fn bi_congruence_matches_enumeration() {
    for (a0, a, b0, b) in [(1i64, 2u64, 0i64, 3u64), (3, 4, 1, 6), (0, 5, 0, 10), (1, 6, 2, 4), (-1, 7, 5, 9)] {
        for y in [0.5, 1.0, 29.9, 100.0, 257.0] {
            let want = (1..=y as i64)
                .filter(|n| (n - a0).rem_euclid(a as i64) == 0 && (n - b0).rem_euclid(b as i64) == 0)
                .count() as u64;
            assert_eq!(count_bi_congruence(y, a0, a, b0, b).unwrap(), want, "{a0} {a} {b0} {b} {y}");
        }
    }
}

#[test]
fn mertens_constant_against_sum() {
    let s = Sieve::new(400_000).unwrap();
    let x = 400_000.0;
    for (a, b) in [(1, 1), (1, 2), (2, 4), (3, 5), (1, 6)] {
        let c = c_ab(a, b, 1000).unwrap().value;
        let emp = mertens_congruence_sum(&s, x, a, b).unwrap() as f64 * std::f64::consts::PI.powi(2) / (3.0 * x * x);
        assert!((emp / c - 1.0).abs() < 2e-3, "c_{a},{b}: {c} vs {emp}");
    }
}

#[test]
fn mirsky_constant_against_sum() {
    let s = Sieve::new(200_010).unwrap();
    let x = 200_000.0;
    for (a, b, k) in [(1, 1, 1), (1, 1, 2), (2, 3, 3), (1, 4, 6), (5, 5, 10)] {
        let c = c_abk_product(&s, a, b, k, 200_000).unwrap().value;
        let emp = mirsky_sum(&s, x, a, b, k).unwrap() as f64;
        let main = mirsky_main_term(c, x, k);
        assert!((emp / main - 1.0).abs() < 5e-3, "({a},{b},{k}): {emp} vs {main}");
    }
}

#[test]
fn k_zero_constant_against_independent_product() {
    let primes = naive_primes(200_000);
    let mut log = 0.0;
    for &p in &primes {
        let pf = p as f64;
        log += (1.0 - 2.0 / (pf * pf) + 1.0 / (pf * pf * pf)).ln();
    }
    let s = Sieve::new(200_000).unwrap();
    let c = c_abk_product(&s, 1, 1, 0, 200_000).unwrap();
    assert!((c.value - log.exp()).abs() < 1e-12);
    assert!((c.value - 0.428249505677).abs() < 1e-5);
}

#[test]
fn c111_against_independent_product() {
    let primes = naive_primes(100_000);
    let v: f64 = primes.iter().map(|&p| 1.0 - 2.0 / (p as f64).powi(2)).product();
    let s = Sieve::new(100_000).unwrap();
    let c = c_abk_product(&s, 1, 1, 1, 100_000).unwrap();
    assert!((c.value - v).abs() < 1e-10);
    assert!((c.value - 0.3226).abs() < 1e-4);
}

#[test]
fn series_agrees_with_literal_double_loop() {
    let s = Sieve::new(2000).unwrap();
    for (a, b, k) in [(1, 1, 1), (2, 3, 0), (3, 4, 6), (5, 5, 5)] {
        let fast = c_abk_series(&s, a, b, k, 150).unwrap();
        let direct = c_abk_series_direct(&s, a, b, k, 150).unwrap();
        assert!((fast - direct).abs() < 1e-13, "({a},{b},{k})");
    }
}

#[test]
fn asymptote_matches_published_value() {
    let s = Sieve::new(1_000_000).unwrap();
    let c = asymptote_constant(&s, 1_000_000).unwrap();
    assert!((c.value - 0.09239).abs() < 1e-5, "{}", c.value);
}

#[test]
fn linear_euler_examples() {
    let s = Sieve::new(1_000_000).unwrap();
    let cache = ConstantCache::new(&s, 1_000_000).unwrap();
    let c111 = cache.c_abk(1, 1, 1).unwrap();
    assert_eq!(g_linear_euler(0.999, 1, 1, &cache).unwrap(), 0.0);
    assert!((g_linear_euler(1.5, 1, 1, &cache).unwrap() - c111 / 1.5f64.powi(4)).abs() < 1e-15);
    assert!((g_linear_euler(1.5, 1, 1, &cache).unwrap() - 0.0637).abs() < 1e-4);
}

#[test]
fn linear_trivial_closed_forms() {
    assert_eq!(g_linear_trivial(0.5, 1, 1.0), 0.0);
    assert!((g_linear_trivial(1.5, 1, 1.0) - 1.0 / 4.5 * 2.0).abs() < 1e-15);
    assert!((g_linear_trivial(1e6 + 0.5, 1, 1.0) - 0.5).abs() < 1e-5);
    assert_eq!(g_sublinear_trivial(2), 0.125);
    for t in [0.3, 1.5, 2.7, 9.9] {
        let th = theta_n(t, 1_000_000, 1, 1_000_000.0);
        assert!((th - g_linear_trivial(t, 1, 1.0)).abs() < 1e-3, "t={t}");
    }
    let (n, psi) = (1000u64, 1000.0);
    let edge = psi / (n as f64 - 1.0);
    assert_eq!(theta_n(edge * (1.0 - 1e-9), n, 1, psi), 0.0);
    assert!(theta_n(edge * 1.0001, n, 1, psi) > 0.0);
}

#[test]
fn cdf_derivatives_match_densities() {
    let h = 1e-4;
    for s in [-2.0, -0.5, 0.5, 2.0] {
        let d = (limit_cdf_trivial(s + h) - limit_cdf_trivial(s - h)) / (2.0 * h);
        assert!((d - g_unscaled_trivial(s)).abs() < 1e-7);
        let d = (limit_cdf_euler(s + h) - limit_cdf_euler(s - h)) / (2.0 * h);
        assert!((d - g_unscaled_euler(s)).abs() < 1e-7);
    }
    assert!((limit_cdf_trivial(1.0) - 0.81606).abs() < 1e-5);
    assert!((g_unscaled_trivial(1.0) - 0.18394).abs() < 1e-5);
}

/// Positions and weights enumerated directly from the definition.
fn brute_force_atoms(a: u64, b: u64, n: u64, euler: bool, psi: f64) -> Vec<(f64, f64)> {
    let elems: Vec<u64> = (1..=n).filter(|m| m % b == a % b).collect();
    let mut out = Vec::new();
    for &x in &elems {
        for &y in &elems {
            if x != y {
                let w = if euler { (naive_phi(x) * naive_phi(y)) as f64 } else { 1.0 };
                out.push((psi * ((x as f64).ln() - (y as f64).ln()), w));
            }
        }
    }
    out
}

#[test]
fn empirical_measure_matches_definition() {
    let s = Sieve::new(200).unwrap();
    for (a, b, euler) in [(1, 1, false), (2, 3, false), (1, 1, true), (3, 4, true)] {
        let n = 60;
        let mode = if euler { WeightMode::Euler } else { WeightMode::Trivial };
        let fam = WeightedLogFamily::new(a, b, mode).unwrap();
        for spec in [ScalingSpec::trivial(), ScalingSpec::linear()] {
            let psi = spec.psi(n).unwrap();
            let m = build_pair_correlation(&fam, n, &spec, Some(&s)).unwrap();
            let atoms = brute_force_atoms(a, b, n, euler, psi);
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            assert_eq!(m.total_mass() as f64, total);
            for pt in [-3.0, -0.7, 0.0, 0.2, 1.5, 40.0] {
                // Skip points sitting on an atom, where rounding decides the side.
                if atoms.iter().any(|x| (x.0 - pt).abs() < 1e-9 * (1.0 + pt.abs())) {
                    continue;
                }
                let below: f64 = atoms.iter().filter(|x| x.0 <= pt).map(|x| x.1).sum();
                assert!((m.cdf(pt).unwrap() - below / total).abs() < 1e-12);
            }
            let f = |u: f64| (-u * u).exp();
            let want: f64 = atoms.iter().map(|x| x.1 * f(x.0)).sum::<f64>() / psi;
            let got = m.pair_with(f, psi).unwrap();
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0));
        }
    }
}

#[test]
fn histogram_matches_definition() {
    let fam = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
    let n = 80;
    let spec = ScalingSpec::linear();
    let m = build_pair_correlation(&fam, n, &spec, None).unwrap();
    let h = m.bin(-3.0, 3.0, 12, 80.0).unwrap();
    let atoms = brute_force_atoms(1, 1, n, false, 80.0);
    for i in 0..12 {
        let (lo, hi) = h.edges(i);
        let count = atoms.iter().filter(|x| x.0 >= lo && x.0 < hi).count() as u128;
        assert_eq!(h.counts[i], count, "bin {i}");
    }
    let outside = atoms.iter().filter(|x| x.0 < -3.0 || x.0 >= 3.0).count() as u128;
    assert_eq!(h.underflow + h.overflow, outside);
}

#[test]
fn hat_integrals_against_quadrature() {
    let f = TestFunction::hat(1.5, 0.25).unwrap();
    let g = TestFunction::smooth_bump(2.2, 0.7).unwrap();
    let s = Sieve::new(100_000).unwrap();
    let cache = ConstantCache::new(&s, 100_000).unwrap();
    let densities = [
        LimitDensity::UnscaledTrivial,
        LimitDensity::UnscaledEuler,
        LimitDensity::SublinearTrivial { b: 2 },
        LimitDensity::linear_trivial(1, 1.0).unwrap(),
        LimitDensity::linear_trivial(2, 0.7).unwrap(),
        LimitDensity::linear_euler(1, 1, 5.0, &cache).unwrap(),
        LimitDensity::linear_euler(2, 2, 5.0, &cache).unwrap(),
    ];
    for d in &densities {
        for tf in [&f, &g] {
            let (lo, hi) = tf.support();
            // Breakpoints: jumps of the densities (multiples of 1 and 1.4) and knots of the test functions.
            let mut cuts = vec![lo, hi];
            for k in 1..10 {
                cuts.push(k as f64);
                cuts.push(1.4 * k as f64);
            }
            let (c, w) = match tf {
                TestFunction::Hat { center, half_width } | TestFunction::SmoothBump { center, half_width } => (*center, *half_width),
            };
            cuts.extend([c - w / 2.0, c, c + w / 2.0]);
            cuts.retain(|x| *x >= lo && *x <= hi);
            cuts.sort_by(f64::total_cmp);
            let mut mid = 0.0;
            for pair in cuts.windows(2) {
                let n = 20_000;
                let h = (pair[1] - pair[0]) / n as f64;
                mid += (0..n)
                    .map(|i| {
                        let t = pair[0] + (i as f64 + 0.5) * h;
                        tf.eval(t) * d.eval(t)
                    })
                    .sum::<f64>()
                    * h;
            }
            assert!((d.integrate(tf) - mid).abs() < 1e-6, "{} {:?} {} {}", d.tag(), tf, d.integrate(tf), mid);
        }
    }
}

#[test]
fn convergence_examples() {
    let fam = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
    let fs = [TestFunction::hat(0.0, 1.0).unwrap(), TestFunction::hat(1.0, 0.5).unwrap()];
    let r = run_convergence(
        &LimitDensity::UnscaledTrivial,
        &fam,
        &ScalingSpec::trivial(),
        &[250, 500, 1000, 2000],
        &fs,
        None,
    )
    .unwrap();
    assert!(r.fitted_rate.unwrap() <= -0.8, "{r:?}");
    assert!(r.errors.iter().all(|e| *e >= 0.0));

    let s = Sieve::new(1_000_000).unwrap();
    let cache = ConstantCache::new(&s, 1_000_000).unwrap();
    let euler = WeightedLogFamily::new(1, 1, WeightMode::Euler).unwrap();
    let spec = ScalingSpec::for_weights(WeightMode::Euler, ScalingKind::Linear).unwrap();
    let limit = LimitDensity::linear_euler(1, 1, 4.0, &cache).unwrap();
    let hat = TestFunction::hat(1.5, 0.25).unwrap();
    let r = run_convergence(&limit, &euler, &spec, &[2000], &[hat], Some(&s)).unwrap();
    assert!(r.errors[0] < 0.01, "{r:?}");
}

#[test]
fn superlinear_mass_escapes() {
    let fam = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
    let spec = ScalingSpec::with_default_normalizer(ScalingKind::Power(1.5)).unwrap();
    let m = build_pair_correlation(&fam, 2000, &spec, None).unwrap();
    let min = m.min_positive_position().unwrap();
    let want = 2000f64.powf(1.5) * (2000.0f64 / 1999.0).ln();
    assert!((min - want).abs() < 1e-9 * want);
    assert_eq!(m.mass_in(-1.0, 1.0), 0);
}

#[test]
fn mass_asymptotics_examples() {
    let s = Sieve::new(2000).unwrap();
    let f = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
    let e = &mass_asymptotics(&f, &[2000], None).unwrap().entries[0];
    assert!((e.lower_mass as f64 / 4e6 - 0.5).abs() < 1e-3);
    let f = WeightedLogFamily::new(1, 1, WeightMode::Euler).unwrap();
    let e = &mass_asymptotics(&f, &[2000], Some(&s)).unwrap().entries[0];
    let want = 9.0 / (2.0 * std::f64::consts::PI.powi(4));
    assert!((want - 0.046197).abs() < 1e-6);
    assert!((e.lower_mass as f64 / 2000f64.powi(4) / want - 1.0).abs() < 0.01);
    assert_eq!(mass_asymptotics(&f, &[1], Some(&s)).unwrap().entries[0].lower_mass, 0);
}

#[test]
fn weighted_masses_and_cardinalities() {
    let s = Sieve::new(1000).unwrap();
    let f = WeightedLogFamily::new(3, 4, WeightMode::Euler).unwrap();
    let members: Vec<u64> = (1..=1000).filter(|n| n % 4 == 3).collect();
    assert_eq!(f.count(1000), members.len() as u64);
    let w: u128 = members.iter().map(|&n| naive_phi(n) as u128).sum();
    let m = build_pair_correlation(&f, 1000, &ScalingSpec::trivial(), Some(&s)).unwrap();
    let diag: u128 = members.iter().map(|&n| (naive_phi(n) as u128).pow(2)).sum();
    assert_eq!(m.total_mass(), w * w - diag);
}
