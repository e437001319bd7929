use std::sync::OnceLock;

use proptest::prelude::*;

use logpair::arith::*;
use logpair::family::*;
use logpair::limits::*;
use logpair::measures::*;
use logpair::numeric::*;

fn sieve() -> &'static Sieve {
    static S: OnceLock<Sieve> = OnceLock::new();
    S.get_or_init(|| Sieve::new(100_000).unwrap())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn scaling_strategy() -> impl Strategy<Value = ScalingKind> {
    prop_oneof![
        Just(ScalingKind::Trivial),
        Just(ScalingKind::Linear),
        Just(ScalingKind::InverseAverageGap),
        (0.1f64..2.5).prop_map(ScalingKind::Power),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ln_ratio_is_antisymmetric(m in 1u64..1_000_000_000, n in 1u64..1_000_000_000) {
        prop_assert_eq!(ln_ratio(m, n), -ln_ratio(n, m));
        prop_assert!((ln_ratio(m, n) - ((m as f64).ln() - (n as f64).ln())).abs() < 1e-12);
    }

    #[test]
    fn built_measures_are_sign_symmetric(
        a in 1u64..6, b in 1u64..6, n in 1u64..120,
        euler in any::<bool>(), kind in scaling_strategy(),
    ) {
        let w = if euler { WeightMode::Euler } else { WeightMode::Trivial };
        let f = WeightedLogFamily::new(a, b, w).unwrap();
        let spec = ScalingSpec::for_weights(w, kind).unwrap();
        match build_pair_correlation(&f, n, &spec, Some(sieve())) {
            Ok(m) => {
                prop_assert!(m.check_sg_symmetry());
                let (neg, zero, pos) = m.signed_masses();
                prop_assert_eq!(neg, pos);
                prop_assert_eq!(zero, 0);
                prop_assert!(m.pushforward_double().check_sg_symmetry());
            }
            Err(e) => prop_assert!(kind_needs_bigger_n(&spec, n), "{e}"),
        }
    }

    #[test]
    fn symmetric_histograms_mirror_exactly(
        n in 2u64..150, half in 1usize..40, hi in 0.5f64..10.0, kind in scaling_strategy(),
    ) {
        let f = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
        let spec = ScalingSpec::with_default_normalizer(kind).unwrap();
        prop_assume!(spec.psi(n).is_ok());
        let m = build_pair_correlation(&f, n, &spec, None).unwrap();
        let h = m.bin(-hi, hi, 2 * half, 1.0).unwrap();
        for i in 0..h.bins {
            prop_assert_eq!(h.counts[i], h.counts[h.bins - 1 - i]);
            let (l, r) = h.edges(i);
            let (ml, mr) = h.edges(h.bins - 1 - i);
            prop_assert_eq!((l, r), (-mr, -ml));
        }
        prop_assert_eq!(h.underflow, h.overflow);
    }

    #[test]
    fn cdf_is_monotone_and_bounded(n in 2u64..200, a in 1u64..4, b in 1u64..4, pts in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let f = WeightedLogFamily::new(a, b, WeightMode::Euler).unwrap();
        prop_assume!(f.count(n) >= 2);
        let m = build_pair_correlation(&f, n, &ScalingSpec::trivial(), Some(sieve())).unwrap();
        let mut sorted = pts.clone();
        sorted.sort_by(f64::total_cmp);
        let vals = m.cdf_many(&sorted).unwrap();
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn congruence_functions_are_multiplicative(
        d in 1u64..60, b in 1u64..60, a in 1u64..60, k in 0u64..60,
        d1 in 1u64..1000, d2 in 1u64..1000,
    ) {
        prop_assume!(gcd(d1, d2) == 1);
        prop_assert_eq!(psi_d(d, b, d1 * d2), psi_d(d, b, d1) * psi_d(d, b, d2));
        prop_assert_eq!(chi_d(d, k, d1 * d2), chi_d(d, k, d1) * chi_d(d, k, d2));
        prop_assert_eq!(chi_star_d(d, b, a, k, d1 * d2), chi_star_d(d, b, a, k, d1) * chi_star_d(d, b, a, k, d2));
    }

    #[test]
    fn bi_congruence_counts(y in 0.0f64..400.0, a0 in -20i64..20, al in 1u64..15, b0 in -20i64..20, be in 1u64..15) {
        let want = (1..=y.floor() as i64)
            .filter(|n| (n - a0).rem_euclid(al as i64) == 0 && (n - b0).rem_euclid(be as i64) == 0)
            .count() as u64;
        prop_assert_eq!(count_bi_congruence(y, a0, al, b0, be).unwrap(), want);
    }

    #[test]
    fn lambda_is_at_least_a_quarter(a in 1u64..1000, b in 1u64..1000, k in 0u64..1000) {
        let l = lambda_abk(a, b, k).unwrap();
        prop_assert!(*l.numer() * 4 >= *l.denom());
        prop_assert!(*l.numer() <= *l.denom());
    }

    #[test]
    fn euler_product_bracketed_by_lower_bound(a in 1u64..8, b in 1u64..8, k in 0u64..30) {
        let c = c_abk_product(sieve(), a, b, k, 10_000).unwrap();
        let lo = c_abk_lower_bound(sieve(), a, b, k, 10_000).unwrap();
        prop_assert!(c.value > 0.0 && c.tail_bound >= 0.0);
        prop_assert!(lo <= c.value + c.tail_bound);
    }

    #[test]
    fn limit_densities_are_even(t in -50.0f64..50.0, b in 1u64..5, lambda in 0.2f64..3.0) {
        let ds = [
            LimitDensity::UnscaledTrivial,
            LimitDensity::UnscaledEuler,
            LimitDensity::SublinearTrivial { b },
            LimitDensity::linear_trivial(b, lambda).unwrap(),
            LimitDensity::SuperlinearZero,
        ];
        for d in &ds {
            prop_assert_eq!(d.eval(t), d.eval(-t));
            prop_assert!(d.eval(t) >= 0.0);
        }
        prop_assert_eq!(g_linear_trivial(t, b, lambda) == 0.0, t.abs() < b as f64 * lambda);
    }

    #[test]
    fn closed_form_integrals_match_simpson(c in -6.0f64..6.0, w in 0.05f64..3.0, smooth in any::<bool>()) {
        let f = if smooth { TestFunction::smooth_bump(c, w) } else { TestFunction::hat(c, w) }.unwrap();
        let ds = [
            LimitDensity::UnscaledTrivial,
            LimitDensity::UnscaledEuler,
            LimitDensity::SublinearTrivial { b: 3 },
        ];
        for d in &ds {
            let closed = d.integrate(&f);
            let numeric = d.integrate_numeric(&f, 1e-12);
            prop_assert!((closed - numeric).abs() < 1e-8, "{} {closed} {numeric}", d.tag());
        }
        prop_assert!((f.integral() - adaptive_simpson(|t| f.eval(t), c - w, c + w, 1e-12)).abs() < 1e-9);
    }

    #[test]
    fn compensated_sum_is_order_insensitive(xs in prop::collection::vec(-1e6f64..1e6, 1..300), seed in any::<u64>()) {
        let forward = compensated_sum(xs.iter().copied());
        let mut shuffled = xs.clone();
        let len = shuffled.len();
        let mut state = seed | 1;
        for i in (1..len).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let back = compensated_sum(shuffled);
        let scale: f64 = xs.iter().map(|x| x.abs()).sum();
        prop_assert!((forward - back).abs() <= 1e-15 * scale.max(1.0));
    }

    #[test]
    fn family_counts_match_filter(a in 1u64..30, b in 1u64..30, n in 0u64..500) {
        let f = WeightedLogFamily::new(a, b, WeightMode::Trivial).unwrap();
        let want: Vec<u64> = (1..=n).filter(|m| m % b == a % b).collect();
        prop_assert_eq!(f.count(n), want.len() as u64);
        prop_assert_eq!(f.residues(n).collect::<Vec<_>>(), want);
    }
}

fn kind_needs_bigger_n(spec: &ScalingSpec, n: u64) -> bool {
    spec.psi(n).is_err() || n < 3
}

#[test]
fn totient_sum_identity() {
    let s = sieve();
    let mut acc = vec![0u64; 20_001];
    for d in 1..=20_000u64 {
        for m in (d..=20_000).step_by(d as usize) {
            acc[m as usize] += s.phi(d);
        }
    }
    assert!((1..=20_000).all(|n| acc[n] == n as u64));
}
