//! Closed-form limit densities, the finite-N densities θ_N and limit CDFs.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::arith::{c_abk_product_with_primes, Sieve};
use crate::error::{invalid, Result};
use crate::measures::{integrate_poly_kernel, Kernel, KernelPiece, LocalPoly, TestFunction};
use crate::numeric::{adaptive_simpson, CompensatedSum};

/// ½ e^{−|s|}.
pub fn g_unscaled_trivial(s: f64) -> f64 {
    0.5 * (-s.abs()).exp()
}

/// 1/(2b²).
pub fn g_sublinear_trivial(b: u64) -> f64 {
    let b = b as f64;
    0.5 / (b * b)
}

/// θ_∞(t) = ⌊|t|/(bλ)⌋(⌊|t|/(bλ)⌋ + 1)/(2t²).
pub fn g_linear_trivial(t: f64, b: u64, lambda: f64) -> f64 {
    let k = (t.abs() / (b as f64 * lambda)).floor();
    if k < 1.0 {
        return 0.0;
    }
    k * (k + 1.0) / (2.0 * t * t)
}

/// θ_N(t) = K(K+1)/(2t²) with K = ⌊|t| N/(b(ψ(N) + |t|))⌋.
pub fn theta_n(t: f64, n: u64, b: u64, psi_n: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 0.0;
    }
    let k = (t * n as f64 / (b as f64 * (psi_n + t))).floor();
    if k < 1.0 {
        return 0.0;
    }
    k * (k + 1.0) / (2.0 * t * t)
}

/// e^{−2|s|}.
pub fn g_unscaled_euler(s: f64) -> f64 {
    (-2.0 * s.abs()).exp()
}

/// D(s): ½eˢ for s <= 0, 1 − ½e^{−s} for s >= 0.
pub fn limit_cdf_trivial(s: f64) -> f64 {
    if s <= 0.0 {
        0.5 * s.exp()
    } else {
        1.0 - 0.5 * (-s).exp()
    }
}

/// D̃(s): ½e^{2s} for s <= 0, 1 − ½e^{−2s} for s >= 0.
pub fn limit_cdf_euler(s: f64) -> f64 {
    if s <= 0.0 {
        0.5 * (2.0 * s).exp()
    } else {
        1.0 - 0.5 * (-2.0 * s).exp()
    }
}

/// Source of the constants c_{a,b,k}.
pub trait ConstantsProvider {
    fn c_abk(&self, a: u64, b: u64, k: u64) -> Result<f64>;
}

/// Memoised Euler-product constants at a fixed prime cutoff.
#[derive(Debug)]
pub struct ConstantCache {
    primes: Vec<u32>,
    prime_cutoff: u64,
    cache: Mutex<HashMap<(u64, u64, u64), f64>>,
}

impl ConstantCache {
    pub fn new(sieve: &Sieve, prime_cutoff: u64) -> Result<Self> {
        if prime_cutoff < 2 || prime_cutoff > sieve.limit() {
            return invalid("prime cutoff must lie in [2, sieve limit]");
        }
        Ok(ConstantCache {
            primes: sieve.primes_up_to(prime_cutoff).to_vec(),
            prime_cutoff,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn prime_cutoff(&self) -> u64 {
        self.prime_cutoff
    }
}

impl ConstantsProvider for ConstantCache {
    fn c_abk(&self, a: u64, b: u64, k: u64) -> Result<f64> {
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&(a, b, k)) {
            return Ok(*v);
        }
        let v = c_abk_product_with_primes(&self.primes, a, b, k, self.prime_cutoff)?.value;
        self.cache.lock().expect("cache poisoned").insert((a, b, k), v);
        Ok(v)
    }
}

/// S_K = Σ_{1<=k<=K, b|k} c_{a,b,k} k³ for K = 0..=k_max.
fn linear_euler_numerators(
    a: u64,
    b: u64,
    k_max: u64,
    provider: &dyn ConstantsProvider,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(k_max as usize + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for k in 1..=k_max {
        if k % b == 0 {
            let kf = k as f64;
            acc.add(provider.c_abk(a, b, k)? * kf * kf * kf);
        }
        out.push(acc.total());
    }
    Ok(out)
}

/// (1/s⁴) Σ_{1<=k<=|s|, b|k} c_{a,b,k} k³.
pub fn g_linear_euler(s: f64, a: u64, b: u64, provider: &dyn ConstantsProvider) -> Result<f64> {
    if a == 0 || b == 0 {
        return invalid("a and b must be positive");
    }
    let k_max = s.abs().floor();
    if !k_max.is_finite() {
        return invalid("s must be finite");
    }
    let k_max = k_max as u64;
    if k_max < b {
        return Ok(0.0);
    }
    let s_k = linear_euler_numerators(a, b, k_max, provider)?[k_max as usize];
    Ok(s_k / s.powi(4))
}

/// The limit density of a regime, evaluable and integrable in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum LimitDensity {
    UnscaledTrivial,
    SublinearTrivial { b: u64 },
    LinearTrivial { b: u64, lambda: f64 },
    SuperlinearZero,
    UnscaledEuler,
    LinearEuler {
        a: u64,
        b: u64,
        /// S_K for K = 0..=k_max.
        numerators: Vec<f64>,
    },
}

impl LimitDensity {
    pub fn linear_trivial(b: u64, lambda: f64) -> Result<Self> {
        if b == 0 || !(lambda > 0.0 && lambda.is_finite()) {
            return invalid("linear regime needs b >= 1 and a finite positive λ");
        }
        Ok(LimitDensity::LinearTrivial { b, lambda })
    }

    /// The Euler-weighted linear density, tabulated for |s| <= `s_max`.
    pub fn linear_euler(a: u64, b: u64, s_max: f64, provider: &dyn ConstantsProvider) -> Result<Self> {
        if a == 0 || b == 0 {
            return invalid("a and b must be positive");
        }
        if !(s_max >= 0.0 && s_max.is_finite()) {
            return invalid("s_max must be finite and nonnegative");
        }
        let numerators = linear_euler_numerators(a, b, s_max.floor() as u64 + 1, provider)?;
        Ok(LimitDensity::LinearEuler { a, b, numerators })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LimitDensity::UnscaledTrivial => "unscaled_trivial",
            LimitDensity::SublinearTrivial { .. } => "sublinear_trivial",
            LimitDensity::LinearTrivial { .. } => "linear_trivial",
            LimitDensity::SuperlinearZero => "superlinear_zero",
            LimitDensity::UnscaledEuler => "unscaled_euler",
            LimitDensity::LinearEuler { .. } => "linear_euler",
        }
    }

    /// g(t); NaN for the tabulated Euler density outside its range.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            LimitDensity::UnscaledTrivial => g_unscaled_trivial(t),
            LimitDensity::SublinearTrivial { b } => g_sublinear_trivial(*b),
            LimitDensity::LinearTrivial { b, lambda } => g_linear_trivial(t, *b, *lambda),
            LimitDensity::SuperlinearZero => 0.0,
            LimitDensity::UnscaledEuler => g_unscaled_euler(t),
            LimitDensity::LinearEuler { numerators, .. } => {
                let k = t.abs().floor();
                match numerators.get(k as usize) {
                    Some(&s_k) if s_k == 0.0 => 0.0,
                    Some(&s_k) => s_k / t.powi(4),
                    None => f64::NAN,
                }
            }
        }
    }

    /// Limit CDF where the density is a probability density.
    pub fn cdf(&self, s: f64) -> Option<f64> {
        match self {
            LimitDensity::UnscaledTrivial => Some(limit_cdf_trivial(s)),
            LimitDensity::UnscaledEuler => Some(limit_cdf_euler(s)),
            _ => None,
        }
    }

    /// Closed-form pieces of g covering `[lo, hi]`.
    pub fn kernel_pieces(&self, lo: f64, hi: f64) -> Vec<KernelPiece> {
        let mut out = Vec::new();
        if !(lo < hi) {
            return out;
        }
        let mut push = |l: f64, h: f64, kernel: Kernel| {
            let (l, h) = (l.max(lo), h.min(hi));
            if h > l {
                out.push(KernelPiece { lo: l, hi: h, kernel });
            }
        };
        match self {
            LimitDensity::UnscaledTrivial | LimitDensity::UnscaledEuler => {
                let (c, r) = if matches!(self, LimitDensity::UnscaledTrivial) {
                    (0.5, 1.0)
                } else {
                    (1.0, 2.0)
                };
                push(f64::NEG_INFINITY, 0.0, Kernel::Exp { coeff: c, rate: r });
                push(0.0, f64::INFINITY, Kernel::Exp { coeff: c, rate: -r });
            }
            LimitDensity::SublinearTrivial { b } => {
                push(lo, hi, Kernel::Constant(g_sublinear_trivial(*b)));
            }
            LimitDensity::SuperlinearZero => {}
            LimitDensity::LinearTrivial { b, lambda } => {
                let step = *b as f64 * lambda;
                let top = (lo.abs().max(hi.abs()) / step).floor() as u64;
                for k in 1..=top {
                    let coeff = (k * (k + 1)) as f64 / 2.0;
                    let (l, h) = (k as f64 * step, (k + 1) as f64 * step);
                    push(l, h, Kernel::Power { coeff, exponent: -2 });
                    push(-h, -l, Kernel::Power { coeff, exponent: -2 });
                }
            }
            LimitDensity::LinearEuler { numerators, .. } => {
                let top = (lo.abs().max(hi.abs()).floor() as usize).min(numerators.len() - 1);
                for (k, &coeff) in numerators.iter().enumerate().take(top + 1).skip(1) {
                    if coeff == 0.0 {
                        continue;
                    }
                    let (l, h) = (k as f64, (k + 1) as f64);
                    push(l, h, Kernel::Power { coeff, exponent: -4 });
                    push(-h, -l, Kernel::Power { coeff, exponent: -4 });
                }
            }
        }
        out.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        out
    }

    /// ∫ f·g in closed form.
    pub fn integrate(&self, f: &TestFunction) -> f64 {
        let (lo, hi) = f.support();
        f.integrate_piecewise(&self.kernel_pieces(lo, hi))
    }

    /// ∫ f·g by adaptive Simpson quadrature between breakpoints.
    pub fn integrate_numeric(&self, f: &TestFunction, tol: f64) -> f64 {
        let (lo, hi) = f.support();
        let mut cuts: Vec<f64> = vec![lo, hi, 0.5 * (lo + hi)];
        for p in self.kernel_pieces(lo, hi) {
            cuts.push(p.lo);
            cuts.push(p.hi);
        }
        if lo < 0.0 && hi > 0.0 {
            cuts.push(0.0);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut acc = CompensatedSum::new();
        for w in cuts.windows(2) {
            // Evaluate at interior points only, so breakpoint conventions do not matter.
            let (a, b) = (w[0], w[1]);
            let g = |t: f64| {
                let t = t.clamp(a + (b - a) * 1e-12, b - (b - a) * 1e-12);
                f.eval(t) * self.eval(t)
            };
            acc.add(adaptive_simpson(g, a, b, tol));
        }
        acc.total()
    }

    /// (1/(hi − lo)) ∫_lo^hi g.
    pub fn bin_average(&self, lo: f64, hi: f64) -> f64 {
        let one = LocalPoly {
            origin: 0.0,
            coeffs: vec![1.0],
        };
        let total: f64 = self
            .kernel_pieces(lo, hi)
            .iter()
            .map(|p| integrate_poly_kernel(&one, &p.kernel, p.lo, p.hi))
            .sum();
        total / (hi - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed;

    impl ConstantsProvider for Fixed {
        fn c_abk(&self, _: u64, _: u64, k: u64) -> Result<f64> {
            Ok(1.0 / k as f64)
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(g_unscaled_trivial(0.0), 0.5);
        assert_eq!(g_sublinear_trivial(2), 0.125);
        assert_eq!(g_linear_trivial(0.5, 1, 1.0), 0.0);
        assert!((g_linear_trivial(1.5, 1, 1.0) - 2.0 / 4.5).abs() < 1e-15);
        assert!((theta_n(1.5, 1_000_000, 1, 1e6) - 2.0 / 4.5).abs() < 1e-5);
        assert_eq!(g_unscaled_euler(0.0), 1.0);
        assert!((limit_cdf_trivial(1.0) - 0.816_060_279_414_278_6).abs() < 1e-15);
        assert_eq!(limit_cdf_euler(0.0), 0.5);
    }

    #[test]
    fn theta_vanishing_window() {
        let (n, b, psi) = (1000u64, 2u64, 1000.0);
        let edge = b as f64 * psi / (n - b) as f64;
        assert_eq!(theta_n(edge * 0.999, n, b, psi), 0.0);
        assert!(theta_n(edge * 1.001, n, b, psi) > 0.0);
    }

    #[test]
    fn closed_form_integrals_match_quadrature() {
        let densities = [
            LimitDensity::UnscaledTrivial,
            LimitDensity::UnscaledEuler,
            LimitDensity::SublinearTrivial { b: 3 },
            LimitDensity::linear_trivial(1, 1.0).unwrap(),
            LimitDensity::linear_trivial(2, 0.7).unwrap(),
            LimitDensity::linear_euler(1, 1, 10.0, &Fixed).unwrap(),
        ];
        let fs = [
            TestFunction::hat(0.0, 1.0).unwrap(),
            TestFunction::hat(1.5, 0.25).unwrap(),
            TestFunction::smooth_bump(-2.2, 1.3).unwrap(),
            TestFunction::hat(3.0, 2.5).unwrap(),
        ];
        for d in &densities {
            for f in &fs {
                let a = d.integrate(f);
                let b = d.integrate_numeric(f, 1e-12);
                assert!((a - b).abs() < 1e-9, "{} {f:?}: {a} vs {b}", d.tag());
            }
        }
        let hat = TestFunction::hat(0.0, 1.0).unwrap();
        assert!((LimitDensity::UnscaledTrivial.integrate(&hat) - (-1f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn linear_euler_sum() {
        assert_eq!(g_linear_euler(0.9, 1, 1, &Fixed).unwrap(), 0.0);
        assert_eq!(g_linear_euler(3.5, 1, 4, &Fixed).unwrap(), 0.0);
        let v = g_linear_euler(2.5, 1, 1, &Fixed).unwrap();
        assert!((v - (1.0 + 4.0) / 2.5f64.powi(4)).abs() < 1e-15);
        let d = LimitDensity::linear_euler(1, 1, 5.0, &Fixed).unwrap();
        assert_eq!(d.eval(-2.5), v);
        assert!(d.eval(100.0).is_nan());
    }
}
