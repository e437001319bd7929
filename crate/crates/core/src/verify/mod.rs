//! Convergence and error-term verification against the limit theorems.

pub mod acceptance;

use serde::Serialize;

use crate::arith::{c_ab, c_abk_product, mertens_congruence_sum, mirsky_sum, Sieve};
use crate::error::{invalid, Error, Result};
use crate::family::{
    classify_regime, IndexSet, IndexVariant, Normalizer, Regime, ScalingKind, ScalingSpec,
    WeightMode, WeightedLogFamily,
};
use crate::limits::LimitDensity;
use crate::measures::{build_pair_correlation, Atom, AtomicMeasure, PositionRule, TestFunction};
use crate::numeric::{loglog_slope, CompensatedSum};

/// Quantity compared between empirical and limit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    CdfSupError,
    PairingError,
    HistogramL1Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub regime: String,
    pub horizons: Vec<u64>,
    pub observable: Observable,
    /// Largest error over the test functions, per horizon.
    pub errors: Vec<f64>,
    /// Error per horizon (outer) and test function (inner).
    pub pairing_errors: Vec<Vec<f64>>,
    /// Log-log slope of the errors against N.
    pub fitted_rate: Option<f64>,
    /// sup of error / theoretical envelope.
    pub fitted_constant: f64,
    /// Name of the largest envelope term, per horizon.
    pub dominant_terms: Vec<&'static str>,
}

/// sup |residual| / envelope over a grid.
pub fn fit_error_constant(residuals: &[f64], envelope: &[f64]) -> Result<f64> {
    if residuals.len() != envelope.len() {
        return invalid("residuals and envelope differ in length");
    }
    let mut sup = 0.0f64;
    for (r, e) in residuals.iter().zip(envelope) {
        if !(*e > 0.0) {
            return invalid("envelope must be positive on the grid");
        }
        sup = sup.max(r.abs() / e);
    }
    Ok(sup)
}

fn check_regime(regime: &LimitDensity, family: &WeightedLogFamily, scaling: &ScalingSpec, horizon: u64) -> Result<()> {
    let est = classify_regime(scaling, horizon)?.regime;
    let euler = family.weights() == WeightMode::Euler;
    let trivial_scaling = scaling.kind == ScalingKind::Trivial;
    let ok = match regime {
        LimitDensity::UnscaledTrivial => !euler && trivial_scaling,
        LimitDensity::UnscaledEuler => euler && trivial_scaling,
        LimitDensity::SublinearTrivial { b } => {
            !euler
                && !trivial_scaling
                && est == Regime::Zero
                && *b == family.b()
                && scaling.normalizer == Normalizer::QuadraticOverPsi
        }
        LimitDensity::LinearTrivial { b, lambda } => {
            !euler
                && *b == family.b()
                && est == Regime::Finite(*lambda)
                && scaling.normalizer == Normalizer::Psi
        }
        LimitDensity::SuperlinearZero => est == Regime::Infinite,
        LimitDensity::LinearEuler { a, b, .. } => {
            euler
                && (*a, *b) == (family.a(), family.b())
                && scaling.kind == ScalingKind::Linear
                && scaling.normalizer == Normalizer::Cubic
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "limit regime {} does not match the family and scaling",
            regime.tag()
        )))
    }
}

/// Envelope terms of the error bound for one test function at horizon `n`.
fn envelope_terms(regime: &LimitDensity, f: &TestFunction, n: u64, psi: f64, psi_prime: f64) -> Vec<(&'static str, f64)> {
    let nf = n as f64;
    let (lo, hi) = f.support();
    let a = lo.abs().max(hi.abs()).max(1.0);
    let (sup, var, der) = (f.sup_norm(), f.variation(), f.derivative_sup());
    match regime {
        LimitDensity::UnscaledTrivial => vec![("bv_over_n", (sup + var) / nf)],
        LimitDensity::UnscaledEuler => vec![("log_over_n", nf.ln() / nf)],
        LimitDensity::LinearEuler { .. } => vec![("log2_over_n", nf.ln().powi(2) / nf)],
        LimitDensity::SublinearTrivial { .. } => vec![
            ("psi_log_a_over_n", sup * psi * a.ln().max(f64::MIN_POSITIVE) / nf),
            ("a2_over_psi", sup * a * a / psi),
            ("ratio_log_ratio", -sup * (psi / nf) * (psi / nf).ln()),
            ("derivative_a3_over_psi", der * a.powi(3) / psi),
        ],
        LimitDensity::LinearTrivial { lambda, .. } => vec![
            ("scaling_defect", sup * a * ((lambda - psi / nf).abs() + a / nf)),
            ("derivative_a3_over_n", der * a.powi(3) / nf),
        ],
        LimitDensity::SuperlinearZero => {
            vec![("mass_escape", (sup + der) * a.powi(3) * nf / (psi * psi_prime))]
        }
    }
}

/// Pairs empirical measures with test functions at each horizon and compares
/// with the limit-side integrals.
pub fn run_convergence(
    regime: &LimitDensity,
    family: &WeightedLogFamily,
    scaling: &ScalingSpec,
    horizons: &[u64],
    test_functions: &[TestFunction],
    sieve: Option<&Sieve>,
) -> Result<ConvergenceReport> {
    if horizons.is_empty() || horizons.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("horizons must be nonempty and strictly increasing");
    }
    if test_functions.is_empty() {
        return invalid("at least one test function is required");
    }
    check_regime(regime, family, scaling, horizons[horizons.len() - 1])?;
    let targets: Vec<f64> = test_functions.iter().map(|f| regime.integrate(f)).collect();
    let mut errors = Vec::new();
    let mut table = Vec::new();
    let mut ratios = Vec::new();
    let mut dominant = Vec::new();
    for &n in horizons {
        let measure = build_pair_correlation(family, n, scaling, sieve)?;
        let norm = scaling.normalizer_value(n, measure.total_mass() as f64)?;
        let psi = scaling.psi(n)?;
        let mut row = Vec::new();
        let mut top: (&'static str, f64) = ("", 0.0);
        for (f, target) in test_functions.iter().zip(&targets) {
            let err = (measure.pair(f, norm)? - target).abs();
            let terms = envelope_terms(regime, f, n, psi, norm);
            let env: f64 = terms.iter().map(|t| t.1).sum();
            for t in &terms {
                if t.1 > top.1 {
                    top = *t;
                }
            }
            ratios.push((err, env));
            row.push(err);
        }
        dominant.push(top.0);
        errors.push(row.iter().cloned().fold(0.0, f64::max));
        table.push(row);
    }
    let pts: Vec<(f64, f64)> = horizons.iter().map(|&n| n as f64).zip(errors.iter().copied()).collect();
    let (res, env): (Vec<f64>, Vec<f64>) = ratios.into_iter().unzip();
    Ok(ConvergenceReport {
        regime: regime.tag().to_string(),
        horizons: horizons.to_vec(),
        observable: Observable::PairingError,
        errors,
        pairing_errors: table,
        fitted_rate: loglog_slope(&pts),
        fitted_constant: fit_error_constant(&res, &env)?,
        dominant_terms: dominant,
    })
}

/// sup over `points` of |D_N(s) − D(s)| for each horizon.
pub fn cdf_sup_errors(
    family: &WeightedLogFamily,
    horizons: &[u64],
    points: &[f64],
    sieve: Option<&Sieve>,
) -> Result<Vec<f64>> {
    let limit = match family.weights() {
        WeightMode::Trivial => LimitDensity::UnscaledTrivial,
        WeightMode::Euler => LimitDensity::UnscaledEuler,
    };
    horizons
        .iter()
        .map(|&n| {
            let m = build_pair_correlation(family, n, &ScalingSpec::trivial(), sieve)?;
            let emp = m.cdf_many(points)?;
            Ok(points
                .iter()
                .zip(emp)
                .map(|(&s, e)| (e - limit.cdf(s).expect("probability density")).abs())
                .fold(0.0, f64::max))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassEntry {
    pub horizon: u64,
    /// Exact mass of the pairs with m < n.
    pub lower_mass: u128,
    pub main_term: f64,
    /// lower_mass / main_term − 1.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassReport {
    pub a: u64,
    pub b: u64,
    pub weights: WeightMode,
    pub entries: Vec<MassEntry>,
}

/// Exact lower-half masses against N²/(2b²) (trivial) or 9c²N⁴/(2π⁴) (Euler).
pub fn mass_asymptotics(family: &WeightedLogFamily, horizons: &[u64], sieve: Option<&Sieve>) -> Result<MassReport> {
    let c = c_ab(family.a(), family.b(), 2)?.value;
    let entries = horizons
        .iter()
        .map(|&n| {
            let mut lower = 0u128;
            let mut prefix = 0u128;
            for r in family.residues(n) {
                let w = family.weight(sieve, r)? as u128;
                lower += w * prefix;
                prefix += w;
            }
            let nf = n as f64;
            let bf = family.b() as f64;
            let main = match family.weights() {
                WeightMode::Trivial => nf * nf / (2.0 * bf * bf),
                WeightMode::Euler => {
                    9.0 * c * c * nf.powi(4) / (2.0 * std::f64::consts::PI.powi(4))
                }
            };
            Ok(MassEntry {
                horizon: n,
                lower_mass: lower,
                main_term: main,
                relative_error: lower as f64 / main - 1.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MassReport {
        a: family.a(),
        b: family.b(),
        weights: family.weights(),
        entries,
    })
}

/// First q >= `target` with q ≡ a (mod b).
pub fn next_in_class(target: u64, a: u64, b: u64) -> u64 {
    let r = a % b;
    target + (r + b - target % b) % b
}

/// sup over q of |‖ω̃_q‖ π²/(3 c_{a,b} q²) − 1| · q / ln q, with ‖ω̃_q‖ = Σ_{p<q, p≡a} φ(p).
pub fn progression_mass_error_constant(sieve: &Sieve, a: u64, b: u64, q_targets: &[u64]) -> Result<f64> {
    let c = c_ab(a, b, 2)?.value;
    let mut res = Vec::new();
    let mut env = Vec::new();
    for &t in q_targets {
        let q = next_in_class(t, a, b);
        let mass = mertens_congruence_sum(sieve, (q - 1) as f64, a, b)? as f64;
        let qf = q as f64;
        let ratio = mass * std::f64::consts::PI.powi(2) / (3.0 * c * qf * qf);
        res.push(ratio - 1.0);
        env.push(qf.ln() / qf);
    }
    fit_error_constant(&res, &env)
}

/// Σ_{p∈J_q} φ(p)(p/q) / Σ_{p∈J_q} φ(p), which tends to 2/3.
pub fn normalized_first_moment(sieve: &Sieve, a: u64, b: u64, q: u64) -> Result<f64> {
    let set = IndexSet::new(q, a, b, IndexVariant::Jq(q))?;
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (p, _) in set.iter() {
        let w = sieve.phi(p) as f64;
        num.add(w * p as f64 / q as f64);
        den.add(w);
    }
    if den.total() == 0.0 {
        return Err(Error::EmptyMeasure);
    }
    Ok(num.total() / den.total())
}

/// ‖ω̃_{p,N}‖ · 3 / (c_{a,b,p} (N − p)³) for each horizon.
pub fn fixed_p_mass_ratios(sieve: &Sieve, a: u64, b: u64, p: u64, horizons: &[u64], prime_cutoff: u64) -> Result<Vec<f64>> {
    if p == 0 || p % b != 0 {
        return invalid("p must be a positive multiple of b");
    }
    let c = c_abk_product(sieve, a, b, p, prime_cutoff)?.value;
    horizons
        .iter()
        .map(|&n| {
            if n <= p {
                return invalid("horizon must exceed p");
            }
            let mass = mirsky_sum(sieve, (n - p) as f64, a, b, p)? as f64;
            let x = (n - p) as f64;
            Ok(3.0 * mass / (c * x * x * x))
        })
        .collect()
}

/// The measure μ_N⁺ = Σ_{(m,n)∈I_N⁺} Δ_{ψ(N)(m−n)/n}.
pub fn mu_plus(family: &WeightedLogFamily, n: u64, psi: f64) -> Result<AtomicMeasure> {
    let set = IndexSet::new(n, family.a(), family.b(), IndexVariant::Upper)?;
    let atoms = set.iter().map(|(m, n)| Atom { m, n, mass: 1 }).collect();
    Ok(AtomicMeasure::from_atoms(atoms, PositionRule::RelativeGap { scale: psi }, n))
}

/// |R_N(f) − μ_N⁺(f)| / ψ(N) for linear scaling and a test function on (0, ∞).
pub fn smoothed_count_discrepancy(family: &WeightedLogFamily, n: u64, f: &TestFunction) -> Result<f64> {
    if f.support().0 < 0.0 {
        return invalid("test function must be supported in [0, ∞)");
    }
    let spec = ScalingSpec::linear();
    let psi = spec.psi(n)?;
    let r = build_pair_correlation(family, n, &spec, None)?.pair(f, psi)?;
    let m = mu_plus(family, n, psi)?.pair(f, psi)?;
    Ok((r - m).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitted_constant_edge_cases() {
        assert_eq!(fit_error_constant(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(fit_error_constant(&[1.0, -3.0], &[1.0, 2.0]).unwrap(), 1.5);
        assert!(fit_error_constant(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn class_rounding() {
        assert_eq!(next_in_class(100, 1, 1), 100);
        assert_eq!(next_in_class(100, 3, 4), 103);
        assert_eq!(next_in_class(100, 4, 4), 100);
    }

    #[test]
    fn mass_small_horizons() {
        let f = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
        let r = mass_asymptotics(&f, &[1, 10], None).unwrap();
        assert_eq!(r.entries[0].lower_mass, 0);
        assert_eq!(r.entries[1].lower_mass, 45);
    }

    #[test]
    fn mismatched_regime_is_a_config_error() {
        let f = WeightedLogFamily::new(1, 1, WeightMode::Trivial).unwrap();
        let hat = TestFunction::hat(0.0, 1.0).unwrap();
        let r = run_convergence(&LimitDensity::UnscaledEuler, &f, &ScalingSpec::trivial(), &[10], &[hat], None);
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
