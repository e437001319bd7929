//! Empirical pair correlation measures stored as exact integer events.

mod histogram;
mod test_function;

use serde::Serialize;

pub use histogram::Histogram;
pub use test_function::{integrate_poly_kernel, Kernel, KernelPiece, LocalPoly, PolyPiece, TestFunction};

use crate::arith::Sieve;
use crate::error::{invalid, Error, Result};
use crate::family::{ScalingSpec, WeightedLogFamily};
use crate::numeric::CompensatedSum;

/// Default maximal number of atoms a measure may hold.
pub const DEFAULT_ATOM_BUDGET: u128 = 100_000_000;

/// ln(m/n) computed so that `ln_ratio(n, m) == -ln_ratio(m, n)` exactly.
pub fn ln_ratio(m: u64, n: u64) -> f64 {
    use std::cmp::Ordering::*;
    match m.cmp(&n) {
        Greater => ((m - n) as f64 / n as f64).ln_1p(),
        Less => -ln_ratio(n, m),
        Equal => 0.0,
    }
}

/// Map from an event (m, n) to a real position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum PositionRule {
    /// scale · ln(m/n)
    LogDiffScaled { scale: f64 },
    /// scale · 2 ln(m/n)
    DoubledLog { scale: f64 },
    /// factor · m/n
    Ratio { factor: f64 },
    /// scale · (m − n)/n
    RelativeGap { scale: f64 },
}

impl PositionRule {
    #[inline]
    pub fn position(&self, m: u64, n: u64) -> f64 {
        match *self {
            PositionRule::LogDiffScaled { scale } => scale * ln_ratio(m, n),
            PositionRule::DoubledLog { scale } => scale * (2.0 * ln_ratio(m, n)),
            PositionRule::Ratio { factor } => factor * (m as f64 / n as f64),
            PositionRule::RelativeGap { scale } => {
                scale * ((m as f64 - n as f64) / n as f64)
            }
        }
    }

    /// The rule composed with t ↦ 2t.
    pub fn doubled(&self) -> PositionRule {
        match *self {
            PositionRule::LogDiffScaled { scale } => PositionRule::DoubledLog { scale },
            PositionRule::DoubledLog { scale } => PositionRule::DoubledLog { scale: 2.0 * scale },
            PositionRule::Ratio { factor } => PositionRule::Ratio { factor: 2.0 * factor },
            PositionRule::RelativeGap { scale } => PositionRule::RelativeGap { scale: 2.0 * scale },
        }
    }

    /// Whether swapping (m, n) negates the position.
    pub fn is_antisymmetric(&self) -> bool {
        matches!(
            self,
            PositionRule::LogDiffScaled { .. } | PositionRule::DoubledLog { .. }
        )
    }
}

/// A Dirac mass at the position of the event (m, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Atom {
    pub m: u64,
    pub n: u64,
    pub mass: u64,
}

#[derive(Debug, Clone)]
enum Source {
    /// All ordered pairs of distinct elements, mass = product of weights.
    Pairs { elements: Vec<u64>, weights: Vec<u64> },
    Explicit(Vec<Atom>),
}

/// A finite sum of weighted Dirac masses at lazily computed positions.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    horizon: u64,
    rule: PositionRule,
    source: Source,
    total_mass: u128,
}

/// Iterator over the atoms of a measure in canonical order.
pub struct AtomIter<'a> {
    measure: &'a AtomicMeasure,
    outer: usize,
    inner: usize,
    second: bool,
}

impl Iterator for AtomIter<'_> {
    type Item = Atom;

    fn next(&mut self) -> Option<Atom> {
        match &self.measure.source {
            Source::Explicit(atoms) => {
                let a = atoms.get(self.inner).copied();
                self.inner += 1;
                a
            }
            Source::Pairs { elements, weights } => loop {
                if self.inner >= self.outer {
                    self.outer += 1;
                    self.inner = 0;
                    self.second = false;
                    if self.outer >= elements.len() {
                        return None;
                    }
                    continue;
                }
                let (i, j) = (self.inner, self.outer);
                let mass = weights[i] * weights[j];
                let atom = if self.second {
                    self.second = false;
                    self.inner += 1;
                    Atom { m: elements[j], n: elements[i], mass }
                } else {
                    self.second = true;
                    Atom { m: elements[i], n: elements[j], mass }
                };
                return Some(atom);
            },
        }
    }
}

impl AtomicMeasure {
    /// A measure with explicitly listed atoms.
    pub fn from_atoms(atoms: Vec<Atom>, rule: PositionRule, horizon: u64) -> Self {
        let total_mass = atoms.iter().map(|a| a.mass as u128).sum();
        AtomicMeasure {
            horizon,
            rule,
            source: Source::Explicit(atoms),
            total_mass,
        }
    }

    /// All ordered pairs of distinct `elements`, weighted by products of `weights`.
    pub fn from_pairs(
        elements: Vec<u64>,
        weights: Vec<u64>,
        rule: PositionRule,
        horizon: u64,
    ) -> Result<Self> {
        if elements.len() != weights.len() {
            return invalid("elements and weights differ in length");
        }
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        let squares: u128 = weights.iter().map(|&w| w as u128 * w as u128).sum();
        Ok(AtomicMeasure {
            horizon,
            rule,
            source: Source::Pairs { elements, weights },
            total_mass: total * total - squares,
        })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn rule(&self) -> PositionRule {
        self.rule
    }

    pub fn total_mass(&self) -> u128 {
        self.total_mass
    }

    pub fn atom_count(&self) -> u128 {
        match &self.source {
            Source::Explicit(a) => a.len() as u128,
            Source::Pairs { elements, .. } => {
                let m = elements.len() as u128;
                m * m.saturating_sub(1)
            }
        }
    }

    pub fn atoms(&self) -> AtomIter<'_> {
        AtomIter {
            measure: self,
            outer: 0,
            inner: 0,
            second: false,
        }
    }

    #[inline]
    pub fn position(&self, atom: &Atom) -> f64 {
        self.rule.position(atom.m, atom.n)
    }

    fn visit<F: FnMut(f64, u64)>(&self, mut f: F) {
        match &self.source {
            Source::Explicit(atoms) => {
                for a in atoms {
                    f(self.rule.position(a.m, a.n), a.mass);
                }
            }
            Source::Pairs { elements, weights } => {
                for j in 1..elements.len() {
                    let (n, wn) = (elements[j], weights[j]);
                    for i in 0..j {
                        let mass = weights[i] * wn;
                        f(self.rule.position(elements[i], n), mass);
                        f(self.rule.position(n, elements[i]), mass);
                    }
                }
            }
        }
    }

    fn require_mass(&self) -> Result<f64> {
        if self.total_mass == 0 {
            Err(Error::EmptyMeasure)
        } else {
            Ok(self.total_mass as f64)
        }
    }

    /// Mass of atoms with position `<= s`, divided by the total mass.
    pub fn cdf(&self, s: f64) -> Result<f64> {
        Ok(self.cdf_many(&[s])?[0])
    }

    /// The CDF at several points in a single pass.
    pub fn cdf_many(&self, points: &[f64]) -> Result<Vec<f64>> {
        let total = self.require_mass()?;
        let mut below = vec![0u128; points.len()];
        self.visit(|u, mass| {
            for (acc, &s) in below.iter_mut().zip(points) {
                if u <= s {
                    *acc += mass as u128;
                }
            }
        });
        Ok(below.into_iter().map(|c| c as f64 / total).collect())
    }

    /// Exact mass of atoms with position in `[lo, hi]`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> u128 {
        let mut acc = 0u128;
        self.visit(|u, mass| {
            if u >= lo && u <= hi {
                acc += mass as u128;
            }
        });
        acc
    }

    /// Exact mass of atoms with position in `(lo, hi)`.
    pub fn mass_in_open(&self, lo: f64, hi: f64) -> u128 {
        let mut acc = 0u128;
        self.visit(|u, mass| {
            if u > lo && u < hi {
                acc += mass as u128;
            }
        });
        acc
    }

    /// Exact masses of atoms at negative, zero and positive positions.
    pub fn signed_masses(&self) -> (u128, u128, u128) {
        let mut out = (0u128, 0u128, 0u128);
        self.visit(|u, mass| {
            let m = mass as u128;
            if u < 0.0 {
                out.0 += m;
            } else if u > 0.0 {
                out.2 += m;
            } else {
                out.1 += m;
            }
        });
        out
    }

    /// Smallest positive position, if any.
    pub fn min_positive_position(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        self.visit(|u, _| {
            if u > 0.0 && best.map_or(true, |b| u < b) {
                best = Some(u);
            }
        });
        best
    }

    /// Σ mass · f(position) / normalizer.
    pub fn pair(&self, f: &TestFunction, normalizer: f64) -> Result<f64> {
        let (lo, hi) = f.support();
        self.pair_with(|u| if u > lo && u < hi { f.eval(u) } else { 0.0 }, normalizer)
    }

    /// Σ mass · f(position) / normalizer for an arbitrary function.
    pub fn pair_with<F: Fn(f64) -> f64>(&self, f: F, normalizer: f64) -> Result<f64> {
        if !(normalizer > 0.0) {
            return invalid("normalizer must be positive");
        }
        let mut acc = CompensatedSum::new();
        self.visit(|u, mass| {
            let v = f(u);
            if v != 0.0 {
                acc.add(mass as f64 * v);
            }
        });
        Ok(acc.total() / normalizer)
    }

    /// Bins the measure on `[lo, hi)`.
    pub fn bin(&self, lo: f64, hi: f64, bins: usize, normalization: f64) -> Result<Histogram> {
        let mut h = Histogram::new(lo, hi, bins, normalization)?;
        self.visit(|u, mass| h.add(u, mass as u128));
        Ok(h)
    }

    /// The image of the measure under t ↦ 2t.
    pub fn pushforward_double(&self) -> AtomicMeasure {
        AtomicMeasure {
            rule: self.rule.doubled(),
            ..self.clone()
        }
    }

    /// Checks that the negative part is the mirror image of the positive part:
    /// equal multisets of (|position|, mass), compared bit for bit.
    pub fn check_sg_symmetry(&self) -> bool {
        let mut pos: Vec<(u64, u64)> = Vec::new();
        let mut neg: Vec<(u64, u64)> = Vec::new();
        self.visit(|u, mass| {
            if u > 0.0 {
                pos.push((u.to_bits(), mass));
            } else if u < 0.0 {
                neg.push(((-u).to_bits(), mass));
            }
        });
        pos.sort_unstable();
        neg.sort_unstable();
        pos == neg
    }
}

/// Builds the pair correlation measure of the family at horizon `n`.
pub fn build_pair_correlation(
    family: &WeightedLogFamily,
    n: u64,
    scaling: &ScalingSpec,
    sieve: Option<&Sieve>,
) -> Result<AtomicMeasure> {
    build_pair_correlation_with_budget(family, n, scaling, sieve, DEFAULT_ATOM_BUDGET)
}

/// As [`build_pair_correlation`] with an explicit atom budget.
pub fn build_pair_correlation_with_budget(
    family: &WeightedLogFamily,
    n: u64,
    scaling: &ScalingSpec,
    sieve: Option<&Sieve>,
    budget: u128,
) -> Result<AtomicMeasure> {
    if n == 0 {
        return invalid("horizon N must be positive");
    }
    let m = family.count(n) as u128;
    let atoms = m * m.saturating_sub(1);
    if atoms > budget {
        return Err(Error::Capacity {
            what: "pair correlation atoms",
            required: atoms,
            limit: budget,
        });
    }
    let psi = scaling.psi(n)?;
    let elements: Vec<u64> = family.residues(n).collect();
    let weights = elements
        .iter()
        .map(|&e| family.weight(sieve, e))
        .collect::<Result<Vec<_>>>()?;
    AtomicMeasure::from_pairs(elements, weights, PositionRule::LogDiffScaled { scale: psi }, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ScalingKind, WeightMode};

    fn family(a: u64, b: u64, w: WeightMode) -> WeightedLogFamily {
        WeightedLogFamily::new(a, b, w).unwrap()
    }

    #[test]
    fn small_examples() {
        let m = build_pair_correlation(&family(1, 1, WeightMode::Trivial), 2, &ScalingSpec::trivial(), None).unwrap();
        let atoms: Vec<_> = m.atoms().collect();
        assert_eq!(atoms.len(), 2);
        assert_eq!(m.position(&atoms[0]), -(2f64.ln()));
        assert_eq!(m.position(&atoms[1]), 2f64.ln());

        let s = Sieve::new(10).unwrap();
        let m = build_pair_correlation(&family(1, 1, WeightMode::Euler), 3, &ScalingSpec::trivial(), Some(&s)).unwrap();
        let a = m.atoms().find(|a| (a.m, a.n) == (3, 2)).unwrap();
        assert_eq!(a.mass, 2);
        assert!((m.position(&a) - 1.5f64.ln()).abs() < 1e-15);

        let m = build_pair_correlation(&family(1, 1, WeightMode::Trivial), 10, &ScalingSpec::trivial(), None).unwrap();
        assert_eq!(m.total_mass(), 90);
        assert_eq!(m.atoms().map(|a| a.mass as u128).sum::<u128>(), 90);
        assert_eq!(m.cdf(0.0).unwrap(), 0.5);
        assert_eq!(m.cdf(f64::INFINITY).unwrap(), 1.0);
        assert!(m.check_sg_symmetry());
    }

    #[test]
    fn euler_weights_need_a_sieve() {
        let r = build_pair_correlation(&family(1, 1, WeightMode::Euler), 10, &ScalingSpec::trivial(), None);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let r = build_pair_correlation_with_budget(
            &family(1, 1, WeightMode::Trivial),
            100,
            &ScalingSpec::trivial(),
            None,
            1000,
        );
        assert!(matches!(r, Err(Error::Capacity { .. })));
    }

    #[test]
    fn pushforward_doubles_positions() {
        let m = build_pair_correlation(&family(1, 1, WeightMode::Trivial), 2, &ScalingSpec::trivial(), None).unwrap();
        let d = m.pushforward_double();
        let a = d.atoms().find(|a| a.m == 2).unwrap();
        assert_eq!(d.position(&a), 2.0 * 2f64.ln());
        assert_eq!(d.total_mass(), m.total_mass());
    }

    #[test]
    fn empty_measure_cdf_errors() {
        let m = build_pair_correlation(&family(1, 1, WeightMode::Trivial), 1, &ScalingSpec::trivial(), None).unwrap();
        assert_eq!(m.cdf(0.0), Err(Error::EmptyMeasure));
        let spec = ScalingSpec::with_default_normalizer(ScalingKind::Linear).unwrap();
        assert!(build_pair_correlation(&family(2, 3, WeightMode::Trivial), 1, &spec, None).unwrap().total_mass() == 0);
    }

    #[test]
    fn histogram_matches_mass() {
        let m = build_pair_correlation(&family(1, 1, WeightMode::Trivial), 50, &ScalingSpec::trivial(), None).unwrap();
        let h = m.bin(-1.0, 1.0, 20, 1.0).unwrap();
        assert_eq!(h.binned_mass() + h.underflow + h.overflow, m.total_mass());
        for i in 0..10 {
            assert_eq!(h.counts[i], h.counts[19 - i]);
        }
    }
}
