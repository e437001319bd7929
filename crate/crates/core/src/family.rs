//! Weighted families of logarithms, scalings and index sets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::Sieve;
use crate::error::{invalid, Error, Result};
use crate::numeric::loglog_slope;

/// Multiplicity attached to each logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Trivial,
    Euler,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(WeightMode::Trivial),
            "euler" => Ok(WeightMode::Euler),
            _ => invalid(format!("unknown weight mode `{s}` (expected trivial or euler)")),
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::Trivial => "trivial",
            WeightMode::Euler => "euler",
        })
    }
}

/// The family {ln n : n ≡ a mod b} with trivial or totient weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedLogFamily {
    a: u64,
    b: u64,
    weights: WeightMode,
}

impl WeightedLogFamily {
    /// Residues are normalised into `1..=b`, so `a ≡ 0` becomes `a = b`.
    pub fn new(a: u64, b: u64, weights: WeightMode) -> Result<Self> {
        if a == 0 || b == 0 {
            return invalid("family parameters a and b must be positive");
        }
        Ok(WeightedLogFamily {
            a: (a - 1) % b + 1,
            b,
            weights,
        })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn weights(&self) -> WeightMode {
        self.weights
    }

    /// Number M of admissible integers up to `n`.
    pub fn count(&self, n: u64) -> u64 {
        if n < self.a {
            0
        } else {
            (n - self.a) / self.b + 1
        }
    }

    /// Admissible integers up to `n`, ascending.
    pub fn residues(&self, n: u64) -> impl Iterator<Item = u64> {
        let (a, b) = (self.a, self.b);
        (0..self.count(n)).map(move |i| a + i * b)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n % self.b == self.a % self.b
    }

    /// Weight of an admissible integer.
    pub fn weight(&self, sieve: Option<&Sieve>, n: u64) -> Result<u64> {
        match self.weights {
            WeightMode::Trivial => Ok(1),
            WeightMode::Euler => {
                let s = sieve.ok_or_else(|| {
                    Error::Config("Euler weights require a sieve".to_string())
                })?;
                s.check_covers(n)?;
                Ok(s.phi(n))
            }
        }
    }
}

/// A scaling function given by a table of values at integer horizons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CustomScaling {
    table: Vec<(u64, f64)>,
}

impl CustomScaling {
    /// Horizons must be strictly increasing and values positive and nondecreasing.
    pub fn new(table: Vec<(u64, f64)>) -> Result<Self> {
        if table.is_empty() {
            return invalid("custom scaling table is empty");
        }
        for w in table.windows(2) {
            if w[1].0 <= w[0].0 {
                return invalid("custom scaling horizons must be strictly increasing");
            }
            if w[1].1 < w[0].1 {
                return invalid("custom scaling values must be nondecreasing");
            }
        }
        if table.iter().any(|&(n, v)| n == 0 || !(v > 0.0) || !v.is_finite()) {
            return invalid("custom scaling entries must have positive horizon and value");
        }
        Ok(CustomScaling { table })
    }

    pub fn table(&self) -> &[(u64, f64)] {
        &self.table
    }

    pub fn value(&self, n: u64) -> Result<f64> {
        self.table
            .binary_search_by_key(&n, |e| e.0)
            .map(|i| self.table[i].1)
            .map_err(|_| Error::InvalidArgument(format!("custom scaling has no value at N = {n}")))
    }
}

/// The scaling function ψ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingKind {
    /// ψ ≡ 1.
    Trivial,
    /// ψ(N) = N^α.
    Power(f64),
    /// ψ(N) = N.
    Linear,
    /// ψ(N) = N / ln N.
    InverseAverageGap,
    Custom(CustomScaling),
}

impl ScalingKind {
    pub fn psi(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return invalid("horizon must be positive");
        }
        let nf = n as f64;
        match self {
            ScalingKind::Trivial => Ok(1.0),
            ScalingKind::Power(alpha) => Ok(nf.powf(*alpha)),
            ScalingKind::Linear => Ok(nf),
            ScalingKind::InverseAverageGap => {
                if n < 3 {
                    return invalid("N / ln N scaling needs N >= 3");
                }
                Ok(nf / nf.ln())
            }
            ScalingKind::Custom(c) => c.value(n),
        }
    }

    fn validate(&self) -> Result<()> {
        if let ScalingKind::Power(alpha) = self {
            if !(alpha.is_finite() && *alpha >= 0.0) {
                return invalid(format!("power exponent must be finite and >= 0, got {alpha}"));
            }
        }
        Ok(())
    }

    /// The normaliser under which the limit theorem for this scaling holds.
    pub fn default_normalizer(&self) -> Normalizer {
        match self {
            ScalingKind::Trivial => Normalizer::ProbabilityMass,
            ScalingKind::Power(alpha) if *alpha < 1.0 => Normalizer::QuadraticOverPsi,
            ScalingKind::InverseAverageGap => Normalizer::QuadraticOverPsi,
            _ => Normalizer::Psi,
        }
    }
}

impl FromStr for ScalingKind {
    type Err = Error;

    /// `trivial | power:ALPHA | linear | invavg`
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "trivial" => ScalingKind::Trivial,
            "linear" => ScalingKind::Linear,
            "invavg" => ScalingKind::InverseAverageGap,
            _ => match s.strip_prefix("power:") {
                Some(alpha) => ScalingKind::Power(alpha.parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad power exponent `{alpha}`"))
                })?),
                None => {
                    return invalid(format!(
                        "unknown scaling `{s}` (expected trivial, power:ALPHA, linear or invavg)"
                    ))
                }
            },
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for ScalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingKind::Trivial => f.write_str("trivial"),
            ScalingKind::Power(alpha) => write!(f, "power:{alpha}"),
            ScalingKind::Linear => f.write_str("linear"),
            ScalingKind::InverseAverageGap => f.write_str("invavg"),
            ScalingKind::Custom(_) => f.write_str("custom"),
        }
    }
}

/// The normalising factor ψ′(N) applied to pair correlation measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizer {
    /// Total mass of the measure.
    ProbabilityMass,
    /// N² / ψ(N).
    QuadraticOverPsi,
    /// ψ(N).
    Psi,
    /// N³.
    Cubic,
    Explicit(f64),
}

/// A scaling function together with its normaliser.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSpec {
    pub kind: ScalingKind,
    pub normalizer: Normalizer,
}

impl ScalingSpec {
    pub fn new(kind: ScalingKind, normalizer: Normalizer) -> Result<Self> {
        kind.validate()?;
        if let Normalizer::Explicit(v) = normalizer {
            if !(v > 0.0 && v.is_finite()) {
                return invalid("explicit normaliser must be positive and finite");
            }
        }
        Ok(ScalingSpec { kind, normalizer })
    }

    /// The scaling with its theorem-matching normaliser.
    pub fn with_default_normalizer(kind: ScalingKind) -> Result<Self> {
        let normalizer = kind.default_normalizer();
        Self::new(kind, normalizer)
    }

    /// Default normaliser, with N³ for Euler weights under linear scaling.
    pub fn for_weights(weights: WeightMode, kind: ScalingKind) -> Result<Self> {
        let linear = kind == ScalingKind::Linear || kind == ScalingKind::Power(1.0);
        if weights == WeightMode::Euler && linear {
            return Self::new(kind, Normalizer::Cubic);
        }
        Self::with_default_normalizer(kind)
    }

    pub fn trivial() -> Self {
        ScalingSpec {
            kind: ScalingKind::Trivial,
            normalizer: Normalizer::ProbabilityMass,
        }
    }

    pub fn linear() -> Self {
        ScalingSpec {
            kind: ScalingKind::Linear,
            normalizer: Normalizer::Psi,
        }
    }

    pub fn psi(&self, n: u64) -> Result<f64> {
        self.kind.psi(n)
    }

    /// ψ′(N), given the total mass of the measure being normalised.
    pub fn normalizer_value(&self, n: u64, total_mass: f64) -> Result<f64> {
        let v = match self.normalizer {
            Normalizer::ProbabilityMass => total_mass,
            Normalizer::QuadraticOverPsi => (n as f64) * (n as f64) / self.psi(n)?,
            Normalizer::Psi => self.psi(n)?,
            Normalizer::Cubic => (n as f64).powi(3),
            Normalizer::Explicit(v) => v,
        };
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::EmptyMeasure)
        }
    }
}

/// λ_ψ = lim ψ(N)/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Zero,
    Finite(f64),
    Infinite,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeEstimate {
    pub regime: Regime,
    /// Set when the regime was estimated from a finite table.
    pub heuristic: bool,
}

/// Classifies λ_ψ, exactly for the built-in kinds.
///
/// Custom tables are classified from the log-log slope of ψ over the last
/// entries up to `horizon`.
pub fn classify_regime(spec: &ScalingSpec, horizon: u64) -> Result<RegimeEstimate> {
    let exact = |regime| {
        Ok(RegimeEstimate {
            regime,
            heuristic: false,
        })
    };
    match &spec.kind {
        ScalingKind::Trivial | ScalingKind::InverseAverageGap => exact(Regime::Zero),
        ScalingKind::Linear => exact(Regime::Finite(1.0)),
        ScalingKind::Power(alpha) => {
            if !(alpha.is_finite() && *alpha >= 0.0) {
                return invalid("power exponent must be finite and >= 0");
            }
            if *alpha < 1.0 {
                exact(Regime::Zero)
            } else if *alpha == 1.0 {
                exact(Regime::Finite(1.0))
            } else {
                exact(Regime::Infinite)
            }
        }
        ScalingKind::Custom(c) => {
            let c = CustomScaling::new(c.table().to_vec())?;
            let pts: Vec<(f64, f64)> = c
                .table()
                .iter()
                .filter(|e| e.0 <= horizon)
                .map(|&(n, v)| (n as f64, v))
                .collect();
            let tail = &pts[pts.len().saturating_sub(4)..];
            let regime = match (tail.len() >= 3).then(|| loglog_slope(tail)).flatten() {
                None => Regime::Unclassified,
                Some(slope) if slope < 0.9 => Regime::Zero,
                Some(slope) if slope > 1.1 => Regime::Infinite,
                Some(_) => {
                    let (n, v) = tail[tail.len() - 1];
                    Regime::Finite(v / n)
                }
            };
            Ok(RegimeEstimate {
                regime,
                heuristic: true,
            })
        }
    }
}

/// Which part of the pair index set to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexVariant {
    /// All ordered pairs m ≠ n.
    Full,
    /// Pairs with m < n.
    Lower,
    /// Pairs with m > n.
    Upper,
    /// Pairs (p, q) with p < q, p ≡ a (mod b), for a fixed q ≡ a (mod b).
    Jq(u64),
    /// Pairs (q + p, q) with q <= N − p, q ≡ a (mod b), for a fixed p ≡ 0 (mod b).
    JpN(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    n: u64,
    a: u64,
    b: u64,
    variant: IndexVariant,
}

impl IndexSet {
    pub fn new(n: u64, a: u64, b: u64, variant: IndexVariant) -> Result<Self> {
        if n == 0 {
            return invalid("horizon N must be positive");
        }
        if a == 0 || b == 0 {
            return invalid("a and b must be positive");
        }
        let a = (a - 1) % b + 1;
        match variant {
            IndexVariant::Jq(q) if q == 0 || q % b != a % b => {
                return invalid(format!("q = {q} is not congruent to {a} mod {b}"));
            }
            IndexVariant::JpN(p) if p == 0 || p % b != 0 || p >= n => {
                return invalid(format!("p = {p} must satisfy 0 < p < N and p ≡ 0 mod {b}"));
            }
            _ => {}
        }
        Ok(IndexSet { n, a, b, variant })
    }

    pub fn variant(&self) -> IndexVariant {
        self.variant
    }

    /// Number of pairs the enumeration yields.
    pub fn len(&self) -> u64 {
        let m = if self.n < self.a {
            0
        } else {
            (self.n - self.a) / self.b + 1
        };
        match self.variant {
            IndexVariant::Full => m * m.saturating_sub(1),
            IndexVariant::Lower | IndexVariant::Upper => m * m.saturating_sub(1) / 2,
            IndexVariant::Jq(q) => (q - self.a) / self.b,
            IndexVariant::JpN(p) => {
                if self.n < p + self.a {
                    0
                } else {
                    (self.n - p - self.a) / self.b + 1
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> PairIter {
        PairIter {
            set: *self,
            outer: 0,
            inner: 0,
            second: false,
        }
    }
}

impl IntoIterator for &IndexSet {
    type Item = (u64, u64);
    type IntoIter = PairIter;

    fn into_iter(self) -> PairIter {
        self.iter()
    }
}

/// Streaming enumeration of an [`IndexSet`].
///
/// For the full set the outer loop runs over the larger element j and the
/// inner loop over i < j, yielding (r_i, r_j) then (r_j, r_i).
#[derive(Debug, Clone)]
pub struct PairIter {
    set: IndexSet,
    outer: u64,
    inner: u64,
    second: bool,
}

impl Iterator for PairIter {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        let IndexSet { n, a, b, variant } = self.set;
        let r = |i: u64| a + i * b;
        match variant {
            IndexVariant::Jq(q) => {
                let p = r(self.inner);
                if p >= q {
                    return None;
                }
                self.inner += 1;
                Some((p, q))
            }
            IndexVariant::JpN(p) => {
                let q = r(self.inner);
                if q + p > n {
                    return None;
                }
                self.inner += 1;
                Some((q + p, q))
            }
            _ => loop {
                if self.inner >= self.outer {
                    self.outer += 1;
                    self.inner = 0;
                    self.second = false;
                    if r(self.outer) > n {
                        return None;
                    }
                    continue;
                }
                let (small, large) = (r(self.inner), r(self.outer));
                let pair = match variant {
                    IndexVariant::Lower => {
                        self.inner += 1;
                        (small, large)
                    }
                    IndexVariant::Upper => {
                        self.inner += 1;
                        (large, small)
                    }
                    _ => {
                        if self.second {
                            self.second = false;
                            self.inner += 1;
                            (large, small)
                        } else {
                            self.second = true;
                            (small, large)
                        }
                    }
                };
                return Some(pair);
            },
        }
    }
}

/// Streams the pairs of an index set.
pub fn enumerate(index_set: &IndexSet) -> PairIter {
    index_set.iter()
}
