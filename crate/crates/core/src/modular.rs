//! Ortholength spectra of the cusp neighbourhood of Γ₀[b]\H² and the identity
//! relating their pair correlations to those of weighted logarithms.

use serde::Serialize;

use crate::arith::{gcd, Sieve};
use crate::error::{invalid, Result};
use crate::family::{ScalingSpec, WeightMode, WeightedLogFamily};
use crate::measures::{build_pair_correlation, Atom, AtomicMeasure, PositionRule};

/// One common perpendicular length 2 ln q with its multiplicity φ(q).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerpEntry {
    pub q: u64,
    pub length: f64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerpSpectrum {
    pub b: u64,
    pub horizon: u64,
    pub entries: Vec<PerpEntry>,
}

/// Lengths 2 ln q for q ≡ 0 (mod b), 2 <= q <= N, with multiplicity φ(q).
pub fn ortholength_spectrum(sieve: &Sieve, b: u64, n: u64) -> Result<PerpSpectrum> {
    if b == 0 {
        return invalid("b must be positive");
    }
    if n < 2 {
        return invalid("horizon N must be at least 2");
    }
    sieve.check_covers(n)?;
    let entries = (1..=n / b)
        .map(|i| i * b)
        .filter(|&q| q >= 2)
        .map(|q| PerpEntry {
            q,
            length: 2.0 * (q as f64).ln(),
            multiplicity: sieve.phi(q),
        })
        .collect();
    Ok(PerpSpectrum { b, horizon: n, entries })
}

/// A horodisc H_{p/q} tangent to the real line at p/q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangencyPoint {
    pub p: u64,
    pub q: u64,
    pub radius: f64,
}

/// Reduced fractions p/q ∈ [0, 1) with q <= Q and q ≡ 0 (mod b), with the
/// Euclidean radius 1/(2q²) of the corresponding horodisc.
pub fn tangency_census(b: u64, q_max: u64) -> Result<Vec<TangencyPoint>> {
    if b == 0 {
        return invalid("b must be positive");
    }
    if q_max < 2 {
        return invalid("Q must be at least 2");
    }
    let mut out = Vec::new();
    for q in (1..=q_max / b).map(|i| i * b) {
        let radius = 0.5 / (q as f64 * q as f64);
        for p in 0..q {
            if gcd(p, q) == 1 {
                out.push(TangencyPoint { p, q, radius });
            }
        }
    }
    Ok(out)
}

/// The pair correlation measure of the ortholength spectrum, with positions
/// ψ(N)(ℓ − ℓ′) for lengths ℓ = 2 ln m, ℓ′ = 2 ln n.
pub fn perp_measure(spectrum: &PerpSpectrum, psi: f64) -> AtomicMeasure {
    let e = &spectrum.entries;
    let mut atoms = Vec::with_capacity(e.len() * e.len().saturating_sub(1));
    for x in e {
        for y in e {
            if x.q != y.q {
                atoms.push(Atom {
                    m: x.q,
                    n: y.q,
                    mass: x.multiplicity * y.multiplicity,
                });
            }
        }
    }
    AtomicMeasure::from_atoms(atoms, PositionRule::DoubledLog { scale: psi }, spectrum.horizon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrtholengthIdentityReport {
    pub b: u64,
    pub horizon: u64,
    pub equal: bool,
    pub atoms_compared: usize,
    /// Family atoms involving the integer 1, which has no perpendicular (b = 1 only).
    pub excluded_degenerate: usize,
    pub max_position_gap: f64,
    /// First differing pair of atoms, perpendicular side first.
    pub first_mismatch: Option<(Option<Atom>, Option<Atom>)>,
}

/// Compares the perpendicular pair correlation measure with the doubled
/// pushforward of the Euler-weighted family n ≡ 0 (mod b), atom by atom.
pub fn ortholength_identity_check(sieve: &Sieve, b: u64, n: u64, scaling: &ScalingSpec) -> Result<OrtholengthIdentityReport> {
    let spectrum = ortholength_spectrum(sieve, b, n)?;
    let psi = scaling.psi(n)?;
    let perp = perp_measure(&spectrum, psi);
    let family = WeightedLogFamily::new(b, b, WeightMode::Euler)?;
    let doubled = build_pair_correlation(&family, n, scaling, Some(sieve))?.pushforward_double();

    let mut excluded = 0usize;
    let mut lhs: Vec<(Atom, f64)> = perp.atoms().map(|a| (a, perp.position(&a))).collect();
    let mut rhs: Vec<(Atom, f64)> = doubled
        .atoms()
        .filter(|a| {
            let keep = a.m >= 2 && a.n >= 2;
            excluded += usize::from(!keep);
            keep
        })
        .map(|a| (a, doubled.position(&a)))
        .collect();
    lhs.sort_by_key(|x| (x.0.m, x.0.n));
    rhs.sort_by_key(|x| (x.0.m, x.0.n));

    let mut gap = 0.0f64;
    let mut mismatch = None;
    for i in 0..lhs.len().max(rhs.len()) {
        let (l, r) = (lhs.get(i), rhs.get(i));
        match (l, r) {
            (Some(l), Some(r)) if l.0 == r.0 => {
                let d = (l.1 - r.1).abs();
                gap = gap.max(d);
                if d > 1e-9 * (1.0 + l.1.abs()) {
                    mismatch = Some((Some(l.0), Some(r.0)));
                    break;
                }
            }
            _ => {
                mismatch = Some((l.map(|x| x.0), r.map(|x| x.0)));
                break;
            }
        }
    }
    Ok(OrtholengthIdentityReport {
        b,
        horizon: n,
        equal: mismatch.is_none(),
        atoms_compared: lhs.len(),
        excluded_degenerate: excluded,
        max_position_gap: gap,
        first_mismatch: mismatch,
    })
}
