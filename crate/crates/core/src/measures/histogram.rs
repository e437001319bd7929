use serde::Serialize;

use crate::error::{invalid, Result};

/// Mass binned on `[lo, hi)` into equal-width, left-closed bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
    /// Exact accumulated mass per bin.
    pub counts: Vec<u128>,
    pub normalization: f64,
    /// Mass strictly below `lo`.
    pub underflow: u128,
    /// Mass at or above `hi`.
    pub overflow: u128,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize, normalization: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return invalid(format!("histogram support [{lo}, {hi}] is not a proper interval"));
        }
        if bins == 0 {
            return invalid("histogram needs at least one bin");
        }
        if !(normalization > 0.0 && normalization.is_finite()) {
            return invalid("histogram normalization must be positive");
        }
        Ok(Histogram {
            lo,
            hi,
            bins,
            counts: vec![0; bins],
            normalization,
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    fn edge(&self, j: usize) -> f64 {
        if j == 0 {
            return self.lo;
        }
        if j == self.bins {
            return self.hi;
        }
        let half = self.bins / 2;
        if self.lo == -self.hi && self.bins % 2 == 0 {
            let w = self.hi / half as f64;
            if j >= half {
                (j - half) as f64 * w
            } else {
                -((half - j) as f64 * w)
            }
        } else {
            self.lo + j as f64 * self.width()
        }
    }

    /// Left and right edge of bin `i`; mirrored exactly on symmetric supports.
    pub fn edges(&self, i: usize) -> (f64, f64) {
        (self.edge(i), self.edge(i + 1))
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins)
            .map(|i| {
                let (l, r) = self.edges(i);
                0.5 * (l + r)
            })
            .collect()
    }

    /// Bin index of a position, `None` outside the support.
    pub fn index_of(&self, u: f64) -> Option<usize> {
        if !(u >= self.lo && u < self.hi) {
            return None;
        }
        let half = self.bins / 2;
        if self.lo == -self.hi && self.bins % 2 == 0 {
            // Symmetric support: index through |u| so mirror images land in mirror bins.
            let w = self.hi / half as f64;
            if u >= 0.0 {
                Some((half + (u / w).floor() as usize).min(self.bins - 1))
            } else {
                let k = ((-u / w).ceil() as usize).clamp(1, half);
                Some(half - k)
            }
        } else {
            let i = ((u - self.lo) / self.width()).floor() as usize;
            Some(i.min(self.bins - 1))
        }
    }

    pub fn add(&mut self, u: f64, mass: u128) {
        match self.index_of(u) {
            Some(i) => self.counts[i] += mass,
            None if u < self.lo => self.underflow += mass,
            None => self.overflow += mass,
        }
    }

    pub fn density(&self, i: usize) -> f64 {
        self.counts[i] as f64 / (self.normalization * self.width())
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.bins).map(|i| self.density(i)).collect()
    }

    /// Mass inside the support.
    pub fn binned_mass(&self) -> u128 {
        self.counts.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        let mut h = Histogram::new(0.0, 10.0, 10, 1.0).unwrap();
        h.add(3.5, 2);
        assert_eq!(h.counts[3], 2);
        h.add(-1.0, 1);
        h.add(10.0, 5);
        assert_eq!((h.underflow, h.overflow), (1, 5));
    }

    #[test]
    fn symmetric_indexing_mirrors() {
        let h = Histogram::new(-4.0, 4.0, 400, 1.0).unwrap();
        for k in 1..2000 {
            let u = k as f64 * 0.001_713_7;
            if u >= 4.0 {
                break;
            }
            let i = h.index_of(u).unwrap();
            let j = h.index_of(-u).unwrap();
            assert_eq!(i + j, 399, "u={u}");
            let (l, r) = h.edges(i);
            assert!(l <= u && u < r + 1e-12);
        }
        assert_eq!(h.index_of(0.0), Some(200));
        assert_eq!(h.index_of(-4.0), Some(0));
        assert_eq!(h.index_of(4.0), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Histogram::new(1.0, 1.0, 4, 1.0).is_err());
        assert!(Histogram::new(0.0, 1.0, 0, 1.0).is_err());
        assert!(Histogram::new(0.0, 1.0, 2, 0.0).is_err());
    }
}
