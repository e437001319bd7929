use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numeric::CompensatedSum;

/// Polynomial Σ c_i (t − origin)^i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalPoly {
    pub origin: f64,
    pub coeffs: Vec<f64>,
}

impl LocalPoly {
    pub fn eval(&self, t: f64) -> f64 {
        let x = t - self.origin;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Coefficients in powers of t.
    pub fn global_coeffs(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut binom = 1.0;
            for j in 0..=i {
                // C(i, j) t^j (−origin)^(i−j)
                out[j] += c * binom * (-self.origin).powi((i - j) as i32);
                binom = binom * (i - j) as f64 / (j + 1) as f64;
            }
        }
        out
    }
}

/// A polynomial restricted to `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyPiece {
    pub lo: f64,
    pub hi: f64,
    pub poly: LocalPoly,
}

/// Elementary kernels with closed-form integrals against polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Constant(f64),
    /// coeff · e^{rate·t}
    Exp { coeff: f64, rate: f64 },
    /// coeff · t^exponent, on intervals not containing 0 when exponent < 0.
    Power { coeff: f64, exponent: i32 },
}

impl Kernel {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Kernel::Constant(c) => c,
            Kernel::Exp { coeff, rate } => coeff * (rate * t).exp(),
            Kernel::Power { coeff, exponent } => coeff * t.powi(exponent),
        }
    }
}

/// A kernel restricted to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPiece {
    pub lo: f64,
    pub hi: f64,
    pub kernel: Kernel,
}

/// ∫_lo^hi p(t) k(t) dt in closed form.
pub fn integrate_poly_kernel(poly: &LocalPoly, kernel: &Kernel, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    match *kernel {
        Kernel::Constant(c) => {
            let (u, v) = (lo - poly.origin, hi - poly.origin);
            let s: CompensatedSum = poly
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &ci)| {
                    let e = (i + 1) as i32;
                    ci * (v.powi(e) - u.powi(e)) / e as f64
                })
                .collect();
            c * s.total()
        }
        Kernel::Exp { coeff, rate } if rate == 0.0 => {
            integrate_poly_kernel(poly, &Kernel::Constant(coeff), lo, hi)
        }
        Kernel::Exp { coeff, rate } => {
            // Shift to τ = t − lo so the exponentials stay bounded.
            let shifted = LocalPoly {
                origin: 0.0,
                coeffs: LocalPoly {
                    origin: poly.origin - lo,
                    coeffs: poly.coeffs.clone(),
                }
                .global_coeffs(),
            };
            let len = hi - lo;
            let anti = |tau: f64, j: usize| -> f64 {
                let mut s = 0.0;
                let mut fall = 1.0;
                for i in 0..=j {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    s += sign * fall * tau.powi((j - i) as i32) / rate.powi(i as i32 + 1);
                    fall *= (j - i) as f64;
                }
                (rate * tau).exp() * s
            };
            let s: CompensatedSum = shifted
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, &cj)| cj * (anti(len, j) - anti(0.0, j)))
                .collect();
            coeff * (rate * lo).exp() * s.total()
        }
        Kernel::Power { coeff, exponent } => {
            let s: CompensatedSum = poly
                .global_coeffs()
                .iter()
                .enumerate()
                .map(|(j, &cj)| {
                    let e = j as i32 + exponent;
                    if e == -1 {
                        cj * (hi.abs().ln() - lo.abs().ln())
                    } else {
                        cj * (hi.powi(e + 1) - lo.powi(e + 1)) / (e + 1) as f64
                    }
                })
                .collect();
            coeff * s.total()
        }
    }
}

/// Compactly supported test functions paired with measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestFunction {
    /// 1 − |t − c|/w on [c − w, c + w].
    Hat { center: f64, half_width: f64 },
    /// 1 − 3x² + 2|x|³ with x = (t − c)/w on [c − w, c + w]; C¹.
    SmoothBump { center: f64, half_width: f64 },
}

fn check(center: f64, half_width: f64) -> Result<()> {
    if !center.is_finite() || !(half_width > 0.0 && half_width.is_finite()) {
        return invalid("test function needs a finite center and a positive half-width");
    }
    Ok(())
}

impl TestFunction {
    pub fn hat(center: f64, half_width: f64) -> Result<Self> {
        check(center, half_width)?;
        Ok(TestFunction::Hat { center, half_width })
    }

    pub fn smooth_bump(center: f64, half_width: f64) -> Result<Self> {
        check(center, half_width)?;
        Ok(TestFunction::SmoothBump { center, half_width })
    }

    fn params(&self) -> (f64, f64) {
        match *self {
            TestFunction::Hat { center, half_width }
            | TestFunction::SmoothBump { center, half_width } => (center, half_width),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (c, w) = self.params();
        let x = (t - c).abs() / w;
        if x >= 1.0 {
            return 0.0;
        }
        match self {
            TestFunction::Hat { .. } => 1.0 - x,
            TestFunction::SmoothBump { .. } => 1.0 - x * x * (3.0 - 2.0 * x),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        let (c, w) = self.params();
        (c - w, c + w)
    }

    pub fn sup_norm(&self) -> f64 {
        1.0
    }

    /// Total variation.
    pub fn variation(&self) -> f64 {
        2.0
    }

    /// sup |f′|.
    pub fn derivative_sup(&self) -> f64 {
        let (_, w) = self.params();
        match self {
            TestFunction::Hat { .. } => 1.0 / w,
            TestFunction::SmoothBump { .. } => 1.5 / w,
        }
    }

    /// ∫ f.
    pub fn integral(&self) -> f64 {
        self.params().1
    }

    pub fn pieces(&self) -> [PolyPiece; 2] {
        let (c, w) = self.params();
        let (left, right) = match self {
            TestFunction::Hat { .. } => (vec![1.0, 1.0 / w], vec![1.0, -1.0 / w]),
            TestFunction::SmoothBump { .. } => {
                let (w2, w3) = (w * w, w * w * w);
                (vec![1.0, 0.0, -3.0 / w2, -2.0 / w3], vec![1.0, 0.0, -3.0 / w2, 2.0 / w3])
            }
        };
        [
            PolyPiece {
                lo: c - w,
                hi: c,
                poly: LocalPoly { origin: c, coeffs: left },
            },
            PolyPiece {
                lo: c,
                hi: c + w,
                poly: LocalPoly { origin: c, coeffs: right },
            },
        ]
    }

    /// ∫ f·k over the union of the kernel pieces, in closed form.
    pub fn integrate_piecewise(&self, kernels: &[KernelPiece]) -> f64 {
        let mut acc = CompensatedSum::new();
        for piece in self.pieces() {
            for k in kernels {
                let lo = piece.lo.max(k.lo);
                let hi = piece.hi.min(k.hi);
                if hi > lo {
                    acc.add(integrate_poly_kernel(&piece.poly, &k.kernel, lo, hi));
                }
            }
        }
        acc.total()
    }
}
