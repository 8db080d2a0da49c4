//! Smooth compactly supported densities on the positive axis and their
//! Mellin transforms.
//!
//! A [`BumpSpec`] describes a nonnegative C^∞ function ψ supported in
//! `[support_lo, support_hi] ⊂ (0, ∞)`.  These densities serve two roles:
//! as height cutoffs (variable `y`) when building compactly supported
//! automorphic test functions, and as spectral window profiles (variable
//! `r`).  The Mellin transform here uses the analytic-number-theory
//! normalisation
//!
//! ```text
//!     L_ψ(s) = ∫₀^∞ ψ(y) y^{-s} dy/y,
//! ```
//!
//! entire in `s` because the support is compact, with rapid decay on
//! vertical lines because ψ is smooth.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, integrate_panels_complex, oscillation_panels};

/// How the raw profile over the support window is generated.  Every shape is
/// expressed in the affine window coordinate `u = (2y - lo - hi)/(hi - lo)`,
/// which runs over (-1, 1) inside the support.
#[derive(Clone, Debug)]
pub enum BumpShape {
    /// `exp(-1/(1-u²))`: the classic mollifier, exactly zero outside the
    /// window with all derivatives vanishing at the edges.
    SmoothBump,
    /// Gaussian centred in the window with σ = (hi-lo)/16, shifted down by
    /// its edge value so it vanishes at u = ±1.  The shift is e^{-32} ≈
    /// 1.3e-14, so the function is smooth to working precision.
    TruncatedGaussian,
    /// Natural cubic spline through equally spaced samples of `u ∈ [-1, 1]`
    /// (the first and last sample are forced to zero so the function joins
    /// the zero extension continuously).  `second_derivs` caches the spline
    /// moments; use [`BumpSpec::from_samples`] to build one.
    CustomSamples {
        values: Vec<f64>,
        second_derivs: Vec<f64>,
    },
}

/// A smooth bump ψ with support `[support_lo, support_hi]` and a scalar
/// `normalization` multiplying the raw shape.
#[derive(Clone, Debug)]
pub struct BumpSpec {
    pub support_lo: f64,
    pub support_hi: f64,
    pub shape: BumpShape,
    pub normalization: f64,
}

impl BumpSpec {
    fn checked(lo: f64, hi: f64, shape: BumpShape) -> Result<BumpSpec> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::domain(
                "bump support",
                format!("need 0 < lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(BumpSpec {
            support_lo: lo,
            support_hi: hi,
            shape,
            normalization: 1.0,
        })
    }

    /// Mollifier-shaped bump on `[lo, hi]`, raw (normalization 1).
    pub fn smooth(lo: f64, hi: f64) -> Result<BumpSpec> {
        BumpSpec::checked(lo, hi, BumpShape::SmoothBump)
    }

    /// Truncated Gaussian on `[lo, hi]`, raw (normalization 1).
    pub fn gaussian(lo: f64, hi: f64) -> Result<BumpSpec> {
        BumpSpec::checked(lo, hi, BumpShape::TruncatedGaussian)
    }

    /// Spline through `samples` of the raw profile at equally spaced window
    /// coordinates (sample 0 at u = -1, last sample at u = +1).  Endpoint
    /// samples are zeroed; interior samples must be nonnegative.
    pub fn from_samples(lo: f64, hi: f64, samples: &[f64]) -> Result<BumpSpec> {
        if samples.len() < 4 {
            return Err(Error::domain(
                "bump samples",
                format!("need at least 4 samples, got {}", samples.len()),
            ));
        }
        if samples.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(
                "bump samples",
                "samples must be finite and nonnegative",
            ));
        }
        let mut values = samples.to_vec();
        let n = values.len();
        values[0] = 0.0;
        values[n - 1] = 0.0;
        let second_derivs = natural_spline_moments(&values);
        BumpSpec::checked(
            lo,
            hi,
            BumpShape::CustomSamples {
                values,
                second_derivs,
            },
        )
    }

    /// ψ(y): `normalization` times the raw shape.  Exactly zero outside the
    /// support window.
    pub fn eval(&self, y: f64) -> f64 {
        let lo = self.support_lo;
        let hi = self.support_hi;
        if !(y > lo && y < hi) {
            return 0.0;
        }
        let u = (2.0 * y - lo - hi) / (hi - lo);
        let raw = match &self.shape {
            BumpShape::SmoothBump => (-1.0 / (1.0 - u * u)).exp(),
            BumpShape::TruncatedGaussian => {
                // sigma = (hi-lo)/16 means u/(sigma-scale) = 8u in window
                // coordinates, so the exponent is -(8u)^2/2 = -32u^2.
                ((-32.0 * u * u).exp() - (-32.0f64).exp()).max(0.0)
            }
            BumpShape::CustomSamples {
                values,
                second_derivs,
            } => spline_eval(values, second_derivs, u).max(0.0),
        };
        self.normalization * raw
    }

    /// Rescales so the hyperbolic mass `∫ ψ(y) dy/y² = L_ψ(1)` equals one.
    /// This is the natural normalisation for test functions on the modular
    /// surface: the unfolded surface integral of the associated automorphic
    /// function is exactly this mass.
    pub fn with_unit_hyperbolic_mass(mut self) -> Result<BumpSpec> {
        let mass = mellin_of_bump(&self, Complex64::new(1.0, 0.0)).re;
        if !(mass > 0.0) {
            return Err(Error::domain(
                "bump normalization",
                format!("hyperbolic mass {mass} not positive"),
            ));
        }
        self.normalization /= mass;
        Ok(self)
    }

    /// Rescales so the line mass `∫ ψ(y) dy` equals one (the convention for
    /// spectral window profiles).
    pub fn with_unit_line_mass(mut self) -> Result<BumpSpec> {
        let mass = integrate_panels(|y| self.eval(y), self.support_lo, self.support_hi, 8, 32);
        if !(mass > 0.0) {
            return Err(Error::domain(
                "bump normalization",
                format!("line mass {mass} not positive"),
            ));
        }
        self.normalization /= mass;
        Ok(self)
    }
}

/// Natural cubic spline second derivatives (moments) for equally spaced
/// knots with unit spacing in index coordinates; standard tridiagonal solve.
fn natural_spline_moments(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Tridiagonal system: m[0] = m[n-1] = 0,
    //   (1/6) m[i-1] + (2/3) m[i] + (1/6) m[i+1] = values[i-1] - 2 values[i] + values[i+1].
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        diag[i] = 2.0 / 3.0;
        rhs[i] = values[i - 1] - 2.0 * values[i] + values[i + 1];
    }
    // Forward elimination (off-diagonals all 1/6).
    for i in 2..n - 1 {
        let w = (1.0 / 6.0) / diag[i - 1];
        diag[i] -= w * (1.0 / 6.0);
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (1..n - 1).rev() {
        let upper = if i + 1 < n - 1 { m[i + 1] } else { 0.0 };
        m[i] = (rhs[i] - (1.0 / 6.0) * upper) / diag[i];
    }
    m
}

/// Evaluates the natural spline at window coordinate `u ∈ [-1, 1]`.
fn spline_eval(values: &[f64], moments: &[f64], u: f64) -> f64 {
    let n = values.len();
    let x = (u + 1.0) * 0.5 * (n - 1) as f64; // knot coordinate in [0, n-1]
    let i = (x.floor() as usize).min(n - 2);
    let t = x - i as f64;
    let a = values[i];
    let b = values[i + 1];
    let ma = moments[i];
    let mb = moments[i + 1];
    // Unit-spacing cubic segment with prescribed second derivatives.
    a * (1.0 - t) + b * t
        + ((1.0 - t) * (1.0 - t) * (1.0 - t) - (1.0 - t)) * ma / 6.0
        + (t * t * t - t) * mb / 6.0
}

/// Mellin transform `L_ψ(s) = ∫ ψ(y) y^{-s} dy/y` over the support window.
///
/// Entire in `s`; the only numerical concern is the oscillation of
/// `y^{-i Im s}`, whose total phase across the window is
/// `|Im s| · log(hi/lo)`, resolved by splitting into panels.
pub fn mellin_of_bump(psi: &BumpSpec, s: Complex64) -> Complex64 {
    let lo = psi.support_lo;
    let hi = psi.support_hi;
    let phase = s.im.abs() * (hi / lo).ln();
    let panels = oscillation_panels(phase, 3.0, 8);
    integrate_panels_complex(
        |y| Complex64::from_polar(psi.eval(y) * y.powf(-s.re - 1.0), -s.im * y.ln()),
        lo,
        hi,
        panels,
        32,
    )
}

/// Smallest height `T₀` (on a half-unit grid) such that `|L_ψ(re_s + it)|`
/// stays at or below `target` for all sampled `t ≥ T₀` up to a safety run of
/// twenty further samples.  Used to record where a transform's vertical
/// decay allows truncating contour integrals.
pub fn mellin_decay_threshold(psi: &BumpSpec, re_s: f64, target: f64) -> Result<f64> {
    const STEP: f64 = 2.0;
    const RUN: usize = 20;
    const T_CAP: f64 = 20_000.0;
    let mut t = 0.0;
    let mut run_start: Option<f64> = None;
    let mut below = 0usize;
    while t <= T_CAP {
        let v = mellin_of_bump(psi, Complex64::new(re_s, t)).norm();
        if v <= target {
            if run_start.is_none() {
                run_start = Some(t);
            }
            below += 1;
            if below > RUN {
                return Ok(run_start.unwrap());
            }
        } else {
            run_start = None;
            below = 0;
        }
        t += STEP;
    }
    Err(Error::Convergence {
        context: "mellin decay scan",
        achieved: target * 10.0,
        target,
    })
}
