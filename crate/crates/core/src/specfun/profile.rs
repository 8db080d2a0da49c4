//! Spectral window profiles and spectral-parameter pairs.
//!
//! A [`QuasimodeProfile`] is a unit-mass density h(r) concentrated near a
//! center r_j; integrating the Eisenstein family against it produces an
//! approximate eigenfunction whose defect is controlled by the window width.
//! A [`SpectralPair`] bundles the two spectral parameters (r', r'') that
//! every pair-correlation quantity depends on, together with the center they
//! straddle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_panels_complex, oscillation_panels};
use crate::specfun::bump::BumpSpec;

/// Two spectral parameters and the window center they belong to.  All the
/// pair quantities downstream are expressed through the sum and difference,
/// so those come as methods rather than stored fields.
#[derive(Clone, Copy, Debug)]
pub struct SpectralPair {
    pub r1: f64,
    pub r2: f64,
    pub center: f64,
}

impl SpectralPair {
    /// Pair straddling `center` symmetrically: r1 = center + delta/2,
    /// r2 = center - delta/2.
    pub fn centered(center: f64, delta_r: f64) -> Result<SpectralPair> {
        SpectralPair::new(center + 0.5 * delta_r, center - 0.5 * delta_r, center)
    }

    pub fn new(r1: f64, r2: f64, center: f64) -> Result<SpectralPair> {
        if !(center > 0.0) {
            return Err(Error::domain(
                "spectral pair",
                format!("center must be positive, got {center}"),
            ));
        }
        if !(r1.is_finite() && r2.is_finite()) {
            return Err(Error::domain("spectral pair", "non-finite parameter"));
        }
        Ok(SpectralPair { r1, r2, center })
    }

    /// Σr = r1 + r2.
    pub fn sum_r(&self) -> f64 {
        self.r1 + self.r2
    }

    /// Δr = r1 - r2.
    pub fn delta_r(&self) -> f64 {
        self.r1 - self.r2
    }
}

/// A normalized spectral window: h(r) = shape(r) with ∫ h(r) dr = 1, carried
/// together with a Gauss–Legendre rule on its support so that consumers can
/// integrate smooth functions against it without re-deciding quadrature.
///
/// `width` records the window's scale parameter (the Gaussian σ, or the bump
/// half-width); the first absolute moment ∫ h(r)|r - center| dr is
/// proportional to it with a shape-dependent constant of order one.
#[derive(Clone, Debug)]
pub struct QuasimodeProfile {
    pub center: f64,
    pub width: f64,
    pub shape: BumpSpec,
    /// Quadrature pairs (r_i, w_i) with Σ w_i h(r_i) = 1 to rounding.
    pub nodes: Vec<(f64, f64)>,
}

const PROFILE_NODES: usize = 64;

impl QuasimodeProfile {
    /// Gaussian window of scale σ, truncated at ±8σ (edge value e^{-32}).
    pub fn gaussian(center: f64, sigma: f64) -> Result<QuasimodeProfile> {
        if !(sigma > 0.0) {
            return Err(Error::domain(
                "quasimode profile",
                format!("sigma must be positive, got {sigma}"),
            ));
        }
        let shape = BumpSpec::gaussian(center - 8.0 * sigma, center + 8.0 * sigma)?;
        QuasimodeProfile::build(center, sigma, shape)
    }

    /// Mollifier window supported on [center - half_width, center + half_width].
    pub fn bump(center: f64, half_width: f64) -> Result<QuasimodeProfile> {
        if !(half_width > 0.0) {
            return Err(Error::domain(
                "quasimode profile",
                format!("half_width must be positive, got {half_width}"),
            ));
        }
        let shape = BumpSpec::smooth(center - half_width, center + half_width)?;
        QuasimodeProfile::build(center, half_width, shape)
    }

    fn build(center: f64, width: f64, mut shape: BumpSpec) -> Result<QuasimodeProfile> {
        let (lo, hi) = (shape.support_lo, shape.support_hi);
        let (xs, ws) = gauss_legendre(PROFILE_NODES);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let nodes: Vec<(f64, f64)> = xs
            .iter()
            .zip(ws.iter())
            .map(|(&x, &w)| (mid + half * x, half * w))
            .collect();
        // Normalize so the rule itself integrates h to exactly one; the true
        // integral then differs only by the (tiny) quadrature error.
        let mass: f64 = nodes.iter().map(|&(r, w)| w * shape.eval(r)).sum();
        if !(mass > 0.0) {
            return Err(Error::domain(
                "quasimode profile",
                format!("window mass {mass} not positive"),
            ));
        }
        shape.normalization /= mass;
        Ok(QuasimodeProfile {
            center,
            width,
            shape,
            nodes,
        })
    }

    /// h(r).
    pub fn eval(&self, r: f64) -> f64 {
        self.shape.eval(r)
    }

    /// Support interval of the window.
    pub fn support(&self) -> (f64, f64) {
        (self.shape.support_lo, self.shape.support_hi)
    }

    /// ∫ h(r) |r - center| dr.  The integrand has a kink at the center, so
    /// this integrates the two halves separately rather than reusing the
    /// stored all-window rule.
    pub fn first_absolute_moment(&self) -> f64 {
        let (lo, hi) = self.support();
        let c = self.center.clamp(lo, hi);
        crate::quadrature::integrate_panels(|r| self.eval(r) * (c - r), lo, c, 4, 48)
            + crate::quadrature::integrate_panels(|r| self.eval(r) * (r - c), c, hi, 4, 48)
    }

    /// ∫ h(r)² dr via the stored rule.
    pub fn l2_norm_squared(&self) -> f64 {
        self.nodes.iter().map(|&(r, w)| w * self.eval(r).powi(2)).sum()
    }
}

/// Fourier transform `ĥ(t) = ∫ h(r) e^{-irt} dr`.
///
/// Independent of the stored quadrature rule: the oscillation across the
/// support grows with |t|, so panels are chosen per call.  ĥ(0) = 1 up to
/// the window quadrature tolerance, and for a Gaussian window
/// ĥ(t) = e^{-i·center·t} e^{-σ²t²/2} up to the e^{-32} truncation.
pub fn profile_fourier(h: &QuasimodeProfile, t: f64) -> Complex64 {
    let (lo, hi) = h.support();
    let phase = t.abs() * (hi - lo);
    let panels = oscillation_panels(phase, 3.0, 6);
    integrate_panels_complex(
        |r| Complex64::from_polar(h.eval(r), -r * t),
        lo,
        hi,
        panels,
        32,
    )
}
