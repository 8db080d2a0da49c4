//! Special functions underpinning the spectral computations: complex
//! log-gamma, Riemann zeta and its completed form, divisor sums, K-Bessel and
//! Whittaker functions at imaginary order with explicit scaling, the unit-
//! argument 3F2, compactly supported test bumps, and spectral profiles.

pub mod bessel_k;
pub mod bump;
pub mod divisor;
pub mod erf;
pub mod gamma;
pub mod hyp3f2;
pub mod profile;
pub mod whittaker;
pub mod zeta;

pub use bessel_k::{bessel_k_imag, bessel_k_order, flush_cutoff, ScaledBesselValue};
pub use bump::{mellin_decay_threshold, mellin_of_bump, BumpShape, BumpSpec};
pub use divisor::{divisor_sigma, divisors};
pub use erf::erf;
pub use gamma::{gamma, log_gamma};
pub use hyp3f2::{hyp3f2_unit, Hyp3f2Result};
pub use profile::{profile_fourier, QuasimodeProfile, SpectralPair};
pub use whittaker::{whittaker_w, whittaker_w_batch};
pub use zeta::{phi_scattering, riemann_zeta, xi, xi_log};
