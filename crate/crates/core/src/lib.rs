//! Numerical laboratory for real-analytic Eisenstein series on the modular
//! surface and the microlocal-lift measures attached to pairs of nearby
//! spectral parameters.
//!
//! The crate is organized in layers:
//!
//!   * [`specfun`]: scalar special functions (gamma, zeta, K-Bessel and
//!     Whittaker at imaginary order, unit-argument 3F2, test bumps and
//!     spectral profiles), all stable in the large-parameter regimes where
//!     naive formulas underflow.
//!   * [`eisenstein`]: the series themselves — fundamental-domain reduction,
//!     Fourier-expansion evaluators at weight 0 and weight 2k, absolutely
//!     convergent orbit sums used as an independent cross-check route, and
//!     incomplete (bump-weighted) variants.
//!   * [`measures`]: pairings ∫ f · E E' dV computed two ways (direct
//!     fundamental-domain quadrature and unfolded constant-term plus
//!     coefficient sums), Rankin–Selberg cross-checks, and quasimode
//!     averages.
//!   * [`asymptotics`]: the predicted large-parameter behavior — phase
//!     functions, residue coefficients, degeneration factors, kernel masses —
//!     that the measured values are compared against.
//!   * [`identities`]: a suite of closed-form identities used as end-to-end
//!     validation of the numerical stack.

pub mod asymptotics;
pub mod eisenstein;
pub mod error;
pub mod identities;
pub mod measures;
pub mod quadrature;
pub mod scaled;
pub mod specfun;

pub use asymptotics::{
    b0_residue, bk_residue, ehrenfest_mass, gamma_ratio_check, ik3_ik4, main_term_weight0,
    phase_theta, weight_k_coefficient, MainTermPrediction, MainTermRegime, ResidueSide,
};
pub use eisenstein::{TruncationPolicy, UpperHalfPoint};
pub use error::{Error, Result};
pub use identities::{default_suite, IdentityCheckResult};
pub use measures::{DomainIntegral, MeasureReport, TestFunction};
pub use scaled::{ScaledComplex, ScaledReal};
