//! Complex log-gamma via argument-shifted Stirling series.
//!
//! `log_gamma` returns the principal branch on the right half-plane: the
//! recursion log Γ(z) = log Γ(z + n) - sum log(z + j) uses principal logs of
//! factors with positive real part, which keeps the result continuous there.
//! Left of Re z = 1/2 the reflection formula is used; the branch is then only
//! correct modulo 2πi, which is harmless because every consumer in this crate
//! exponentiates or differences conjugate pairs.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// B_{2k} / (2k (2k-1)) for the Stirling asymptotic series, k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Radius beyond which the Stirling series with ten terms is at f64 accuracy.
const STIRLING_RADIUS: f64 = 10.0;

const LN_SQRT_2PI: f64 = 0.9189385332046727417803297;

/// Principal log Γ(z).  Errors at the poles z = 0, -1, -2, ...
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Pole {
            context: "log_gamma",
        });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("log_gamma", "non-finite argument"));
    }
    if z.re < 0.5 {
        // Reflection: log Γ(z) = log(π / sin(πz)) - log Γ(1 - z).
        let refl = std::f64::consts::PI.ln() - log_sin_pi(z);
        return Ok(refl - log_gamma_right(Complex64::new(1.0, 0.0) - z));
    }
    Ok(log_gamma_right(z))
}

/// Γ(z) itself; fine whenever |Re log Γ| stays within f64 exponent range.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm_sqr() < STIRLING_RADIUS * STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: Complex64) -> Complex64 {
    let lnw = w.ln();
    let mut acc = (w - 0.5) * lnw - w + LN_SQRT_2PI;
    let w2 = w * w;
    let mut pow = w;
    for c in STIRLING {
        acc += c / pow;
        pow *= w2;
    }
    acc
}

/// log sin(πz), overflow-safe for large |Im z|.
///
/// For Im z >= 0 write sin πz = -e^{-iπz}(1 - e^{2iπz})/(2i) so the exponent
/// that is actually exponentiated has non-positive real part; mirror by
/// conjugation below the axis.  Branch: continuous in each half-plane and
/// real on (0, 1); good enough for reflection, whose 2πi ambiguity is
/// documented above.
fn log_sin_pi(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.im < 0.0 {
        return log_sin_pi(z.conj()).conj();
    }
    let two_pi_i_z = Complex64::new(-2.0 * PI * z.im, 2.0 * PI * z.re);
    let log1m = (Complex64::new(1.0, 0.0) - two_pi_i_z.exp()).ln();
    // -iπz + log(1 - e^{2πiz}) - ln 2 + iπ/2
    Complex64::new(PI * z.im, -PI * z.re) + log1m + Complex64::new(-std::f64::consts::LN_2, PI / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-13;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_integer_and_unit_values() {
        // Γ(1/2) = sqrt(π), Γ(1) = Γ(2) = 1.
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * std::f64::consts::PI.ln()).abs() < TOL);
        assert!(half.im.abs() < TOL);
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < TOL);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < TOL);
    }

    #[test]
    fn matches_reference_points() {
        // Reference values from an independent arbitrary-precision run.
        let cases = [
            (c(0.5, 10.0), c(-14.789024734744293451, 13.030020034911089851)),
            (c(1.5, -4.0), c(-3.9702003195931212676, -3.0020742115076455012)),
            (c(6.0, 10000.0), c(-15656.387457094892539, 82112.041591225940956)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!(
                (got.re - want.re).abs() < TOL * want.re.abs().max(1.0),
                "re at {z}: {got}"
            );
            assert!(
                (got.im - want.im).abs() < TOL * want.im.abs().max(1.0),
                "im at {z}: {got}"
            );
        }
    }

    #[test]
    fn reflection_region_value() {
        // Γ(-1.5 + 2i), left half-plane via reflection.
        let got = gamma(c(-1.5, 2.0)).unwrap();
        let want = c(-0.0018843965411520957168, 0.020932721986921831184);
        assert!((got - want).norm() < want.norm() * 1e-12);
    }

    #[test]
    fn poles_error_out() {
        for n in 0..4 {
            assert!(matches!(
                log_gamma(c(-(n as f64), 0.0)),
                Err(Error::Pole { .. })
            ));
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(3.7, 2.9);
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z.conj()).unwrap();
        assert!((a - b.conj()).norm() < TOL);
    }

    #[test]
    fn recurrence_on_a_grid() {
        // log Γ(z+1) = log Γ(z) + log z away from branch trouble.
        for &re in &[0.7, 1.3, 4.2, 9.5] {
            for &im in &[0.0, 0.5, 3.0, 40.0] {
                let z = c(re, im);
                let lhs = log_gamma(z + 1.0).unwrap();
                let rhs = log_gamma(z).unwrap() + z.ln();
                assert!((lhs - rhs).norm() < TOL * rhs.norm().max(1.0), "z={z}");
            }
        }
    }

    #[test]
    fn modulus_decay_along_vertical_lines() {
        // |Γ(σ + ir)| e^{πr/2} r^{1/2-σ} -> sqrt(2π) as r grows.
        let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
        for &sigma in &[0.5, 1.0, 6.0] {
            for &r in &[1e2, 1e4, 1e6] {
                let lg = log_gamma(c(sigma, r)).unwrap();
                // work in logs: ln|Γ| + πr/2 + (1/2-σ) ln r - ln sqrt(2π)
                let resid =
                    lg.re + std::f64::consts::PI * r / 2.0 + (0.5 - sigma) * r.ln() - sqrt_2pi.ln();
                assert!(
                    resid.abs() < 1.0 / (2.0 * r),
                    "sigma={sigma} r={r} resid={resid:e}"
                );
            }
        }
    }
}
