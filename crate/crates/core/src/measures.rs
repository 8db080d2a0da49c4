//! Spectral pair measures μ_{r',r''}(f) and their window averages μ_h(f),
//! each computed by two genuinely independent routes.
//!
//! For a test function f of weight 2k — an incomplete Eisenstein series
//! F_{ψ,k} or y^k times a holomorphic cusp form — the pairing is
//!
//! ```text
//!     μ_{r',r''}(f) = ∫_D f(z) · conj(E(z, 1/2+ir')) · E_{2k}(z, 1/2+ir'') dx dy / y²
//! ```
//!
//! over the modular fundamental domain D.  The phase cocycles of f and of
//! the weight-2k series cancel exactly, so the integrand is Γ-invariant and
//! the integral is well defined.  Routes:
//!
//!   * [`mu_pair_quadrature`] integrates the product literally over the
//!     truncated domain, in (x, log y) coordinates with Gauss–Legendre
//!     panels sized to the oscillation budget;
//!   * [`mu_pair_unfolded_weight0`] and [`mu_pair_unfolded_weight2k`] unfold
//!     the incomplete series against the Fourier expansions of the two
//!     Eisenstein factors.  What remains is a four-term Mellin constant
//!     piece plus a divisor-weighted coefficient sum of K·K (weight 0) or
//!     K·W (weight 2k) products over the ψ-support:
//!
//! ```text
//!     weight 0:   L(iΔr) + φ̄'φ''L(−iΔr) + φ''L(iΣr) + φ̄'L(−iΣr)
//!               + 8/(ξ(1−2ir')ξ(1+2ir'')) Σ_n n^{−iΔr} σ_{2ir'}(n) σ_{−2ir''}(n)
//!                   ∫ ψ(y) K_{ir'}(2πny) K_{ir''}(2πny) dy/y
//! ```
//!
//! with L = L_ψ the Mellin transform, φ̄' = φ(1/2−ir'), φ'' = φ(1/2+ir'');
//! the weight-2k variant carries a Γ-ratio on the reflected constant terms
//! and replaces the second K by the two Whittaker branches
//! W_{±k,ir''}(4πny)/Γ(1/2±k+ir'').  The two routes share nothing beyond
//! the special-function layer, so their agreement is the strongest internal
//! consistency check in the crate.
//!
//! [`rankin_selberg_check`] exercises the holomorphic variant, where the
//! unfolded integral has a closed form: a Γ-kernel times a product of
//! shifted L-values over a zeta factor.  Both sides are returned so the
//! caller can compare a quadrature+coefficient-sum evaluation against the
//! fully factored one.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::asymptotics::{main_term_weight0, MainTermRegime};
use crate::eisenstein::{
    eisenstein_weight0, eisenstein_weight2k, incomplete_eisenstein_eval, TruncationPolicy,
    UpperHalfPoint,
};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, oscillation_panels, pairwise_sum_complex};
use crate::scaled::ScaledComplex;
use crate::specfun::bessel_k::R_MAX as BESSEL_R_MAX;
use crate::specfun::{
    bessel_k_imag, divisor_sigma, divisors, flush_cutoff, log_gamma, mellin_of_bump,
    phi_scattering, riemann_zeta, whittaker_w, whittaker_w_batch, xi_log, BumpSpec,
    QuasimodeProfile, SpectralPair,
};

/// Largest |k| (half the test-function weight) the Whittaker layer is
/// validated for.
pub const WEIGHT_INDEX_MAX: i32 = 16;

const GL_NODES: usize = 32;
/// Radians of integrand phase per 32-node panel on the 2-D domain grid;
/// roughly eight Gauss–Legendre nodes per oscillation period.
const DOMAIN_RAD_PER_PANEL: f64 = 24.0;

/// A compactly supported automorphic test function.
#[derive(Clone, Debug)]
pub enum TestFunction {
    /// F_{ψ,k}(z) = Σ_{Γ_∞\Γ} ψ(Im γz) ε_γ(z)^{−2k} with ε_γ = (cz+d)/|cz+d|:
    /// the smooth incomplete Eisenstein series of weight 2k built from the
    /// bump ψ.  Compact support of ψ in (0, ∞) makes F vanish above height
    /// max(support_hi, 1/support_lo).
    IncompleteEisenstein { k: i32, psi: BumpSpec },
    /// y^k F(z) for a holomorphic cusp form F = Σ_{n≥1} c(n) e(nz) of weight
    /// 2k, normalized by c(1) = 1.  `coefficients[i]` stores c(i+1); `n_max`
    /// terms are carried.
    HolomorphicCuspForm {
        k: i32,
        coefficients: Vec<f64>,
        n_max: usize,
    },
}

impl TestFunction {
    pub fn incomplete_eisenstein(k: i32, psi: BumpSpec) -> Result<TestFunction> {
        if k.abs() > WEIGHT_INDEX_MAX {
            return Err(Error::domain(
                "test function",
                format!("weight index {k} outside validated range |k| <= {WEIGHT_INDEX_MAX}"),
            ));
        }
        Ok(TestFunction::IncompleteEisenstein { k, psi })
    }

    pub fn holomorphic_cusp_form(k: i32, coefficients: Vec<f64>) -> Result<TestFunction> {
        if !(1..=WEIGHT_INDEX_MAX).contains(&k) {
            return Err(Error::domain(
                "test function",
                format!("cusp-form weight index {k} outside 1..={WEIGHT_INDEX_MAX}"),
            ));
        }
        if coefficients.is_empty() || coefficients[0] != 1.0 {
            return Err(Error::domain(
                "test function",
                "cusp form must be normalized with c(1) = 1",
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("test function", "non-finite coefficient"));
        }
        let n_max = coefficients.len();
        Ok(TestFunction::HolomorphicCuspForm {
            k,
            coefficients,
            n_max,
        })
    }

    /// The discriminant form Δ(z) = q Π (1−q^m)^24 of weight 12 (k = 6),
    /// with the first `n_max` coefficients τ(n) generated by exact integer
    /// convolution of the pentagonal-number series.
    pub fn discriminant_form(n_max: usize) -> Result<TestFunction> {
        let tau = ramanujan_tau(n_max);
        TestFunction::holomorphic_cusp_form(6, tau.into_iter().map(|t| t as f64).collect())
    }

    /// Half the weight: the k in "weight 2k".
    pub fn weight_index(&self) -> i32 {
        match self {
            TestFunction::IncompleteEisenstein { k, .. } => *k,
            TestFunction::HolomorphicCuspForm { k, .. } => *k,
        }
    }

    /// Pointwise value.  The cusp-form variant returns y^k Σ c(n) e(nz).
    pub fn eval(&self, z: &UpperHalfPoint) -> Complex64 {
        match self {
            TestFunction::IncompleteEisenstein { k, psi } => {
                incomplete_eisenstein_eval(z, psi, *k)
            }
            TestFunction::HolomorphicCuspForm {
                k, coefficients, ..
            } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, &cn) in coefficients.iter().enumerate() {
                    let n = (i + 1) as f64;
                    let decay = -2.0 * PI * n * z.y;
                    if decay < -745.0 {
                        break; // e^{decay} underflows; all later terms too
                    }
                    acc += cn * decay.exp() * Complex64::from_polar(1.0, 2.0 * PI * n * z.x);
                }
                acc * z.y.powi(*k)
            }
        }
    }
}

/// τ(n) for 1 ≤ n ≤ n_max from Δ = q Π_{m≥1} (1 − q^m)^{24}: the pentagonal
/// expansion of Π(1−q^m) convolved to the 24th power in exact integers
/// (coefficients stay far below the i128 range for the table sizes used
/// here).
fn ramanujan_tau(n_max: usize) -> Vec<i128> {
    let len = n_max.max(1);
    let mut euler = vec![0i128; len];
    euler[0] = 1;
    let mut j: i64 = 1;
    loop {
        let g1 = (j * (3 * j - 1) / 2) as usize;
        let g2 = (j * (3 * j + 1) / 2) as usize;
        if g1 >= len && g2 >= len {
            break;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        if g1 < len {
            euler[g1] += sign;
        }
        if g2 < len {
            euler[g2] += sign;
        }
        j += 1;
    }
    let mut pow = euler.clone();
    for _ in 1..24 {
        pow = poly_mul_trunc(&pow, &euler, len);
    }
    pow // τ(n) is the coefficient of q^{n-1} in the product
}

fn poly_mul_trunc(a: &[i128], b: &[i128], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().take(len - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// A pairing value together with its decomposition and honesty bounds.
/// `value = constant_term_part + coefficient_sum_part` up to `tail_bound`,
/// which covers the truncated remainder of the coefficient sum.
/// `prediction` and `rel_deviation` are filled when a closed-form main-term
/// prediction applies (weight 0); they stay `None` otherwise.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub value: Complex64,
    pub constant_term_part: Complex64,
    pub coefficient_sum_part: Complex64,
    pub tail_bound: f64,
    pub prediction: Option<Complex64>,
    pub rel_deviation: Option<f64>,
}

/// Result of the fundamental-domain quadrature with its cusp-tail record.
#[derive(Clone, Copy, Debug)]
pub struct DomainIntegral {
    pub value: Complex64,
    /// Bound on the dropped region y > y_top (exactly zero when the test
    /// function's support ends below the height cap).
    pub cusp_tail_bound: f64,
    /// Height where integration actually stopped.
    pub y_top: f64,
}

fn validate_pair(pair: &SpectralPair) -> Result<()> {
    for r in [pair.r1, pair.r2] {
        if !(r > 0.0 && r <= BESSEL_R_MAX) {
            return Err(Error::domain(
                "pair measure",
                format!("spectral parameter {r} outside validated range (0, {BESSEL_R_MAX}]"),
            ));
        }
    }
    Ok(())
}

/// Ascending Gauss–Legendre grid of `panels`×`nodes` points over [lo, hi],
/// returned as (point, weight) pairs.
pub(crate) fn panel_grid(lo: f64, hi: f64, panels: usize, nodes: usize) -> Vec<(f64, f64)> {
    let (xs, ws) = gauss_legendre(nodes);
    let step = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * step;
        let half = 0.5 * step;
        for (&x, &w) in xs.iter().zip(ws.iter()) {
            out.push((mid + half * x, half * w));
        }
    }
    out
}

/// Scattering values entering the constant term: (φ(1/2−ir'), φ(1/2+ir'')).
fn scattering_pair(pair: &SpectralPair) -> Result<(Complex64, Complex64)> {
    let phi_bar1 = phi_scattering(Complex64::new(0.5, -pair.r1))?;
    let phi2 = phi_scattering(Complex64::new(0.5, pair.r2))?;
    Ok((phi_bar1, phi2))
}

/// Four-term constant piece ∫ψ(y)·[conj CT'·CT''] dy/y² expressed through
/// the Mellin transform; `g2` is the Γ-ratio on the reflected part of the
/// weight-2k factor (exactly 1 at weight 0).
fn constant_term(
    psi: &BumpSpec,
    pair: &SpectralPair,
    g2: Complex64,
    phi_bar1: Complex64,
    phi2: Complex64,
) -> Complex64 {
    let dr = pair.delta_r();
    let sr = pair.sum_r();
    let l = |t: f64| mellin_of_bump(psi, Complex64::new(0.0, t));
    l(dr) + g2 * phi_bar1 * phi2 * l(-dr) + g2 * phi2 * l(sr) + phi_bar1 * l(-sr)
}

/// Γ-ratio Γ(1/2+ir)² / (Γ(1/2−k+ir)Γ(1/2+k+ir)) times (−1)^k, the factor
/// on the reflected constant term of the weight-2k series.  Exactly 1 when
/// k = 0.
fn reflected_gamma_ratio(k: i32, r: f64) -> Result<Complex64> {
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ka = k.abs() as f64;
    let mid = log_gamma(Complex64::new(0.5, r))?;
    let plus = log_gamma(Complex64::new(0.5 + ka, r))?;
    let minus = log_gamma(Complex64::new(0.5 - ka, r))?;
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * (2.0 * mid - plus - minus).exp())
}

/// Unfolded weight-0 pairing of the incomplete Eisenstein series F_ψ against
/// conj(E(·,1/2+ir'))·E(·,1/2+ir'').  Exact decomposition into the Mellin
/// constant piece and the K·K coefficient sum; the sum is truncated only
/// where the Bessel factors are flushed to zero, and the recorded tail bound
/// is the magnitude of the last retained term.
pub fn mu_pair_unfolded_weight0(psi: &BumpSpec, pair: &SpectralPair) -> Result<MeasureReport> {
    validate_pair(pair)?;
    let (r1, r2) = (pair.r1, pair.r2);
    let (phi_bar1, phi2) = scattering_pair(pair)?;
    let ct = constant_term(psi, pair, Complex64::new(1.0, 0.0), phi_bar1, phi2);

    let lx1 = xi_log(Complex64::new(1.0, -2.0 * r1))?;
    let lx2 = xi_log(Complex64::new(1.0, 2.0 * r2))?;
    let fold = -(lx1.re + lx2.re);
    let (lo, hi) = (psi.support_lo, psi.support_hi);
    let panels = oscillation_panels((r1 + r2) * (hi / lo).ln(), 3.0, 8);
    let grid = panel_grid(lo, hi, panels, GL_NODES);
    let dr = pair.delta_r();

    let n_cut = (flush_cutoff(r1).min(flush_cutoff(r2)) / (2.0 * PI * lo)).ceil() as u64;
    let mut terms = Vec::with_capacity(n_cut as usize);
    let mut last_mag = 0.0;
    for n in 1..=n_cut {
        let nf = n as f64;
        let mut inner = 0.0; // ∫ψ K K dy/y, folded by e^{fold}
        for &(y, w) in &grid {
            let x = 2.0 * PI * nf * y;
            let k1 = bessel_k_imag(r1, x)?;
            if k1.is_zero() {
                continue;
            }
            let k2 = bessel_k_imag(r2, x)?;
            if k2.is_zero() {
                continue;
            }
            inner += w * psi.eval(y) / y * k1.mul(&k2).value_mul_exp(fold);
        }
        let a_n = Complex64::from_polar(1.0, -dr * nf.ln())
            * divisor_sigma(n, Complex64::new(0.0, 2.0 * r1))
            * divisor_sigma(n, Complex64::new(0.0, -2.0 * r2));
        let term = a_n * inner;
        last_mag = term.norm();
        terms.push(term);
    }
    let phase = Complex64::from_polar(1.0, -(lx1.im + lx2.im));
    let nsum = 8.0 * phase * pairwise_sum_complex(&terms);
    let tail_bound = 8.0 * last_mag + 1e-15 * (ct.norm() + nsum.norm());
    let value = ct + nsum;
    // The closed-form main term only claims the degenerating regime; outside
    // it (small r_j, poles) the predictor errs out and the fields stay None.
    let prediction = main_term_weight0(psi, pair, MainTermRegime::ExactPhase)
        .ok()
        .map(|p| p.main_term);
    let rel_deviation = prediction.map(|p| (value - p).norm() / p.norm());
    Ok(MeasureReport {
        value,
        constant_term_part: ct,
        coefficient_sum_part: nsum,
        tail_bound,
        prediction,
        rel_deviation,
    })
}

/// Unfolded weight-2k pairing of F_{ψ,k} against
/// conj(E(·,1/2+ir'))·E_{2k}(·,1/2+ir'').  The constant piece carries the
/// Γ-ratio of [`reflected_gamma_ratio`]; the coefficient sum pairs
/// K_{ir'}(2πny) with the symmetric Whittaker bracket
/// W_{k,ir''}(4πny)/Γ(1/2+k+ir'') + W_{−k,ir''}(4πny)/Γ(1/2−k+ir'').
/// The bracket (and the prefactor) are invariant under k → −k, so only |k|
/// matters here; k = 0 is routed to the weight-0 variant's caller instead.
pub fn mu_pair_unfolded_weight2k(
    psi: &BumpSpec,
    k: i32,
    pair: &SpectralPair,
) -> Result<MeasureReport> {
    if k == 0 {
        return Err(Error::domain(
            "pair measure",
            "weight index must be nonzero here; use the weight-0 route",
        ));
    }
    if k.abs() > WEIGHT_INDEX_MAX {
        return Err(Error::domain(
            "pair measure",
            format!("weight index {k} outside validated range |k| <= {WEIGHT_INDEX_MAX}"),
        ));
    }
    validate_pair(pair)?;
    let (r1, r2) = (pair.r1, pair.r2);
    let ka = k.abs();
    let sign = if ka % 2 == 0 { 1.0 } else { -1.0 };
    let (phi_bar1, phi2) = scattering_pair(pair)?;
    let g2 = reflected_gamma_ratio(k, r2)?;
    let ct = constant_term(psi, pair, g2, phi_bar1, phi2);

    let lg_mid = log_gamma(Complex64::new(0.5, r2))?;
    let lg_plus = log_gamma(Complex64::new(0.5 + ka as f64, r2))?;
    let lg_minus = log_gamma(Complex64::new(0.5 - ka as f64, r2))?;
    let lx1 = xi_log(Complex64::new(1.0, -2.0 * r1))?;
    let lx2 = xi_log(Complex64::new(1.0, 2.0 * r2))?;
    // Magnitude bookkeeping: K ~ e^{−πr'/2}, W ~ e^{−πr''/2}, and the
    // prefactor Γ(1/2+ir'')/(ξξ) restores both, so every per-node product
    // below is evaluated with its full exponent folded in one step.
    let fold = lg_mid.re - lx1.re - lx2.re;

    let (lo, hi) = (psi.support_lo, psi.support_hi);
    let panels = oscillation_panels((r1 + r2 + 2.0 * ka as f64) * (hi / lo).ln(), 3.0, 8);
    let mut grid = panel_grid(lo, hi, panels, GL_NODES);
    grid.reverse(); // descending y: the Whittaker batch wants decreasing arguments
    let dr = pair.delta_r();

    let n_cut = (flush_cutoff(r1) / (2.0 * PI * lo)).ceil() as u64;
    let mut terms = Vec::with_capacity(n_cut as usize);
    let mut last_mag = 0.0;
    for n in 1..=n_cut {
        let nf = n as f64;
        let xs: Vec<f64> = grid.iter().map(|&(y, _)| 4.0 * PI * nf * y).collect();
        let wp = whittaker_w_batch(ka, r2, &xs)?;
        let wm = whittaker_w_batch(-ka, r2, &xs)?;
        let mut inner = Complex64::new(0.0, 0.0);
        for (idx, &(y, w)) in grid.iter().enumerate() {
            let kv = bessel_k_imag(r1, 2.0 * PI * nf * y)?;
            if kv.is_zero() {
                continue;
            }
            let tp = kv.mul(&wp[idx]).value_mul_exp(fold - lg_plus.re);
            let tm = kv.mul(&wm[idx]).value_mul_exp(fold - lg_minus.re);
            let bracket = Complex64::from_polar(tp, -lg_plus.im)
                + Complex64::from_polar(tm, -lg_minus.im);
            inner += w * psi.eval(y) * y.sqrt() / (y * y) * bracket;
        }
        let b_n = Complex64::from_polar(nf.powf(-0.5), -dr * nf.ln())
            * divisor_sigma(n, Complex64::new(0.0, 2.0 * r1))
            * divisor_sigma(n, Complex64::new(0.0, -2.0 * r2));
        let term = b_n * inner;
        last_mag = term.norm();
        terms.push(term);
    }
    let pref = 2.0 * sign * Complex64::from_polar(1.0, lg_mid.im - lx1.im - lx2.im);
    let nsum = pref * pairwise_sum_complex(&terms);
    let tail_bound = 2.0 * last_mag + 1e-15 * (ct.norm() + nsum.norm());
    Ok(MeasureReport {
        value: ct + nsum,
        constant_term_part: ct,
        coefficient_sum_part: nsum,
        tail_bound,
        prediction: None,
        rel_deviation: None,
    })
}

/// Direct quadrature of f·conj(E')·E''_{2k} over the fundamental domain
/// truncated at the policy's height cap, in (x, log y) coordinates.  Panel
/// counts follow the integrand's phase budget: Fourier bandwidth of the
/// factors in x, spectral oscillation (r'+r'') per unit log y in the cusp
/// direction.  See [`mu_pair_quadrature_detailed`] for the tail record.
pub fn mu_pair_quadrature(
    f: &TestFunction,
    pair: &SpectralPair,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    Ok(mu_pair_quadrature_detailed(f, pair, policy)?.value)
}

/// [`mu_pair_quadrature`] with the cusp-tail bookkeeping exposed.
pub fn mu_pair_quadrature_detailed(
    f: &TestFunction,
    pair: &SpectralPair,
    policy: &TruncationPolicy,
) -> Result<DomainIntegral> {
    validate_pair(pair)?;
    let k = f.weight_index();
    if k.abs() > WEIGHT_INDEX_MAX {
        return Err(Error::domain(
            "fundamental-domain quadrature",
            format!("weight index {k} outside validated range"),
        ));
    }
    let (r1, r2) = (pair.r1, pair.r2);
    let y_bot = 3.0f64.sqrt() / 2.0;
    let y_cap = policy.height_cap;

    let (y_top, cusp_tail_bound, f_modes) = match f {
        TestFunction::IncompleteEisenstein { psi, .. } => {
            // F vanishes identically above max(hi, 1/lo): the identity coset
            // needs y ≤ hi, every other coset has Im γz ≤ 1/y.
            let y_sup = psi.support_hi.max(1.0 / psi.support_lo);
            if y_cap < y_sup {
                return Err(Error::domain(
                    "fundamental-domain quadrature",
                    format!(
                        "height cap {y_cap} is below the test function's support \
                         ceiling {y_sup}; the cusp tail would not be negligible"
                    ),
                ));
            }
            let modes = (3.0 / (psi.support_lo * y_bot)).ceil() + 4.0;
            (y_sup, 0.0, modes)
        }
        TestFunction::HolomorphicCuspForm { k, .. } => {
            // |y^k F| ≤ 2 y^k e^{−2πy} above moderate heights and the two
            // Eisenstein factors are constant-term dominated (≤ ~2.2√y each),
            // giving tail ≤ 10 Y^{k−1} e^{−2πY}.
            let kf = *k as f64;
            let ln_tail = 10f64.ln() + (kf - 1.0) * y_cap.ln() - 2.0 * PI * y_cap;
            let tail = ln_tail.exp();
            if tail > policy.tail_target {
                return Err(Error::Convergence {
                    context: "fundamental-domain cusp tail",
                    achieved: tail,
                    target: policy.tail_target,
                });
            }
            (y_cap, tail, 10.0)
        }
    };

    // Oscillation budgets.  In x: each Eisenstein factor carries Fourier
    // modes with non-negligible amplitude up to ~(r + 10 r^{1/3})/(2πy) at
    // the domain floor; the test function adds a bounded bandwidth of its
    // own.  In log y: the critical-line factors oscillate at rate ≤ r'+r''.
    let airy = |r: f64| r + 10.0 * (r.cbrt() + 1.0) + 6.0;
    let x_phase = (airy(r1) + airy(r2)) / y_bot + 2.0 * PI * f_modes;
    let px = oscillation_panels(x_phase, DOMAIN_RAD_PER_PANEL, 4);
    let span = (y_top / y_bot).ln();
    let pu = oscillation_panels((r1 + r2 + 12.0) * span, DOMAIN_RAD_PER_PANEL, 3);

    let s1 = Complex64::new(0.5, r1);
    let s2 = Complex64::new(0.5, r2);
    let mut columns = Vec::with_capacity(px * GL_NODES);
    for &(x, wx) in &panel_grid(-0.5, 0.5, px, GL_NODES) {
        let u_lo = (1.0 - x * x).sqrt().ln();
        let mut col = Complex64::new(0.0, 0.0);
        for &(u, wu) in &panel_grid(u_lo, y_top.ln(), pu, GL_NODES) {
            let y = u.exp();
            let z = UpperHalfPoint::new(x, y)?;
            let fv = f.eval(&z);
            // The Eisenstein product is bounded by ~5y here; skip nodes the
            // test function has already killed.
            if fv.norm() * 6.0 * y < 1e-18 {
                continue;
            }
            let e1 = eisenstein_weight0(&z, s1, policy)?.conj();
            let e2 = if k == 0 {
                eisenstein_weight0(&z, s2, policy)?
            } else {
                eisenstein_weight2k(&z, r2, k, policy)?
            };
            col += wu * fv * e1 * e2 / y; // dx dy/y² = dx du / y
        }
        columns.push(wx * col);
    }
    Ok(DomainIntegral {
        value: pairwise_sum_complex(&columns),
        cusp_tail_bound,
        y_top,
    })
}

/// Σ c(n) n^{−v} over the stored coefficient table.
fn dirichlet_series(coefficients: &[f64], v: Complex64) -> Complex64 {
    let terms: Vec<Complex64> = coefficients
        .iter()
        .enumerate()
        .map(|(i, &cn)| cn * (-v * ((i + 1) as f64).ln()).exp())
        .collect();
    pairwise_sum_complex(&terms)
}

/// Rankin–Selberg consistency pair for a holomorphic cusp form: the unfolded
/// Mellin integral
///
/// ```text
///     ∫₀^∞ ∫₀^1 y^{s+ir''} · y^k F(z) · E(z, 1/2−ir') dx dy/y²
/// ```
///
/// computed two ways.  The left route integrates coefficient by coefficient:
/// a single numerical kernel integral ∫ e^{−u/2} u^{a−1} W_{0,ir'}(u) du
/// (the n-dependence scales out) times the divisor-weighted coefficient sum.
/// The right route replaces the kernel by its closed Γ-form
/// Γ(a+1/2+ir')Γ(a+1/2−ir')/Γ(a+1) and the sum by the factored
/// L(v)L(v−2ir')/ζ(2s+2ir''), with a = s+ir''+k−1 and v = s+ir''+k−1/2+ir'.
/// The second spectral coordinate rides the Mellin exponent so that the
/// formal value s = 1/2 recovers the spectral-pairing kernel
/// Γ(k+iΣr)Γ(k−iΔr)/Γ(k+1/2+ir'').
///
/// Requires Re s ≥ k + 3/4: with coefficients bounded by d(n)n^{k−1/2} both
/// the coefficient sum and the L-factors then converge absolutely.
pub fn rankin_selberg_check(
    form: &TestFunction,
    pair: &SpectralPair,
    s: Complex64,
) -> Result<(Complex64, Complex64)> {
    let TestFunction::HolomorphicCuspForm {
        k,
        coefficients,
        n_max,
    } = form
    else {
        return Err(Error::domain(
            "rankin-selberg",
            "expected a holomorphic cusp form",
        ));
    };
    let kf = *k as f64;
    if s.re < kf + 0.75 {
        return Err(Error::Convergence {
            context: "rankin-selberg mellin parameter",
            achieved: s.re,
            target: kf + 0.75,
        });
    }
    // Growth sanity for the supplied table (divisor bound with 1% slack).
    for (i, &cn) in coefficients.iter().enumerate() {
        let n = (i + 1) as u64;
        let bound = divisors(n).len() as f64 * (n as f64).powf(kf - 0.5) * 1.01;
        if cn.abs() > bound {
            return Err(Error::domain(
                "rankin-selberg",
                format!("coefficient c({n}) exceeds the divisor growth bound"),
            ));
        }
    }
    let r1 = pair.r1;
    let sm = s + Complex64::new(0.0, pair.r2);
    let a = sm + (kf - 1.0);

    // Kernel integral, once: J = ∫ e^{−u/2} u^{a−1} W_{0,ir'}(u) du on a log
    // grid.  The integrand dies like u^{Re a + 1/2} at 0 and e^{−u} at ∞.
    let u_lo: f64 = 1e-3;
    let u_hi: f64 = 60f64.max(8.0 * a.re + 20.0);
    let panels = oscillation_panels((r1.abs() + a.im.abs()) * (u_hi / u_lo).ln(), 3.0, 8);
    let mut j_terms = Vec::with_capacity(panels * GL_NODES);
    for &(v, w) in &panel_grid(u_lo.ln(), u_hi.ln(), panels, GL_NODES) {
        let u = v.exp();
        let w0 = whittaker_w(0, r1, u)?;
        let plain = w0.value_mul_exp(a.re * v - 0.5 * u);
        j_terms.push(w * Complex64::from_polar(plain, a.im * v));
    }
    let j_quad = pairwise_sum_complex(&j_terms);
    let j_gamma = (log_gamma(a + Complex64::new(0.5, r1))?
        + log_gamma(a + Complex64::new(0.5, -r1))?
        - log_gamma(a + 1.0)?)
    .exp();

    // Coefficient sum Σ c(n) σ_{2ir'}(n) n^{1/2−sm−k−ir'} against its Euler
    // factorization L(v)L(v−2ir')/ζ(2sm).
    let w_exp = Complex64::new(0.5 - kf, -r1) - sm;
    let sum_terms: Vec<Complex64> = coefficients
        .iter()
        .take(*n_max)
        .enumerate()
        .map(|(i, &cn)| {
            let n = (i + 1) as u64;
            cn * divisor_sigma(n, Complex64::new(0.0, 2.0 * r1))
                * (w_exp * (n as f64).ln()).exp()
        })
        .collect();
    let coeff_sum = pairwise_sum_complex(&sum_terms);
    let v1 = sm + Complex64::new(kf - 0.5, r1);
    let l1 = dirichlet_series(coefficients, v1);
    let l2 = dirichlet_series(coefficients, v1 - Complex64::new(0.0, 2.0 * r1));
    let zeta_den = riemann_zeta(2.0 * sm)?;

    // Common prefactor (4π)^{1−sm−k}/ξ(1−2ir'), kept in log form until the
    // end (1/ξ alone reaches e^{πr'/2}).
    let pref = ScaledComplex::exp(
        (1.0 - sm - kf) * (4.0 * PI).ln() - xi_log(Complex64::new(1.0, -2.0 * r1))?,
    );
    let lhs = pref.mul_complex(j_quad * coeff_sum).value();
    let rhs = pref.mul_complex(j_gamma * l1 * l2 / zeta_den).value();
    Ok((lhs, rhs))
}

/// Window-averaged measure μ_h(f) = ∬ h(r')h̄(r'') μ_{r',r''}(f) dr'dr'' over
/// the profile's stored quadrature rule, with every pair evaluated by the
/// unfolded route.  Restricted to incomplete-Eisenstein test functions: the
/// cusp-form pairing at the spectral point needs L-values on the critical
/// line, outside this crate's validated scope.
///
/// All 64² spectral pairs share one y-grid, per-node Bessel/Whittaker tables
/// and divisor tables, so the cost is one table build plus a cheap fused
/// pair sweep.  No Hermitian shortcut is taken: for weight 0 the imaginary
/// part coming out near zero is a genuine cross-check, not a construction.
pub fn mu_quasimode(
    f: &TestFunction,
    h: &QuasimodeProfile,
    _policy: &TruncationPolicy,
) -> Result<Complex64> {
    let TestFunction::IncompleteEisenstein { k, psi } = f else {
        return Err(Error::domain(
            "quasimode measure",
            "cusp-form windows need critical-line L-values, outside the validated scope",
        ));
    };
    let ka = k.abs();
    if ka > WEIGHT_INDEX_MAX {
        return Err(Error::domain(
            "quasimode measure",
            format!("weight index {k} outside validated range"),
        ));
    }
    let (r_lo, r_hi) = h.support();
    if !(r_lo > 0.0 && r_hi <= BESSEL_R_MAX) {
        return Err(Error::domain(
            "quasimode measure",
            format!("window support [{r_lo}, {r_hi}] outside validated range (0, {BESSEL_R_MAX}]"),
        ));
    }
    let sign = if ka % 2 == 0 { 1.0 } else { -1.0 };
    let (lo, hi) = (psi.support_lo, psi.support_hi);
    let panels = oscillation_panels((2.0 * r_hi + 2.0 * ka as f64) * (hi / lo).ln(), 6.0, 8);
    let mut grid = panel_grid(lo, hi, panels, GL_NODES);
    grid.reverse(); // descending for the Whittaker batches; K does not care
    let n_cut = (flush_cutoff(r_hi) / (2.0 * PI * lo)).ceil() as usize;

    // Hyperbolic kernels over the shared grid.
    let kern_kk: Vec<f64> = grid.iter().map(|&(y, w)| w * psi.eval(y) / y).collect();
    let kern_kw: Vec<f64> = grid
        .iter()
        .map(|&(y, w)| w * psi.eval(y) * y.sqrt() / (y * y))
        .collect();

    // Per-window-node tables.  `kgrid[n-1][idx]` holds K_{ir}(2πny) e^{πr/2}
    // (bounded); `bgrid` holds the weight-2k Whittaker bracket times
    // Γ(1/2+ir) e^{πr/2}; `coef[n-1]` is n^{−ir} σ_{2ir}(n).
    struct NodeTables {
        r: f64,
        cw: f64,
        phi: Complex64,
        lx_minus: Complex64,
        lx_plus: Complex64,
        lg_mid_im: f64,
        g2: Complex64,
        coef: Vec<Complex64>,
        kgrid: Vec<Vec<f64>>,
        bgrid: Vec<Vec<Complex64>>,
    }
    let mut tables = Vec::with_capacity(h.nodes.len());
    for &(r, w) in &h.nodes {
        let lg_mid = log_gamma(Complex64::new(0.5, r))?;
        let (lg_plus, lg_minus) = if ka > 0 {
            (
                log_gamma(Complex64::new(0.5 + ka as f64, r))?,
                log_gamma(Complex64::new(0.5 - ka as f64, r))?,
            )
        } else {
            (lg_mid, lg_mid)
        };
        let mut kgrid = Vec::with_capacity(n_cut);
        let mut bgrid = Vec::with_capacity(if ka > 0 { n_cut } else { 0 });
        let mut coef = Vec::with_capacity(n_cut);
        for n in 1..=n_cut {
            let nf = n as f64;
            let mut krow = Vec::with_capacity(grid.len());
            for &(y, _) in &grid {
                let kv = bessel_k_imag(r, 2.0 * PI * nf * y)?;
                krow.push(kv.value_mul_exp(0.5 * PI * r));
            }
            kgrid.push(krow);
            if ka > 0 {
                let xs: Vec<f64> = grid.iter().map(|&(y, _)| 4.0 * PI * nf * y).collect();
                let wp = whittaker_w_batch(ka, r, &xs)?;
                let wm = whittaker_w_batch(-ka, r, &xs)?;
                let brow: Vec<Complex64> = wp
                    .iter()
                    .zip(wm.iter())
                    .map(|(p, m)| {
                        let tp = p.value_mul_exp(0.5 * PI * r + lg_mid.re - lg_plus.re);
                        let tm = m.value_mul_exp(0.5 * PI * r + lg_mid.re - lg_minus.re);
                        Complex64::from_polar(tp, -lg_plus.im)
                            + Complex64::from_polar(tm, -lg_minus.im)
                    })
                    .collect();
                bgrid.push(brow);
            }
            coef.push(
                Complex64::from_polar(1.0, -r * nf.ln())
                    * divisor_sigma(n as u64, Complex64::new(0.0, 2.0 * r)),
            );
        }
        tables.push(NodeTables {
            r,
            cw: w * h.eval(r),
            phi: phi_scattering(Complex64::new(0.5, r))?,
            lx_minus: xi_log(Complex64::new(1.0, -2.0 * r))?,
            lx_plus: xi_log(Complex64::new(1.0, 2.0 * r))?,
            lg_mid_im: lg_mid.im,
            g2: reflected_gamma_ratio(*k, r)?,
            coef,
            kgrid,
            bgrid,
        });
    }

    let mut pair_terms = Vec::with_capacity(tables.len() * tables.len());
    for ti in &tables {
        for tj in &tables {
            let pair_ij = SpectralPair::new(ti.r, tj.r, 0.5 * (ti.r + tj.r))?;
            let ct = constant_term(psi, &pair_ij, tj.g2, ti.phi.conj(), tj.phi);
            let ln_xi = ti.lx_minus + tj.lx_plus;
            let mut inner = Vec::with_capacity(n_cut);
            if ka == 0 {
                for n in 0..n_cut {
                    let gi = &ti.kgrid[n];
                    let gj = &tj.kgrid[n];
                    let mut dot = 0.0;
                    for idx in 0..kern_kk.len() {
                        dot += kern_kk[idx] * gi[idx] * gj[idx];
                    }
                    inner.push(ti.coef[n] * tj.coef[n].conj() * dot);
                }
            } else {
                for n in 0..n_cut {
                    let gi = &ti.kgrid[n];
                    let bj = &tj.bgrid[n];
                    let mut dot = Complex64::new(0.0, 0.0);
                    for idx in 0..kern_kw.len() {
                        dot += kern_kw[idx] * gi[idx] * bj[idx];
                    }
                    inner.push(
                        ti.coef[n] * tj.coef[n].conj() * ((n + 1) as f64).powf(-0.5) * dot,
                    );
                }
            }
            // Pair multiplier: (8 or 2(−1)^k Γ(1/2+ir''))/(ξ(1−2ir')ξ(1+2ir''))
            // with the e^{π(r'+r'')/2} fold of the cached tables undone.
            let mult = if ka == 0 {
                8.0 * ScaledComplex::exp(-ln_xi).value_mul_exp(-0.5 * PI * (ti.r + tj.r))
            } else {
                2.0 * sign
                    * ScaledComplex::exp(Complex64::new(-ln_xi.re, tj.lg_mid_im - ln_xi.im))
                        .value_mul_exp(-0.5 * PI * (ti.r + tj.r))
            };
            let mu_ij = ct + mult * pairwise_sum_complex(&inner);
            pair_terms.push(ti.cw * tj.cw * mu_ij);
        }
    }
    Ok(pairwise_sum_complex(&pair_terms))
}
