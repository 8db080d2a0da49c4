//! Log-scaled floating point values.
//!
//! The spectral-parameter regimes explored here routinely produce factors like
//! e^{-pi r} with r ~ 1e4, far below the f64 underflow threshold, multiplied
//! by compensating factors of the same magnitude.  We therefore carry values
//! as `mantissa * exp(log_scale)` and only collapse to a bare f64/Complex64 at
//! the very end of an assembled expression, where the combined scale is tame.

use num_complex::Complex64;

/// A real value `mantissa * exp(log_scale)` with |mantissa| in [1, 2) (or 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    log_scale: f64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        log_scale: 0.0,
    };

    /// Build from `value * exp(extra_log)`, renormalizing the mantissa.
    pub fn from_parts(value: f64, extra_log: f64) -> ScaledReal {
        if value == 0.0 {
            return ScaledReal::ZERO;
        }
        // Pull the power of two out of `value` so the mantissa stays O(1).
        let e = value.abs().log2().floor();
        let mantissa = value / f64::exp2(e);
        ScaledReal {
            mantissa,
            log_scale: extra_log + e * std::f64::consts::LN_2,
        }
    }

    pub fn new(value: f64) -> ScaledReal {
        ScaledReal::from_parts(value, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// ln |value|; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.log_scale
        }
    }

    /// Collapse to f64.  Underflows to 0 / overflows to inf like exp would.
    pub fn value(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Value of `self * exp(shift)`; useful for comparing against externally
    /// scaled references.
    pub fn value_mul_exp(&self, shift: f64) -> f64 {
        self.mantissa * (self.log_scale + shift).exp()
    }

    pub fn mul(&self, other: &ScaledReal) -> ScaledReal {
        ScaledReal::from_parts(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
    }

    pub fn scale_by(&self, factor: f64, extra_log: f64) -> ScaledReal {
        ScaledReal::from_parts(self.mantissa * factor, self.log_scale + extra_log)
    }
}

/// Complex analogue: `mantissa * exp(log_scale)` with |mantissa| in [1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    log_scale: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mantissa: Complex64::new(0.0, 0.0),
        log_scale: 0.0,
    };

    pub fn from_parts(value: Complex64, extra_log: f64) -> ScaledComplex {
        let n = value.norm();
        if n == 0.0 {
            return ScaledComplex::ZERO;
        }
        let e = n.log2().floor();
        ScaledComplex {
            mantissa: value / f64::exp2(e),
            log_scale: extra_log + e * std::f64::consts::LN_2,
        }
    }

    pub fn new(value: Complex64) -> ScaledComplex {
        ScaledComplex::from_parts(value, 0.0)
    }

    /// exp(w) for complex w, kept in scaled form.
    pub fn exp(w: Complex64) -> ScaledComplex {
        ScaledComplex::from_parts(Complex64::new(w.im.cos(), w.im.sin()), w.re)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm_sqr() == 0.0
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        ScaledComplex::from_parts(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
    }

    pub fn mul_complex(&self, c: Complex64) -> ScaledComplex {
        ScaledComplex::from_parts(self.mantissa * c, self.log_scale)
    }

    pub fn add(&self, other: &ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.log_scale >= other.log_scale {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (lo.log_scale - hi.log_scale).exp();
        ScaledComplex::from_parts(hi.mantissa + lo.mantissa * shift, hi.log_scale)
    }

    /// Collapse to Complex64, applying an extra exp(shift).
    pub fn value_mul_exp(&self, shift: f64) -> Complex64 {
        self.mantissa * (self.log_scale + shift).exp()
    }

    pub fn value(&self) -> Complex64 {
        self.value_mul_exp(0.0)
    }
}

impl From<ScaledReal> for ScaledComplex {
    fn from(r: ScaledReal) -> ScaledComplex {
        ScaledComplex {
            mantissa: Complex64::new(r.mantissa, 0.0),
            log_scale: r.log_scale,
        }
    }
}
