//! Divisor power sums σ_s(n) = Σ_{d | n} d^s with complex exponent.

use num_complex::Complex64;

/// All divisors of n in ascending order (trial division; n here never
/// exceeds a few times 1e5).
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of n >= 1 only");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// σ_s(n) = Σ_{d|n} d^s, summed in ascending divisor order for determinism.
pub fn divisor_sigma(n: u64, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for d in divisors(n) {
        acc += (s * (d as f64).ln()).exp();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counting_and_summing_divisors() {
        // σ_0(12) = 6 divisors; σ_1(6) = 12.
        let d12 = divisor_sigma(12, Complex64::new(0.0, 0.0));
        assert!((d12.re - 6.0).abs() < 1e-13 && d12.im.abs() < 1e-13);
        let s6 = divisor_sigma(6, Complex64::new(1.0, 0.0));
        assert!((s6.re - 12.0).abs() < 1e-12);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn purely_imaginary_exponent_is_conjugate_symmetric() {
        for n in [2u64, 15, 64, 97, 720] {
            let s = Complex64::new(0.0, 2.0 * 7.3);
            let a = divisor_sigma(n, s);
            let b = divisor_sigma(n, -s);
            assert!((a - b.conj()).norm() < 1e-13, "n={n}");
        }
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(a in 1u64..400, b in 1u64..400) {
            prop_assume!(gcd(a, b) == 1);
            let s = Complex64::new(0.37, -1.1);
            let lhs = divisor_sigma(a * b, s);
            let rhs = divisor_sigma(a, s) * divisor_sigma(b, s);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
        }

        #[test]
        fn imaginary_order_bounded_by_divisor_count(n in 1u64..2000, t in -30.0f64..30.0) {
            let v = divisor_sigma(n, Complex64::new(0.0, t)).norm();
            let d = divisors(n).len() as f64;
            prop_assert!(v <= d + 1e-10);
        }
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
}
