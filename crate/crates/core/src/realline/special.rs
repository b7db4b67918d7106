//! Complementary error function and its scaled variant.

use std::f64::consts::PI;

/// Complementary error function `erfc(x) = (2/√π)∫_x^∞ e^{-y²} dy`.
///
/// Inside `|x| ≤ 25` this is the correctly rounded-to-a-few-ulps libm kernel.
/// Beyond it the leading terms of the asymptotic series are used, which
/// underflow to zero shortly after.
pub fn erfc_tail(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() <= 25.0 {
        libm::erfc(x)
    } else if x > 0.0 {
        asymptotic(x)
    } else {
        2.0 - asymptotic(-x)
    }
}

fn asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (x * x);
    (-x * x).exp() / (x * PI.sqrt()) * (1.0 - 0.5 * inv + 0.75 * inv * inv)
}

/// Scaled complementary error function `e^{x²} erfc(x)` for `x ≥ 0`.
pub fn erfcx(x: f64) -> f64 {
    if x < 26.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        let inv = 1.0 / (x * x);
        1.0 / (x * PI.sqrt()) * (1.0 - 0.5 * inv + 0.75 * inv * inv - 1.875 * inv * inv * inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(erfc_tail(0.0), 1.0);
        assert!((erfc_tail(1.0) - 0.157_299_207_050_285_13).abs() < 1e-16);
        assert!((erfc_tail(-10.0) - 2.0).abs() < 1e-15);
        assert!(erfc_tail(30.0) >= 0.0);
    }

    #[test]
    fn asymptotic_branch_matches_libm_at_the_seam() {
        let x = 25.0;
        let rel = (asymptotic(x) - libm::erfc(x)).abs() / libm::erfc(x);
        assert!(rel < 1e-5, "{rel}");
    }

    #[test]
    fn scaled_variant_is_continuous() {
        let a = erfcx(26.0 - 1e-12);
        let b = erfcx(26.0);
        assert!((a - b).abs() / b < 1e-8);
    }
}
