//! Partial sums of Weierstrass's nowhere-differentiable series.

use std::f64::consts::PI;

use super::cantor::decompose;
use crate::error::{Error, Result};

/// Most terms a partial sum may use.
pub const MAX_TERMS: usize = 200;

/// `w(x) = Σ_{k<K} a^k cos(b^k π x)` with `K` the first index where
/// `a^K/(1-a) < tol`.
///
/// The phase `b^k x mod 2` is reduced exactly: `x` is a dyadic rational and
/// `b` is odd, so the reduction is integer arithmetic modulo a power of two.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    a: f64,
    b: u64,
    powers: Vec<u128>,
    weights: Vec<f64>,
}

impl Weierstrass {
    /// Requires `0 < a < 1`, odd `b ≥ 3` and `ab ≥ 1`.
    pub fn new(a: f64, b: u64, tol: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!("weierstrass needs 0 < a < 1, got {a}")));
        }
        if b < 3 || b % 2 == 0 {
            return Err(Error::InvalidParameter(format!("weierstrass needs an odd b ≥ 3, got {b}")));
        }
        if (a * b as f64) < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "weierstrass needs ab ≥ 1 for nowhere differentiability, got {}",
                a * b as f64
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        let mut k = 1;
        while a.powi(k as i32) / (1.0 - a) >= tol {
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::InvalidParameter(format!(
                    "tolerance {tol} needs more than {MAX_TERMS} terms"
                )));
            }
        }
        let mut powers = Vec::with_capacity(k);
        let mut p: u128 = 1;
        for _ in 0..k {
            powers.push(p);
            p = p.wrapping_mul(b as u128);
        }
        let weights = (0..k).map(|j| a.powi(j as i32)).collect();
        Ok(Weierstrass { a, b, powers, weights })
    }

    pub fn terms(&self) -> usize {
        self.powers.len()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `b^k x mod 2` in `[0, 2)`.
    fn phase(&self, k: usize, x: f64) -> f64 {
        let (m, e) = decompose(x);
        if e >= 1 {
            return 0.0;
        }
        let bits = (1 - e) as u32;
        if bits <= 127 {
            let mask = (1u128 << bits) - 1;
            let r = self.powers[k].wrapping_mul(m as u128) & mask;
            r as f64 * 2f64.powi(e)
        } else {
            ((self.b as f64).powi(k as i32) * x.abs()).rem_euclid(2.0)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !x.is_finite() {
            return f64::NAN;
        }
        self.weights
            .iter()
            .enumerate()
            .map(|(k, w)| w * (PI * self.phase(k, x)).cos())
            .sum()
    }
}

/// Weierstrass partial sum at `x`, see [`Weierstrass`].
pub fn weierstrass_eval(x: f64, a: f64, b: u64, tol: f64) -> Result<f64> {
    Ok(Weierstrass::new(a, b, tol)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_values() {
        let w = Weierstrass::new(0.5, 3, 1e-12).unwrap();
        assert!((w.eval(0.0) - 2.0).abs() < 1e-12);
        // Every b^k is odd, so each cosine at x = 1 is −1.
        assert!((w.eval(1.0) + 2.0).abs() < 1e-12);
        assert!((w.eval(2.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn phase_matches_naive_for_small_products() {
        let w = Weierstrass::new(0.5, 3, 1e-6).unwrap();
        for &x in &[0.1f64, 0.37, -1.25, 3.0e-3, 7.5] {
            for k in 0..8 {
                let naive = (3f64.powi(k as i32) * x.abs()).rem_euclid(2.0);
                assert!((w.phase(k, x) - naive).abs() < 1e-9, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn partial_sums_are_cauchy() {
        let a = 0.5f64;
        for k in 5..20 {
            let tol_k = a.powi(k) / (1.0 - a);
            let s1 = Weierstrass::new(a, 3, tol_k * 1.000_001).unwrap();
            let s2 = Weierstrass::new(a, 3, tol_k * 0.5 * 1.000_001).unwrap();
            let x = 0.318;
            let gap = (s1.eval(x) - s2.eval(x)).abs();
            let dk = s2.terms() - s1.terms();
            assert!(gap <= a.powi(s1.terms() as i32) * dk as f64 + 1e-15);
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(Weierstrass::new(1.2, 3, 1e-6).is_err());
        assert!(Weierstrass::new(0.5, 4, 1e-6).is_err());
        assert!(Weierstrass::new(0.2, 3, 1e-6).is_err());
    }
}
