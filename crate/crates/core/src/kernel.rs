//! The Gauss–Weierstrass kernel `Θ_t(x) = (4π|t|)^{-1/2} e^{-x²/(4t)}`, its
//! derivatives in Hermite form and the variation constants `c_n`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::realline::{sign_changes, DecayHint, Quadrature};

/// Largest Hermite degree the table will grow to.
pub const HERMITE_CAP: usize = 128;
const HERMITE_DEFAULT: usize = 32;

/// Exponents beyond this are treated as a hard underflow to zero.
const UNDERFLOW: f64 = 745.0;

/// Integer coefficient rows of the physicists' Hermite polynomials, built by
/// `H_{n+1} = 2x H_n − 2n H_{n−1}`. Row `n` lists coefficients from `x^0` up.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    rows: Vec<Vec<BigInt>>,
    floats: Vec<Arc<[f64]>>,
}

impl HermiteTable {
    pub fn new(max: usize) -> Self {
        let mut t = HermiteTable {
            rows: vec![vec![BigInt::from(1)]],
            floats: Vec::new(),
        };
        t.extend_to(max);
        t
    }

    pub fn max_degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(|r| r.as_slice())
    }

    fn float_row(&self, n: usize) -> Option<Arc<[f64]>> {
        self.floats.get(n).cloned()
    }

    fn extend_to(&mut self, max: usize) {
        while self.rows.len() <= max {
            let n = self.rows.len() - 1;
            let cur = &self.rows[n];
            let mut next = vec![BigInt::zero(); n + 2];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += c * 2;
            }
            if n >= 1 {
                for (k, c) in self.rows[n - 1].iter().enumerate() {
                    next[k] -= c * (2 * n as i64);
                }
            }
            self.rows.push(next);
        }
        while self.floats.len() < self.rows.len() {
            let r = &self.rows[self.floats.len()];
            let f: Vec<f64> = r.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
            self.floats.push(f.into());
        }
    }
}

fn table() -> &'static RwLock<HermiteTable> {
    static TABLE: OnceLock<RwLock<HermiteTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HermiteTable::new(HERMITE_DEFAULT)))
}

/// Floating coefficients of `H_n`, growing the shared table on demand.
pub fn hermite_coefficients(n: usize) -> Result<Arc<[f64]>> {
    if n > HERMITE_CAP {
        return Err(Error::InvalidParameter(format!(
            "Hermite degree {n} exceeds the cap {HERMITE_CAP}"
        )));
    }
    if let Some(row) = table().read().expect("hermite table poisoned").float_row(n) {
        return Ok(row);
    }
    let mut w = table().write().expect("hermite table poisoned");
    w.extend_to(n);
    Ok(w.float_row(n).expect("row was just built"))
}

/// Exact integer coefficients of `H_n`.
pub fn hermite_integer_row(n: usize) -> Result<Vec<BigInt>> {
    hermite_coefficients(n)?;
    let r = table().read().expect("hermite table poisoned");
    Ok(r.row(n).expect("row exists").to_vec())
}

/// Horner's scheme with error-free transformations, roughly twice the
/// working precision.
fn compensated_horner(c: &[f64], x: f64) -> f64 {
    let mut s = match c.last() {
        Some(&v) => v,
        None => return 0.0,
    };
    let mut err: f64 = 0.0;
    for &a in c.iter().rev().skip(1) {
        let p = s * x;
        let pe = s.mul_add(x, -p);
        let sum = p + a;
        let z = sum - p;
        let se = (p - (sum - z)) + (a - z);
        s = sum;
        err = err.mul_add(x, pe + se);
    }
    s + err
}

/// `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    Ok(compensated_horner(&hermite_coefficients(n)?, x))
}

/// `Θ_t(x)` for `t > 0`.
pub fn theta(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "theta needs t > 0, got {t}; use theta_signed for negative times"
        )));
    }
    Ok(gauss(t, x))
}

/// `Θ_t(x)` for any `t ≠ 0`; for `t < 0` this grows like `e^{x²/(4|t|)}`.
pub fn theta_signed(t: f64, x: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("theta_signed needs t ≠ 0, got {t}")));
    }
    Ok(gauss(t, x))
}

#[inline]
pub(crate) fn gauss(t: f64, x: f64) -> f64 {
    let e = x * x / (4.0 * t);
    if e > UNDERFLOW {
        return 0.0;
    }
    (-e).exp() / (4.0 * PI * t.abs()).sqrt()
}

/// `Θ_t^{(m)}(x) = (−2√t)^{−m} Θ_t(x) H_m(x/(2√t))`.
pub fn theta_deriv(m: usize, t: f64, x: f64) -> Result<f64> {
    Ok(KernelEval::new(t, m)?.eval(x))
}

/// Pre-validated evaluator for `Θ_t^{(m)}`.
#[derive(Debug, Clone)]
pub struct KernelEval {
    t: f64,
    order: usize,
    coeffs: Arc<[f64]>,
    factor: f64,
    inv_scale: f64,
    inv_4t: f64,
}

impl KernelEval {
    /// `t` may be negative only for `m = 0`.
    pub fn new(t: f64, m: usize) -> Result<Self> {
        if t == 0.0 || !t.is_finite() || (t < 0.0 && m > 0) {
            return Err(Error::InvalidParameter(format!(
                "kernel of order {m} needs t > 0 (or t ≠ 0 for order 0), got {t}"
            )));
        }
        let coeffs = hermite_coefficients(m)?;
        let sq = t.abs().sqrt();
        Ok(KernelEval {
            t,
            order: m,
            coeffs,
            factor: (-2.0 * sq).powi(-(m as i32)) / (4.0 * PI * t.abs()).sqrt(),
            inv_scale: 1.0 / (2.0 * sq),
            inv_4t: 1.0 / (4.0 * t),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let e = x * x * self.inv_4t;
        if e > UNDERFLOW {
            return 0.0;
        }
        let g = self.factor * (-e).exp();
        if self.order == 0 {
            g
        } else {
            g * compensated_horner(&self.coeffs, x * self.inv_scale)
        }
    }

    /// `∫_x^∞ Θ_t^{(m)}(ξ) dξ`, i.e. `−Θ_t^{(m−1)}(x)` for `m ≥ 1`.
    pub fn upper_tail(&self, x: f64) -> Result<f64> {
        if self.order == 0 {
            Ok(0.5 * crate::realline::erfc_tail(x * self.inv_scale))
        } else {
            Ok(-KernelEval::new(self.t, self.order - 1)?.eval(x))
        }
    }
}

/// `c_n = (2^n √π)^{-1} ∫ e^{-x²}|H_n(x)| dx`, so that `V Θ_t^{(n−1)} = c_n t^{−n/2}`.
///
/// The integrand is split at the `n` real roots of `H_n`, isolated by
/// sign-change bisection on the table polynomial.
pub fn kernel_variation_constant(n: usize, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("c_n needs n ≥ 1".into()));
    }
    let c = hermite_coefficients(n)?;
    let h = |y: f64| compensated_horner(&c, y);
    let bound = (2.0 * n as f64 + 2.0).sqrt();
    let roots = sign_changes(&h, -bound, bound, 400 * n + 1);
    if roots.len() != n {
        return Err(Error::RootIsolation {
            expected: n,
            found: roots.len(),
        });
    }
    let q = Quadrature::new(tol).with_breakpoints(roots);
    let r = q.real_line(|y| (-y * y).exp() * h(y).abs(), DecayHint::gaussian(1.0, 0.0)?)?;
    Ok(r.value / (2f64.powi(n as i32) * PI.sqrt()))
}

/// Right-hand side of the Cramér-type bound `c_n ≤ 1.087 √(n!) 2^{(1−n)/2}`.
pub fn cramer_bound(n: usize) -> f64 {
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    1.087 * (0.5 * log_fact).exp() * 2f64.powf((1.0 - n as f64) / 2.0)
}
