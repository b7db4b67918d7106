//! Constructors for the closed-form primitives behind the catalog.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::accumulate::{accumulate_from_origin, CumulativeIntegral};
use super::cantor::{cantor_eval, cantor_measure_integral, CANTOR_DEPTH};
use super::weierstrass::Weierstrass;
use super::{Growth, Params, PrimitiveFn, RealFn};
use crate::error::{Error, Result};
use crate::kernel::{gauss, hermite_coefficients, theta_signed};
use crate::realline::erfc_tail;

const NAMES: &[&str] = &[
    "zero",
    "gauss",
    "gauss-cdf",
    "step-ramp",
    "ramp",
    "cantor",
    "weierstrass",
    "alg-sing",
    "poly",
    "hermite",
    "sin",
    "chirp-re",
    "chirp-im",
    "neg-gauss",
    "non-lp",
];

/// Names accepted by [`make_closed_form`].
pub fn closed_form_names() -> &'static [&'static str] {
    NAMES
}

fn positive(name: &str, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("`{name}` needs {key} > 0, got {v}")))
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Builds the named primitive with its metadata.
pub fn make_closed_form(name: &str, params: &Params) -> Result<PrimitiveFn> {
    match name {
        "zero" => {
            params.check_known(name, &[])?;
            Ok(PrimitiveFn::new("zero", |_| 0.0)
                .with_limits(0.0, 0.0)
                .with_density(|_| 0.0)
                .with_variation(0.0)
                .with_window(-1.0, 1.0))
        }
        "gauss" => {
            params.check_known(name, &["s"])?;
            let s = positive(name, "s", params.get_or("s", 0.5))?;
            let r = 10.0 * s.sqrt();
            Ok(PrimitiveFn::new(format!("gauss:s={s}"), move |x| gauss(s, x))
                .with_limits(0.0, 0.0)
                .with_density(move |x| -x / (2.0 * s) * gauss(s, x))
                .with_variation(1.0 / (PI * s).sqrt())
                .with_window(-r, r))
        }
        "gauss-cdf" => {
            params.check_known(name, &["s"])?;
            let s = positive(name, "s", params.get_or("s", 0.5))?;
            let r = 10.0 * s.sqrt();
            let k = 1.0 / (2.0 * s.sqrt());
            Ok(PrimitiveFn::new(format!("gauss-cdf:s={s}"), move |x| 0.5 * erfc_tail(-x * k))
                .with_limits(0.0, 1.0)
                .with_density(move |x| gauss(s, x))
                .with_variation(1.0)
                .with_window(-r, r))
        }
        "step-ramp" => {
            params.check_known(name, &[])?;
            ramp("step-ramp", 0.0, 1.0)
        }
        "ramp" => {
            params.check_known(name, &["a", "b"])?;
            ramp("ramp", params.get_or("a", 0.0), params.get_or("b", 1.0))
        }
        "cantor" => {
            params.check_known(name, &["depth"])?;
            let depth = params.get_count("depth", CANTOR_DEPTH)?.max(1);
            let p = PrimitiveFn::new("cantor", move |x| cantor_eval(x, depth))
                .with_limits(0.0, 1.0)
                .with_variation(1.0)
                .with_support(0.0, 1.0)
                .with_knots([0.0, 1.0]);
            // Below double precision the truncated staircase and the measure agree.
            Ok(if depth >= 53 { p.with_stieltjes(Arc::new(cantor_measure_integral)) } else { p })
        }
        "weierstrass" => {
            params.check_known(name, &["a", "b", "tol"])?;
            let b = params.get_count("b", 3)? as u64;
            let w = Weierstrass::new(params.get_or("a", 0.5), b, params.get_or("tol", 0.05))?;
            Ok(PrimitiveFn::new(format!("weierstrass:terms={}", w.terms()), move |x| w.eval(x) * (-x.abs()).exp())
                .with_limits(0.0, 0.0)
                .with_knots([0.0])
                .with_window(-4.0, 4.0))
        }
        "alg-sing" => {
            params.check_known(name, &["alpha"])?;
            let a = positive(name, "alpha", params.get_or("alpha", 0.5))?;
            Ok(PrimitiveFn::new(format!("alg-sing:alpha={a}"), move |x| {
                if x <= 0.0 {
                    0.0
                } else {
                    x.powf(a) * (-x).exp()
                }
            })
            .with_limits(0.0, 0.0)
            .with_density(move |x| {
                if x <= 0.0 {
                    0.0
                } else {
                    (a * x.powf(a - 1.0) - x.powf(a)) * (-x).exp()
                }
            })
            .with_variation(2.0 * a.powf(a) * (-a).exp())
            .with_knots([0.0])
            .with_window(-1.0, 12.0 + 2.0 * a))
        }
        "poly" => {
            params.check_known(name, &["n"])?;
            let n = params.get_count("n", 2)?;
            let np1 = (n + 1) as i32;
            Ok(PrimitiveFn::new(format!("poly:n={n}"), move |x| x.powi(np1) / np1 as f64)
                .with_growth(Growth::Subgaussian)
                .with_density(move |x| x.powi(n as i32))
                .with_window(-5.0, 5.0))
        }
        "hermite" => {
            params.check_known(name, &["n"])?;
            let n = params.get_count("n", 2)?;
            let up = hermite_coefficients(n + 1)?;
            let down = hermite_coefficients(n)?;
            let c0 = up[0];
            let scale = 1.0 / (2.0 * (n + 1) as f64);
            Ok(PrimitiveFn::new(format!("hermite:n={n}"), move |x| (horner(&up, x) - c0) * scale)
                .with_growth(Growth::Subgaussian)
                .with_density(move |x| horner(&down, x))
                .with_window(-5.0, 5.0))
        }
        "sin" => {
            params.check_known(name, &["s"])?;
            let s = positive(name, "s", params.get_or("s", 1.0))?;
            let r = 4.0 * PI / s;
            Ok(PrimitiveFn::new(format!("sin:s={s}"), move |x| (1.0 - (s * x).cos()) / s)
                .with_density(move |x| (s * x).sin())
                .with_window(-r, r))
        }
        "chirp-re" | "chirp-im" => {
            params.check_known(name, &["s"])?;
            let s = positive(name, "s", params.get_or("s", 1.0))?;
            chirp(s, name == "chirp-im")
        }
        "neg-gauss" => {
            params.check_known(name, &["s"])?;
            let s = positive(name, "s", params.get_or("s", 2.0))?;
            let d: RealFn = Arc::new(move |x| theta_signed(-s, x).unwrap_or(f64::NAN));
            let p = accumulate_from_origin(&format!("neg-gauss:s={s}"), d, Growth::Weighted(s), 24.0 * s.sqrt(), &[])?;
            let r = 6.0 * s.sqrt();
            Ok(p.with_window(-r, r))
        }
        "non-lp" => {
            params.check_known(name, &["s", "N", "t"])?;
            let s = positive(name, "s", params.get_or("s", 1.0))?;
            let t = positive(name, "t", params.get_or("t", 1.0))?;
            let big_n = params.get_count("N", 10)?.max(1);
            let terms: Vec<(f64, f64)> = (1..=big_n)
                .map(|n| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let a = 1.0 / ((n + 1) as f64).ln();
                    (sign * a, 2.0 * (n * n) as f64 * (s + t).sqrt())
                })
                .collect();
            let total: f64 = terms.iter().map(|(c, _)| c).sum();
            let k = 1.0 / (2.0 * s.sqrt());
            let t1 = terms.clone();
            let t2 = terms.clone();
            let hi = terms.last().expect("N ≥ 1").1 + 10.0 * s.sqrt();
            Ok(PrimitiveFn::new(format!("non-lp:s={s},N={big_n}"), move |x| {
                t1.iter().map(|&(c, b)| c * 0.5 * erfc_tail(-(x - b) * k)).sum()
            })
            .with_limits(0.0, total)
            .with_density(move |x| t2.iter().map(|&(c, b)| c * gauss(s, x - b)).sum())
            .with_window(-10.0 * s.sqrt(), hi))
        }
        other => Err(Error::UnknownKey(other.to_string())),
    }
}

fn ramp(label: &str, a: f64, b: f64) -> Result<PrimitiveFn> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("ramp needs a < b, got a = {a}, b = {b}")));
    }
    Ok(PrimitiveFn::new(label, move |x| (x - a).clamp(0.0, b - a))
        .with_limits(0.0, b - a)
        .with_density(move |x| if x > a && x < b { 1.0 } else { 0.0 })
        .with_variation(b - a)
        .with_support(a, b)
        .with_knots([a, b]))
}

/// Primitive of `cos(x²/(4s))` (or `sin`) normalised to vanish at `−∞`.
/// Tabulated near the origin, asymptotic series in the tails.
fn chirp(s: f64, imaginary: bool) -> Result<PrimitiveFn> {
    let a = 1.0 / (4.0 * s);
    let pick = move |z: Complex64| if imaginary { z.im } else { z.re };
    let half = 0.5 * (2.0 * PI * s).sqrt();
    let density: RealFn = Arc::new(move |x: f64| {
        let p = a * x * x;
        if imaginary {
            p.sin()
        } else {
            p.cos()
        }
    });
    let rc = 40.0 * s.sqrt();
    let cum = CumulativeIntegral::new(density.clone(), -rc, rc, 2048, 1024, &[], true)?;
    let tail = move |x: f64| -> f64 {
        let mut c = Complex64::new(0.0, 1.0 / (2.0 * a * x));
        let mut sum = c;
        for k in 1..12 {
            c *= Complex64::new(0.0, -((2 * k - 1) as f64) / (2.0 * a * x * x));
            sum += c;
        }
        pick(Complex64::from_polar(1.0, a * x * x) * sum)
    };
    let eval = move |x: f64| -> f64 {
        if x.abs() <= rc {
            half + cum.eval(x)
        } else if x > 0.0 {
            2.0 * half - tail(x)
        } else {
            tail(-x)
        }
    };
    let label = if imaginary { "chirp-im" } else { "chirp-re" };
    Ok(PrimitiveFn::new(format!("{label}:s={s}"), eval)
        .with_limits(0.0, 2.0 * half)
        .with_shared_density(Some(density))
        .with_window(-8.0 * s.sqrt(), 8.0 * s.sqrt()))
}
