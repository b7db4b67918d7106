//! Piecewise-linear primitives from sampled data.

use std::path::Path;

use super::PrimitiveFn;
use crate::error::{Error, Result};

/// Default allowed mismatch between the end samples and the declared limits,
/// relative to `max(1, max|F|)`.
pub const SAMPLE_LIMIT_TOL: f64 = 1e-6;

/// Dense data needs no quadrature breakpoints; sparse data gets them all.
const KNOT_LIMIT: usize = 256;

/// Piecewise-linear interpolant through `points`, held at the declared
/// limits outside the sampled range.
pub fn from_samples(points: &[(f64, f64)], limit_neg: f64, limit_pos: f64) -> Result<PrimitiveFn> {
    from_samples_with_tol(points, limit_neg, limit_pos, SAMPLE_LIMIT_TOL)
}

/// As [`from_samples`] with an explicit limit tolerance.
pub fn from_samples_with_tol(points: &[(f64, f64)], limit_neg: f64, limit_pos: f64, tol: f64) -> Result<PrimitiveFn> {
    if points.len() < 2 {
        return Err(Error::Samples("need at least two samples".into()));
    }
    if let Some(p) = points.iter().find(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::Samples(format!("non-finite sample ({}, {})", p.0, p.1)));
    }
    if let Some(w) = points.windows(2).find(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::Samples(format!(
            "abscissae must be strictly increasing ({} then {})",
            w[0].0, w[1].0
        )));
    }
    let scale = points.iter().fold(1.0f64, |m, p| m.max(p.1.abs()));
    let (first, last) = (points[0], points[points.len() - 1]);
    let jump_neg = (first.1 - limit_neg).abs();
    let jump_pos = (last.1 - limit_pos).abs();
    if jump_neg > tol * scale {
        return Err(Error::Samples(format!(
            "first sample {} does not match the limit {limit_neg} at −∞",
            first.1
        )));
    }
    if jump_pos > tol * scale {
        return Err(Error::Samples(format!(
            "last sample {} does not match the limit {limit_pos} at +∞",
            last.1
        )));
    }
    let variation = points.windows(2).map(|w| (w[1].1 - w[0].1).abs()).sum::<f64>() + jump_neg + jump_pos;

    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (xs2, ys2) = (xs.clone(), ys.clone());
    let interp = move |x: f64| -> f64 {
        if x <= xs[0] {
            return limit_neg;
        }
        let n = xs.len();
        if x >= xs[n - 1] {
            return limit_pos;
        }
        let i = xs.partition_point(|&v| v <= x) - 1;
        let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        ys[i] + w * (ys[i + 1] - ys[i])
    };
    let slope = move |x: f64| -> f64 {
        let n = xs2.len();
        if x <= xs2[0] || x >= xs2[n - 1] {
            return 0.0;
        }
        let i = xs2.partition_point(|&v| v <= x) - 1;
        (ys2[i + 1] - ys2[i]) / (xs2[i + 1] - xs2[i])
    };
    let mut p = PrimitiveFn::new("samples", interp)
        .with_limits(limit_neg, limit_pos)
        .with_density(slope)
        .with_variation(variation)
        .with_window(first.0, last.0);
    if points.len() <= KNOT_LIMIT {
        p = p.with_knots(points.iter().map(|p| p.0));
    }
    if limit_neg == 0.0 {
        p = p.with_support(first.0, last.0);
    }
    Ok(p)
}

/// Reads two-column `x,value` CSV; a non-numeric first row is a header.
pub fn read_samples_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::Samples(format!("row {} has {} columns, expected 2", i + 1, rec.len())));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => out.push((x, y)),
            _ if i == 0 => continue,
            _ => return Err(Error::Samples(format!("row {} is not numeric", i + 1))),
        }
    }
    Ok(out)
}
