//! Global sup/inf of a continuous function on the extended real line.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of `[-∞, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Extremes of a scanned function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub sup: f64,
    pub inf: f64,
    pub arg_sup: ExtReal,
    pub arg_inf: ExtReal,
    pub refinement_error: f64,
}

/// Grid-and-refine extremum search.
///
/// The line is compactified by `x = tan(u)`. The endpoint values are the
/// declared limits. An optional focus window adds a uniform grid where the
/// caller expects structure. The best local extrema of the scan are then
/// polished by golden-section search.
#[derive(Debug, Clone)]
pub struct ExtremumSearch {
    pub tol: f64,
    pub grid: usize,
    pub focus: Option<(f64, f64)>,
    pub focus_grid: usize,
    pub candidates: usize,
}

impl Default for ExtremumSearch {
    fn default() -> Self {
        ExtremumSearch {
            tol: 1e-8,
            grid: 801,
            focus: None,
            focus_grid: 401,
            candidates: 3,
        }
    }
}

struct Sample {
    u: f64,
    v: f64,
}

impl ExtremumSearch {
    pub fn new(tol: f64) -> Self {
        ExtremumSearch {
            tol,
            ..Default::default()
        }
    }

    pub fn with_focus(mut self, lo: f64, hi: f64) -> Self {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            self.focus = Some((lo, hi));
        }
        self
    }

    pub fn with_grid(mut self, grid: usize, focus_grid: usize) -> Self {
        self.grid = grid.max(3);
        self.focus_grid = focus_grid.max(2);
        self
    }

    /// Scans `f` whose limits at `-∞` and `+∞` are `limits`.
    pub fn run<F>(&self, f: F, limits: (f64, f64)) -> Result<ExtremumReport>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", self.tol)));
        }
        let eval = |x: f64| -> Result<f64> {
            let v = f(x)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation { x })
            }
        };
        let n = self.grid;
        let mut us: Vec<f64> = (0..n)
            .map(|i| -FRAC_PI_2 + std::f64::consts::PI * (i + 1) as f64 / (n + 1) as f64)
            .collect();
        if let Some((lo, hi)) = self.focus {
            let m = self.focus_grid;
            us.extend((0..m).map(|i| (lo + (hi - lo) * i as f64 / (m - 1) as f64).atan()));
        }
        us.sort_by(f64::total_cmp);
        us.dedup();
        let mut samples: Vec<Sample> = us
            .par_iter()
            .map(|&u| {
                eval(u.tan()).map(|v| Sample { u, v })
            })
            .collect::<Result<Vec<_>>>()?;
        samples.insert(
            0,
            Sample {
                u: -FRAC_PI_2,
                v: limits.0,
            },
        );
        samples.push(Sample {
            u: FRAC_PI_2,
            v: limits.1,
        });
        if !limits.0.is_finite() || !limits.1.is_finite() {
            return Err(Error::InvalidParameter("limits at ±∞ must be finite".into()));
        }

        let (sup, arg_sup, err_sup) = self.best(&samples, 1.0, &eval)?;
        let (neg_inf, arg_inf, err_inf) = self.best(&samples, -1.0, &eval)?;
        Ok(ExtremumReport {
            sup,
            inf: -neg_inf,
            arg_sup,
            arg_inf,
            refinement_error: err_sup.max(err_inf),
        })
    }

    /// Largest value of `sign·f`, refined around the leading local maxima.
    fn best<F>(&self, s: &[Sample], sign: f64, eval: &F) -> Result<(f64, ExtReal, f64)>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let last = s.len() - 1;
        let mut best = (sign * s[0].v, ExtReal::NegInf, 0.0);
        if sign * s[last].v > best.0 {
            best = (sign * s[last].v, ExtReal::PosInf, 0.0);
        }
        let mut peaks: Vec<usize> = (1..last)
            .filter(|&i| sign * s[i].v >= sign * s[i - 1].v && sign * s[i].v >= sign * s[i + 1].v)
            .collect();
        peaks.sort_by(|&i, &j| (sign * s[j].v).total_cmp(&(sign * s[i].v)).then(i.cmp(&j)));
        peaks.truncate(self.candidates);
        let refined: Vec<(f64, f64, f64)> = peaks
            .par_iter()
            .map(|&i| self.golden(s[i - 1].u, s[i].u, s[i].v * sign, s[i + 1].u, sign, eval))
            .collect::<Result<Vec<_>>>()?;
        for (v, x, e) in refined {
            if v > best.0 {
                best = (v, ExtReal::Finite(x), e);
            }
        }
        Ok((best.0, best.1, best.2))
    }

    /// Golden-section maximisation of `sign·f(tan u)` on `[a, b]` seeded with
    /// the grid value at `u0`. Returns (value, argument, spread of the final bracket).
    fn golden<F>(&self, mut a: f64, u0: f64, v0: f64, mut b: f64, sign: f64, eval: &F) -> Result<(f64, f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        const R: f64 = 0.618_033_988_749_894_9;
        let g = |u: f64| -> Result<f64> { Ok(sign * eval(u.tan())?) };
        let mut best = (v0, u0.tan());
        let mut c = b - R * (b - a);
        let mut d = a + R * (b - a);
        let mut fc = g(c)?;
        let mut fd = g(d)?;
        let mut spread = (fc - fd).abs();
        for _ in 0..200 {
            let xm = (0.5 * (a + b)).tan();
            if (b - a) * (1.0 + xm * xm) < self.tol {
                break;
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - R * (b - a);
                fc = g(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + R * (b - a);
                fd = g(d)?;
            }
            spread = (fc - fd).abs();
        }
        for (u, v) in [(c, fc), (d, fd)] {
            if v > best.0 {
                best = (v, u.tan());
            }
        }
        Ok((best.0, best.1, spread))
    }
}

/// `sup F` and `inf F` over `[-∞, ∞]` with default search settings.
pub fn sup_inf<F>(f: F, limits: (f64, f64), tol: f64) -> Result<ExtremumReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    ExtremumSearch::new(tol).run(|x| Ok(f(x)), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_peak() {
        let r = sup_inf(|x| (-x * x).exp() / PI.sqrt(), (0.0, 0.0), 1e-8).unwrap();
        assert!((r.sup - 1.0 / PI.sqrt()).abs() < 1e-14);
        assert_eq!(r.inf, 0.0);
        assert!(matches!(r.arg_sup, ExtReal::Finite(x) if x.abs() < 1e-6));
        assert!(r.sup >= r.inf);
    }

    #[test]
    fn zero_function() {
        let r = sup_inf(|_| 0.0, (0.0, 0.0), 1e-8).unwrap();
        assert_eq!((r.sup, r.inf), (0.0, 0.0));
    }

    #[test]
    fn limits_count_as_extremes() {
        let r = sup_inf(|x| 0.5 + x.atan() / PI, (0.0, 1.0), 1e-8).unwrap();
        assert_eq!((r.sup, r.inf), (1.0, 0.0));
        assert_eq!(r.arg_sup, ExtReal::PosInf);
        assert_eq!(r.arg_inf, ExtReal::NegInf);
    }

    #[test]
    fn off_grid_maximum_is_polished() {
        let r = sup_inf(|x| -(x - 0.123_456_7).powi(2) + 2.0, (f64::MIN / 4.0, f64::MIN / 4.0), 1e-10);
        let r = r.unwrap();
        assert!((r.sup - 2.0).abs() < 1e-15);
        match r.arg_sup {
            ExtReal::Finite(x) => assert!((x - 0.123_456_7).abs() < 1e-7),
            _ => panic!(),
        }
    }

    #[test]
    fn serializes_infinities_as_strings() {
        let s = serde_json::to_string(&ExtReal::NegInf).unwrap();
        assert_eq!(s, "\"-inf\"");
    }
}
