//! Table-producing runs behind the command-line tool.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::evolve::{convergence_norm, convolve, weighted_convergence_norm, weighted_solution_norm, SolutionField};
use crate::primitives::Space;
use crate::spaces::{alex_norm, alexn_norm, weighted_norm, weighted_norm_at};
use crate::uniqueness::{eulerian, uniqueness_probe, ProbeReport, ProbeSpace};

/// `samples` equally spaced points on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, samples: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter(format!("x range [{x_min}, {x_max}] must be finite and nonempty")));
        }
        if samples < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
        }
        Ok(Grid { x_min, x_max, samples })
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.x_max - self.x_min) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| if i + 1 == self.samples { self.x_max } else { self.x_min + h * i as f64 })
            .collect()
    }
}

/// Parses `0.1,0.01,...` into a strictly positive list sorted ascending.
pub fn parse_t_list(s: &str) -> Result<Vec<f64>> {
    let mut ts = s
        .split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && t.is_finite())
                .ok_or_else(|| Error::InvalidParameter(format!("t values must be positive numbers, got `{p}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    Ok(ts)
}

/// A rectangular table of numbers with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(|v| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    /// `[{column: value, ...}, ...]` with non-finite values as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), json_number(*v)))
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

pub(crate) fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or_else(|| serde_json::Value::String(v.to_string()), serde_json::Value::Number)
}

/// Per-`t` failures of a run whose remaining columns were still produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunIssues(pub Vec<(f64, String)>);

/// `u_t` on the grid, one column `u_t=<t>` per valid `t`.
pub fn run_evolve(entry: &CatalogEntry, ts: &[f64], grid: &Grid, tol: f64) -> Result<(Table, RunIssues)> {
    let xs = grid.points();
    let data = entry.data();
    let mut cols = Vec::new();
    let mut issues = Vec::new();
    for &t in ts {
        let col: Result<Vec<f64>> = xs.par_iter().map(|&x| convolve(data, t, x, tol)).collect();
        match col {
            Ok(c) => cols.push((t, c)),
            Err(e @ Error::OutOfHorizon { .. }) => issues.push((t, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let mut columns = vec!["x".to_string()];
    columns.extend(cols.iter().map(|(t, _)| format!("u_t={t}")));
    let rows = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| std::iter::once(x).chain(cols.iter().map(|(_, c)| c[i])).collect())
        .collect();
    Ok((Table { columns, rows }, RunIssues(issues)))
}

/// Default `σ` for weighted data: half the horizon.
pub fn default_sigma(entry: &CatalogEntry) -> Option<f64> {
    entry.data().horizon().map(|tau| tau / 2.0)
}

/// The data norm (row `t = 0`) and the norm of `u_t` for each `t`.
pub fn run_norm(entry: &CatalogEntry, ts: &[f64], sigma: Option<f64>, tol: f64) -> Result<(Table, RunIssues)> {
    let data = entry.data();
    let sigma = sigma.or_else(|| default_sigma(entry));
    let base = match data.space() {
        Space::Alex => alex_norm(data, tol)?,
        Space::AlexN => alexn_norm(data, tol)?,
        Space::Weighted { .. } => match sigma {
            Some(s) => weighted_norm_at(data.primitive(), s, tol)?,
            None => weighted_norm(data, tol)?,
        },
    };
    let mut rows = vec![vec![0.0, base.value]];
    let mut issues = Vec::new();
    let results: Vec<(f64, Result<f64>)> = ts
        .par_iter()
        .map(|&t| {
            let v = match data.space() {
                Space::Weighted { .. } => weighted_solution_norm(data, sigma.unwrap_or(0.0), t, tol).map(|r| r.value),
                _ => SolutionField::new(data.clone(), t, tol)
                    .and_then(|f| crate::spaces::primitive_norm(&f.primitive(), tol))
                    .map(|r| r.value),
            };
            (t, v)
        })
        .collect();
    for (t, r) in results {
        match r {
            Ok(v) => rows.push(vec![t, v]),
            Err(e @ (Error::OutOfHorizon { .. } | Error::Divergence(_))) => issues.push((t, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok((Table { columns: vec!["t".into(), "norm".into()], rows }, RunIssues(issues)))
}

/// `‖u_t − f‖` (or `‖u_t − f‖_σ`) per `t`, rows by decreasing `t`.
pub fn run_converge(entry: &CatalogEntry, ts: &[f64], sigma: Option<f64>, tol: f64) -> Result<(Table, RunIssues)> {
    let data = entry.data();
    let mut ts = ts.to_vec();
    ts.sort_by(|a, b| b.total_cmp(a));
    let results: Vec<(f64, Result<f64>)> = ts
        .par_iter()
        .map(|&t| {
            let v = match data.space() {
                Space::Weighted { .. } => {
                    let s = sigma.or_else(|| default_sigma(entry)).unwrap_or(0.0);
                    weighted_convergence_norm(data, s, t, tol)
                }
                _ => convergence_norm(data, t, tol),
            };
            (t, v.map(|r| r.value))
        })
        .collect();
    let mut rows = Vec::new();
    let mut issues = Vec::new();
    for (t, r) in results {
        match r {
            Ok(v) => rows.push(vec![t, v]),
            Err(e @ Error::OutOfHorizon { .. }) => issues.push((t, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok((Table { columns: vec!["t".into(), "norm".into()], rows }, RunIssues(issues)))
}

/// Rows `n, l, A(n, l)` for `1 ≤ n ≤ n_max`.
pub fn run_eulerian(n_max: usize) -> Result<Table> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for l in 0..=n {
            rows.push(vec![n as f64, l as f64, eulerian(n, l)? as f64]);
        }
    }
    Ok(Table { columns: vec!["n".into(), "l".into(), "A".into()], rows })
}

/// Probes the evolution of `entry` along `ts`.
pub fn run_probe(entry: &CatalogEntry, ts: &[f64], sigma: Option<f64>, rho: Option<f64>, x0: f64, tol: f64) -> Result<ProbeReport> {
    let data = entry.data().clone();
    let space = match data.space() {
        Space::Alex => ProbeSpace::Alex,
        Space::AlexN => ProbeSpace::AlexN { n: data.order() },
        Space::Weighted { tau } => {
            let sigma = sigma.unwrap_or(tau / 2.0);
            ProbeSpace::Weighted { tau, sigma, rho: rho.unwrap_or(sigma / 2.0) }
        }
    };
    uniqueness_probe(|t| Ok(SolutionField::new(data.clone(), t, tol)?.primitive()), space, ts, x0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::theta;
    use crate::primitives::Params;

    #[test]
    fn t_list_parsing() {
        assert_eq!(parse_t_list("1, 0.1,0.5,0.1").unwrap(), vec![0.1, 0.5, 1.0]);
        assert!(parse_t_list("0.1,-1").is_err());
        assert!(parse_t_list("0.1,,").is_err());
        assert!(parse_t_list("abc").is_err());
    }

    #[test]
    fn grid_points() {
        assert_eq!(Grid::new(-1.0, 1.0, 3).unwrap().points(), vec![-1.0, 0.0, 1.0]);
        assert!(Grid::new(1.0, 1.0, 3).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn evolve_table() {
        let e = CatalogEntry::new("gauss", &Params::new().with("s", 0.5)).unwrap();
        let (tab, issues) = run_evolve(&e, &[0.1], &Grid::new(-2.0, 2.0, 5).unwrap(), 1e-11).unwrap();
        assert!(issues.0.is_empty());
        assert_eq!(tab.columns, vec!["x", "u_t=0.1"]);
        for r in &tab.rows {
            assert!((r[1] - theta(0.6, r[0]).unwrap()).abs() < 1e-10);
        }
        let mut buf = Vec::new();
        tab.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("x,u_t=0.1\n-2,"));
    }

    #[test]
    fn horizon_issues_are_per_t() {
        let e = CatalogEntry::new("neg-gauss", &Params::new()).unwrap();
        let (tab, issues) = run_evolve(&e, &[0.5, 2.0], &Grid::new(-1.0, 1.0, 3).unwrap(), 1e-10).unwrap();
        assert_eq!(tab.columns.len(), 2);
        assert_eq!(issues.0.len(), 1);
        assert_eq!(issues.0[0].0, 2.0);
    }

    #[test]
    fn converge_rows_decrease_in_t() {
        let e = CatalogEntry::new("zero", &Params::new()).unwrap();
        let (tab, _) = run_converge(&e, &[0.01, 0.1, 1.0], None, 1e-10).unwrap();
        assert_eq!(tab.rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![1.0, 0.1, 0.01]);
        assert!(tab.rows.iter().all(|r| r[1] == 0.0));
    }

    #[test]
    fn eulerian_table_rows() {
        let t = run_eulerian(3).unwrap();
        assert_eq!(t.rows.len(), 2 + 3 + 4);
        assert_eq!(t.rows[6], vec![3.0, 1.0, 4.0]);
    }
}
