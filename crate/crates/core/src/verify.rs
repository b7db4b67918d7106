//! The verification registry: one check per acceptance criterion, each
//! producing `{check, params, lhs, rhs, tolerance, pass}` reports.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::driver::json_number;
use crate::error::{Error, Result};
use crate::evolve::{
    convergence_norm, convolve, mass_check, solution_derivative, sup_norm_estimate_check, weighted_pairing_check,
    weighted_solution_norm, SolutionField,
};
use crate::kernel::{cramer_bound, theta, theta_deriv, theta_signed};
use crate::primitives::{make_closed_form, Params, Space};
use crate::realline::{sup_inf, total_variation, DecayHint};
use crate::spaces::{primitive_norm, weighted_norm_at};
use crate::uniqueness::{default_t_grid, eulerian, uniqueness_probe, weight_g, Classification, EulerianTable, ProbeSpace};

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|lhs − rhs| ≤ tolerance`
    Eq,
    /// `lhs ≤ rhs + tolerance`
    Le,
    /// `lhs < rhs`
    Lt,
    /// `lhs ≥ rhs − tolerance`
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(serialize_with = "ser_f64")]
    pub lhs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rhs: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

fn ser_f64<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_number(*v).serialize(s)
}

impl CheckReport {
    fn new(check: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Eq => (lhs - rhs).abs() <= tolerance,
            Relation::Le => lhs <= rhs + tolerance,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs - tolerance,
        };
        CheckReport { check: check.into(), params: serde_json::Map::new(), lhs, rhs, tolerance, relation, pass }
    }

    fn param(mut self, key: &str, v: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    fn gap(check: impl Into<String>, gap: f64, tolerance: f64) -> Self {
        Self::new(check, gap, 0.0, tolerance, Relation::Eq)
    }
}

type CheckFn = fn(&Params) -> Result<Vec<CheckReport>>;

struct Check {
    id: &'static str,
    about: &'static str,
    params: &'static [&'static str],
    run: CheckFn,
}

const CHECKS: &[Check] = &[
    Check { id: "semigroup", about: "Θ_a ∗ Θ_b = Θ_{a+b}, including a < 0", params: &[], run: semigroup },
    Check { id: "kernel-variation", about: "V Θ_t^{(m)} closed forms for m ≤ 2", params: &[], run: kernel_variation },
    Check { id: "cramer", about: "c_n ≤ 1.087 √(n!) 2^{(1−n)/2}, c_1, c_2 closed forms", params: &["n"], run: cramer },
    Check { id: "sup-norm", about: "‖u_t‖_∞ ≤ ‖f‖/(2√(πt)) and its sharpness", params: &[], run: sup_norm },
    Check { id: "contraction", about: "‖u_t‖ ≤ ‖f‖ and its sharpness", params: &[], run: contraction },
    Check { id: "mass", about: "∫u_t = ∫f, and 0 for n ≥ 2", params: &["t"], run: mass },
    Check { id: "oracles", about: "convolve against every closed-form solution", params: &[], run: oracles },
    Check { id: "convergence", about: "‖u_t − f‖ → 0 for singular and higher-order data", params: &[], run: convergence },
    Check { id: "eulerian-table", about: "Eulerian numbers and the weights G_n", params: &["n"], run: eulerian_table },
    Check { id: "uniqueness", about: "boundedness probes for the δ′ and a genuine trajectory", params: &[], run: uniqueness },
    Check { id: "weighted", about: "weighted contraction, pairing, oracle and horizon", params: &[], run: weighted },
    Check { id: "pde-residual", about: "time difference of u against u_xx", params: &["seed", "samples"], run: pde_residual },
    Check { id: "pointwise", about: "u_t → f at interior points of a step", params: &["t"], run: pointwise },
];

/// `(id, description)` for every registered check.
pub fn check_ids() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|c| (c.id, c.about)).collect()
}

/// Runs one check.
pub fn run_check(id: &str, params: &Params) -> Result<Vec<CheckReport>> {
    let c = CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownKey(format!("check `{id}`")))?;
    params.check_known(id, c.params)?;
    let mut reports = (c.run)(params)?;
    for r in &mut reports {
        for (k, v) in params.iter() {
            r.params.entry(k.to_string()).or_insert_with(|| json_number(v));
        }
    }
    Ok(reports)
}

/// Runs every check with default parameters.
pub fn run_all() -> Result<BTreeMap<&'static str, Vec<CheckReport>>> {
    CHECKS.iter().map(|c| Ok((c.id, (c.run)(&Params::new())?))).collect()
}

fn entry(key: &str, pairs: &[(&str, f64)]) -> Result<CatalogEntry> {
    CatalogEntry::new(key, &Params::from_pairs(pairs.iter().copied()))
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn semigroup(_: &Params) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for &(a, b) in &[(0.1, 0.2), (1.0, 1.0), (-2.0, 1.0)] {
        let e = if a > 0.0 {
            entry("gauss", &[("s", a)])?
        } else {
            CatalogEntry::with_overrides("neg-gauss", &Params::new().with("s", -a), None, Some(Space::Weighted { tau: -0.75 * a }))?
        };
        let gap = [-2.0, 0.0, 1.0, 3.0]
            .iter()
            .map(|&x| Ok((convolve(e.data(), b, x, 1e-12)? - theta_signed(a + b, x)?).abs()))
            .collect::<Result<Vec<_>>>()?;
        out.push(CheckReport::gap("semigroup", max_of(gap), 1e-8).param("a", a).param("b", b));
    }
    Ok(out)
}

fn kernel_variation(_: &Params) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for m in 0..3usize {
        let mut worst = 0.0f64;
        for &t in &[0.25, 1.0, 4.0] {
            let exact = match m {
                0 => 1.0 / (PI * t).sqrt(),
                1 => 2f64.sqrt() / ((PI * E).sqrt() * t),
                _ => (1.0 + 4.0 * (-1.5f64).exp()) / (2.0 * PI.sqrt() * t.powf(1.5)),
            };
            let v = total_variation(
                |x| theta_deriv(m, t, x).unwrap_or(f64::NAN),
                Some(|x| theta_deriv(m + 1, t, x).unwrap_or(f64::NAN)),
                DecayHint::gaussian(1.0 / (4.0 * t), 0.0)?,
                1e-13,
            )?;
            worst = worst.max((v - exact).abs() / exact);
        }
        out.push(CheckReport::gap("kernel-variation", worst, 1e-6).param("m", m));
    }
    Ok(out)
}

fn cramer(p: &Params) -> Result<Vec<CheckReport>> {
    let n_max = p.get_count("n", 12)?.max(2);
    let cs = (1..=n_max)
        .map(|n| crate::kernel::kernel_variation_constant(n, 1e-13))
        .collect::<Result<Vec<_>>>()?;
    let ratio = cs.iter().enumerate().map(|(i, c)| c / cramer_bound(i + 1)).fold(0.0, f64::max);
    let closed = (cs[0] - 1.0 / PI.sqrt()).abs().max((cs[1] - (2.0 / (PI * E)).sqrt()).abs());
    Ok(vec![
        CheckReport::new("cramer/bound", ratio, 1.0, 0.0, Relation::Le).param("n_max", n_max),
        CheckReport::gap("cramer/closed-forms", closed, 1e-8),
    ])
}

/// `A_c` members of the catalog with the solver tolerance each can afford.
fn alex_entries() -> Result<Vec<(CatalogEntry, f64)>> {
    let keys = ["zero", "gauss", "gauss-prime", "chirp-re", "chirp-im", "cantor-deriv", "alg-sing", "non-lp", "step"];
    let mut v: Vec<(CatalogEntry, f64)> = keys.iter().map(|k| Ok((CatalogEntry::new(k, &Params::new())?, 1e-10))).collect::<Result<_>>()?;
    v.push((CatalogEntry::new("weierstrass-deriv", &Params::new())?, 1e-8));
    Ok(v)
}

fn sup_norm(_: &Params) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (e, tol) in alex_entries()? {
        for &t in &[0.1, 1.0] {
            let (lhs, rhs) = sup_norm_estimate_check(e.data(), t, tol)?;
            out.push(
                CheckReport::new("sup-norm/bound", lhs, rhs, 10.0 * tol, Relation::Le)
                    .param("initial", describe(&e))
                    .param("t", t),
            );
        }
    }
    for &t in &[0.1, 1.0] {
        let s = 1e-4 * t;
        let e = entry("gauss", &[("s", s)])?;
        let (lhs, rhs) = sup_norm_estimate_check(e.data(), t, 1e-12)?;
        out.push(CheckReport::new("sup-norm/sharpness", lhs / rhs, 0.999, 0.0, Relation::Ge).param("s", s).param("t", t));
    }
    Ok(out)
}

fn contraction(_: &Params) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (e, tol) in alex_entries()? {
        let f = primitive_norm(e.data().primitive(), tol)?.value;
        for &t in &[0.01, 0.1, 1.0] {
            let u = primitive_norm(&SolutionField::new(e.data().clone(), t, tol)?.primitive(), tol)?.value;
            out.push(
                CheckReport::new("contraction/bound", u, f, 2e-8, Relation::Le)
                    .param("initial", describe(&e))
                    .param("t", t),
            );
        }
    }
    let e = entry("gauss", &[("s", 1e-4)])?;
    let f = primitive_norm(e.data().primitive(), 1e-12)?.value;
    let u = primitive_norm(&SolutionField::new(e.data().clone(), 0.1, 1e-12)?.primitive(), 1e-12)?.value;
    out.push(CheckReport::new("contraction/sharpness", u / f, 0.999, 0.0, Relation::Ge).param("s", 1e-4).param("t", 0.1));
    Ok(out)
}

fn mass(p: &Params) -> Result<Vec<CheckReport>> {
    let ts = match p.get("t") {
        Some(t) => vec![t],
        None => vec![0.1, 1.0],
    };
    let mut out = Vec::new();
    for e in [entry("step", &[])?, entry("dirac-diff", &[("n", 2.0)])?, entry("dirac-diff", &[("n", 3.0)])?] {
        for &t in &ts {
            let (lhs, rhs) = mass_check(e.data(), t, 1e-12)?;
            out.push(
                CheckReport::new("mass", lhs, rhs, 1e-8, Relation::Eq)
                    .param("initial", describe(&e))
                    .param("order", e.data().order())
                    .param("t", t),
            );
        }
    }
    Ok(out)
}

/// Catalog entries with closed-form solutions covered by the oracle checks.
fn oracle_entries() -> Result<Vec<CatalogEntry>> {
    let mut v = vec![
        entry("gauss", &[])?,
        entry("gauss-prime", &[])?,
        entry("neg-gauss", &[])?,
        entry("sin", &[])?,
        entry("chirp-re", &[])?,
        entry("chirp-im", &[])?,
        entry("step", &[])?,
    ];
    for n in 0..=4 {
        v.push(entry("poly", &[("n", n as f64)])?);
    }
    for n in 0..=3 {
        v.push(entry("hermite", &[("n", n as f64)])?);
    }
    for n in [2.0, 3.0] {
        v.push(entry("dirac-diff", &[("n", n)])?);
    }
    Ok(v)
}

fn describe(e: &CatalogEntry) -> String {
    let ps: Vec<String> = e.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
    if ps.is_empty() {
        e.key().to_string()
    } else {
        format!("{}:{}", e.key(), ps.join(","))
    }
}

fn oracles(_: &Params) -> Result<Vec<CheckReport>> {
    let xs: Vec<f64> = (0..21).map(|i| -3.0 + 0.3 * i as f64).collect();
    oracle_entries()?
        .par_iter()
        .map(|e| {
            let mut worst = 0.0f64;
            for &t in [0.05, 0.25, 1.0].iter().filter(|&&t| e.valid_time(t)) {
                for &x in &xs {
                    let o = e.oracle(x, t)?;
                    let u = convolve(e.data(), t, x, 1e-12)?;
                    worst = worst.max((u - o).abs() / (1.0 + o.abs()));
                }
            }
            Ok(CheckReport::gap("oracles", worst, 1e-7).param("initial", describe(e)))
        })
        .collect()
}

fn decreasing_and_small(name: &str, e: &CatalogEntry, tol: f64, last_below: f64) -> Result<Vec<CheckReport>> {
    let ts = [1e-1, 1e-2, 1e-3, 1e-4];
    let norms = ts.iter().map(|&t| Ok(convergence_norm(e.data(), t, tol)?.value)).collect::<Result<Vec<_>>>()?;
    let rise = norms.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        CheckReport::new(format!("convergence/{name}/decreasing"), rise, 0.0, 0.0, Relation::Lt),
        CheckReport::new(format!("convergence/{name}/final"), norms[3], last_below, 0.0, Relation::Lt).param("t", 1e-4),
    ])
}

fn convergence(_: &Params) -> Result<Vec<CheckReport>> {
    let mut out = decreasing_and_small("cantor-deriv", &entry("cantor-deriv", &[])?, 1e-10, 0.1)?;
    out.extend(decreasing_and_small("dirac-diff", &entry("dirac-diff", &[("n", 2.0)])?, 1e-11, 0.05)?);
    let s = 0.5;
    let e = entry("gauss-prime", &[("s", s)])?;
    let mut printed_gap = 0.0f64;
    let mut worst = 0.0f64;
    let mut worst_inf = 0.0f64;
    for &t in &[1e-1, 1e-2, 1e-3, 1e-4] {
        let n = convergence_norm(e.data(), t, 1e-12)?.value;
        // The stated closed form is |D_t(0)| for D_t = Θ_{s+t} − Θ_s, which is
        // sup |D_t| but not the norm sup D_t − inf D_t: D_t also has a
        // positive maximum at x*.
        let printed = (s.powf(-0.5) - (s + t).powf(-0.5)) / (2.0 * PI.sqrt());
        printed_gap = printed_gap.max((n - printed).abs());
        let xs = (6.0 * s * (s + t) * (1.0 + t / s).ln() / t).sqrt();
        let exact = theta(s + t, xs)? - theta(s, xs)? + theta(s, 0.0)? - theta(s + t, 0.0)?;
        worst = worst.max((n - exact).abs());
        let r = sup_inf(|x| theta(s + t, x).unwrap_or(f64::NAN) - theta(s, x).unwrap_or(f64::NAN), (0.0, 0.0), 1e-12)?;
        worst_inf = worst_inf.max((-r.inf - printed).abs());
    }
    out.push(CheckReport::gap("convergence/gauss-prime", printed_gap, 1e-7).param("s", s));
    out.push(CheckReport::gap("convergence/gauss-prime/oscillation", worst, 1e-7).param("s", s));
    out.push(CheckReport::gap("convergence/gauss-prime/sup-abs", worst_inf, 1e-7).param("s", s));
    Ok(out)
}

fn eulerian_table(p: &Params) -> Result<Vec<CheckReport>> {
    let n_max = p.get_count("n", 10)?;
    let table = EulerianTable::new(n_max.max(12))?;
    let mut mismatches = 0usize;
    for n in 1..=n_max {
        for l in 0..=n {
            let mut brute = BigInt::zero();
            let mut c = BigInt::one();
            for k in 0..=l {
                let term = &c * BigInt::from(l + 1 - k).pow(n as u32);
                brute = if k % 2 == 0 { brute + term } else { brute - term };
                c = c * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            // A(n,l) = (l+1)A(n−1,l) + (n−l)A(n−1,l−1)
            let rec = if n == 1 {
                u64::from(l == 0)
            } else {
                let prev = |j: Option<usize>| j.and_then(|j| table.get(n - 1, j)).unwrap_or(0);
                (l as u64 + 1) * prev(Some(l)) + (n - l) as u64 * prev(l.checked_sub(1))
            };
            let v = table.get(n, l).unwrap_or(u64::MAX);
            if BigInt::from(v) != brute || v != rec {
                mismatches += 1;
            }
        }
    }
    let mut shape = 0usize;
    for n in 1..=12 {
        let row = table.row(n).unwrap_or(&[]);
        for l in 0..n {
            if row[l] == 0 || row[l] != row[n - 1 - l] {
                shape += 1;
            }
        }
        if row[n] != 0 {
            shape += 1;
        }
    }
    let mut nonpositive = 0usize;
    let mut asym = 0.0f64;
    let mut vanish = 0.0f64;
    for n in 1..=12 {
        let g = weight_g(n)?;
        for i in 1..100 {
            let x = i as f64 / 100.0;
            if !(g.eval(x) > 0.0) {
                nonpositive += 1;
            }
        }
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            asym = asym.max((g.eval(1.0 - x) - g.eval(x)).abs());
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        vanish = vanish.max((g.eval(1e-3) / 1e-3f64.powi(n as i32) * fact - 1.0).abs());
    }
    let mut knot_mismatch = 0usize;
    for n in 1..=8usize {
        let g = weight_g(n)?;
        let denom: BigInt = (1..=n).map(BigInt::from).product::<BigInt>() * BigInt::from(n + 1).pow(n as u32);
        for l in 0..n {
            let a = BigRational::new(BigInt::from(l + 1), BigInt::from(n + 1));
            if g.eval_exact(&a) != BigRational::new(BigInt::from(eulerian(n, l)?), denom.clone()) {
                knot_mismatch += 1;
            }
        }
    }
    Ok(vec![
        CheckReport::gap("eulerian-table/exact", mismatches as f64, 0.0).param("n", n_max),
        CheckReport::gap("eulerian-table/positivity-symmetry", shape as f64, 0.0).param("n", 12),
        CheckReport::gap("weight-g/positivity", nonpositive as f64, 0.0).param("n", 12),
        CheckReport::new("weight-g/symmetry", asym, 0.0, 1e-13, Relation::Le).param("n", 12),
        CheckReport::gap("weight-g/knot-values", knot_mismatch as f64, 0.0).param("n", 8),
        CheckReport::new("weight-g/vanishing-order", vanish, 0.0, 0.02, Relation::Le).param("x", 1e-3),
    ])
}

fn uniqueness(_: &Params) -> Result<Vec<CheckReport>> {
    let grid = default_t_grid();
    let r = uniqueness_probe(|t| make_closed_form("gauss", &Params::new().with("s", t)), ProbeSpace::Alex, &grid, 0.0, 1e-12)?;
    let scaled = r.t.iter().zip(&r.norm).map(|(t, n)| (n * 2.0 * (PI * t).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    let e = entry("gauss-prime", &[("s", 0.5)])?;
    let data = e.data().clone();
    let g = uniqueness_probe(|t| Ok(SolutionField::new(data.clone(), t, 1e-11)?.primitive()), ProbeSpace::Alex, &grid, 0.0, 1e-10)?;
    let flag = |c: Classification| if c == Classification::Diverging { 1.0 } else { 0.0 };
    Ok(vec![
        CheckReport::new("uniqueness/delta-prime/diverging", flag(r.classification), 1.0, 0.0, Relation::Eq).param("r_squared", r.r_squared),
        CheckReport::new("uniqueness/delta-prime/exponent", r.slope, -0.5, 0.02, Relation::Eq),
        CheckReport::gap("uniqueness/delta-prime/scaled-norm", scaled, 1e-6),
        CheckReport::gap("uniqueness/gauss-prime/bounded", flag(g.classification), 0.0).param("slope", g.slope),
    ])
}

fn weighted(_: &Params) -> Result<Vec<CheckReport>> {
    let (s, tau, sigma) = (2.0, 1.5, 1.0);
    let e = CatalogEntry::with_overrides("neg-gauss", &Params::new().with("s", s), None, Some(Space::Weighted { tau }))?;
    let d = e.data();
    let f = weighted_norm_at(d.primitive(), sigma, 1e-12)?.value;
    let mut ratio_gap = 0.0f64;
    for &t in &[0.1, 0.25, 0.4] {
        let u = weighted_solution_norm(d, sigma, t, 1e-12)?.value;
        ratio_gap = ratio_gap.max((u / f - ((s - sigma) / (s - sigma - t)).sqrt()).abs());
    }
    let (l, r) = weighted_pairing_check(d, sigma, 0.25, 1e-12)?;
    let mut pointwise = 0.0f64;
    for &t in &[0.05, 0.25, 1.0] {
        for i in 0..21 {
            let x = -3.0 + 0.3 * i as f64;
            pointwise = pointwise.max((convolve(d, t, x, 1e-12)? - theta_signed(t - s, x)?).abs());
        }
    }
    let accepted = [1.5, 2.0, 3.0]
        .iter()
        .filter(|&&t| !matches!(convolve(d, t, 0.0, 1e-10), Err(Error::OutOfHorizon { .. })))
        .count();
    Ok(vec![
        CheckReport::gap("weighted/contraction", ratio_gap, 1e-6).param("sigma", sigma).param("tau", tau),
        CheckReport::new("weighted/pairing", l, r, 1e-7, Relation::Eq).param("t", 0.25),
        CheckReport::gap("weighted/oracle", pointwise, 1e-8),
        CheckReport::gap("weighted/horizon", accepted as f64, 0.0),
    ])
}

fn pde_residual(p: &Params) -> Result<Vec<CheckReport>> {
    let seed = p.get_count("seed", 12345)? as u64;
    let samples = p.get_count("samples", 20)?.max(1);
    oracle_entries()?
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let t_hi = if e.key() == "hermite" { 0.24 } else { 1.0 };
            let mut pairs = Vec::with_capacity(samples);
            for _ in 0..samples {
                let t: f64 = rng.gen_range(0.05..t_hi);
                let x: f64 = rng.gen_range(-3.0..3.0);
                let h = 1e-4 * t;
                let fd = (convolve(e.data(), t + h, x, 1e-13)? - convolve(e.data(), t - h, x, 1e-13)?) / (2.0 * h);
                let uxx = solution_derivative(e.data(), t, x, 2, 0, 1e-13)?;
                let u = convolve(e.data(), t, x, 1e-13)?;
                pairs.push((fd, uxx, u));
            }
            // Floor the denominator at the size of u so that u_xx ≡ 0 (linear data)
            // and zero crossings of u_xx compare on an absolute scale.
            let scale = pairs.iter().map(|p| p.1.abs().max(p.2.abs())).fold(0.0, f64::max);
            let worst = pairs
                .iter()
                .map(|&(fd, uxx, _)| (fd - uxx).abs() / uxx.abs().max(1e-3 * scale).max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            Ok(CheckReport::new("pde-residual", worst, 0.0, 1e-5, Relation::Le)
                .param("initial", describe(e))
                .param("samples", samples))
        })
        .collect()
}

fn pointwise(p: &Params) -> Result<Vec<CheckReport>> {
    let t = p.get_or("t", 1e-5);
    let e = entry("step", &[])?;
    let gap = [0.3, 0.7]
        .iter()
        .map(|&x| Ok((convolve(e.data(), t, x, 1e-12)? - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![CheckReport::new("pointwise", max_of(gap), 0.0, 0.01, Relation::Le).param("t", t)])
}
