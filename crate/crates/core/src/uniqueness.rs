//! Uniqueness probes: step weights `g_n`, smooth weights `G_n`, Eulerian
//! numbers, the `ψ_y` averaging functional and boundedness classification of
//! candidate solution trajectories.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primitives::PrimitiveFn;
use crate::realline::Quadrature;
use crate::spaces::{primitive_norm, weighted_norm_at};

/// Largest `n` accepted by [`eulerian`].
pub const EULERIAN_MAX: usize = 20;
/// Largest `n` accepted by [`weight_g`].
pub const WEIGHT_G_MAX: usize = 12;

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `A(n, l) = Σ_{k≤l} C(n+1, k) (−1)^k (l+1−k)^n`.
pub fn eulerian(n: usize, l: usize) -> Result<u64> {
    if n == 0 || n > EULERIAN_MAX || l > n {
        return Err(Error::InvalidParameter(format!(
            "eulerian needs 1 ≤ n ≤ {EULERIAN_MAX} and 0 ≤ l ≤ n, got ({n}, {l})"
        )));
    }
    let mut sum = 0i128;
    for k in 0..=l {
        let term = binomial(n + 1, k) * ((l + 1 - k) as i128).pow(n as u32);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    u64::try_from(sum).map_err(|_| Error::InvalidParameter(format!("A({n}, {l}) = {sum} is out of range")))
}

/// Rows `A(n, 0..=n)` for `1 ≤ n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct EulerianTable {
    rows: Vec<Vec<u64>>,
}

impl EulerianTable {
    pub fn new(n_max: usize) -> Result<Self> {
        let rows = (1..=n_max).map(|n| (0..=n).map(|l| eulerian(n, l)).collect()).collect::<Result<_>>()?;
        Ok(EulerianTable { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, n: usize) -> Option<&[u64]> {
        n.checked_sub(1).and_then(|i| self.rows.get(i)).map(Vec::as_slice)
    }

    pub fn get(&self, n: usize, l: usize) -> Option<u64> {
        self.row(n)?.get(l).copied()
    }
}

/// `g_n(x) = Σ_k C(n,k)(−1)^k χ_(a_k, a_{k+1})(x)`, `a_k = k/(n+1)`; zero at the knots.
pub fn g_step(n: usize, x: f64) -> f64 {
    if !(x > 0.0 && x < 1.0) {
        return 0.0;
    }
    let m = (n + 1) as f64;
    let k = (x * m).floor() as usize;
    if (k as f64) == x * m {
        return 0.0;
    }
    let c = binomial(n, k) as f64;
    if k % 2 == 0 {
        c
    } else {
        -c
    }
}

/// A piecewise polynomial on `[0, 1]` with exact rational coefficients in the
/// local variable `x − a_k` on each `[a_k, a_{k+1}]`; zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    knots: Vec<BigRational>,
    pieces: Vec<Vec<BigRational>>,
    float_knots: Vec<f64>,
    float_pieces: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    fn new(knots: Vec<BigRational>, pieces: Vec<Vec<BigRational>>) -> Self {
        let float_knots = knots.iter().map(to_f64).collect();
        let float_pieces = pieces.iter().map(|c| c.iter().map(to_f64).collect()).collect();
        PiecewisePoly { knots, pieces, float_knots, float_pieces }
    }

    pub fn knots(&self) -> &[f64] {
        &self.float_knots
    }

    fn piece(&self, x: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        let k = self.float_knots.partition_point(|&a| a <= x).saturating_sub(1);
        Some(k.min(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some(k) = self.piece(x) else { return 0.0 };
        let y = x - self.float_knots[k];
        self.float_pieces[k].iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        if x.is_negative() || *x > BigRational::one() {
            return BigRational::zero();
        }
        let k = self.knots.partition_point(|a| a <= x).saturating_sub(1).min(self.pieces.len() - 1);
        let y = x - &self.knots[k];
        self.pieces[k].iter().rev().fold(BigRational::zero(), |acc, c| acc * &y + c)
    }

    pub fn derivative(&self) -> PiecewisePoly {
        let pieces = self
            .pieces
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(m, v)| v * BigRational::from_integer(BigInt::from(m)))
                    .collect()
            })
            .collect();
        PiecewisePoly::new(self.knots.clone(), pieces)
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rational(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `G_n(x) = ((n−1)!)^{-1} ∫_0^x (x−s)^{n−1} g_n(s) ds`, assembled exactly.
pub fn weight_g(n: usize) -> Result<PiecewisePoly> {
    if n == 0 || n > WEIGHT_G_MAX {
        return Err(Error::InvalidParameter(format!("weight_g needs 1 ≤ n ≤ {WEIGHT_G_MAX}, got {n}")));
    }
    let m = (n + 1) as i128;
    let knots: Vec<BigRational> = (0..=n + 1).map(|k| rational(k as i128, m)).collect();
    let fact: i128 = (1..=n as i128).product();
    let mut pieces = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // On [a_k, a_{k+1}] with y = x − a_k, each earlier step j contributes
        // C(n,j)(−1)^j [(y + a_k − a_j)^n − (y + a_k − a_{j+1})^n] and step k
        // contributes C(n,k)(−1)^k y^n.
        let mut coef = vec![BigRational::zero(); n + 1];
        let mut add_shifted = |scale: &BigRational, shift: &BigRational| {
            let mut pw = BigRational::one();
            for p in (0..=n).rev() {
                coef[p] += scale * rational(binomial(n, p), 1) * &pw;
                pw *= shift;
            }
        };
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let c = rational(sign * binomial(n, j), fact);
            add_shifted(&c, &(&knots[k] - &knots[j]));
            if j < k {
                add_shifted(&-c.clone(), &(&knots[k] - &knots[j + 1]));
            }
        }
        pieces.push(coef);
    }
    Ok(PiecewisePoly::new(knots, pieces))
}

/// `ψ_y(x, t)`: the `G_{n−1}`-weighted average of `u(·, t)` over `[x−y, x+y]`
/// by quadrature (flat weight for `n = 1`).
pub fn psi_probe<U>(u: U, n: usize, y: f64, x: f64, t: f64, tol: f64) -> Result<f64>
where
    U: Fn(f64, f64) -> Result<f64>,
{
    if n == 0 || !(y > 0.0) {
        return Err(Error::InvalidParameter(format!("psi needs n ≥ 1 and y > 0, got n = {n}, y = {y}")));
    }
    let weight = if n >= 2 { Some(weight_g(n - 1)?) } else { None };
    let lo = x - y;
    let knots: Vec<f64> = weight.as_ref().map_or(Vec::new(), |w| w.knots().iter().map(|a| lo + 2.0 * y * a).collect());
    let err = std::cell::Cell::new(None);
    let g = |xi: f64| match u(xi, t) {
        Ok(v) => v * weight.as_ref().map_or(1.0, |w| w.eval((xi - lo) / (2.0 * y))),
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let r = Quadrature::new(tol).with_breakpoints(knots).interval(g, lo, x + y);
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(r?.value / (2.0 * y))
}

/// `ψ_y(x, t)` for `u_t = P^{(n)}`, from values of `P` alone: moving all
/// derivatives onto `G_{n−1}` leaves `g_{n−1}`, whose integral against `P′`
/// is a finite difference of `P` on the knots.
pub fn psi_from_primitive(p: &PrimitiveFn, n: usize, y: f64, x: f64) -> Result<f64> {
    if n == 0 || !(y > 0.0) {
        return Err(Error::InvalidParameter(format!("psi needs n ≥ 1 and y > 0, got n = {n}, y = {y}")));
    }
    let lo = x - y;
    let h = 2.0 * y;
    let at = |k: usize| p.eval(lo + h * k as f64 / n as f64);
    let mut sum = 0.0;
    for k in 0..n {
        let c = binomial(n - 1, k) as f64;
        let d = at(k + 1) - at(k);
        sum += if k % 2 == 0 { c * d } else { -c * d };
    }
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * sum / h.powi(n as i32))
}

/// The norm family a probe measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum ProbeSpace {
    Alex,
    /// Trajectory primitives are `n`-fold.
    AlexN { n: usize },
    /// `‖u_t‖_σ √(τ − σ − t)`; `rho` is an auxiliary weight parameter
    /// accepted on either side of `sigma`.
    Weighted { tau: f64, sigma: f64, rho: f64 },
}

impl ProbeSpace {
    fn order(&self) -> usize {
        match *self {
            ProbeSpace::AlexN { n } => n,
            _ => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ProbeSpace::Alex => Ok(()),
            ProbeSpace::AlexN { n } if n >= 1 => Ok(()),
            ProbeSpace::Weighted { tau, sigma, rho } if sigma > 0.0 && rho > 0.0 && sigma < tau && rho < tau => Ok(()),
            s => Err(Error::InvalidParameter(format!("invalid probe space {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Bounded,
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiRow {
    pub t: f64,
    pub y: f64,
    pub x: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub space: ProbeSpace,
    pub t: Vec<f64>,
    pub norm: Vec<f64>,
    /// The quantity whose boundedness is tested; equals `norm` except for
    /// weighted probes.
    pub probed: Vec<f64>,
    pub slope: f64,
    pub r_squared: f64,
    pub classification: Classification,
    pub hypothesis: String,
    pub hypothesis_holds: bool,
    pub psi: Vec<PsiRow>,
}

/// `10^{-3}, 10^{-2.5}, …, 1`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=6).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect()
}

/// Least-squares slope and `R²` of `ln v` against `ln t`, skipping nonpositive values.
pub fn loglog_fit(t: &[f64], v: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = t.iter().zip(v).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    if pts.len() < 2 {
        return (0.0, 0.0);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// Measures the norm of `u_t` along `t_grid` from its primitives, fits
/// `norm ~ t^slope` and tabulates `ψ_y(x0, t)` for `y ∈ {0.1, 0.01, 0.001}`.
///
/// `trajectory(t)` must return the primitive of `u_t` matching `space`: the
/// `B_c` primitive (`n`-fold for `alexn`), or a weighted-growth primitive.
pub fn uniqueness_probe<T>(trajectory: T, space: ProbeSpace, t_grid: &[f64], x0: f64, tol: f64) -> Result<ProbeReport>
where
    T: Fn(f64) -> Result<PrimitiveFn> + Sync,
{
    space.validate()?;
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("t grid must be nonempty and positive".into()));
    }
    let mut ts = t_grid.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let n = space.order();
    let rows: Vec<(f64, f64, Vec<PsiRow>)> = ts
        .par_iter()
        .map(|&t| {
            let p = trajectory(t)?;
            let (norm, probed) = match space {
                ProbeSpace::Weighted { tau, sigma, .. } => {
                    if t >= tau - sigma {
                        return Err(Error::OutOfHorizon { t, horizon: tau - sigma });
                    }
                    let v = weighted_norm_at(&p, sigma, tol)?.value;
                    (v, v * (tau - sigma - t).sqrt())
                }
                _ => {
                    let v = primitive_norm(&p, tol)?.value;
                    (v, v)
                }
            };
            let psi = [0.1, 0.01, 0.001]
                .iter()
                .map(|&y| Ok(PsiRow { t, y, x: x0, psi: psi_from_primitive(&p, n, y, x0)? }))
                .collect::<Result<Vec<_>>>()?;
            Ok((norm, probed, psi))
        })
        .collect::<Result<_>>()?;
    let norm: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let probed: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let psi = rows.into_iter().flat_map(|r| r.2).collect();
    let (slope, r_squared) = loglog_fit(&ts, &probed);
    let classification = if slope < -0.1 && r_squared > 0.9 { Classification::Diverging } else { Classification::Bounded };
    let what = match space {
        ProbeSpace::Alex => "‖u_t‖ bounded as t → 0+".to_string(),
        ProbeSpace::AlexN { n } => format!("‖u_t‖^({n}) bounded as t → 0+"),
        ProbeSpace::Weighted { sigma, rho, .. } => {
            let order = if rho < sigma { "ρ < σ" } else { "σ ≤ ρ" };
            format!("‖u_t‖_σ √(τ−σ−t) bounded as t → 0+ (σ = {sigma}, ρ = {rho}, {order})")
        }
    };
    let holds = classification == Classification::Bounded;
    let hypothesis = if holds {
        format!("{what}: holds")
    } else {
        format!("{what}: fails, grows like t^{slope:.3}")
    };
    Ok(ProbeReport {
        space,
        t: ts,
        norm,
        probed,
        slope,
        r_squared,
        classification,
        hypothesis,
        hypothesis_holds: holds,
        psi,
    })
}
