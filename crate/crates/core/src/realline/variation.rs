//! Total variation on the real line.

use super::quadrature::{DecayHint, Quadrature};
use crate::error::{Error, Result};

const START_PANELS: usize = 64;
const MAX_PANELS: usize = 1 << 20;

/// Total variation `V g` over ℝ.
///
/// With a derivative the result is `∫|g'|`, split at the sign changes of
/// `g'`. Without one the partition over the truncation window is doubled
/// until two successive estimates agree within `tol·max(1, V)`. Each
/// estimate sums `|Δg|` between the turning points of the samples, with
/// every interior turning value replaced by the vertex of the parabola
/// through its neighbours.
pub fn total_variation<G, D>(g: G, g_deriv: Option<D>, hint: DecayHint, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (lo, hi) = hint.window(tol)?;
    match g_deriv {
        Some(d) => {
            let roots = sign_changes(&d, lo, hi, 4096);
            let q = Quadrature::new(tol).with_breakpoints(roots);
            Ok(q.real_line(|x| d(x).abs(), hint)?.value)
        }
        None => partition_variation(&g, lo, hi, tol),
    }
}

/// Sum of `|Δg|` over successively doubled uniform partitions of `[lo, hi]`.
pub fn partition_variation<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let eval = |x: f64| -> Result<f64> {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x })
        }
    };
    let mut n = START_PANELS;
    let h = |n: usize| (hi - lo) / n as f64;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        values.push(eval(lo + h(n) * i as f64)?);
    }
    let sum = |v: &[f64]| polished_sum(v);
    let mut prev = sum(&values);
    let mut agreed = 0;
    while n < MAX_PANELS {
        let m = 2 * n;
        let mut next = Vec::with_capacity(m + 1);
        for i in 0..n {
            next.push(values[i]);
            next.push(eval(lo + h(m) * (2 * i + 1) as f64)?);
        }
        next.push(values[n]);
        let cur = sum(&next);
        // Two agreements in a row: a single one can be a coincidence of
        // coarse grids that straddle the extrema symmetrically.
        if (cur - prev).abs() < tol * cur.max(1.0) {
            agreed += 1;
            if agreed == 2 {
                return Ok(cur);
            }
        } else {
            agreed = 0;
        }
        values = next;
        n = m;
        prev = cur;
        if n == MAX_PANELS {
            let before = prev;
            return Err(Error::UnboundedVariation {
                previous: before,
                last: cur,
            });
        }
    }
    Err(Error::UnboundedVariation {
        previous: prev,
        last: prev,
    })
}

/// Variation of the sampled sequence with interior extrema moved to the
/// vertex of the local parabola.
fn polished_sum(v: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut last = v[0];
    for i in 1..v.len() - 1 {
        let (d1, d2) = (v[i] - v[i - 1], v[i + 1] - v[i]);
        if d1 * d2 < 0.0 {
            let a = 0.5 * (d2 - d1);
            let b = 0.5 * (d1 + d2);
            let vertex = v[i] - b * b / (4.0 * a);
            total += (vertex - last).abs();
            last = vertex;
        }
    }
    total + (v[v.len() - 1] - last).abs()
}

/// Points in `(lo, hi)` where `f` changes sign, located by bisection after
/// a uniform scan with `n` cells. Exact zeros on the scan grid are kept.
pub fn sign_changes<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / n as f64;
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = if i == n { hi } else { lo + step * i as f64 };
        let fb = f(xb);
        if fb == 0.0 && i < n {
            roots.push(xb);
        } else if fa * fb < 0.0 {
            let (mut a, mut b, mut sa) = (xa, xb, fa.signum());
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == sa {
                    a = m;
                    sa = fm.signum();
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    roots
}
