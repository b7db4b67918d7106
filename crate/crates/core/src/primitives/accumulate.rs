//! Primitives of densities by cached cumulative quadrature.

use std::sync::Arc;

use super::{Growth, PrimitiveFn, RealFn};
use crate::error::{Error, Result};
use crate::realline::{DecayHint, Quadrature};

const NODES: usize = 512;
const TOL: f64 = 1e-13;
/// Largest per-panel error estimate accepted from an unconverged quadrature.
const SETTLE: f64 = 1e-8;

/// `x ↦ ∫_{anchor}^x ρ`, tabulated on a uniform grid and corrected by a
/// local quadrature from the nearest node.
#[derive(Clone)]
pub struct CumulativeIntegral {
    density: RealFn,
    lo: f64,
    step: f64,
    cum: Vec<f64>,
    knots: Vec<f64>,
    clamp: bool,
}

impl CumulativeIntegral {
    /// Grid of `nodes` panels on `[lo, hi]`; `anchor_node` is the index where
    /// the integral is zero. Outside the grid the value is held constant when
    /// `clamp` is set and integrated from the boundary otherwise.
    pub fn new(
        density: RealFn,
        lo: f64,
        hi: f64,
        nodes: usize,
        anchor_node: usize,
        knots: &[f64],
        clamp: bool,
    ) -> Result<Self> {
        if !(lo < hi) || nodes == 0 || anchor_node > nodes {
            return Err(Error::InvalidParameter(format!(
                "cumulative grid [{lo}, {hi}] with {nodes} panels and anchor {anchor_node}"
            )));
        }
        let step = (hi - lo) / nodes as f64;
        let x = |i: usize| if i == nodes { hi } else { lo + step * i as f64 };
        let q = Quadrature::new(TOL).with_breakpoints(knots.iter().copied());
        let d = density.clone();
        let pieces: Vec<f64> = (0..nodes)
            .map(|i| match q.interval(|s| d(s), x(i), x(i + 1)) {
                Ok(r) => Ok(r.value),
                // Densities built from fractal primitives are only Hölder
                // continuous; a small absolute error is the best available.
                Err(Error::Convergence { estimate, error }) if error <= SETTLE => Ok(estimate),
                Err(e) => Err(e),
            })
            .collect::<Result<_>>()?;
        let mut cum = vec![0.0; nodes + 1];
        for i in anchor_node..nodes {
            cum[i + 1] = cum[i] + pieces[i];
        }
        for i in (0..anchor_node).rev() {
            cum[i] = cum[i + 1] - pieces[i];
        }
        Ok(CumulativeIntegral {
            density,
            lo,
            step,
            cum,
            knots: knots.to_vec(),
            clamp,
        })
    }

    fn node(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    fn local(&self, from: f64, to: f64) -> f64 {
        if from == to {
            return 0.0;
        }
        let d = &self.density;
        let q = Quadrature::new(TOL)
            .with_max_panels(100_000)
            .with_breakpoints(self.knots.iter().copied());
        match q.interval(|s| d(s), from, to) {
            Ok(r) => r.value,
            Err(Error::Convergence { estimate, .. }) => estimate,
            Err(_) => f64::NAN,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.cum.len() - 1;
        let hi = self.node(n);
        if x <= self.lo {
            return if self.clamp { self.cum[0] } else { self.cum[0] + self.local(self.lo, x) };
        }
        if x >= hi {
            return if self.clamp { self.cum[n] } else { self.cum[n] + self.local(hi, x) };
        }
        let i = (((x - self.lo) / self.step).round() as usize).min(n);
        self.cum[i] + self.local(self.node(i), x)
    }

    /// Integral over the whole grid.
    pub fn total(&self) -> f64 {
        self.cum[self.cum.len() - 1] - self.cum[0]
    }
}

/// `F(x) = ∫_{−∞}^x ρ` for a density decaying as described by `hint`.
pub fn accumulate<D>(density: D, hint: DecayHint) -> Result<PrimitiveFn>
where
    D: Fn(f64) -> f64 + Send + Sync + 'static,
{
    accumulate_with_knots("accumulated", Arc::new(density), hint, &[])
}

pub(crate) fn accumulate_with_knots(label: &str, density: RealFn, hint: DecayHint, knots: &[f64]) -> Result<PrimitiveFn> {
    let (lo, hi) = hint.window(1e-14)?;
    let cum = CumulativeIntegral::new(density.clone(), lo, hi, NODES, 0, knots, true)?;
    let total = cum.total();
    let mut p = PrimitiveFn::new(label, move |x| cum.eval(x))
        .with_limits(0.0, total)
        .with_shared_density(Some(density))
        .with_knots(knots.iter().copied())
        .with_window(lo, hi);
    if let DecayHint::Compact { a, b } = hint {
        p = p.with_support(a, b);
    }
    Ok(p)
}

/// `F(x) = ∫_0^x ρ` for a density that may grow, tabulated on `[−radius, radius]`.
pub fn accumulate_from_origin(
    label: &str,
    density: RealFn,
    growth: Growth,
    radius: f64,
    knots: &[f64],
) -> Result<PrimitiveFn> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let cum = CumulativeIntegral::new(density.clone(), -radius, radius, 2 * NODES, NODES, knots, false)?;
    Ok(PrimitiveFn::new(label, move |x| cum.eval(x))
        .with_growth(growth)
        .with_shared_density(Some(density))
        .with_knots(knots.iter().copied())
        .with_window(-radius.min(10.0), radius.min(10.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::theta;

    #[test]
    fn gaussian_cdf() {
        let p = accumulate(|x| theta(0.5, x).unwrap(), DecayHint::gaussian(0.5, 0.0).unwrap()).unwrap();
        assert!((p.eval(0.0) - 0.5).abs() < 1e-13);
        for &x in &[-3.0, -0.7, 0.4, 2.5] {
            let exact = 0.5 * libm::erfc(-x / 2f64.sqrt());
            assert!((p.eval(x) - exact).abs() < 1e-12, "x = {x}");
        }
        assert!((p.limit_pos().unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_and_indicator() {
        let z = accumulate(|_| 0.0, DecayHint::compact(-1.0, 1.0).unwrap()).unwrap();
        assert_eq!(z.eval(0.3), 0.0);
        let r = accumulate(|x| if x > 0.0 && x < 1.0 { 1.0 } else { 0.0 }, DecayHint::compact(0.0, 1.0).unwrap())
            .unwrap();
        for &x in &[-1.0, 0.25, 0.5, 0.9, 3.0] {
            assert!((r.eval(x) - x.clamp(0.0, 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn from_origin_with_growth() {
        let d: RealFn = Arc::new(|x: f64| x * x);
        let p = accumulate_from_origin("cube", d, Growth::Subgaussian, 5.0, &[]).unwrap();
        for &x in &[-7.0, -2.0, 0.0, 1.5, 4.9, 6.0] {
            assert!((p.eval(x) - x * x * x / 3.0).abs() < 1e-11 * (1.0 + x.abs().powi(3)), "x = {x}");
        }
    }
}
