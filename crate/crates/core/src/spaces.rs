//! Alexiewicz norms on `A_c` and `A^n_c`, weighted norms on `A_{c,τ}` and
//! the Hölder-type majorant.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primitives::{CumulativeIntegral, DistributionalData, PrimitiveFn, RealFn, Space, StieltjesFn};
use crate::realline::{expanded_radius, sign_changes, DecayHint, ExtReal, ExtremumReport, ExtremumSearch, Quadrature};

/// A norm value with the points realising it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    /// `(x, y)` with `x ≤ y` where `|F(y) − F(x)|` attains the norm.
    pub achieved_by: (ExtReal, ExtReal),
    pub refinement_error: f64,
}

impl NormReport {
    pub fn zero() -> Self {
        NormReport {
            value: 0.0,
            achieved_by: (ExtReal::NegInf, ExtReal::PosInf),
            refinement_error: 0.0,
        }
    }

    pub(crate) fn from_extremes(r: &ExtremumReport) -> Self {
        let (a, b) = (r.arg_inf, r.arg_sup);
        let achieved_by = if a.to_f64() <= b.to_f64() { (a, b) } else { (b, a) };
        NormReport {
            value: (r.sup - r.inf).max(0.0),
            achieved_by,
            refinement_error: r.refinement_error,
        }
    }
}

/// The Gaussian weight `ω_τ(x) = e^{−x²/(4τ)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    tau: f64,
}

impl WeightSpec {
    pub fn new(tau: f64) -> Result<Self> {
        if tau > 0.0 && tau.is_finite() {
            Ok(WeightSpec { tau })
        } else {
            Err(Error::InvalidParameter(format!("weight τ must be positive, got {tau}")))
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (-x * x / (4.0 * self.tau)).exp()
    }
}

/// Extremum search focused on the primitive's structure.
pub(crate) fn focused_search(window: (f64, f64), tol: f64) -> ExtremumSearch {
    let (lo, hi) = window;
    let pad = 0.05 * (hi - lo);
    ExtremumSearch::new(tol.max(1e-12)).with_focus(lo - pad, hi + pad)
}

/// `sup F − inf F` over the extended line for a primitive with limits.
pub fn primitive_norm(p: &PrimitiveFn, tol: f64) -> Result<NormReport> {
    let (Some(neg), Some(pos)) = (p.limit_neg(), p.limit_pos()) else {
        return Err(Error::Unsupported(format!(
            "`{}` has no limits at ±∞, its Alexiewicz norm is not defined on the extended line",
            p.label()
        )));
    };
    let mut r = focused_search(p.window(), tol).run(|x| Ok(p.eval(x)), (neg, pos))?;
    // Kinks are where extremes of piecewise primitives sit.
    for &x in p.knots() {
        let v = p.eval(x);
        if v > r.sup {
            r.sup = v;
            r.arg_sup = ExtReal::Finite(x);
        }
        if v < r.inf {
            r.inf = v;
            r.arg_inf = ExtReal::Finite(x);
        }
    }
    Ok(NormReport::from_extremes(&r))
}

/// `‖f‖ = sup_{x<y}|F(y) − F(x)| = sup F − inf F` for `f ∈ A_c`.
pub fn alex_norm(data: &DistributionalData, tol: f64) -> Result<NormReport> {
    if data.space() != Space::Alex {
        return Err(Error::InvalidParameter(format!("alex_norm needs space alex, got {}", data.space())));
    }
    primitive_norm(data.primitive(), tol)
}

/// `‖f‖^{(n)}`, the same computation on the `B_c` primitive of `f ∈ A^n_c`.
pub fn alexn_norm(data: &DistributionalData, tol: f64) -> Result<NormReport> {
    if data.space() != Space::AlexN {
        return Err(Error::InvalidParameter(format!("alexn_norm needs space alexn, got {}", data.space())));
    }
    primitive_norm(data.primitive(), tol)
}

/// `G(x) = ∫_{−∞}^x f ω_σ` for `f = F'`, tabulated once.
///
/// By parts, `G(x) = F(x)ω_σ(x) + (2σ)^{−1} ∫_{−∞}^x F(ξ) ξ ω_σ(ξ) dξ`.
/// `G` does not change when a constant is added to `F`.
#[derive(Clone)]
pub struct WeightedPrimitive {
    primitive: PrimitiveFn,
    weight: WeightSpec,
    tail: Tail,
    radius: f64,
}

#[derive(Clone)]
enum Tail {
    /// Tabulated `(2σ)^{−1} ∫_{−∞}^x F(ξ) ξ ω_σ(ξ) dξ`.
    Table(Arc<CumulativeIntegral>),
    /// `G(x) = ∫_{(−∞, x]} ω_σ dμ` directly against the measure `μ = dF`.
    Measure { integral: StieltjesFn, tol: f64 },
}

impl WeightedPrimitive {
    pub fn new(p: &PrimitiveFn, sigma: f64, tol: f64) -> Result<Self> {
        let weight = WeightSpec::new(sigma)?;
        let rate = net_rate(p, sigma)?;
        if let (Some(s), Some((a, b)), Some(0.0)) = (p.stieltjes(), p.support(), p.limit_neg()) {
            return Ok(WeightedPrimitive {
                primitive: p.clone(),
                weight,
                tail: Tail::Measure { integral: s.clone(), tol: tol.min(1e-12) },
                radius: a.abs().max(b.abs()),
            });
        }
        let f = p.clone();
        let w = weight;
        let integrand: RealFn = Arc::new(move |x: f64| f.eval(x) * x * w.eval(x) / (2.0 * sigma));
        let (radius, _, _) = expanded_radius(&|x| integrand(x), 0.0, rate, tol.min(1e-12))?;
        let cum = CumulativeIntegral::new(integrand, -radius, radius, 256, 0, p.knots(), true)?;
        Ok(WeightedPrimitive {
            primitive: p.clone(),
            weight,
            tail: Tail::Table(Arc::new(cum)),
            radius,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.tail {
            Tail::Table(cum) => {
                let fw = if x.abs() > 2.0 * self.radius { 0.0 } else { self.primitive.eval(x) * self.weight.eval(x) };
                fw + cum.eval(x)
            }
            Tail::Measure { integral, tol } => {
                let w = self.weight;
                let g = move |s: f64| if s <= x { w.eval(s) } else { 0.0 };
                integral(&g, (w.tau()).sqrt(), *tol).unwrap_or(f64::NAN)
            }
        }
    }

    /// `G(+∞) = ∫ f ω_σ`.
    pub fn total(&self) -> f64 {
        match &self.tail {
            Tail::Table(cum) => cum.total(),
            Tail::Measure { .. } => self.eval(f64::INFINITY),
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn net_rate(p: &PrimitiveFn, sigma: f64) -> Result<f64> {
    if !p.growth().admits_weight(sigma) {
        return Err(Error::Divergence(format!(
            "`{}` with growth {:?} is not integrable against ω_σ for σ = {sigma}",
            p.label(),
            p.growth()
        )));
    }
    Ok(1.0 / (4.0 * sigma) - p.growth().rate())
}

/// `G(x)` for the data's own weight.
pub fn weighted_primitive(data: &DistributionalData, x: f64, tol: f64) -> Result<f64> {
    let Space::Weighted { tau } = data.space() else {
        return Err(Error::InvalidParameter(format!("weighted_primitive needs weighted data, got {}", data.space())));
    };
    Ok(WeightedPrimitive::new(data.primitive(), tau, tol)?.eval(x))
}

/// `‖f‖_τ = ‖f ω_τ‖` with the data's own `τ`.
pub fn weighted_norm(data: &DistributionalData, tol: f64) -> Result<NormReport> {
    let Space::Weighted { tau } = data.space() else {
        return Err(Error::InvalidParameter(format!("weighted_norm needs weighted data, got {}", data.space())));
    };
    weighted_norm_at(data.primitive(), tau, tol)
}

/// `‖f‖_σ` for `f = F'` with any admissible `σ`.
///
/// When `F` carries a density the extremes of `G` sit at sign changes of
/// `f ω_σ` or at ±∞, which are located directly. Otherwise `G` is scanned.
pub fn weighted_norm_at(p: &PrimitiveFn, sigma: f64, tol: f64) -> Result<NormReport> {
    let g = WeightedPrimitive::new(p, sigma, tol)?;
    let limits: (f64, f64) = (0.0, g.total());
    match p.density() {
        Some(d) => {
            let r = g.radius();
            let mut best = ExtremumReport {
                sup: limits.0.max(limits.1),
                inf: limits.0.min(limits.1),
                arg_sup: if limits.1 >= limits.0 { ExtReal::PosInf } else { ExtReal::NegInf },
                arg_inf: if limits.1 >= limits.0 { ExtReal::NegInf } else { ExtReal::PosInf },
                refinement_error: 0.0,
            };
            for x in sign_changes(&|x| d(x), -r, r, 2048) {
                let v = g.eval(x);
                if !v.is_finite() {
                    return Err(Error::Evaluation { x });
                }
                if v > best.sup {
                    best.sup = v;
                    best.arg_sup = ExtReal::Finite(x);
                }
                if v < best.inf {
                    best.inf = v;
                    best.arg_inf = ExtReal::Finite(x);
                }
            }
            Ok(NormReport::from_extremes(&best))
        }
        None => {
            let r = g.radius();
            let search = ExtremumSearch::new(tol.max(1e-12)).with_focus(-r, r);
            Ok(NormReport::from_extremes(&search.run(|x| Ok(g.eval(x)), limits)?))
        }
    }
}

/// `‖f‖ (|g(∞)| + V g)`, the majorant of `|∫ f g|` for `g` of bounded variation.
pub fn holder_bound(data: &DistributionalData, g_limit_pos: f64, g_variation: f64, tol: f64) -> Result<f64> {
    if !(g_variation >= 0.0) {
        return Err(Error::InvalidParameter(format!("variation must be nonnegative, got {g_variation}")));
    }
    let norm = primitive_norm(data.primitive(), tol)?.value;
    Ok(norm * (g_limit_pos.abs() + g_variation))
}

/// `∫ f g = F(∞) g(∞) − ∫ F g'` for `F ∈ B_c` and absolutely continuous `g`.
pub fn pair_with_bv<D>(p: &PrimitiveFn, g_limit_pos: f64, g_deriv: D, hint: DecayHint, tol: f64) -> Result<f64>
where
    D: Fn(f64) -> f64,
{
    let Some(pos) = p.limit_pos() else {
        return Err(Error::Unsupported(format!("`{}` has no limit at +∞", p.label())));
    };
    let q = Quadrature::new(tol).with_breakpoints(p.knots().iter().copied());
    let r = q.real_line(|x| p.eval(x) * g_deriv(x), hint)?;
    Ok(pos * g_limit_pos - r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{make_closed_form, Params};
    use std::f64::consts::PI;

    fn closed(name: &str, params: Params) -> PrimitiveFn {
        make_closed_form(name, &params).unwrap()
    }

    #[test]
    fn alex_norm_of_kernel_primitives() {
        let d = DistributionalData::alex(closed("gauss", Params::new().with("s", 0.25))).unwrap();
        let r = alex_norm(&d, 1e-10).unwrap();
        assert!((r.value - 1.0 / PI.sqrt()).abs() < 1e-12);
        let d = DistributionalData::alex(closed("gauss-cdf", Params::new().with("s", 0.25))).unwrap();
        assert!((alex_norm(&d, 1e-10).unwrap().value - 1.0).abs() < 1e-14);
        let d = DistributionalData::alex(closed("zero", Params::new())).unwrap();
        assert_eq!(alex_norm(&d, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn alexn_norm_ignores_order() {
        for n in 2..5 {
            let d = DistributionalData::new(n, closed("step-ramp", Params::new()), Space::AlexN).unwrap();
            assert!((alexn_norm(&d, 1e-10).unwrap().value - 1.0).abs() < 1e-15);
            let s = 0.3;
            let d = DistributionalData::new(n, closed("gauss", Params::new().with("s", s)), Space::AlexN).unwrap();
            assert!((alexn_norm(&d, 1e-10).unwrap().value - 0.5 / (PI * s).sqrt()).abs() < 1e-12);
        }
        let d = DistributionalData::alex(closed("step-ramp", Params::new())).unwrap();
        assert!(alexn_norm(&d, 1e-10).is_err());
    }

    #[test]
    fn weighted_primitive_values() {
        let tau = 1.3;
        let one = DistributionalData::new(1, closed("poly", Params::new().with("n", 0.0)), Space::Weighted { tau }).unwrap();
        let g = weighted_primitive(&one, 1e3, 1e-12).unwrap();
        assert!((g - 2.0 * (PI * tau).sqrt()).abs() < 1e-10);
        let s = 1.0;
        let tau = 3.0;
        let gd = DistributionalData::new(1, closed("gauss-cdf", Params::new().with("s", s)), Space::Weighted { tau }).unwrap();
        let g = weighted_primitive(&gd, 1e3, 1e-12).unwrap();
        assert!((g - (tau / (s + tau)).sqrt()).abs() < 1e-11);
        let n = weighted_norm(&gd, 1e-12).unwrap();
        assert!((n.value - 3f64.sqrt() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn weighted_norm_of_negative_time_kernel() {
        let p = closed("neg-gauss", Params::new().with("s", 2.0));
        let r = weighted_norm_at(&p, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
        assert!(matches!(weighted_norm_at(&p, 2.0, 1e-12), Err(Error::Divergence(_))));
    }

    #[test]
    fn weighted_norm_without_density_scans() {
        let tau = 3.0;
        let dens = closed("gauss-cdf", Params::new().with("s", 1.0));
        let bare = PrimitiveFn::new("bare", move |x| dens.eval(x)).with_limits(0.0, 1.0);
        let r = weighted_norm_at(&bare, tau, 1e-12).unwrap();
        assert!((r.value - 3f64.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn holder_equality_case() {
        let d = DistributionalData::alex(closed("gauss-cdf", Params::new().with("s", 0.4))).unwrap();
        let bound = holder_bound(&d, 1.0, 0.0, 1e-10).unwrap();
        let pairing = pair_with_bv(d.primitive(), 1.0, |_| 0.0, DecayHint::compact(-1.0, 1.0).unwrap(), 1e-10).unwrap();
        assert!((bound - 1.0).abs() < 1e-14 && (pairing - 1.0).abs() < 1e-14);
        let z = DistributionalData::alex(closed("zero", Params::new())).unwrap();
        assert_eq!(holder_bound(&z, 3.0, 2.0, 1e-10).unwrap(), 0.0);
    }
}
