//! The solution `u(·, t) = f ∗ Θ_t`, always computed against the primitive:
//! for `f = F^{(n)}`, `u_t(x) = ∫ F(ξ) Θ_t^{(n)}(x − ξ) dξ`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{gauss, KernelEval};
use crate::primitives::{CumulativeIntegral, DistributionalData, Growth, PrimitiveFn, RealFn, Space};
use crate::realline::{expanded_radius, sign_changes, DecayHint, ExtReal, ExtremumReport, Quadrature};
use crate::spaces::{focused_search, primitive_norm, weighted_norm_at, NormReport, WeightSpec};

/// `∫ F(ξ) Θ_t^{(m)}(x − ξ) dξ`.
///
/// Compactly supported primitives are integrated over the support only and
/// the constant parts outside contribute through closed-form kernel tails.
pub fn convolve_primitive(p: &PrimitiveFn, t: f64, x: f64, m: usize, tol: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let k = KernelEval::new(t, m)?;
    if let (Some(st), Growth::Bounded, Some(0.0)) = (p.stieltjes(), p.growth(), p.limit_neg()) {
        // By parts: ∫ F Θ^{(m)}(x − ξ) dξ = ∫ K(x − ξ) dF(ξ) with K the kernel
        // antiderivative vanishing at −∞.
        return if m == 0 {
            st(&|xi| 1.0 - k.upper_tail(x - xi).unwrap_or(f64::NAN), t.sqrt(), tol)
        } else {
            let k1 = KernelEval::new(t, m - 1)?;
            st(&|xi| k1.eval(x - xi), t.sqrt(), tol)
        };
    }
    let integrand = |xi: f64| p.eval(xi) * k.eval(x - xi);
    let q = Quadrature::new(tol).with_breakpoints(p.knots().iter().copied().chain([x]));
    match (p.growth(), p.support()) {
        (Growth::Bounded, Some((a, b))) => {
            let (r, _, _) = expanded_radius(&|y| k.eval(y), 0.0, 1.0 / (4.0 * t), tol)?;
            let (lo, hi) = (a.max(x - r), b.min(x + r));
            let main = if lo < hi { q.interval(integrand, lo, hi)?.value } else { 0.0 };
            let right = p.limit_pos().unwrap_or(0.0);
            let left = p.limit_neg().unwrap_or(0.0);
            // ∫_b^∞ Θ^{(m)}(x − ξ) dξ = ∫_{−∞}^{x−b} Θ^{(m)}, and symmetrically on the left.
            let below = |y: f64| -> Result<f64> {
                if m == 0 {
                    Ok(1.0 - k.upper_tail(y)?)
                } else {
                    Ok(-k.upper_tail(y)?)
                }
            };
            let mut v = main;
            if right != 0.0 {
                v += right * below(x - b)?;
            }
            if left != 0.0 {
                v += left * k.upper_tail(x - a)?;
            }
            Ok(v)
        }
        (growth, _) => {
            let hint = match growth {
                Growth::Weighted(tau) => {
                    if t >= tau {
                        return Err(Error::OutOfHorizon { t, horizon: tau });
                    }
                    DecayHint::gaussian(1.0 / (4.0 * t) - 1.0 / (4.0 * tau), x * tau / (tau - t))?
                }
                _ => DecayHint::gaussian(1.0 / (4.0 * t), x)?,
            };
            Ok(q.real_line(integrand, hint)?.value)
        }
    }
}

fn check_time(data: &DistributionalData, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be positive and finite, got {t}")));
    }
    if let Some(tau) = data.horizon() {
        if t >= tau {
            return Err(Error::OutOfHorizon { t, horizon: tau });
        }
    }
    Ok(())
}

/// `u_t(x) = (f ∗ Θ_t)(x)`.
pub fn convolve(data: &DistributionalData, t: f64, x: f64, tol: f64) -> Result<f64> {
    check_time(data, t)?;
    convolve_primitive(data.primitive(), t, x, data.order(), tol)
}

/// `∂_x^k ∂_t^j u`, using `∂_t Θ_t = Θ_t''`.
pub fn solution_derivative(data: &DistributionalData, t: f64, x: f64, k: usize, j: usize, tol: f64) -> Result<f64> {
    if j > 1 {
        return Err(Error::InvalidParameter(format!("time order must be 0 or 1, got {j}")));
    }
    check_time(data, t)?;
    convolve_primitive(data.primitive(), t, x, data.order() + k + 2 * j, tol)
}

fn require_bounded(data: &DistributionalData) -> Result<()> {
    match data.space() {
        Space::Alex | Space::AlexN => Ok(()),
        s => Err(Error::Unsupported(format!("needs alex or alexn data, got {s}"))),
    }
}

/// `(F ∗ Θ_t)(x)`, the `B_c` primitive of order-`n` data evolved to time `t`.
pub fn solution_primitive(data: &DistributionalData, t: f64, x: f64, tol: f64) -> Result<f64> {
    require_bounded(data)?;
    check_time(data, t)?;
    convolve_primitive(data.primitive(), t, x, 0, tol)
}

/// `u(·, t)` bundled with its data and tolerance.
#[derive(Debug, Clone)]
pub struct SolutionField {
    data: DistributionalData,
    t: f64,
    tol: f64,
}

impl SolutionField {
    pub fn new(data: DistributionalData, t: f64, tol: f64) -> Result<Self> {
        check_time(&data, t)?;
        Ok(SolutionField { data, t, tol })
    }

    pub fn data(&self) -> &DistributionalData {
        &self.data
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        convolve(&self.data, self.t, x, self.tol)
    }

    pub fn derivative(&self, x: f64, k: usize, j: usize) -> Result<f64> {
        solution_derivative(&self.data, self.t, x, k, j, self.tol)
    }

    /// `(F ∗ Θ_t^{(m)})(x)`.
    pub fn kernel_integral(&self, x: f64, m: usize) -> Result<f64> {
        convolve_primitive(self.data.primitive(), self.t, x, m, self.tol)
    }

    /// `F ∗ Θ_t` as a primitive. For order-1 data its density is `u_t`.
    /// Evaluation failures surface as NaN, which downstream quadrature reports.
    pub fn primitive(&self) -> PrimitiveFn {
        let p = self.data.primitive().clone();
        let (t, tol) = (self.t, self.tol);
        let eval_p = p.clone();
        let growth = match p.growth() {
            Growth::Weighted(tau) => Growth::Weighted(tau - t),
            g => g,
        };
        let (lo, hi) = p.window();
        let pad = 6.0 * t.sqrt();
        let mut out = PrimitiveFn::new(format!("{} * theta_{t}", p.label()), move |x| {
            convolve_primitive(&eval_p, t, x, 0, tol).unwrap_or(f64::NAN)
        })
        .with_growth(growth)
        .with_window(lo - pad, hi + pad);
        if let (Some(a), Some(b)) = (p.limit_neg(), p.limit_pos()) {
            out = out.with_limits(a, b);
        }
        if self.data.order() == 1 {
            let dp = p.clone();
            out = out.with_density(move |x| convolve_primitive(&dp, t, x, 1, tol).unwrap_or(f64::NAN));
        }
        out
    }

    /// `u_t` as order-`n` data in the same space, via the primitive `F ∗ Θ_t`.
    pub fn as_data(&self) -> Result<DistributionalData> {
        let space = match self.data.space() {
            Space::Weighted { tau } => Space::Weighted { tau: tau - self.t },
            s => s,
        };
        DistributionalData::new(self.data.order(), self.primitive(), space)
    }
}

/// `‖u_t − f‖` (or `‖·‖^{(n)}`): `sup − inf` of `D_t = F ∗ Θ_t − F`.
pub fn convergence_norm(data: &DistributionalData, t: f64, tol: f64) -> Result<NormReport> {
    require_bounded(data)?;
    check_time(data, t)?;
    let p = data.primitive();
    let (lo, hi) = p.window();
    let pad = 8.0 * t.sqrt();
    let r = focused_search((lo - pad, hi + pad), tol).run(
        |x| Ok(convolve_primitive(p, t, x, 0, tol)? - p.eval(x)),
        (0.0, 0.0),
    )?;
    Ok(NormReport::from_extremes(&r))
}

fn weighted_args(data: &DistributionalData, sigma: f64, t: f64) -> Result<(f64, RealFn)> {
    let Space::Weighted { tau } = data.space() else {
        return Err(Error::InvalidParameter(format!("needs weighted data, got {}", data.space())));
    };
    let Some(density) = data.primitive().density().cloned() else {
        return Err(Error::Unsupported(format!(
            "`{}` has no pointwise density; weighted convergence needs one",
            data.primitive().label()
        )));
    };
    if !(sigma > 0.0 && sigma < tau) {
        return Err(Error::InvalidParameter(format!("σ must lie in (0, τ) = (0, {tau}), got {sigma}")));
    }
    if !(t > 0.0 && t < tau - sigma) {
        return Err(Error::OutOfHorizon { t, horizon: tau - sigma });
    }
    Ok((tau, density))
}

/// Decay rate of `|u_t| ω_σ` for data of the given growth.
fn solution_weight_rate(growth: Growth, sigma: f64, t: f64) -> f64 {
    match growth {
        Growth::Weighted(tau) => 1.0 / (4.0 * sigma) - 1.0 / (4.0 * (tau - t)),
        _ => 1.0 / (4.0 * sigma),
    }
}

/// `‖u_t − f‖_σ`: `sup − inf` of `G_t(x) = ∫_{−∞}^x (u_t − f) ω_σ`.
///
/// `G_t` is tabulated by direct quadrature; its extremes lie at sign changes
/// of `u_t − f` or at ±∞.
pub fn weighted_convergence_norm(data: &DistributionalData, sigma: f64, t: f64, tol: f64) -> Result<NormReport> {
    let (_, density) = weighted_args(data, sigma, t)?;
    let w = WeightSpec::new(sigma)?;
    let p = data.primitive().clone();
    let rate = solution_weight_rate(p.growth(), sigma, t);
    let pc = p.clone();
    let diff: RealFn = Arc::new(move |x: f64| {
        let u = convolve_primitive(&pc, t, x, 1, tol).unwrap_or(f64::NAN);
        (u - density(x)) * w.eval(x)
    });
    let (r, _, _) = expanded_radius(&|x| diff(x), 0.0, rate, tol.min(1e-12))?;
    let cum = CumulativeIntegral::new(diff.clone(), -r, r, 128, 0, p.knots(), true)?;
    let total = cum.total();
    let mut best = ExtremumReport {
        sup: total.max(0.0),
        inf: total.min(0.0),
        arg_sup: if total >= 0.0 { ExtReal::PosInf } else { ExtReal::NegInf },
        arg_inf: if total >= 0.0 { ExtReal::NegInf } else { ExtReal::PosInf },
        refinement_error: 0.0,
    };
    for x in sign_changes(&|x| diff(x), -r, r, 1024) {
        let v = cum.eval(x);
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

/// `(sup |u_t|, ‖f‖/(2√(πt)))` for `f ∈ A_c`.
pub fn sup_norm_estimate_check(data: &DistributionalData, t: f64, tol: f64) -> Result<(f64, f64)> {
    if data.space() != Space::Alex {
        return Err(Error::InvalidParameter(format!("needs alex data, got {}", data.space())));
    }
    check_time(data, t)?;
    let p = data.primitive();
    let (lo, hi) = p.window();
    let pad = 6.0 * t.sqrt();
    let r = focused_search((lo - pad, hi + pad), tol).run(|x| convolve(data, t, x, tol), (0.0, 0.0))?;
    let lhs = r.sup.abs().max(r.inf.abs());
    let norm = primitive_norm(p, tol)?.value;
    Ok((lhs, norm / (2.0 * (std::f64::consts::PI * t).sqrt())))
}

/// `(∫ u_t, ∫ f)`: the mass of the solution from its primitive at a far
/// point against `F(∞)` for `n = 1` and `0` for higher orders.
pub fn mass_check(data: &DistributionalData, t: f64, tol: f64) -> Result<(f64, f64)> {
    require_bounded(data)?;
    check_time(data, t)?;
    let p = data.primitive();
    let (lo, hi) = p.window();
    let far = lo.abs().max(hi.abs()) + 40.0 * t.sqrt() + 10.0;
    let m = data.order() - 1;
    let lhs = convolve_primitive(p, t, far, m, tol)? - convolve_primitive(p, t, -far, m, tol)?;
    let rhs = if data.order() == 1 {
        p.limit_pos().unwrap_or(0.0) - p.limit_neg().unwrap_or(0.0)
    } else {
        0.0
    };
    Ok((lhs, rhs))
}

/// `(∫ u_t Θ_σ, ∫ f Θ_{σ+t})` for weighted data with a density.
pub fn weighted_pairing_check(data: &DistributionalData, sigma: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    let (_, density) = weighted_args(data, sigma, t)?;
    let p = data.primitive();
    let growth = p.growth();
    let q = Quadrature::new(tol);
    let lhs_rate = solution_weight_rate(growth, sigma, t);
    let lhs = q
        .real_line(
            |x| convolve_primitive(p, t, x, 1, tol).unwrap_or(f64::NAN) * gauss(sigma, x),
            DecayHint::gaussian(lhs_rate, 0.0)?,
        )?
        .value;
    let rhs_rate = 1.0 / (4.0 * (sigma + t)) - growth.rate();
    let rhs = q
        .real_line(|x| density(x) * gauss(sigma + t, x), DecayHint::gaussian(rhs_rate, 0.0)?)?
        .value;
    Ok((lhs, rhs))
}

/// `‖u_t‖_σ` for weighted data, from the primitive `F ∗ Θ_t`.
pub fn weighted_solution_norm(data: &DistributionalData, sigma: f64, t: f64, tol: f64) -> Result<NormReport> {
    let field = SolutionField::new(data.clone(), t, tol)?;
    weighted_norm_at(&field.primitive(), sigma, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::theta;
    use crate::primitives::{accumulate, make_closed_form, Params};
    use std::f64::consts::PI;

    fn closed(name: &str, params: Params) -> PrimitiveFn {
        make_closed_form(name, &params).unwrap()
    }

    #[test]
    fn accumulated_gaussian_evolves_to_the_sum_time() {
        let p = accumulate(|x| theta(0.1, x).unwrap(), DecayHint::gaussian(1.0 / 0.4, 0.0).unwrap()).unwrap();
        let d = DistributionalData::alex(p).unwrap();
        let u = convolve(&d, 0.2, 0.0, 1e-11).unwrap();
        assert!((u - 1.0 / (2.0 * (0.3 * PI).sqrt())).abs() < 1e-9);
    }

    #[test]
    fn zero_data() {
        let d = DistributionalData::alex(closed("zero", Params::new())).unwrap();
        assert_eq!(convolve(&d, 0.5, 0.3, 1e-10).unwrap(), 0.0);
        assert_eq!(solution_primitive(&d, 0.5, 0.3, 1e-10).unwrap(), 0.0);
        assert_eq!(convergence_norm(&d, 0.5, 1e-10).unwrap().value, 0.0);
        assert_eq!(mass_check(&d, 0.5, 1e-10).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn heat_polynomial() {
        let d = DistributionalData::new(1, closed("poly", Params::new().with("n", 3.0)), Space::Weighted { tau: 5.0 }).unwrap();
        for &(x, t) in &[(0.5, 0.3), (-2.0, 1.0), (3.0, 2.0)] {
            let u = convolve(&d, t, x, 1e-11).unwrap();
            let exact = x * x * x + 6.0 * x * t;
            assert!((u - exact).abs() < 1e-8 * (1.0 + exact.abs()), "x={x} t={t}: {u} vs {exact}");
        }
    }

    #[test]
    fn derivatives_and_heat_equation() {
        let d = DistributionalData::alex(accumulate(|x| theta(0.1, x).unwrap(), DecayHint::gaussian(2.5, 0.0).unwrap()).unwrap())
            .unwrap();
        let (t, x, h) = (0.3, 0.4, 1e-4);
        let fd = (convolve(&d, t, x + h, 1e-12).unwrap() - convolve(&d, t, x - h, 1e-12).unwrap()) / (2.0 * h);
        let ux = solution_derivative(&d, t, x, 1, 0, 1e-12).unwrap();
        assert!((fd - ux).abs() < 1e-6);
        let ut = solution_derivative(&d, t, x, 0, 1, 1e-12).unwrap();
        let uxx = solution_derivative(&d, t, x, 2, 0, 1e-12).unwrap();
        assert_eq!(ut, uxx);
        assert_eq!(solution_derivative(&d, t, x, 0, 0, 1e-12).unwrap(), convolve(&d, t, x, 1e-12).unwrap());
    }

    #[test]
    fn step_ramp_primitive_reaches_its_limit() {
        let d = DistributionalData::alex(closed("step-ramp", Params::new())).unwrap();
        let v = solution_primitive(&d, 0.5, 20.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let (lhs, rhs) = mass_check(&d, 0.5, 1e-12).unwrap();
        assert!((lhs - 1.0).abs() < 1e-10 && rhs == 1.0);
    }

    #[test]
    fn gaussian_primitive_semigroup() {
        let s = 0.4;
        let d = DistributionalData::alex(closed("gauss", Params::new().with("s", s))).unwrap();
        for &x in &[-1.0, 0.0, 0.7] {
            let v = solution_primitive(&d, 0.3, x, 1e-12).unwrap();
            assert!((v - theta(0.7, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_prime_convergence_norm() {
        let s = 0.5;
        let t = 0.1;
        let d = DistributionalData::alex(closed("gauss", Params::new().with("s", s))).unwrap();
        let n = convergence_norm(&d, t, 1e-11).unwrap();
        // D_t = Θ_{s+t} − Θ_s dips to its minimum at 0 and has a positive bump at x*.
        let xs = (6.0 * s * (s + t) * (1.0 + t / s).ln() / t).sqrt();
        let sup = theta(s + t, xs).unwrap() - theta(s, xs).unwrap();
        let inf = theta(s + t, 0.0).unwrap() - theta(s, 0.0).unwrap();
        assert!((n.value - (sup - inf)).abs() < 1e-9, "{} vs {}", n.value, sup - inf);
    }

    #[test]
    fn horizon_is_enforced() {
        let d = DistributionalData::new(1, closed("neg-gauss", Params::new().with("s", 2.0)), Space::Weighted { tau: 1.5 }).unwrap();
        assert!(matches!(convolve(&d, 1.5, 0.0, 1e-10), Err(Error::OutOfHorizon { .. })));
        assert!(matches!(convolve(&d, 2.5, 0.0, 1e-10), Err(Error::OutOfHorizon { .. })));
        let u = convolve(&d, 0.5, 1.0, 1e-12).unwrap();
        let exact = crate::kernel::theta_signed(-1.5, 1.0).unwrap();
        assert!((u - exact).abs() < 1e-10);
    }

    #[test]
    fn weighted_convergence_of_p2() {
        let d = DistributionalData::new(1, closed("poly", Params::new().with("n", 2.0)), Space::Weighted { tau: 4.0 }).unwrap();
        let n = weighted_convergence_norm(&d, 1.0, 0.1, 1e-11).unwrap();
        assert!((n.value - 0.4 * PI.sqrt()).abs() < 1e-8, "{}", n.value);
    }

    #[test]
    fn pairing_identity_for_unit_data() {
        let d = DistributionalData::new(1, closed("poly", Params::new().with("n", 0.0)), Space::Weighted { tau: 4.0 }).unwrap();
        let (l, r) = weighted_pairing_check(&d, 1.0, 0.5, 1e-11).unwrap();
        assert!((l - 1.0).abs() < 1e-9 && (r - 1.0).abs() < 1e-9);
    }
}
