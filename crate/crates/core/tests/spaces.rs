use std::f64::consts::PI;

use alexheat::catalog::CatalogEntry;
use alexheat::primitives::{from_samples, make_closed_form, DistributionalData, Params, PrimitiveFn};
use alexheat::realline::{sup_inf, DecayHint};
use alexheat::spaces::{alex_norm, holder_bound, pair_with_bv, primitive_norm, weighted_norm_at};
use proptest::prelude::*;

/// Piecewise-linear primitive through (x_i, F_i) starting from F = 0.
fn piecewise(ys: &[f64], lo: f64, hi: f64) -> PrimitiveFn {
    let n = ys.len();
    let pts: Vec<(f64, f64)> = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| (lo + (hi - lo) * i as f64 / (n - 1) as f64, if i == 0 { 0.0 } else { y }))
        .collect();
    from_samples(&pts, 0.0, pts[n - 1].1).unwrap()
}

fn theta(t: f64, x: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oscillation_equals_the_pairwise_supremum(ys in prop::collection::vec(-5.0..5.0f64, 200)) {
        let p = piecewise(&ys, -3.0, 3.0);
        let mut pair: f64 = 0.0;
        let vals: Vec<f64> = (0..200).map(|i| p.eval(-3.0 + 6.0 * i as f64 / 199.0)).collect();
        for i in 0..200 {
            for j in i + 1..200 {
                pair = pair.max((vals[i] - vals[j]).abs());
            }
        }
        prop_assert_eq!(primitive_norm(&p, 1e-10).unwrap().value, pair);
    }

    #[test]
    fn holder_inequality(ys in prop::collection::vec(-2.0..2.0f64, 12), t in 0.1..2.0f64, tau in 0.2..3.0f64) {
        let p = piecewise(&ys, -2.0, 2.0);
        let data = DistributionalData::alex(p.clone()).unwrap();
        let hint = DecayHint::gaussian(1.0 / (4.0 * t.max(tau)), 0.0).unwrap();
        let tol = 1e-10;
        let cases: [(f64, f64, Box<dyn Fn(f64) -> f64>); 3] = [
            (0.0, 2.0, Box::new(move |x: f64| -x / (2.0 * tau) * (-x * x / (4.0 * tau)).exp())),
            (0.0, 1.0 / (PI * t).sqrt(), Box::new(move |x: f64| -x / (2.0 * t) * theta(t, x))),
            (PI / 2.0, PI, Box::new(|x: f64| 1.0 / (1.0 + x * x))),
        ];
        for (i, (limit, variation, dg)) in cases.iter().enumerate() {
            // arctan′ decays only algebraically; F is constant beyond ±2 so the
            // integrand is F(±∞)/(1 + x²) there, integrated in closed form.
            let pairing = if i == 2 {
                let inner = alexheat::realline::integrate_interval(|x| p.eval(x) * dg(x), -2.0, 2.0, tol).unwrap().value;
                let tail = p.limit_pos().unwrap() * (PI / 2.0 - 2f64.atan());
                p.limit_pos().unwrap() * limit - inner - tail
            } else {
                pair_with_bv(&p, *limit, dg, hint, tol).unwrap()
            };
            let bound = holder_bound(&data, *limit, *variation, tol).unwrap();
            prop_assert!(pairing.abs() <= bound + 1e-9, "case {i}: {pairing} > {bound}");
        }
    }
}

fn alex_catalog() -> Vec<CatalogEntry> {
    ["zero", "gauss", "gauss-prime", "chirp-re", "chirp-im", "cantor-deriv", "alg-sing", "non-lp", "step", "weierstrass-deriv"]
        .iter()
        .map(|k| CatalogEntry::new(k, &Params::new()).unwrap())
        .collect()
}

#[test]
fn norm_sits_between_sup_and_twice_sup() {
    for e in alex_catalog() {
        let p = e.data().primitive();
        let norm = alex_norm(e.data(), 1e-9).unwrap().value;
        let (lo, hi) = p.window();
        let r = sup_inf(|x| p.eval(x).abs(), (p.limit_neg().unwrap().abs(), p.limit_pos().unwrap().abs()), 1e-9).unwrap();
        let _ = (lo, hi);
        let sup = r.sup;
        assert!(sup <= norm + 1e-8 && norm <= 2.0 * sup + 1e-8, "{}: {sup} {norm}", e.key());
    }
}

#[test]
fn weighted_norms_nest() {
    let p = make_closed_form("neg-gauss", &Params::new().with("s", 2.0)).unwrap();
    let tol = 1e-10;
    for (r, s) in [(0.25, 0.5), (0.5, 1.0), (0.5, 1.5), (1.0, 1.9)] {
        let nr = weighted_norm_at(&p, r, tol).unwrap().value;
        let ns = weighted_norm_at(&p, s, tol).unwrap().value;
        assert!(nr <= 2.0 * ns + 2.0 * tol, "r={r} s={s}: {nr} {ns}");
    }
}

#[test]
fn bounded_growth_data_lie_in_every_weighted_space() {
    for e in alex_catalog() {
        for tau in [0.5, 1.0, 4.0] {
            let v = weighted_norm_at(e.data().primitive(), tau, 1e-8).unwrap_or_else(|err| panic!("{} τ={tau}: {err}", e.key())).value;
            assert!(v.is_finite() && v >= 0.0, "{} τ={tau}", e.key());
        }
    }
}

#[test]
fn sin_norm_over_bounded_intervals() {
    // sup over bounded intervals of |∫ sin(sx)| is 2/s.
    for s in [0.5, 1.0, 3.0] {
        let p = make_closed_form("sin", &Params::new().with("s", s)).unwrap();
        let x0 = 0.0;
        let r = sup_inf(|x| p.eval(x) - p.eval(x0), (f64::NAN, f64::NAN), 1e-10);
        let best = match r {
            Ok(r) if r.sup.is_finite() => r.sup - r.inf,
            _ => {
                let n = 20_000;
                let vals: Vec<f64> = (0..=n).map(|i| p.eval(-20.0 + 40.0 * i as f64 / n as f64)).collect();
                vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min)
            }
        };
        assert!((best - 2.0 / s).abs() < 1e-6, "s={s}: {best}");
    }
}

#[test]
fn weighted_norm_of_cantor_data() {
    // G is nondecreasing, so the norm is ∫ω_σ dμ = ω_σ(1) − ∫_0^1 C ω_σ′.
    let p = make_closed_form("cantor", &Params::new()).unwrap();
    for sigma in [0.1, 0.5, 2.0] {
        let w = |x: f64| (-x * x / (4.0 * sigma)).exp();
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let by_parts: f64 = (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                p.eval(x) * x / (2.0 * sigma) * w(x) * h
            })
            .sum();
        let want = w(1.0) + by_parts;
        let v = weighted_norm_at(&p, sigma, 1e-10).unwrap().value;
        assert!((v - want).abs() < 1e-6, "σ={sigma}: {v} vs {want}");
    }
}
