use alexheat::primitives::{make_closed_form, Params};
use alexheat::realline::{integrate_interval, partition_variation, sup_inf, total_variation, DecayHint};
use alexheat::spaces::pair_with_bv;
use proptest::prelude::*;

fn theta(t: f64, x: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_additivity(a in -5.0..0.0f64, w1 in 0.1..4.0f64, w2 in 0.1..4.0f64, k in 0.5..6.0f64, p in -3.0..3.0f64) {
        let g = |x: f64| (k * x + p).sin() * (-0.1 * x * x).exp() + x * x;
        let c = a + w1;
        let b = c + w2;
        let tol = 1e-10;
        let left = integrate_interval(g, a, c, tol).unwrap();
        let right = integrate_interval(g, c, b, tol).unwrap();
        let whole = integrate_interval(g, a, b, tol).unwrap();
        let budget = left.error_estimate + right.error_estimate + whole.error_estimate + 1e-13 * (1.0 + whole.value.abs());
        prop_assert!((left.value + right.value - whole.value).abs() <= budget.max(1e-12));
    }

    #[test]
    fn sup_inf_shifts_with_a_constant(c in -100.0..100.0f64, s in 0.1..3.0f64, m in -2.0..2.0f64) {
        let f = |x: f64| theta(s, x - m) - 0.5 * theta(2.0 * s, x + 1.0);
        let base = sup_inf(f, (0.0, 0.0), 1e-8).unwrap();
        let shifted = sup_inf(|x| f(x) + c, (c, c), 1e-8).unwrap();
        prop_assert!((shifted.sup - (base.sup + c)).abs() <= 4.0 * f64::EPSILON * (c.abs() + base.sup.abs()));
        prop_assert!((shifted.inf - (base.inf + c)).abs() <= 4.0 * f64::EPSILON * (c.abs() + base.inf.abs()));
    }

    #[test]
    fn variation_with_derivative_matches_partitions(t in 0.2..3.0f64, m in -1.0..1.0f64) {
        let tol = 1e-9;
        let g = |x: f64| theta(t, x - m) * (1.0 + 0.5 * (x).sin());
        let dg = |x: f64| {
            let th = theta(t, x - m);
            -(x - m) / (2.0 * t) * th * (1.0 + 0.5 * x.sin()) + th * 0.5 * x.cos()
        };
        let hint = DecayHint::gaussian(1.0 / (4.0 * t), m).unwrap();
        let exact = total_variation(g, Some(dg), hint, tol).unwrap();
        let (lo, hi) = hint.window(tol).unwrap();
        let parts = partition_variation(&g, lo, hi, tol).unwrap();
        prop_assert!((exact - parts).abs() <= 10.0 * tol * exact.max(1.0), "{exact} vs {parts}");
    }
}

#[test]
fn bv_multipliers_converge() {
    // f = Θ_s′ against g_n = Θ_t(· − c)·min(1, n/(1 + x²)), which tends to
    // Θ_t(· − c); the limit pairing is Θ_{s+t}′(c).
    let (s, t, c) = (0.5, 0.25, 0.7);
    let p = make_closed_form("gauss", &Params::new().with("s", s)).unwrap();
    let exact = -c / (2.0 * (s + t)) * theta(s + t, c);
    let mut gaps = Vec::new();
    for n in [4.0, 16.0, 64.0] {
        let dg = move |x: f64| {
            let th = theta(t, x - c);
            let dth = -(x - c) / (2.0 * t) * th;
            let w = n / (1.0 + x * x);
            if w >= 1.0 {
                dth
            } else {
                dth * w - th * 2.0 * n * x / ((1.0 + x * x) * (1.0 + x * x))
            }
        };
        let v = pair_with_bv(&p, 0.0, dg, DecayHint::gaussian(0.5, 0.0).unwrap(), 1e-12).unwrap();
        gaps.push((v - exact).abs());
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}
