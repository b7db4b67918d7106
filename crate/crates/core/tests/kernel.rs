use alexheat::kernel::{cramer_bound, hermite, kernel_variation_constant, theta, theta_deriv, KernelEval};
use alexheat::realline::{total_variation, DecayHint};
use proptest::prelude::*;

#[test]
fn product_identity() {
    let (a, b) = (0.5f64, 1.5f64);
    let c = a * b / (a + b);
    let k = 2.0 * std::f64::consts::PI.sqrt() * (a + b).sqrt();
    for i in 0..=80 {
        let x = -4.0 + 0.1 * i as f64;
        let lhs = theta(a, x).unwrap() * theta(b, x).unwrap();
        let rhs = theta(c, x).unwrap() / k;
        assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1e-300).max(lhs), "{x}: {lhs} {rhs}");
    }
}

#[test]
fn variation_scales_with_the_constant() {
    for m in 0..3usize {
        let c = kernel_variation_constant(m + 1, 1e-13).unwrap();
        for t in [0.25, 1.0, 4.0] {
            let v = total_variation(
                |x| theta_deriv(m, t, x).unwrap(),
                Some(|x| theta_deriv(m + 1, t, x).unwrap()),
                DecayHint::gaussian(1.0 / (4.0 * t), 0.0).unwrap(),
                1e-12,
            )
            .unwrap();
            let want = c * t.powf(-((m + 1) as f64) / 2.0);
            assert!((v - want).abs() <= 1e-6 * want, "m={m} t={t}: {v} vs {want}");
        }
    }
}

#[test]
fn cramer_bound_holds() {
    for n in 1..=12 {
        assert!(kernel_variation_constant(n, 1e-12).unwrap() <= cramer_bound(n));
    }
}

#[test]
fn hermite_matches_its_generating_recurrence() {
    for x in [-2.5, -0.3, 0.0, 0.7, 3.1] {
        for n in 1..15usize {
            let next = hermite(n + 1, x).unwrap();
            let rec = 2.0 * x * hermite(n, x).unwrap() - 2.0 * n as f64 * hermite(n - 1, x).unwrap();
            assert!((next - rec).abs() <= 1e-12 * next.abs().max(1.0), "n={n} x={x}");
        }
    }
}

#[test]
fn upper_tail_of_theta_is_complementary_mass() {
    let k = KernelEval::new(0.3, 0).unwrap();
    assert!((k.upper_tail(0.0).unwrap() - 0.5).abs() < 1e-15);
    let k1 = KernelEval::new(0.3, 1).unwrap();
    // ∫_x^∞ Θ′ = −Θ(x)
    assert!((k1.upper_tail(0.4).unwrap() + theta(0.3, 0.4).unwrap()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn derivatives_match_central_differences(m in 1usize..4, t in 0.1..3.0f64, x in -4.0..4.0f64) {
        let h = 1e-4 * t.sqrt();
        let fd = (theta_deriv(m - 1, t, x + h).unwrap() - theta_deriv(m - 1, t, x - h).unwrap()) / (2.0 * h);
        let d = theta_deriv(m, t, x).unwrap();
        let scale = theta_deriv(m, t, 0.0).unwrap().abs().max(theta(t, 0.0).unwrap() / t.powf(m as f64 / 2.0));
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-3 * scale), "{fd} vs {d}");
    }

    #[test]
    fn theta_is_even_and_positive(t in 0.01..10.0f64, x in 0.0..10.0f64) {
        let v = theta(t, x).unwrap();
        prop_assert_eq!(v, theta(t, -x).unwrap());
        prop_assert!(v >= 0.0);
    }
}
