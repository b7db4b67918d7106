//! Adaptive Gauss–Kronrod (10/21 point) quadrature on finite intervals and
//! Gaussian-truncated integration over the whole line.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use super::special::erfcx;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Decay information used to truncate an infinite range of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayHint {
    /// `|g(x)| ≤ M·exp(-rate·(x-center)²)` outside a bounded set.
    Gaussian { rate: f64, center: f64 },
    /// `g` vanishes outside `[a, b]`.
    Compact { a: f64, b: f64 },
    None,
}

impl DecayHint {
    pub fn gaussian(rate: f64, center: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian hint needs rate > 0 and a finite center, got rate {rate}, center {center}"
            )));
        }
        Ok(DecayHint::Gaussian { rate, center })
    }

    pub fn compact(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "compact hint needs a < b, got [{a}, {b}]"
            )));
        }
        Ok(DecayHint::Compact { a, b })
    }

    /// The interval outside of which the envelope is below `tol·1e-2` of its peak.
    pub fn window(&self, tol: f64) -> Result<(f64, f64)> {
        match *self {
            DecayHint::Gaussian { rate, center } => {
                let r = gaussian_radius(rate, tol);
                Ok((center - r, center + r))
            }
            DecayHint::Compact { a, b } => Ok((a, b)),
            DecayHint::None => Err(Error::UnsupportedDecay),
        }
    }
}

/// Truncation radius about `center` for `g` with Gaussian envelope `rate`.
///
/// Starts at [`gaussian_radius`] and grows by 20% until `|g|` at both cuts is
/// below `1e-2·tol` of the largest value sampled inside. Returns the radius,
/// the larger cut value and the number of evaluations spent.
pub fn expanded_radius<F: Fn(f64) -> f64>(g: &F, center: f64, rate: f64, tol: f64) -> Result<(f64, f64, usize)> {
    let mut r = gaussian_radius(rate, tol);
    let mut evaluations = 0;
    for expansions in 0.. {
        let mut scale: f64 = 0.0;
        for i in 0..=64 {
            let x = center - r + 2.0 * r * i as f64 / 64.0;
            let v = g(x);
            if !v.is_finite() {
                return Err(Error::Evaluation { x });
            }
            scale = scale.max(v.abs());
        }
        let edge = g(center - r).abs().max(g(center + r).abs());
        evaluations += 67;
        if edge <= 1e-2 * tol * scale || scale == 0.0 || expansions >= 40 {
            return Ok((r, edge, evaluations));
        }
        r *= 1.2;
    }
    unreachable!()
}

/// Radius where `exp(-rate·r²)` drops to `tol·1e-2`.
pub fn gaussian_radius(rate: f64, tol: f64) -> f64 {
    ((100.0 / tol.max(1e-300)).ln().max(1.0) / rate).sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { x })
        }
    };
    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    Ok(Panel {
        a,
        b,
        value,
        error,
        abs: res_abs * h,
    })
}

/// Configurable adaptive integrator.
///
/// Panels are bisected worst-error first until the summed error estimate
/// meets `max(tol·|value|, abs_tol)`, where `abs_tol` defaults to
/// `tol·(1 + |b - a|)`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub tol: f64,
    pub abs_tol: Option<f64>,
    pub max_panels: usize,
    pub breakpoints: Vec<f64>,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(1e-10)
    }
}

impl Quadrature {
    pub fn new(tol: f64) -> Self {
        Quadrature {
            tol,
            abs_tol: None,
            max_panels: 4000,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = Some(abs_tol);
        self
    }

    pub fn with_max_panels(mut self, n: usize) -> Self {
        self.max_panels = n.max(1);
        self
    }

    /// Points where the integrand is known to be non-smooth.
    pub fn with_breakpoints<I: IntoIterator<Item = f64>>(mut self, pts: I) -> Self {
        self.breakpoints.extend(pts.into_iter().filter(|p| p.is_finite()));
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// `∫_a^b g`.
    pub fn interval<F: Fn(f64) -> f64>(&self, g: F, a: f64, b: f64) -> Result<QuadratureResult> {
        self.check()?;
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if a > b {
            let r = self.interval(g, b, a)?;
            return Ok(QuadratureResult {
                value: -r.value,
                ..r
            });
        }
        if a == b {
            let v = g(a);
            if !v.is_finite() {
                return Err(Error::Evaluation { x: a });
            }
            return Ok(QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 1,
            });
        }
        let abs_tol = self.abs_tol.unwrap_or(self.tol * (1.0 + (b - a)));
        // Panel errors are floored at 50ε∫|g| by rounding; twice that is the
        // best the sum can reach.
        let target = |v: f64, abs: f64| (self.tol * v.abs()).max(abs_tol).max(100.0 * f64::EPSILON * abs);

        let mut cuts: Vec<f64> = vec![a];
        let mut inner: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&p| p > a && p < b)
            .collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(b);

        let mut heap = BinaryHeap::new();
        let mut settled: Vec<Panel> = Vec::new();
        let mut evaluations = 0;
        let mut total = 0.0;
        let mut err = 0.0;
        let mut abs = 0.0;
        for w in cuts.windows(2) {
            let p = gk21(&g, w[0], w[1])?;
            evaluations += 21;
            total += p.value;
            err += p.error;
            abs += p.abs;
            heap.push(p);
        }

        while err > target(total, abs) {
            let Some(worst) = heap.pop() else {
                break;
            };
            let mid = 0.5 * (worst.a + worst.b);
            let too_narrow = mid <= worst.a
                || mid >= worst.b
                || (worst.b - worst.a) <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
            if too_narrow {
                settled.push(worst);
                continue;
            }
            if heap.len() + settled.len() + 1 >= self.max_panels {
                heap.push(worst);
                let (value, error) = sum_panels(heap.iter().chain(settled.iter()));
                return Err(Error::Convergence {
                    estimate: value,
                    error,
                });
            }
            let left = gk21(&g, worst.a, mid)?;
            let right = gk21(&g, mid, worst.b)?;
            evaluations += 42;
            total += left.value + right.value - worst.value;
            err += left.error + right.error - worst.error;
            abs += left.abs + right.abs - worst.abs;
            heap.push(left);
            heap.push(right);
        }

        let (value, error) = sum_panels(heap.iter().chain(settled.iter()));
        if error > target(value, abs) && heap.is_empty() {
            return Err(Error::Convergence {
                estimate: value,
                error,
            });
        }
        Ok(QuadratureResult {
            value,
            error_estimate: error,
            evaluations,
        })
    }

    /// `∫_ℝ g`, truncated according to `hint`.
    ///
    /// For a Gaussian hint the radius starts where the envelope falls below
    /// `tol·1e-2` and grows until the integrand at the cut is negligible
    /// against its interior scale. The reported error includes the tail
    /// bound implied by the envelope.
    pub fn real_line<F: Fn(f64) -> f64>(&self, g: F, hint: DecayHint) -> Result<QuadratureResult> {
        self.check()?;
        match hint {
            DecayHint::None => Err(Error::UnsupportedDecay),
            DecayHint::Compact { a, b } => self.interval(g, a, b),
            DecayHint::Gaussian { rate, center } => {
                let (r, edge, evaluations) = expanded_radius(&g, center, rate, self.tol)?;
                let z = r * rate.sqrt();
                let tail = edge * erfcx(z) * (PI / rate).sqrt();
                let res = self.interval(&g, center - r, center + r)?;
                Ok(QuadratureResult {
                    value: res.value,
                    error_estimate: res.error_estimate + tail,
                    evaluations: res.evaluations + evaluations,
                })
            }
        }
    }
}

fn sum_panels<'a, I: Iterator<Item = &'a Panel>>(panels: I) -> (f64, f64) {
    let mut ps: Vec<&Panel> = panels.collect();
    ps.sort_by(|p, q| p.a.total_cmp(&q.a));
    ps.iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// `∫_a^b g` to relative tolerance `tol`.
pub fn integrate_interval<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    Quadrature::new(tol).interval(g, a, b)
}

/// `∫_ℝ g`, using `hint` to choose the truncation.
pub fn integrate_real_line<F: Fn(f64) -> f64>(g: F, hint: DecayHint, tol: f64) -> Result<QuadratureResult> {
    Quadrature::new(tol).real_line(g, hint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(t: f64, x: f64) -> f64 {
        (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
    }

    #[test]
    fn constant_and_odd() {
        let r = integrate_interval(|_| 1.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-15);
        assert!(r.evaluations >= 1 && r.error_estimate >= 0.0);
        let r = integrate_interval(|x| x * x * x, -1.0, 1.0, 1e-10).unwrap();
        assert!(r.value.abs() < 1e-16);
    }

    #[test]
    fn polynomial_exactness() {
        let r = integrate_interval(|x| x.powi(20) - 3.0 * x.powi(7), 0.0, 1.0, 1e-10).unwrap();
        let exact = 1.0 / 21.0 - 3.0 / 8.0;
        assert!((r.value - exact).abs() <= 10.0 * f64::EPSILON * exact.abs() + 1e-300);
    }

    #[test]
    fn gaussian_mass() {
        let s = 0.5f64.sqrt();
        // ±8√t is ±4√2 standard deviations of Θ_t, so erfc(4) of the mass is cut off.
        let r = integrate_interval(|x| theta(0.5, x), -8.0 * s, 8.0 * s, 1e-12).unwrap();
        assert!((r.value - (1.0 - libm::erfc(4.0))).abs() < 1e-12);
        let r = integrate_real_line(|x| theta(0.3, x), DecayHint::gaussian(1.0 / 1.2, 0.0).unwrap(), 1e-10)
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_real_line(|x| x * theta(1.0, x), DecayHint::gaussian(0.25, 0.0).unwrap(), 1e-10)
            .unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn kernel_product_gives_semigroup_value() {
        let hint = DecayHint::gaussian(1.0 / 0.8, 0.0).unwrap();
        let r = integrate_real_line(|x| theta(0.1, x) * theta(0.2, 1.0 - x), hint, 1e-12).unwrap();
        let oracle = (-1.0f64 / 1.2).exp() / (1.2 * PI).sqrt();
        assert!((r.value - oracle).abs() < 1e-12);
    }

    #[test]
    fn refuses_without_decay() {
        assert_eq!(
            integrate_real_line(|_| 1.0, DecayHint::None, 1e-8),
            Err(Error::UnsupportedDecay)
        );
    }

    #[test]
    fn reports_offending_abscissa() {
        match integrate_interval(|x| if x == 0.5 { f64::INFINITY } else { x }, 0.0, 1.0, 1e-8) {
            Err(Error::Evaluation { x }) => assert_eq!(x, 0.5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            integrate_interval(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1e-8),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let q = Quadrature::new(1e-12).with_breakpoints([0.3]);
        let r = q.interval(|x| (x - 0.3).abs(), 0.0, 1.0).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn panel_limit_yields_best_estimate() {
        let q = Quadrature::new(1e-14).with_max_panels(4);
        match q.interval(|x| (50.0 * x).sin().abs(), 0.0, 3.0) {
            Err(Error::Convergence { estimate, error }) => {
                assert!(estimate.is_finite() && error > 0.0)
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }
}
