//! Continuous primitives: the sole representation of initial data.

mod accumulate;
mod cantor;
mod closed;
mod samples;
mod weierstrass;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use accumulate::{accumulate, accumulate_from_origin, CumulativeIntegral};
pub use cantor::{cantor_eval, cantor_measure_integral, CANTOR_DEPTH};
pub use closed::{closed_form_names, make_closed_form};
pub use samples::{from_samples, from_samples_with_tol, read_samples_csv, SAMPLE_LIMIT_TOL};
pub use weierstrass::{weierstrass_eval, Weierstrass};

/// Shared real function.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `(g, scale, tol) ↦ ∫ g dF`, with `scale` the finest feature width of `g`.
pub type StieltjesFn = Arc<dyn Fn(&dyn Fn(f64) -> f64, f64, f64) -> Result<f64> + Send + Sync>;

/// Growth class of a primitive at ±∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    Bounded,
    /// At most polynomial growth: `o(e^{x²/(4τ)})` for every `τ > 0`.
    Subgaussian,
    /// `o(e^{x²/(4τ)})` for this `τ` only.
    Weighted(f64),
}

impl Growth {
    /// Whether `|F|ω_σ` decays, i.e. the class is strictly inside `B_{c,σ}`.
    pub fn admits_weight(&self, sigma: f64) -> bool {
        match *self {
            Growth::Bounded | Growth::Subgaussian => true,
            Growth::Weighted(tau) => sigma < tau,
        }
    }

    /// The growth exponent rate `1/(4τ)`, zero for subgaussian classes.
    pub fn rate(&self) -> f64 {
        match *self {
            Growth::Weighted(tau) => 1.0 / (4.0 * tau),
            _ => 0.0,
        }
    }
}

/// A continuous primitive `F` with its declared metadata.
#[derive(Clone)]
pub struct PrimitiveFn {
    label: String,
    eval: RealFn,
    limit_neg: Option<f64>,
    limit_pos: Option<f64>,
    growth: Growth,
    density: Option<RealFn>,
    variation: Option<f64>,
    support: Option<(f64, f64)>,
    knots: Vec<f64>,
    window: (f64, f64),
    stieltjes: Option<StieltjesFn>,
}

impl fmt::Debug for PrimitiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimitiveFn")
            .field("label", &self.label)
            .field("limit_neg", &self.limit_neg)
            .field("limit_pos", &self.limit_pos)
            .field("growth", &self.growth)
            .field("has_density", &self.density.is_some())
            .field("variation", &self.variation)
            .field("support", &self.support)
            .field("window", &self.window)
            .field("has_stieltjes", &self.stieltjes.is_some())
            .finish()
    }
}

impl PrimitiveFn {
    /// A bounded primitive with no other metadata.
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PrimitiveFn {
            label: label.into(),
            eval: Arc::new(f),
            limit_neg: None,
            limit_pos: None,
            growth: Growth::Bounded,
            density: None,
            variation: None,
            support: None,
            knots: Vec::new(),
            window: (-10.0, 10.0),
            stieltjes: None,
        }
    }

    pub fn with_limits(mut self, neg: f64, pos: f64) -> Self {
        self.limit_neg = Some(neg);
        self.limit_pos = Some(pos);
        self
    }

    pub fn with_growth(mut self, g: Growth) -> Self {
        self.growth = g;
        self
    }

    pub fn with_density<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.density = Some(Arc::new(f));
        self
    }

    pub fn with_shared_density(mut self, f: Option<RealFn>) -> Self {
        self.density = f;
        self
    }

    pub fn with_variation(mut self, v: f64) -> Self {
        self.variation = Some(v);
        self
    }

    /// `F ≡ limit_neg` left of `a` and `F ≡ limit_pos` right of `b`.
    pub fn with_support(mut self, a: f64, b: f64) -> Self {
        self.support = Some((a, b));
        self.window = (a, b);
        self
    }

    pub fn with_knots<I: IntoIterator<Item = f64>>(mut self, knots: I) -> Self {
        self.knots = knots.into_iter().collect();
        self.knots.sort_by(f64::total_cmp);
        self.knots.dedup();
        self
    }

    /// Region holding the primitive's structure, used to focus scans.
    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.window = (lo, hi);
        self
    }

    /// Integration against `dF` for primitives whose derivative is a measure
    /// that ordinary quadrature resolves poorly.
    pub fn with_stieltjes(mut self, f: StieltjesFn) -> Self {
        self.stieltjes = Some(f);
        self
    }

    pub fn stieltjes(&self) -> Option<&StieltjesFn> {
        self.stieltjes.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if let Some((a, b)) = self.support {
            if x <= a {
                return self.limit_neg.unwrap_or(0.0);
            }
            if x >= b {
                return self.limit_pos.unwrap_or(0.0);
            }
        }
        (self.eval)(x)
    }

    pub fn limit_neg(&self) -> Option<f64> {
        self.limit_neg
    }

    pub fn limit_pos(&self) -> Option<f64> {
        self.limit_pos
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn density(&self) -> Option<&RealFn> {
        self.density.as_ref()
    }

    pub fn variation(&self) -> Option<f64> {
        self.variation
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Member of `B_c`: bounded, with `F(−∞) = 0` and a limit at `+∞`.
    pub fn is_bc(&self) -> bool {
        self.growth == Growth::Bounded && self.limit_neg == Some(0.0) && self.limit_pos.is_some()
    }

    /// `Σ c_i F_i`. Metadata is merged: limits and densities survive only
    /// when every term has them, support is the hull, growth the widest.
    pub fn combine(label: impl Into<String>, terms: &[(f64, PrimitiveFn)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty combination".into()));
        }
        let parts: Vec<(f64, PrimitiveFn)> = terms.to_vec();
        let evals = parts.clone();
        let mut p = PrimitiveFn::new(label, move |x| evals.iter().map(|(c, f)| c * f.eval(x)).sum());
        let sum_opt = |get: &dyn Fn(&PrimitiveFn) -> Option<f64>| -> Option<f64> {
            parts.iter().map(|(c, f)| get(f).map(|v| c * v)).sum()
        };
        p.limit_neg = sum_opt(&|f| f.limit_neg);
        p.limit_pos = sum_opt(&|f| f.limit_pos);
        p.growth = parts.iter().fold(Growth::Bounded, |g, (_, f)| widest(g, f.growth));
        if parts.iter().all(|(_, f)| f.density.is_some()) {
            let ds: Vec<(f64, RealFn)> = parts
                .iter()
                .map(|(c, f)| (*c, f.density.clone().expect("checked")))
                .collect();
            p.density = Some(Arc::new(move |x| ds.iter().map(|(c, d)| c * d(x)).sum()));
        }
        if parts.iter().all(|(_, f)| f.support.is_some()) {
            let lo = parts.iter().map(|(_, f)| f.support.expect("checked").0).fold(f64::INFINITY, f64::min);
            let hi = parts.iter().map(|(_, f)| f.support.expect("checked").1).fold(f64::NEG_INFINITY, f64::max);
            p.support = Some((lo, hi));
        }
        p.window = (
            parts.iter().map(|(_, f)| f.window.0).fold(f64::INFINITY, f64::min),
            parts.iter().map(|(_, f)| f.window.1).fold(f64::NEG_INFINITY, f64::max),
        );
        p.knots = parts.iter().flat_map(|(_, f)| f.knots.iter().copied()).collect();
        p.knots.sort_by(f64::total_cmp);
        p.knots.dedup();
        Ok(p)
    }
}

fn widest(a: Growth, b: Growth) -> Growth {
    match (a, b) {
        (Growth::Weighted(x), Growth::Weighted(y)) => Growth::Weighted(x.min(y)),
        (Growth::Weighted(x), _) | (_, Growth::Weighted(x)) => Growth::Weighted(x),
        (Growth::Subgaussian, _) | (_, Growth::Subgaussian) => Growth::Subgaussian,
        _ => Growth::Bounded,
    }
}

/// The space a distribution is taken in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    /// `A_c`: first derivatives of `B_c` primitives.
    Alex,
    /// `A^n_c`: `n`-th derivatives, `n ≥ 2`.
    AlexN,
    /// `A_{c,τ}`: first derivatives of primitives with weighted growth.
    Weighted { tau: f64 },
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Alex => write!(f, "alex"),
            Space::AlexN => write!(f, "alexn"),
            Space::Weighted { tau } => write!(f, "weighted:tau={tau}"),
        }
    }
}

/// `f = F^{(n)}` in one of the three spaces.
#[derive(Debug, Clone)]
pub struct DistributionalData {
    order: usize,
    primitive: PrimitiveFn,
    space: Space,
}

impl DistributionalData {
    pub fn new(order: usize, primitive: PrimitiveFn, space: Space) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match space {
            Space::Alex | Space::AlexN => {
                if space == Space::Alex && order != 1 {
                    return bad(format!("space alex takes order 1, got {order}"));
                }
                if space == Space::AlexN && order < 2 {
                    return bad(format!("space alexn takes order n ≥ 2, got {order}"));
                }
                if !primitive.is_bc() {
                    return bad(format!(
                        "`{}` is not in B_c (needs bounded growth, F(−∞) = 0 and a limit at +∞)",
                        primitive.label
                    ));
                }
            }
            Space::Weighted { tau } => {
                if !(tau > 0.0 && tau.is_finite()) {
                    return bad(format!("weight τ must be positive, got {tau}"));
                }
                if order != 1 {
                    return bad(format!("weighted spaces take order 1, got {order}"));
                }
                if !primitive.growth.admits_weight(tau) {
                    return bad(format!(
                        "`{}` grows too fast for τ = {tau} ({:?})",
                        primitive.label, primitive.growth
                    ));
                }
            }
        }
        Ok(DistributionalData {
            order,
            primitive,
            space,
        })
    }

    /// Order-1 data in `A_c`.
    pub fn alex(primitive: PrimitiveFn) -> Result<Self> {
        Self::new(1, primitive, Space::Alex)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn primitive(&self) -> &PrimitiveFn {
        &self.primitive
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Horizon `τ` for weighted data.
    pub fn horizon(&self) -> Option<f64> {
        match self.space {
            Space::Weighted { tau } => Some(tau),
            _ => None,
        }
    }
}

/// Named real parameters, e.g. `s=0.5,n=3`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, f64)>>(pairs: I) -> Self {
        Params(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn set(&mut self, key: &str, v: f64) {
        self.0.insert(key.to_string(), v);
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.set(key, v);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    /// A nonnegative integer parameter.
    pub fn get_count(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(v as usize),
            Some(v) => Err(Error::InvalidParameter(format!("{key} must be a nonnegative integer, got {v}"))),
        }
    }

    /// Rejects keys outside `allowed`.
    pub fn check_known(&self, name: &str, allowed: &[&str]) -> Result<()> {
        for k in self.0.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "`{name}` does not take parameter `{k}` (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// The entries whose keys are in `keys`.
    pub fn subset(&self, keys: &[&str]) -> Params {
        Params(self.0.iter().filter(|(k, _)| keys.contains(&k.as_str())).map(|(k, v)| (k.clone(), *v)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}
