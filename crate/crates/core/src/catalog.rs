//! Named initial data with closed-form solutions where they exist, and the
//! `key[:p=v,...]` mini-language used to pick them.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{hermite, theta_deriv, theta_signed};
use crate::primitives::{from_samples, make_closed_form, read_samples_csv, DistributionalData, Params, PrimitiveFn, Space};
use crate::realline::erfc_tail;

/// `(x, t) ↦ u(x, t)`.
pub type OracleFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

struct KeyInfo {
    key: &'static str,
    params: &'static [&'static str],
    about: &'static str,
}

const KEYS: &[KeyInfo] = &[
    KeyInfo { key: "zero", params: &[], about: "f = 0" },
    KeyInfo { key: "gauss", params: &["s"], about: "f = Θ_s" },
    KeyInfo { key: "gauss-prime", params: &["s"], about: "f = Θ_s′, primitive Θ_s" },
    KeyInfo { key: "neg-gauss", params: &["s"], about: "f = Θ_{−s}, weighted with τ < s" },
    KeyInfo { key: "sin", params: &["s"], about: "f = sin(sx), weighted" },
    KeyInfo { key: "chirp-re", params: &["s"], about: "f = cos(x²/(4s))" },
    KeyInfo { key: "chirp-im", params: &["s"], about: "f = sin(x²/(4s))" },
    KeyInfo { key: "poly", params: &["n"], about: "f = xⁿ, weighted" },
    KeyInfo { key: "hermite", params: &["n"], about: "f = H_n, weighted, oracle for t < 1/4" },
    KeyInfo { key: "cantor-deriv", params: &["depth"], about: "f = derivative of the Cantor function" },
    KeyInfo { key: "weierstrass-deriv", params: &["n", "a", "b", "tol"], about: "n-th derivative of w(x)e^{−|x|}" },
    KeyInfo { key: "dirac-diff", params: &["n"], about: "n-th derivative of the unit ramp, δ^{(n−2)} − δ_1^{(n−2)}" },
    KeyInfo { key: "alg-sing", params: &["alpha", "n"], about: "n-th derivative of x^α e^{−x} on x > 0" },
    KeyInfo { key: "non-lp", params: &["s", "N", "t"], about: "Σ (−1)^k Θ_s(x − b_k)/log(k+1), truncated at N" },
    KeyInfo { key: "step", params: &["a", "b"], about: "f = χ_(a,b)" },
];

/// Catalog keys, in display order.
pub fn catalog_list() -> Vec<&'static str> {
    KEYS.iter().map(|k| k.key).collect()
}

/// One-line description of a key.
pub fn catalog_about(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|k| k.key == key).map(|k| k.about)
}

fn info(key: &str) -> Result<&'static KeyInfo> {
    KEYS.iter().find(|k| k.key == key).ok_or_else(|| Error::UnknownKey(key.to_string()))
}

/// Initial data together with whatever is known about its solution.
#[derive(Clone)]
pub struct CatalogEntry {
    key: String,
    params: Params,
    data: DistributionalData,
    oracle: Option<OracleFn>,
    oracle_norm: Option<f64>,
    t_max: f64,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("key", &self.key)
            .field("params", &self.params)
            .field("space", &self.data.space())
            .field("order", &self.data.order())
            .field("oracle", &self.oracle.is_some())
            .finish()
    }
}

impl CatalogEntry {
    /// The entry `key` with its default order and space.
    pub fn new(key: &str, params: &Params) -> Result<Self> {
        Self::with_overrides(key, params, None, None)
    }

    /// The entry `key`, optionally with a different order or space.
    /// A changed order drops the oracle.
    pub fn with_overrides(key: &str, params: &Params, order: Option<usize>, space: Option<Space>) -> Result<Self> {
        let ki = info(key)?;
        params.check_known(key, ki.params)?;
        let (primitive, natural) = primitive_for(key, params)?;
        let order = order.unwrap_or(natural);
        let space = match space {
            Some(s) => s,
            None => default_space(key, params, order),
        };
        let data = DistributionalData::new(order, primitive, space)?;
        let (oracle, t_max) = if order == natural { oracle_for(key, params)? } else { (None, f64::INFINITY) };
        let oracle_norm = if order == natural { norm_for(key, params) } else { None };
        Ok(CatalogEntry { key: key.to_string(), params: params.clone(), data, oracle, oracle_norm, t_max })
    }

    /// Piecewise-linear data from a two-column CSV file of primitive samples.
    pub fn from_csv(path: &Path, order: Option<usize>, space: Option<Space>) -> Result<Self> {
        let pts = read_samples_csv(path)?;
        let (first, last) = (pts.first().map(|p| p.1).unwrap_or(0.0), pts.last().map(|p| p.1).unwrap_or(0.0));
        let p = from_samples(&pts, first, last)?;
        let order = order.unwrap_or(1);
        let space = space.unwrap_or(if order >= 2 { Space::AlexN } else { Space::Alex });
        let data = DistributionalData::new(order, p, space)?;
        Ok(CatalogEntry {
            key: "csv".into(),
            params: Params::new(),
            data,
            oracle: None,
            oracle_norm: None,
            t_max: f64::INFINITY,
        })
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn data(&self) -> &DistributionalData {
        &self.data
    }

    pub fn into_data(self) -> DistributionalData {
        self.data
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    /// The closed-form norm of the data, when known.
    pub fn oracle_norm(&self) -> Option<f64> {
        self.oracle_norm
    }

    /// Whether the solution exists at `t` and the oracle, if any, applies.
    pub fn valid_time(&self, t: f64) -> bool {
        t > 0.0 && t < self.t_max && self.data.horizon().map_or(true, |h| t < h)
    }

    /// Closed-form `u(x, t)`.
    pub fn oracle(&self, x: f64, t: f64) -> Result<f64> {
        let Some(o) = &self.oracle else {
            return Err(Error::Unsupported(format!("`{}` has no closed-form solution", self.key)));
        };
        if !self.valid_time(t) {
            return Err(Error::OutOfValidity(format!("`{}` oracle at t = {t}", self.key)));
        }
        Ok(o(x, t))
    }
}

/// Closed-form solution of catalog entry `key` at `(x, t)`.
pub fn oracle_eval(key: &str, params: &Params, x: f64, t: f64) -> Result<f64> {
    let ki = info(key)?;
    params.check_known(key, ki.params)?;
    let (oracle, t_max) = oracle_for(key, params)?;
    let Some(o) = oracle else {
        return Err(Error::Unsupported(format!("`{key}` has no closed-form solution")));
    };
    if !(t > 0.0 && t < t_max) {
        return Err(Error::OutOfValidity(format!("`{key}` oracle needs 0 < t < {t_max}, got {t}")));
    }
    Ok(o(x, t))
}

fn primitive_for(key: &str, p: &Params) -> Result<(PrimitiveFn, usize)> {
    let order = |default: usize| p.get_count("n", default);
    Ok(match key {
        "zero" => (make_closed_form("zero", p)?, 1),
        "gauss" => (make_closed_form("gauss-cdf", p)?, 1),
        "gauss-prime" => (make_closed_form("gauss", p)?, 1),
        "neg-gauss" | "sin" | "chirp-re" | "chirp-im" => (make_closed_form(key, p)?, 1),
        "poly" | "hermite" => (make_closed_form(key, p)?, 1),
        "cantor-deriv" => (make_closed_form("cantor", p)?, 1),
        "weierstrass-deriv" => (make_closed_form("weierstrass", &p.subset(&["a", "b", "tol"]))?, order(1)?.max(1)),
        "dirac-diff" => {
            let n = order(2)?;
            if n < 2 {
                return Err(Error::InvalidParameter(format!("dirac-diff needs n ≥ 2, got {n}")));
            }
            (make_closed_form("step-ramp", &Params::new())?, n)
        }
        "alg-sing" => (make_closed_form("alg-sing", &p.subset(&["alpha"]))?, order(1)?.max(1)),
        "non-lp" => (make_closed_form("non-lp", p)?, 1),
        "step" => (make_closed_form("ramp", p)?, 1),
        other => return Err(Error::UnknownKey(other.to_string())),
    })
}

fn default_space(key: &str, p: &Params, order: usize) -> Space {
    match key {
        "neg-gauss" => Space::Weighted { tau: 0.75 * p.get_or("s", 2.0) },
        "sin" | "poly" | "hermite" => Space::Weighted { tau: 4.0 },
        _ if order >= 2 => Space::AlexN,
        _ => Space::Alex,
    }
}

fn norm_for(key: &str, p: &Params) -> Option<f64> {
    match key {
        "zero" => Some(0.0),
        "gauss" | "cantor-deriv" | "dirac-diff" => Some(1.0),
        "gauss-prime" => Some(1.0 / (PI * p.get_or("s", 0.5)).sqrt()),
        "step" => Some(p.get_or("b", 1.0) - p.get_or("a", 0.0)),
        _ => None,
    }
}

fn oracle_for(key: &str, p: &Params) -> Result<(Option<OracleFn>, f64)> {
    let s = p.get_or("s", if key == "neg-gauss" { 2.0 } else if key.starts_with("gauss") { 0.5 } else { 1.0 });
    let inf = f64::INFINITY;
    let o: OracleFn = match key {
        "zero" => Arc::new(|_, _| 0.0),
        "gauss" => Arc::new(move |x, t| theta_signed(s + t, x).unwrap_or(f64::NAN)),
        "gauss-prime" => Arc::new(move |x, t| theta_deriv(1, s + t, x).unwrap_or(f64::NAN)),
        "neg-gauss" => return Ok((Some(Arc::new(move |x, t| theta_signed(t - s, x).unwrap_or(f64::NAN))), s)),
        "sin" => Arc::new(move |x, t| (s * x).sin() * (-s * s * t).exp()),
        "chirp-re" | "chirp-im" => {
            let im = key == "chirp-im";
            Arc::new(move |x, t| {
                let d = s * s + t * t;
                let amp = (Complex64::new(s, 0.0) / Complex64::new(s, -t)).sqrt();
                let z = amp * Complex64::new(-t * x * x / (4.0 * d), s * x * x / (4.0 * d)).exp();
                if im {
                    z.im
                } else {
                    z.re
                }
            })
        }
        "poly" => {
            let n = p.get_count("n", 2)?;
            let coef: Vec<(i32, i32, f64)> = (0..=n / 2)
                .map(|l| {
                    let c = factorial(n) / (factorial(n - 2 * l) * factorial(l));
                    ((n - 2 * l) as i32, l as i32, c)
                })
                .collect();
            Arc::new(move |x, t| coef.iter().map(|&(px, pt, c)| c * x.powi(px) * t.powi(pt)).sum())
        }
        "hermite" => {
            let n = p.get_count("n", 2)?;
            return Ok((
                Some(Arc::new(move |x, t| {
                    let r = (1.0 - 4.0 * t).sqrt();
                    r.powi(n as i32) * hermite(n, x / r).unwrap_or(f64::NAN)
                })),
                0.25,
            ));
        }
        "dirac-diff" => {
            let m = p.get_count("n", 2)?.saturating_sub(2);
            Arc::new(move |x, t| theta_deriv(m, t, x).unwrap_or(f64::NAN) - theta_deriv(m, t, x - 1.0).unwrap_or(f64::NAN))
        }
        "non-lp" => {
            let t0 = p.get_or("t", 1.0);
            let big_n = p.get_count("N", 10)?.max(1);
            let terms: Vec<(f64, f64)> = (1..=big_n)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    (sign / ((k + 1) as f64).ln(), 2.0 * (k * k) as f64 * (s + t0).sqrt())
                })
                .collect();
            Arc::new(move |x, t| terms.iter().map(|&(c, b)| c * theta_signed(s + t, x - b).unwrap_or(f64::NAN)).sum())
        }
        "step" => {
            let (a, b) = (p.get_or("a", 0.0), p.get_or("b", 1.0));
            Arc::new(move |x, t| {
                let k = 1.0 / (2.0 * t.sqrt());
                0.5 * (erfc_tail((a - x) * k) - erfc_tail((b - x) * k))
            })
        }
        _ => return Ok((None, inf)),
    };
    Ok((Some(o), inf))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `alex`, `alexn` or `weighted:tau=<v>`.
pub fn parse_space(s: &str) -> Result<Space> {
    match s.trim() {
        "alex" => Ok(Space::Alex),
        "alexn" => Ok(Space::AlexN),
        w => {
            let rest = w
                .strip_prefix("weighted")
                .ok_or_else(|| Error::InvalidParameter(format!("unknown space `{w}`")))?;
            let tau = rest
                .strip_prefix(":tau=")
                .ok_or_else(|| Error::InvalidParameter(format!("weighted space needs `:tau=<value>`, got `{w}`")))?;
            let tau: f64 = tau
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("malformed tau `{tau}`")))?;
            Ok(Space::Weighted { tau })
        }
    }
}

/// Parses `key[:p=v{,p=v}]` or `csv:<path>[,order=n][,space=...]`.
/// Besides entry parameters, `order=n` and `space=alex|alexn|weighted:tau=v`
/// are accepted; `space` here overrides `default_space`.
pub fn parse_initial_spec(spec: &str, default_space: Option<Space>) -> Result<CatalogEntry> {
    let spec = spec.trim();
    let (key, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), r),
        None => (spec, ""),
    };
    let mut items: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(',').collect() };
    let path = if key == "csv" {
        if items.is_empty() || items[0].trim().is_empty() {
            return Err(Error::InvalidParameter("csv needs a path: csv:<path>".into()));
        }
        Some(items.remove(0).trim().to_string())
    } else {
        None
    };
    let mut params = Params::new();
    let mut order = None;
    let mut space = default_space;
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("malformed parameter `{item}`, expected name=value")))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "space" => space = Some(parse_space(v)?),
            "order" => {
                order = Some(
                    v.parse::<usize>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| Error::InvalidParameter(format!("order must be a positive integer, got `{v}`")))?,
                )
            }
            _ => {
                let x: f64 = v
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("malformed value `{v}` for `{k}`")))?;
                if params.get(k).is_some() {
                    return Err(Error::InvalidParameter(format!("parameter `{k}` given twice")));
                }
                params.set(k, x);
            }
        }
    }
    match path {
        Some(p) => {
            if params.iter().next().is_some() {
                return Err(Error::InvalidParameter("csv data only takes order and space".into()));
            }
            CatalogEntry::from_csv(Path::new(&p), order, space)
        }
        None => CatalogEntry::with_overrides(key, &params, order, space),
    }
}
