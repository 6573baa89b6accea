//! Parameter types and the reduced-unit conventions used across the crate.
//!
//! Everything downstream works with the single reduced scale `a = c·t`, where
//! `c = ħ^(α−1)/(2m)^(α/2)` is the generalised diffusion constant. The density
//! then has characteristic function `exp(−a·|p|^α)`.

use std::fmt;

use crate::error::{domain, Result};

/// Characteristic exponent and reduced scale of a symmetric stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    alpha: f64,
    a: f64,
}

impl StableParams {
    pub fn new(alpha: f64, a: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("scale a must be positive and finite, got {a}"));
        }
        Ok(Self { alpha, a })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Width of the law, `a^(1/α)`.
    #[inline]
    pub fn width(&self) -> f64 {
        self.a.powf(1.0 / self.alpha)
    }

    /// Same exponent, different scale.
    pub fn with_scale(&self, a: f64) -> Result<Self> {
        Self::new(self.alpha, a)
    }
}

/// Physical constants `ħ`, `m` and the elapsed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub time: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, time: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("time", time)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(Self { hbar, mass, time })
    }
}

/// Which formula produced an [`EvalResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    HfoxSeries,
    HfoxContour,
    Tail,
    Peak,
    Saddle,
    GaussianClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::HfoxSeries => "hfox_series",
            Method::HfoxContour => "hfox_contour",
            Method::Tail => "tail",
            Method::Peak => "peak",
            Method::Saddle => "saddle",
            Method::GaussianClosedForm => "gaussian_closed_form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Value of a density evaluator together with a forward error estimate.
///
/// `abs_err_estimate` is `+∞` for asymptotic formulas that carry no error
/// bound. `degenerate` marks inputs where a formula was evaluated at a
/// singular point and returned its limiting value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub method: Method,
    pub degenerate: bool,
}

impl EvalResult {
    pub fn new(value: f64, abs_err_estimate: f64, method: Method) -> Self {
        debug_assert!(abs_err_estimate >= 0.0);
        Self { value, abs_err_estimate, method, degenerate: false }
    }

    pub fn exact(value: f64, method: Method) -> Self {
        Self::new(value, 0.0, method)
    }
}

/// Converts physical constants to the reduced scale `a = t·ħ^(α−1)/(2m)^(α/2)`.
pub fn reduce_physical(p: &PhysicalParams, alpha: f64) -> Result<StableParams> {
    let p = PhysicalParams::new(p.hbar, p.mass, p.time)?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    let c = p.hbar.powf(alpha - 1.0) / (2.0 * p.mass).powf(alpha / 2.0);
    StableParams::new(alpha, p.time * c)
}

/// Returns `(x·a^(−1/α), a^(−1/α))`, so that
/// `density(x; α, a) = prefactor · density(x_reduced; α, 1)`.
pub fn self_similar_rescale(x: f64, s: &StableParams) -> (f64, f64) {
    let prefactor = s.a().powf(-1.0 / s.alpha());
    (x * prefactor, prefactor)
}
