//! Asymptotic forms of the propagator and the Lagrangian (path-integral) route.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::params::{EvalResult, Method, StableParams};
use crate::propagator::{density_1d, DensityQuery};
use crate::specfun::gamma_real;

fn require_open_interval(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (1, 2), got {alpha}"));
    }
    Ok(())
}

/// `α Γ(α) sin(πα/2) / π`, so that `P(x) ≈ a·C/|x|^{α+1}`.
pub fn tail_constant(alpha: f64) -> Result<f64> {
    require_open_interval(alpha)?;
    Ok(alpha * gamma_real(alpha)? * (0.5 * PI * alpha).sin() / PI)
}

/// Leading power-law tail `a α Γ(α) sin(πα/2) / (π |x|^{α+1})`.
pub fn tail_density(x: f64, params: &StableParams) -> Result<f64> {
    let alpha = params.alpha();
    if alpha == 2.0 {
        return domain("the Gaussian has no power-law tail (alpha = 2)");
    }
    let c = tail_constant(alpha)?;
    if x == 0.0 || !x.is_finite() {
        return domain(format!("the tail form needs finite x != 0, got {x}"));
    }
    Ok(params.a() * c / x.abs().powf(alpha + 1.0))
}

/// `f(α) = (α−1) α^{−α/(α−1)}`, the constant of the Euclidean classical action
/// `f(α) a^{−1/(α−1)} |x|^{α/(α−1)}`.
pub fn classical_action_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return domain(format!("alpha must lie in (1, 2], got {alpha}"));
    }
    Ok((alpha - 1.0) * alpha.powf(-alpha / (alpha - 1.0)))
}

/// Straight-line classical path with `x(0) = x_i` and `x(−1) = x_f`.
pub fn classical_path(t: f64, x_i: f64, x_f: f64) -> Result<f64> {
    if !(-1.0..=0.0).contains(&t) {
        return domain(format!("t must lie in [-1, 0], got {t}"));
    }
    Ok(x_i + t * (x_i - x_f))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleInput {
    alpha: f64,
    rho: f64,
}

impl SaddleInput {
    pub fn new(alpha: f64, rho: f64) -> Result<Self> {
        require_open_interval(alpha)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return domain(format!("rho must be finite and positive, got {rho}"));
        }
        Ok(Self { alpha, rho })
    }

    /// Allows `α = 2`, the Gaussian end point.
    pub fn with_gaussian_end(alpha: f64, rho: f64) -> Result<Self> {
        if alpha == 2.0 {
            if !(rho > 0.0 && rho.is_finite()) {
                return domain(format!("rho must be finite and positive, got {rho}"));
            }
            return Ok(Self { alpha, rho });
        }
        Self::new(alpha, rho)
    }

    /// `ρ = a/|x|^α`.
    pub fn from_position(x: f64, params: &StableParams) -> Result<Self> {
        if x == 0.0 {
            return domain("rho is infinite at x = 0");
        }
        Self::with_gaussian_end(params.alpha(), params.a() / x.abs().powf(params.alpha()))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// A saddle point in polar form.
///
/// `arg` is kept unreduced: for `α < 3/2` it exceeds `π`, and the stationarity
/// condition `i = ρα z^{α−1}` holds on the sheet reached by continuing
/// `z^{α−1}` through that angle, not on the principal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub modulus: f64,
    pub arg: f64,
}

impl SaddlePoint {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.arg)
    }

    /// `z^w` continued along the unreduced argument.
    pub fn pow(&self, w: f64) -> Complex64 {
        Complex64::from_polar(self.modulus.powf(w), w * self.arg)
    }

    /// `i − ρα z^{α−1}` on the continued sheet.
    pub fn residual(&self, s: &SaddleInput) -> Complex64 {
        let e = s.alpha - 1.0;
        let w = Complex64::new(e * self.modulus.ln(), e * self.arg).exp();
        Complex64::i() - s.rho * s.alpha * w
    }

    /// The same residual with the principal branch of `z^{α−1}`.
    pub fn principal_residual(&self, s: &SaddleInput) -> Complex64 {
        Complex64::i() - s.rho * s.alpha * self.to_complex().powf(s.alpha - 1.0)
    }
}

/// `z₀ = (ρα)^{−1/(α−1)} e^{iπ/(2(α−1))}`, the stationary point of `h(z) = iz − ρ z^α`.
pub fn saddle_point(s: &SaddleInput) -> SaddlePoint {
    let e = s.alpha - 1.0;
    SaddlePoint { modulus: (s.rho * s.alpha).powf(-1.0 / e), arg: 0.5 * PI / e }
}

/// `h(z₀) = (1 − 1/α)(ρα)^{−1/(α−1)}`, the steepest-descent exponent.
pub fn saddle_exponent(s: &SaddleInput) -> f64 {
    (1.0 - 1.0 / s.alpha) * (s.rho * s.alpha).powf(-1.0 / (s.alpha - 1.0))
}

/// Saddle-point (Euclidean classical action plus Gaussian fluctuations) form of the density.
///
/// The result is asymptotic: its error estimate is `+∞`. At `x = 0` with
/// `α < 2` the formula vanishes and the result is flagged degenerate.
pub fn saddle_density(x: f64, params: &StableParams) -> Result<EvalResult> {
    let alpha = params.alpha();
    if !(alpha > 1.0 && alpha <= 2.0) {
        return domain(format!("the saddle form needs 1 < alpha <= 2, got {alpha}"));
    }
    if !x.is_finite() {
        return domain(format!("x must be finite, got {x}"));
    }
    let a = params.a();
    let e = alpha - 1.0;
    let f = classical_action_constant(alpha)?;
    let ax = x.abs();
    if ax == 0.0 && alpha < 2.0 {
        let mut r = EvalResult::new(0.0, f64::INFINITY, Method::Saddle);
        r.degenerate = true;
        return Ok(r);
    }
    let pref = (2.0 * PI).powf(-0.5) * f.sqrt() * a.powf(-0.5 / e) * alpha.sqrt() / e;
    let power = if alpha == 2.0 { 1.0 } else { ax.powf((2.0 - alpha) / (2.0 * e)) };
    let action = f * a.powf(-1.0 / e) * ax.powf(alpha / e);
    Ok(EvalResult::new(pref * power * (-action).exp(), f64::INFINITY, Method::Saddle))
}

/// Determinant of the `(N−1)×(N−1)` second-difference matrix `tridiag(−1, 2, −1)`,
/// by the three-term recurrence `D_k = 2 D_{k−1} − D_{k−2}`.
pub fn fluctuation_determinant(n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("N must be >= 2, got {n}"));
    }
    let (mut d_prev, mut d) = (1.0f64, 2.0f64);
    for _ in 2..n {
        let next = 2.0 * d - d_prev;
        d_prev = d;
        d = next;
    }
    Ok(d)
}

/// The same determinant as the product of the mode eigenvalues `4 sin²(mπ/(2N))`.
pub fn fluctuation_determinant_modes(n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("N must be >= 2, got {n}"));
    }
    let nf = n as f64;
    Ok((1..n).map(|m| 4.0 * (m as f64 * PI / (2.0 * nf)).sin().powi(2)).product())
}

/// Fourier sine modes `O_k^m = sqrt(2/N) sin(kmπ/N)`, `k, m = 1..N−1`, row-major.
pub fn sine_mode_matrix(n: usize) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return domain(format!("N must be >= 2, got {n}"));
    }
    let nf = n as f64;
    let c = (2.0 / nf).sqrt();
    Ok((1..n)
        .map(|k| (1..n).map(|m| c * ((k * m) as f64 * PI / nf).sin()).collect())
        .collect())
}

/// One cell of the saddle-regime map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCell {
    pub alpha: f64,
    pub rho: f64,
    pub x: f64,
    pub saddle: f64,
    pub exact: f64,
    pub rel_err: f64,
}

/// Relative error of [`saddle_density`] against quadrature over a `(ρ, α)` grid,
/// at scale `a` with `|x| = (a/ρ)^{1/α}`.
pub fn saddle_regime_map(alphas: &[f64], rhos: &[f64], a: f64, tol: f64) -> Result<Vec<RegimeCell>> {
    let mut out = Vec::with_capacity(alphas.len() * rhos.len());
    for &alpha in alphas {
        let params = StableParams::new(alpha, a)?;
        for &rho in rhos {
            SaddleInput::with_gaussian_end(alpha, rho)?;
            let x = (a / rho).powf(1.0 / alpha);
            let saddle = saddle_density(x, &params)?.value;
            let exact = density_1d(&DensityQuery::one_d(x, params, tol)?)?.value;
            out.push(RegimeCell { alpha, rho, x, saddle, exact, rel_err: ((saddle - exact) / exact).abs() });
        }
    }
    Ok(out)
}
