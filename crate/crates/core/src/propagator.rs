//! Propagator of the space-fractional diffusion equation by Fourier inversion
//! of the characteristic function `e^{−a|p|^α}`.
//!
//! All formulas are in reduced units, so the only scale is `a`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::oscquad::{integrate, integrate_sine, Kernel, OscIntegrand};
use crate::params::{EvalResult, Method, StableParams};
use crate::specfun::{gamma_real, ln_gamma, BesselOrder};

/// A density evaluation request at distance `r` from the origin in `n` dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityQuery {
    pub r: f64,
    pub n: u32,
    pub params: StableParams,
    pub tol: f64,
}

impl DensityQuery {
    pub fn new(r: f64, n: u32, params: StableParams, tol: f64) -> Result<Self> {
        let q = Self { r, n, params, tol };
        q.validate()?;
        Ok(q)
    }

    /// One-dimensional query at `|x|`.
    pub fn one_d(x: f64, params: StableParams, tol: f64) -> Result<Self> {
        Self::new(x.abs(), 1, params, tol)
    }

    fn validate(&self) -> Result<()> {
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return domain(format!("r must be finite and >= 0, got {}", self.r));
        }
        if self.n < 1 {
            return domain("dimension must be >= 1");
        }
        if !(self.tol > 0.0) {
            return domain(format!("tol must be positive, got {}", self.tol));
        }
        Ok(())
    }
}

fn integrand(params: &StableParams, s: f64, kernel: Kernel, r: f64) -> OscIntegrand {
    OscIntegrand::new(params.alpha(), params.a(), s, kernel, r)
}

/// `P(x) = (1/π) ∫₀^∞ cos(p x) e^{−a p^α} dp`.
pub fn density_1d(q: &DensityQuery) -> Result<EvalResult> {
    q.validate()?;
    let spec = integrand(&q.params, 0.0, Kernel::Cosine, q.r);
    let res = integrate(spec, PI * q.tol)?;
    Ok(EvalResult::new((res.value / PI).max(0.0), res.abs_err_estimate / PI, Method::Quadrature))
}

/// The integrated-by-parts form `(aα/(π r)) ∫₀^∞ p^{α−1} sin(p r) e^{−a p^α} dp`,
/// whose integrand decays like the density's own power-law tail.
pub fn density_1d_ibp(q: &DensityQuery) -> Result<EvalResult> {
    q.validate()?;
    if q.r == 0.0 {
        return domain("the integrated-by-parts form is singular at r = 0");
    }
    let (alpha, a) = (q.params.alpha(), q.params.a());
    let pref = a * alpha / (PI * q.r);
    let spec = integrand(&q.params, alpha - 1.0, Kernel::Sine, q.r);
    let res = integrate_sine(spec, q.tol / pref)?;
    Ok(EvalResult::new(pref * res.value, pref * res.abs_err_estimate, Method::Quadrature))
}

/// `P(0) = Γ(1/α) / (π α a^{1/α})`, exact.
pub fn peak_value(params: &StableParams) -> f64 {
    let alpha = params.alpha();
    let g = gamma_real(1.0 / alpha).expect("1/alpha >= 1/2 is a regular point");
    g / (PI * alpha * params.width())
}

/// `P_n(0) = Γ(n/α) / (α 2^{n−1} π^{n/2} Γ(n/2) a^{n/α})`.
pub fn peak_value_nd(params: &StableParams, n: u32) -> Result<f64> {
    let (alpha, a) = (params.alpha(), params.a());
    let nf = n as f64;
    let ln = ln_gamma(nf / alpha)?
        - alpha.ln()
        - (nf - 1.0) * 2f64.ln()
        - 0.5 * nf * PI.ln()
        - ln_gamma(0.5 * nf)?
        - nf / alpha * a.ln();
    Ok(ln.exp())
}

/// `P_n(r) = (2π)^{−n/2} r^{1−n/2} ∫₀^∞ p^{n/2} e^{−a p^α} J_{n/2−1}(p r) dp`.
pub fn density_nd(q: &DensityQuery) -> Result<EvalResult> {
    q.validate()?;
    if q.r == 0.0 {
        return Ok(EvalResult::exact(peak_value_nd(&q.params, q.n)?, Method::Quadrature));
    }
    let half = 0.5 * q.n as f64;
    let order = BesselOrder::new(half - 1.0)?;
    let pref = (2.0 * PI).powf(-half) * q.r.powf(1.0 - half);
    let spec = integrand(&q.params, half, Kernel::Bessel(order), q.r);
    let res = integrate(spec, q.tol / pref)?;
    Ok(EvalResult::new((pref * res.value).max(0.0), pref * res.abs_err_estimate, Method::Quadrature))
}

/// The three-dimensional density as a radial derivative:
/// `P₃(r) = (1/(2π² r)) ∫₀^∞ p sin(p r) e^{−a p^α} dp`.
pub fn density_3d_derivative(q: &DensityQuery) -> Result<EvalResult> {
    q.validate()?;
    if q.n != 3 {
        return domain(format!("the radial-derivative form is three-dimensional, got n = {}", q.n));
    }
    if q.r == 0.0 {
        return domain("the radial-derivative form is singular at r = 0");
    }
    let pref = 1.0 / (2.0 * PI * PI * q.r);
    let spec = integrand(&q.params, 1.0, Kernel::Sine, q.r);
    let res = integrate_sine(spec, q.tol / pref)?;
    Ok(EvalResult::new(pref * res.value, pref * res.abs_err_estimate, Method::Quadrature))
}

/// `F(x) = 1/2 + (1/π) ∫₀^∞ sin(p x) e^{−a p^α} / p dp`.
pub fn cdf_1d(x: f64, params: &StableParams, tol: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("x must be finite, got {x}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tol must be positive, got {tol}"));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let spec = integrand(params, -1.0, Kernel::Sine, x.abs());
    let res = integrate_sine(spec, PI * tol)?;
    let half_mass = (res.value / PI).clamp(0.0, 0.5);
    Ok(if x > 0.0 { 0.5 + half_mass } else { 0.5 - half_mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(alpha: f64, a: f64) -> StableParams {
        StableParams::new(alpha, a).unwrap()
    }

    fn d1(r: f64, alpha: f64, a: f64) -> f64 {
        density_1d(&DensityQuery::one_d(r, sp(alpha, a), 1e-12).unwrap()).unwrap().value
    }

    #[test]
    fn density_1d_examples() {
        let g0 = 0.5 / PI.sqrt();
        assert!((d1(0.0, 2.0, 1.0) - g0).abs() < 1e-12);
        assert!((d1(2.0, 2.0, 1.0) - g0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((d1(0.0, 1.0, 1.0) - 1.0 / PI).abs() < 1e-12);
        // Cauchy density a/(π(a² + x²))
        for &x in &[0.3, 1.0, 7.0, 40.0] {
            let want = 0.7 / (PI * (0.49 + x * x));
            assert!((d1(x, 1.0, 0.7) - want).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn ibp_examples() {
        let q = |r, alpha| DensityQuery::one_d(r, sp(alpha, 1.0), 1e-12).unwrap();
        let g = density_1d_ibp(&q(1.0, 2.0)).unwrap().value;
        assert!((g - 0.5 / PI.sqrt() * (-0.25f64).exp()).abs() < 1e-11);
        let c = density_1d_ibp(&q(1.0, 1.0)).unwrap().value;
        assert!((c - 0.5 / PI).abs() < 1e-11);
        let ibp = density_1d_ibp(&q(5.0, 1.5)).unwrap().value;
        assert!((ibp - d1(5.0, 1.5, 1.0)).abs() < 1e-9);
        assert!(density_1d_ibp(&q(0.0, 1.5)).is_err());
    }

    #[test]
    fn peak_examples() {
        assert!((peak_value(&sp(2.0, 1.0)) - 0.5 / PI.sqrt()).abs() < 1e-15);
        assert!((peak_value(&sp(1.0, 1.0)) - 1.0 / PI).abs() < 1e-15);
        assert!((peak_value(&sp(1.5, 1.0)) - d1(0.0, 1.5, 1.0)).abs() < 1e-11);
    }

    #[test]
    fn density_nd_examples() {
        let q = |r, n, alpha| DensityQuery::new(r, n, sp(alpha, 1.0), 1e-12).unwrap();
        let brown3 = (4.0 * PI).powf(-1.5) * (-0.25f64).exp();
        assert!((density_nd(&q(1.0, 3, 2.0)).unwrap().value - brown3).abs() < 1e-12);
        let n1 = density_nd(&q(2.0, 1, 1.5)).unwrap().value;
        assert!((n1 - d1(2.0, 1.5, 1.0)).abs() < 1e-9);
        assert!((density_nd(&q(0.0, 2, 2.0)).unwrap().value - 0.25 / PI).abs() < 1e-15);
        assert!((density_nd(&q(0.0, 1, 1.3)).unwrap().value - peak_value(&sp(1.3, 1.0))).abs() < 1e-14);
    }

    #[test]
    fn derivative_form_examples() {
        let q = |r, alpha| DensityQuery::new(r, 3, sp(alpha, 1.0), 1e-12).unwrap();
        let brown = |r: f64| (4.0 * PI).powf(-1.5) * (-r * r / 4.0).exp();
        assert!((density_3d_derivative(&q(1.0, 2.0)).unwrap().value - brown(1.0)).abs() < 1e-12);
        assert!((density_3d_derivative(&q(2.0, 2.0)).unwrap().value - brown(2.0)).abs() < 1e-12);
        let a = density_3d_derivative(&q(1.0, 1.5)).unwrap().value;
        let b = density_nd(&q(1.0, 1.5)).unwrap().value;
        assert!((a - b).abs() < 1e-8);
        assert!(density_3d_derivative(&q(0.0, 1.5)).is_err());
    }

    #[test]
    fn cdf_examples() {
        let c = |x, alpha| cdf_1d(x, &sp(alpha, 1.0), 1e-12).unwrap();
        assert_eq!(c(0.0, 1.3), 0.5);
        assert!((c(1.0, 1.0) - 0.75).abs() < 1e-11);
        assert!((c(2.0, 2.0) - 0.921_350_396_474_857_6).abs() < 1e-11);
        assert!((c(-2.0, 2.0) - (1.0 - 0.921_350_396_474_857_6)).abs() < 1e-11);
    }

    #[test]
    fn unimodal_on_grid() {
        for &alpha in &[0.8, 1.2, 1.5, 1.8, 2.0] {
            let mut prev = f64::INFINITY;
            for i in 0..=100 {
                let v = d1(0.1 * i as f64, alpha, 1.0);
                assert!(v < prev, "alpha={alpha} r={}", 0.1 * i as f64);
                prev = v;
            }
        }
    }
}
