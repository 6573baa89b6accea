//! Spectral fractional operators on a periodic grid and the residual of the
//! fractional diffusion equation.
//!
//! Transform convention: `f̂(p) = ∫ e^{ipx} f(x) dx`, under which the Weyl
//! derivatives have symbols `(∓ip)^α = |p|^α e^{∓iπα sgn(p)/2}`. A grid mode
//! `e^{iκx}` sits at `p = −κ`, so `D_+` multiplies it by `(iκ)^α` and `D_−` by
//! `(−iκ)^α`; for `α = 1`, `D_+` is the ordinary derivative.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{domain, Result};
use crate::oscquad::{integrate, Kernel, OscIntegrand};
use crate::params::StableParams;
use crate::propagator::{density_1d, DensityQuery};

/// Samples `f(x_j)` at `x_j = −L/2 + jL/M`, `M` a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain_length: f64,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl GridFunction {
    pub fn new(domain_length: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(domain_length > 0.0 && domain_length.is_finite()) {
            return domain(format!("domain length must be finite and positive, got {domain_length}"));
        }
        let m = values.len();
        if m < 4 || !m.is_power_of_two() {
            return domain(format!("grid size must be a power of two >= 4, got {m}"));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return domain("grid values must be finite");
        }
        Ok(Self { domain_length, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(domain_length: f64, m: usize, f: F) -> Result<Self> {
        let h = domain_length / m as f64;
        let values = (0..m).map(|j| f(-0.5 * domain_length + h * j as f64)).collect();
        Self::new(domain_length, values)
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.domain_length / self.len() as f64;
        (0..self.len()).map(|j| -0.5 * self.domain_length + h * j as f64).collect()
    }

    /// `∫ conj(f) g dx` by the trapezoidal rule.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let h = self.domain_length / self.len() as f64;
        self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * h
    }

    /// Multiply every Fourier mode `e^{iκx}` by `symbol(κ, nyquist)`.
    fn apply_symbol<S: Fn(f64, bool) -> Complex64>(&self, symbol: S) -> Self {
        let m = self.len();
        let mut planner = FftPlanner::<f64>::new();
        let mut buf = self.values.clone();
        planner.plan_fft_forward(m).process(&mut buf);
        let base = 2.0 * PI / self.domain_length;
        for (b, c) in buf.iter_mut().enumerate() {
            let k = if b <= m / 2 { b as f64 } else { b as f64 - m as f64 };
            *c *= symbol(base * k, b == m / 2);
        }
        planner.plan_fft_inverse(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        Self { domain_length: self.domain_length, values: buf }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    Ok(())
}

/// `(−∇²)^{α/2}`: multiplies mode `e^{iκx}` by `|κ|^α`.
pub fn frac_laplacian(g: &GridFunction, alpha: f64) -> Result<GridFunction> {
    check_alpha(alpha)?;
    Ok(g.apply_symbol(|k, _| Complex64::new(k.abs().powf(alpha), 0.0)))
}

/// Weyl derivative `D_±^α`. The Nyquist mode, whose sign is ambiguous on the
/// grid, gets the average of the two one-sided symbols.
pub fn weyl_derivative(g: &GridFunction, alpha: f64, side: Side) -> Result<GridFunction> {
    check_alpha(alpha)?;
    let dir = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    Ok(g.apply_symbol(move |k, nyquist| {
        let mag = k.abs().powf(alpha);
        if nyquist {
            Complex64::new(mag * (0.5 * PI * alpha).cos(), 0.0)
        } else {
            Complex64::from_polar(mag, dir * 0.5 * PI * alpha * k.signum())
        }
    }))
}

/// `∂P/∂t = −(1/π) ∫₀^∞ p^α e^{−a p^α} cos(p x) dp` (with `∂a/∂t = 1`).
pub fn dpdt_quadrature(x: f64, params: &StableParams, tol: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("x must be finite, got {x}"));
    }
    let alpha = params.alpha();
    let spec = OscIntegrand::new(alpha, params.a(), alpha, Kernel::Cosine, x.abs());
    Ok(-integrate(spec, PI * tol)?.value / PI)
}

/// `sup_x |(P(a+δ) − P(a−δ))/(2δ) − ∂P/∂t|` over `x_grid`.
pub fn diffusion_residual(params: &StableParams, x_grid: &[f64], delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < params.a()) {
        return domain(format!("delta must lie in (0, a), got {delta}"));
    }
    let tol = 1e-13;
    let up = params.with_scale(params.a() + delta)?;
    let down = params.with_scale(params.a() - delta)?;
    let mut sup = 0.0f64;
    for &x in x_grid {
        let p_up = density_1d(&DensityQuery::one_d(x, up, tol)?)?.value;
        let p_down = density_1d(&DensityQuery::one_d(x, down, tol)?)?.value;
        let fd = (p_up - p_down) / (2.0 * delta);
        sup = sup.max((fd - dpdt_quadrature(x, params, tol)?).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TAU: f64 = 2.0 * PI;

    fn mode(k: f64) -> GridFunction {
        GridFunction::from_fn(TAU, 64, |x| Complex64::from_polar(1.0, k * x)).unwrap()
    }

    fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
        a.values().iter().zip(b.values()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
    }

    fn scaled(g: &GridFunction, c: Complex64) -> GridFunction {
        GridFunction::new(g.domain_length(), g.values().iter().map(|v| v * c).collect()).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let g = mode(3.0);
        let l = frac_laplacian(&g, 1.5).unwrap();
        assert!(max_diff(&l, &scaled(&g, Complex64::new(27f64.sqrt(), 0.0))) < 1e-12);
        let c = GridFunction::from_fn(TAU, 16, |_| Complex64::new(2.5, 0.0)).unwrap();
        assert!(frac_laplacian(&c, 0.7).unwrap().values().iter().all(|v| v.norm() < 1e-14));
        let s = GridFunction::from_fn(TAU, 32, |x| Complex64::new((2.0 * x).sin(), 0.0)).unwrap();
        assert!(max_diff(&frac_laplacian(&s, 2.0).unwrap(), &scaled(&s, Complex64::new(4.0, 0.0))) < 1e-12);
    }

    #[test]
    fn eigenvalue_property_every_mode() {
        let l = 5.0;
        for k in -15i32..=15 {
            let kappa = TAU * k as f64 / l;
            let g = GridFunction::from_fn(l, 32, |x| Complex64::from_polar(1.0, kappa * x)).unwrap();
            let got = frac_laplacian(&g, 1.3).unwrap();
            let want = scaled(&g, Complex64::new(kappa.abs().powf(1.3), 0.0));
            assert!(max_diff(&got, &want) < 1e-12, "k={k}");
        }
    }

    #[test]
    fn first_order_plus_is_the_derivative() {
        let g = mode(1.0);
        let d = weyl_derivative(&g, 1.0, Side::Plus).unwrap();
        assert!(max_diff(&d, &scaled(&g, Complex64::i())) < 1e-12);
        let d = weyl_derivative(&g, 1.0, Side::Minus).unwrap();
        assert!(max_diff(&d, &scaled(&g, -Complex64::i())) < 1e-12);
    }

    #[test]
    fn second_order_composition_is_minus_second_derivative() {
        let f = |x: f64| (2.0 * x).sin() + 0.3 * (5.0 * x).cos();
        let f2 = |x: f64| -4.0 * (2.0 * x).sin() - 7.5 * (5.0 * x).cos();
        let g = GridFunction::from_fn(TAU, 64, |x| Complex64::new(f(x), 0.0)).unwrap();
        let want = GridFunction::from_fn(TAU, 64, |x| Complex64::new(-f2(x), 0.0)).unwrap();
        let plus = weyl_derivative(&g, 1.0, Side::Plus).unwrap();
        let both = weyl_derivative(&plus, 1.0, Side::Minus).unwrap();
        assert!(max_diff(&both, &want) < 1e-11);
        assert!(max_diff(&frac_laplacian(&g, 2.0).unwrap(), &want) < 1e-11);
    }

    #[test]
    fn fft_round_trip() {
        let g = GridFunction::from_fn(3.0, 128, |x| Complex64::new((-x * x).exp(), x.sin())).unwrap();
        let back = g.apply_symbol(|_, _| Complex64::new(1.0, 0.0));
        assert!(max_diff(&g, &back) < 1e-13);
    }

    #[test]
    fn dpdt_examples() {
        let g = StableParams::new(2.0, 1.0).unwrap();
        assert!((dpdt_quadrature(0.0, &g, 1e-13).unwrap() + 0.25 / PI.sqrt()).abs() < 1e-12);
        let c = StableParams::new(1.0, 1.0).unwrap();
        assert!((dpdt_quadrature(0.0, &c, 1e-13).unwrap() + 1.0 / PI).abs() < 1e-12);
        let p = StableParams::new(1.5, 1.0).unwrap();
        let d = 1e-4;
        let fd = |x: f64| {
            let up = density_1d(&DensityQuery::one_d(x, p.with_scale(1.0 + d).unwrap(), 1e-13).unwrap()).unwrap().value;
            let dn = density_1d(&DensityQuery::one_d(x, p.with_scale(1.0 - d).unwrap(), 1e-13).unwrap()).unwrap().value;
            (up - dn) / (2.0 * d)
        };
        for &x in &[0.0, 0.7, 3.0] {
            assert!((fd(x) - dpdt_quadrature(x, &p, 1e-13).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn residual_examples() {
        let grid = [0.0, 0.5, 1.0, 2.0];
        for &alpha in &[2.0, 1.5] {
            let p = StableParams::new(alpha, 1.0).unwrap();
            let r = diffusion_residual(&p, &grid, 1e-4).unwrap();
            assert!(r <= 1e-6, "alpha={alpha}: {r}");
            let r2 = diffusion_residual(&p, &grid, 5e-5).unwrap();
            assert!(r2 <= r.max(1e-8));
        }
    }

    #[test]
    fn invalid_grids() {
        assert!(GridFunction::new(1.0, vec![Complex64::new(0.0, 0.0); 6]).is_err());
        assert!(GridFunction::new(0.0, vec![Complex64::new(0.0, 0.0); 8]).is_err());
        assert!(frac_laplacian(&mode(1.0), 2.5).is_err());
    }

    fn band_limited(coeffs: &[(f64, f64)]) -> GridFunction {
        GridFunction::from_fn(TAU, 64, |x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &(re, im))| Complex64::new(re, im) * Complex64::from_polar(1.0, (i as f64 - 15.0) * x))
                .sum()
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn weyl_composition(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 31), alpha in 0.1f64..2.0) {
            let g = band_limited(&coeffs);
            let plus = weyl_derivative(&g, 0.5 * alpha, Side::Plus).unwrap();
            let both = weyl_derivative(&plus, 0.5 * alpha, Side::Minus).unwrap();
            let lap = frac_laplacian(&g, alpha).unwrap();
            prop_assert!(max_diff(&both, &lap) < 1e-10);
        }

        #[test]
        fn laplacian_form_is_real_and_nonnegative(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 31), alpha in 0.1f64..2.0) {
            let g = band_limited(&coeffs);
            let q = g.inner(&frac_laplacian(&g, alpha).unwrap());
            prop_assert!(q.im.abs() < 1e-10 && q.re > -1e-10);
        }
    }
}
