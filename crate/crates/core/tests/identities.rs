use std::f64::consts::PI;

use levyprop::hfox::{hfox_eval, stable_density_hfox, HFoxSpec};
use levyprop::oscquad::{integrate, Kernel, OscIntegrand};
use levyprop::params::self_similar_rescale;
use levyprop::propagator::{density_1d, density_1d_ibp, density_3d_derivative, density_nd, DensityQuery};
use levyprop::specfun::{bessel_j, gamma_real, BesselOrder};
use levyprop::StableParams;
use proptest::prelude::*;

fn sp(alpha: f64, a: f64) -> StableParams {
    StableParams::new(alpha, a).unwrap()
}

fn quad(x: f64, p: StableParams) -> f64 {
    density_1d(&DensityQuery::one_d(x, p, 1e-12).unwrap()).unwrap().value
}

fn simpson_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth > 40 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 0)
}

#[test]
fn angular_average_reduces_to_bessel() {
    // ∫₀¹ cos(k√u) u^{−1/2}(1−u)^{(n−3)/2} du at n = 4, k = p·r = 3, with u = sin²θ
    let (n, k) = (4.0, 3.0);
    let lhs = simpson_adaptive(&|t: f64| 2.0 * t.cos().powf(n - 2.0) * (k * t.sin()).cos(), 0.0, 0.5 * PI, 1e-15);
    let nu = BesselOrder::new(0.5 * n - 1.0).unwrap();
    let rhs = PI.sqrt() * gamma_real(0.5 * (n - 1.0)).unwrap() * (2.0 / k).powf(0.5 * (n - 2.0)) * bessel_j(nu, k);
    assert!((lhs - rhs).abs() < 1e-13, "{lhs} vs {rhs}");
    assert!((rhs - 0.355_061_711_079_629_46).abs() < 1e-15);
}

#[test]
fn cosine_transform_of_characteristic_is_hfox_density() {
    let alpha = 1.5;
    let image = HFoxSpec::characteristic(alpha).unwrap().fourier_cosine_image().unwrap();
    for &x in &[0.3, 0.7, 1.5, 3.0, 6.0] {
        let ft = integrate(OscIntegrand::new(alpha, 1.0, 0.0, Kernel::Cosine, x), 1e-11).unwrap().value / PI;
        let h = stable_density_hfox(x, &sp(alpha, 1.0)).unwrap().value;
        let via_image = hfox_eval(&image, x).unwrap().value / (alpha * x);
        assert!((ft - h).abs() < 1e-7, "x={x}: {ft} vs {h}");
        assert!((ft - via_image).abs() < 1e-7, "x={x}: {ft} vs {via_image}");
    }
}

#[test]
fn hfox_density_approaches_gaussian() {
    let p = sp(1.9999, 1.0);
    for &x in &[0.0, 1.0, 2.0] {
        let g = (-x * x / 4.0f64).exp() / (4.0 * PI).sqrt();
        let h = stable_density_hfox(x, &p).unwrap().value;
        assert!(((h - g) / g).abs() <= 1e-3, "x={x}");
    }
}

#[test]
fn routes_agree() {
    for &alpha in &[0.7, 1.0, 1.3, 1.5, 1.8, 2.0] {
        let p = sp(alpha, 1.0);
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let q = DensityQuery::one_d(x, p, 1e-12).unwrap();
            let base = density_1d(&q).unwrap().value;
            let ibp = density_1d_ibp(&q).unwrap().value;
            let nd1 = density_nd(&q).unwrap().value;
            assert!((base - ibp).abs() < 1e-8, "ibp alpha={alpha} x={x}");
            assert!((base - nd1).abs() < 1e-8, "nd alpha={alpha} x={x}");
            let q3 = DensityQuery::new(x, 3, p, 1e-12).unwrap();
            let d3 = density_3d_derivative(&q3).unwrap().value;
            let h3 = density_nd(&q3).unwrap().value;
            assert!((d3 - h3).abs() < 1e-8, "3d alpha={alpha} r={x}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn self_similarity(alpha in 0.6f64..2.0, a in 0.2f64..5.0, x in -8.0f64..8.0) {
        let p = sp(alpha, a);
        let (xr, pref) = self_similar_rescale(x, &p);
        let lhs = quad(x, p);
        let rhs = pref * quad(xr, sp(alpha, 1.0));
        prop_assert!((lhs - rhs).abs() <= 1e-9, "{} vs {}", lhs, rhs);
    }
}
