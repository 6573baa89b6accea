//! Semi-infinite oscillatory integrals `∫₀^∞ p^s e^{−a p^α} K(p r) dp`.
//!
//! The half-line is cut at consecutive zeros of the kernel. Each panel is
//! integrated with an adaptive 31-point Gauss–Legendre rule; the first panel is
//! graded geometrically towards the origin, where `p^s` and `e^{−a p^α}` are not
//! smooth. The panel sums stop either when a rigorous envelope bound on the
//! remaining tail drops below the tolerance, or when iterated Aitken
//! extrapolation of the alternating partial sums settles.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, graded_from_zero, to_infinity};
use crate::specfun::{bessel_j, ln_gamma, BesselOrder, BesselZeros};

/// Frequencies below this are treated as zero-frequency.
pub const R_MIN: f64 = 1e-8;
/// Default panel budget.
pub const MAX_PANELS: usize = 200;
/// Maximum depth of the iterated Aitken transform.
pub const MAX_EXTRAPOLATION_DEPTH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Cosine,
    Sine,
    Bessel(BesselOrder),
}

/// `∫₀^∞ p^weight_power · e^{−a p^alpha} · K(p r) dp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscIntegrand {
    pub alpha: f64,
    pub a: f64,
    pub weight_power: f64,
    pub kernel: Kernel,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub panels_used: usize,
}

impl OscIntegrand {
    pub fn new(alpha: f64, a: f64, weight_power: f64, kernel: Kernel, r: f64) -> Self {
        Self { alpha, a, weight_power, kernel, r }
    }

    /// Power of `p` governing the integrand at the origin.
    fn origin_power(&self) -> f64 {
        match self.kernel {
            Kernel::Cosine => self.weight_power,
            Kernel::Sine => self.weight_power + 1.0,
            Kernel::Bessel(order) => self.weight_power + order.nu(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {}", self.alpha));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return domain(format!("a must be finite and positive, got {}", self.a));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return domain(format!("r must be finite and >= 0, got {}", self.r));
        }
        if !self.weight_power.is_finite() || self.origin_power() <= -1.0 {
            return domain(format!(
                "weight power {} makes the integrand non-integrable at the origin",
                self.weight_power
            ));
        }
        Ok(())
    }

    fn kernel_at(&self, z: f64) -> f64 {
        match self.kernel {
            Kernel::Cosine => z.cos(),
            Kernel::Sine => z.sin(),
            Kernel::Bessel(order) => bessel_j(order, z),
        }
    }

    fn eval(&self, p: f64) -> f64 {
        if p == 0.0 {
            return 0.0;
        }
        let env = (self.weight_power * p.ln() - self.a * p.powf(self.alpha)).exp();
        env * self.kernel_at(p * self.r)
    }

    /// Upper bound on `∫_b^∞ p^s e^{−a p^α} |K(p r)| dp`.
    fn tail_bound(&self, b: f64) -> f64 {
        let kmax = match self.kernel {
            Kernel::Bessel(order) if order.nu() < 0.0 && b * self.r < 1.0 => {
                (2.0 / (PI * b * self.r)).sqrt().max(1.0)
            }
            _ => 1.0,
        };
        let nu = (self.weight_power + 1.0) / self.alpha;
        let x = self.a * b.powf(self.alpha);
        let ln_pref = -self.alpha.ln() - nu * self.a.ln();
        kmax * (ln_pref + ln_upper_gamma_bound(nu, x)).exp()
    }

    /// A cut-off beyond which the envelope tail is below `target`.
    fn envelope_cutoff(&self, target: f64) -> f64 {
        let mut b = self.a.powf(-1.0 / self.alpha);
        while self.tail_bound(b) > target && b < 1e300 {
            b *= 2.0;
        }
        let (mut lo, mut hi) = (0.5 * b, b);
        for _ in 0..30 {
            let mid = (lo * hi).sqrt();
            if self.tail_bound(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// `ln` of an upper bound on the upper incomplete gamma `Γ(ν, x)`.
fn ln_upper_gamma_bound(nu: f64, x: f64) -> f64 {
    let lead = (nu - 1.0) * x.ln() - x;
    if nu <= 1.0 {
        lead
    } else if x > 2.0 * (nu - 1.0) {
        lead - (1.0 - (nu - 1.0) / x).ln()
    } else {
        ln_gamma(nu).unwrap_or(f64::INFINITY)
    }
}

/// Integrate with the kernel carried by `spec`.
pub fn integrate(spec: OscIntegrand, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return domain(format!("tol must be positive, got {tol}"));
    }
    spec.validate()?;
    if spec.r < R_MIN {
        return integrate_low_frequency(&spec, tol);
    }
    integrate_panels(&spec, tol)
}

/// Integrate with kernel `sin(p r)`, whatever kernel `spec` carries.
pub fn integrate_sine(spec: OscIntegrand, tol: f64) -> Result<QuadResult> {
    integrate(OscIntegrand { kernel: Kernel::Sine, ..spec }, tol)
}

fn kernel_zeros(spec: &OscIntegrand) -> Box<dyn Iterator<Item = f64>> {
    match spec.kernel {
        Kernel::Cosine => Box::new((1..).map(|k| (k as f64 - 0.5) * PI)),
        Kernel::Sine => Box::new((1..).map(|k| k as f64 * PI)),
        Kernel::Bessel(order) => Box::new(BesselZeros::new(order)),
    }
}

fn integrate_panels(spec: &OscIntegrand, tol: f64) -> Result<QuadResult> {
    let p_end = spec.envelope_cutoff(1e-3 * tol);
    let piece = spec.a.powf(-1.0 / spec.alpha);
    let panel_tol = 0.01 * tol;
    let mut f = |p: f64| spec.eval(p);

    let mut sum = 0.0;
    let mut quad_err = 0.0;
    let mut sums: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let mut lo = 0.0;
    let mut panels = 0;
    let mut zeros = kernel_zeros(spec);

    loop {
        let z = zeros.next().expect("kernel zeros are unbounded");
        let hi = (z / spec.r).min(p_end);
        let (v, e) = if panels == 0 {
            let h = hi.min(piece);
            let (v0, e0) = graded_from_zero(&mut f, h, spec.origin_power(), panel_tol);
            let (v1, e1) = integrate_pieces(&mut f, h, hi, piece, panel_tol);
            (v0 + v1, e0 + e1)
        } else {
            integrate_pieces(&mut f, lo, hi, piece, panel_tol)
        };
        sum += v;
        quad_err += e;
        panels += 1;
        sums.push(sum);

        let tail = spec.tail_bound(hi);
        if hi >= p_end || tail < 0.1 * tol {
            return finish(sum, quad_err + tail, panels, tol);
        }

        if sums.len() >= 7 {
            let est = iterated_aitken(&sums);
            estimates.push(est);
            let n = estimates.len();
            if n >= 3 {
                let d1 = (estimates[n - 1] - estimates[n - 2]).abs();
                let d2 = (estimates[n - 2] - estimates[n - 3]).abs();
                if d1 <= 0.1 * tol && d2 <= tol {
                    return finish(estimates[n - 1], quad_err + 2.0 * d1, panels, tol);
                }
            }
        }

        if panels >= MAX_PANELS {
            let best = estimates.last().copied().unwrap_or(sum);
            let n = estimates.len();
            let abs_err = if n >= 2 { (estimates[n - 1] - estimates[n - 2]).abs() } else { tail };
            return Err(Error::Convergence {
                msg: format!("oscillatory quadrature exhausted {MAX_PANELS} panels"),
                best,
                abs_err: abs_err + quad_err,
            });
        }
        lo = hi;
    }
}

fn integrate_pieces<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, piece: f64, tol: f64) -> (f64, f64) {
    if hi <= lo {
        return (0.0, 0.0);
    }
    let n = ((hi - lo) / piece).ceil().clamp(1.0, 64.0) as usize;
    let h = (hi - lo) / n as f64;
    let (mut v, mut e) = (0.0, 0.0);
    for i in 0..n {
        let a = lo + h * i as f64;
        let b = if i + 1 == n { hi } else { a + h };
        let (vi, ei) = adaptive(f, a, b, tol / n as f64);
        v += vi;
        e += ei;
    }
    (v, e)
}

fn finish(value: f64, abs_err: f64, panels: usize, tol: f64) -> Result<QuadResult> {
    if abs_err > tol || !value.is_finite() {
        return Err(Error::Convergence {
            msg: "oscillatory quadrature error estimate exceeds tolerance".into(),
            best: value,
            abs_err,
        });
    }
    Ok(QuadResult { value, abs_err_estimate: abs_err, panels_used: panels.max(1) })
}

/// Iterated Aitken Δ² on the most recent partial sums.
fn iterated_aitken(sums: &[f64]) -> f64 {
    let mut m = sums.len().min(2 * MAX_EXTRAPOLATION_DEPTH + 1);
    if m % 2 == 0 {
        m -= 1;
    }
    let mut seq: Vec<f64> = sums[sums.len() - m..].to_vec();
    while seq.len() >= 3 {
        let next: Vec<f64> = seq
            .windows(3)
            .map(|w| {
                let d1 = w[2] - w[1];
                let d0 = w[1] - w[0];
                let den = d1 - d0;
                if den == 0.0 || !den.is_finite() {
                    w[2]
                } else {
                    w[2] - d1 * d1 / den
                }
            })
            .collect();
        seq = next;
    }
    seq[0]
}

/// Zero-frequency path: substitution `u = a p^α`, with the kernel written as
/// `p^k · K̃(p)` so that `K̃` is smooth and finite at the origin.
fn integrate_low_frequency(spec: &OscIntegrand, tol: f64) -> Result<QuadResult> {
    let r = spec.r;
    let beta = spec.origin_power();
    let smooth: Box<dyn Fn(f64) -> f64> = match spec.kernel {
        Kernel::Cosine => Box::new(move |p: f64| (p * r).cos()),
        Kernel::Sine => {
            if r == 0.0 {
                return Ok(QuadResult { value: 0.0, abs_err_estimate: 0.0, panels_used: 1 });
            }
            Box::new(move |p: f64| {
                let z = p * r;
                if z < 1e-4 {
                    r * (1.0 - z * z / 6.0)
                } else {
                    z.sin() / p
                }
            })
        }
        Kernel::Bessel(order) => {
            let nu = order.nu();
            if r == 0.0 {
                if nu > 0.0 {
                    return Ok(QuadResult { value: 0.0, abs_err_estimate: 0.0, panels_used: 1 });
                }
                if nu < 0.0 {
                    return domain("Bessel kernel of negative order is singular at r = 0");
                }
            }
            let lead = 1.0 / (nu * 2f64.ln() + ln_gamma(nu + 1.0)?).exp();
            Box::new(move |p: f64| {
                let z = p * r;
                if z < 1e-3 {
                    let q = 0.25 * z * z;
                    r.powf(nu) * lead * (1.0 - q / (nu + 1.0) + q * q / (2.0 * (nu + 1.0) * (nu + 2.0)))
                } else {
                    bessel_j(order, z) / p.powf(nu)
                }
            })
        }
    };
    let alpha = spec.alpha;
    let a = spec.a;
    let c = (beta + 1.0) / alpha;
    let scale = a.powf(-1.0 / alpha);
    let pref = a.powf(-c) / alpha;
    let p_of_u = move |u: f64| scale * u.powf(1.0 / alpha);

    // [0, 1] in w = u^c
    let mut g0 = |w: f64| {
        if w == 0.0 {
            return smooth(0.0) / c;
        }
        let u = w.powf(1.0 / c);
        (-u).exp() * smooth(p_of_u(u)) / c
    };
    let inner_tol = 0.1 * tol / pref.max(1e-300);
    let (v0, e0) = graded_from_zero(&mut g0, 1.0, 0.0, inner_tol);
    let mut g1 = |u: f64| (u.powf(c - 1.0).ln() - u).exp() * smooth(p_of_u(u));
    let (v1, e1) = to_infinity(&mut g1, 1.0, 1.0, inner_tol);
    finish(pref * (v0 + v1), pref * (e0 + e1), 1, tol)
}
