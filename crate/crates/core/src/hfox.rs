//! Fox H-functions on the positive real axis.
//!
//! Convention:
//!
//! ```text
//! H(z) = (1/2πi) ∫_L χ(s) z^s ds,
//! χ(s) = Π_{j≤m} Γ(b_j − B_j s) Π_{i≤n} Γ(1 − a_i + A_i s)
//!        / (Π_{j>m} Γ(1 − b_j + B_j s) Π_{i>n} Γ(a_i − A_i s))
//! ```
//!
//! so the poles of the `b`-factors, `s = (b_j + k)/B_j`, lie to the right of
//! the contour and the poles of the `a`-factors, `s = (a_i − 1 − k)/A_i`, to
//! the left. Closing the contour to the right gives the residue series
//!
//! ```text
//! H(z) = Σ_{j≤m} Σ_k (−1)^k / (k! B_j) · χ_j(s_jk) · z^{s_jk}
//! ```
//!
//! where `χ_j` is `χ` with the factor `Γ(b_j − B_j s)` removed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::params::{EvalResult, Method, StableParams};
use crate::propagator::peak_value;
use crate::quad::adaptive;
use crate::specfun::{ln_gamma, ln_gamma_complex, ln_gamma_signed};

/// Series terms are summed while the estimated cancellation error stays
/// below this (absolute, in density units) before switching to the contour.
pub const SERIES_ABS_ERR_LIMIT: f64 = 1e-12;
const SERIES_CAP: usize = 400;
const POLE_CHECK: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct HFoxSpec {
    m: usize,
    n: usize,
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

impl HFoxSpec {
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return domain(format!(
                "orders must satisfy m <= q and n <= p (m={m}, n={n}, p={}, q={})",
                upper.len(),
                lower.len()
            ));
        }
        for &(c, w) in upper.iter().chain(&lower) {
            if !(c.is_finite() && w.is_finite() && w > 0.0) {
                return domain(format!("parameter pair ({c}, {w}) must be finite with positive weight"));
            }
        }
        let spec = Self { m, n, upper, lower };
        for &(b, bw) in &spec.lower[..m] {
            for &(a, aw) in &spec.upper[..n] {
                for k in 0..POLE_CHECK {
                    let left = (a - 1.0 - k as f64) / aw;
                    let l = (left * bw - b).round();
                    if l >= 0.0 && ((b + l) / bw - left).abs() < 1e-12 * left.abs().max(1.0) {
                        return domain(format!(
                            "left and right pole sets meet at s = {left}; no separating contour"
                        ));
                    }
                }
            }
        }
        Ok(spec)
    }

    /// `z^b e^{−z}` as `H^{1,0}_{0,1}[z | -; (b, 1)]`.
    pub fn power_exponential(b: f64) -> Self {
        Self::new(1, 0, vec![], vec![(b, 1.0)]).expect("valid parameters")
    }

    /// `H^{1,0}_{0,1}[z | -; (0, 1/α)] = α e^{−z^α}`, the characteristic function in H form.
    pub fn characteristic(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        Self::new(1, 0, vec![], vec![(0.0, 1.0 / alpha)])
    }

    /// `H^{1,1}_{2,2}[z | (1,1/α),(1,1/2); (1,1),(1,1/2)]`, with `P(x) = H(|x| a^{−1/α}) / (α|x|)`.
    pub fn stable_density(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        Self::new(1, 1, vec![(1.0, 1.0 / alpha), (1.0, 0.5)], vec![(1.0, 1.0), (1.0, 0.5)])
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.upper.len(), self.lower.len())
    }

    pub fn upper(&self) -> &[(f64, f64)] {
        &self.upper
    }

    pub fn lower(&self) -> &[(f64, f64)] {
        &self.lower
    }

    /// `Σ B_j − Σ A_i`: positive means the residue series is entire in `z`.
    pub fn series_parameter(&self) -> f64 {
        self.lower.iter().map(|p| p.1).sum::<f64>() - self.upper.iter().map(|p| p.1).sum::<f64>()
    }

    /// Exponential decay rate of `χ` along vertical lines, in units of `π/2`.
    pub fn contour_decay(&self) -> f64 {
        let lower: f64 = self.lower.iter().enumerate().map(|(j, p)| if j < self.m { p.1 } else { -p.1 }).sum();
        let upper: f64 = self.upper.iter().enumerate().map(|(i, p)| if i < self.n { p.1 } else { -p.1 }).sum();
        lower + upper
    }

    /// Rightmost left pole and leftmost right pole.
    pub fn pole_gap(&self) -> (Option<f64>, Option<f64>) {
        let left = self.upper[..self.n].iter().map(|&(a, w)| (a - 1.0) / w).fold(None, |m: Option<f64>, v| {
            Some(m.map_or(v, |m| m.max(v)))
        });
        let right = self.lower[..self.m].iter().map(|&(b, w)| b / w).fold(None, |m: Option<f64>, v| {
            Some(m.map_or(v, |m| m.min(v)))
        });
        (left, right)
    }

    /// Midpoint of the pole gap, or half a unit beyond the only pole set.
    pub fn default_sigma(&self) -> Result<f64> {
        match self.pole_gap() {
            (Some(l), Some(r)) if l < r => Ok(0.5 * (l + r)),
            (Some(l), Some(r)) => domain(format!(
                "no vertical contour separates the poles (left pole {l} >= right pole {r})"
            )),
            (None, Some(r)) => Ok(r - 0.5),
            (Some(l), None) => Ok(l + 0.5),
            (None, None) => Ok(0.0),
        }
    }

    /// The parameters of `H(z) = k · H'(z^k)`: every weight multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return domain(format!("scale exponent must be positive, got {k}"));
        }
        Self::new(
            self.m,
            self.n,
            self.upper.iter().map(|&(a, w)| (a, k * w)).collect(),
            self.lower.iter().map(|&(b, w)| (b, k * w)).collect(),
        )
    }

    /// Parameters of the Fourier-cosine image:
    /// `∫₀^∞ H(x) cos(kx) dx = (π/k) H'(k)`.
    pub fn fourier_cosine_image(&self) -> Result<Self> {
        let mut upper: Vec<(f64, f64)> = self.lower.iter().map(|&(b, w)| (1.0 - b, w)).collect();
        upper.push((1.0, 0.5));
        let mut lower = vec![(1.0, 1.0)];
        lower.extend(self.upper.iter().map(|&(a, w)| (1.0 - a, w)));
        lower.push((1.0, 0.5));
        Self::new(self.n + 1, self.m, upper, lower)
    }

    /// `ln χ(s)` on some branch.
    fn ln_chi(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, w)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(b - w * s)?;
            } else {
                acc -= ln_gamma_complex(1.0 - b + w * s)?;
            }
        }
        for (i, &(a, w)) in self.upper.iter().enumerate() {
            if i < self.n {
                acc += ln_gamma_complex(1.0 - a + w * s)?;
            } else {
                acc -= ln_gamma_complex(a - w * s)?;
            }
        }
        Ok(acc)
    }

    /// `(ln|χ_j(s)|, sign)` at a real point, `None` when a denominator factor has a pole.
    fn ln_rest_real(&self, skip: usize, s: f64) -> Result<Option<(f64, f64)>> {
        let mut ln = 0.0;
        let mut sign = 1.0;
        let mut num = |x: f64| -> Result<()> {
            if is_pole(x) {
                return Err(Error::Unsupported(format!(
                    "higher-order pole at s = {s}: only simple right poles are supported"
                )));
            }
            let (l, sg) = ln_gamma_signed(x)?;
            ln += l;
            sign *= sg;
            Ok(())
        };
        for (j, &(b, w)) in self.lower.iter().enumerate().take(self.m) {
            if j != skip {
                num(b - w * s)?;
            }
        }
        for &(a, w) in self.upper.iter().take(self.n) {
            num(1.0 - a + w * s)?;
        }
        let mut den = Vec::new();
        for &(b, w) in self.lower.iter().skip(self.m) {
            den.push(1.0 - b + w * s);
        }
        for &(a, w) in self.upper.iter().skip(self.n) {
            den.push(a - w * s);
        }
        for x in den {
            if is_pole(x) {
                return Ok(None);
            }
            let (l, sg) = ln_gamma_signed(x)?;
            ln -= l;
            sign *= sg;
        }
        Ok(Some((ln, sign)))
    }
}

/// Sum of residues at the right poles.
pub fn hfox_eval_series(spec: &HFoxSpec, z: f64) -> Result<EvalResult> {
    if !(z > 0.0 && z.is_finite()) {
        return domain(format!("z must be finite and positive, got {z}"));
    }
    if spec.m == 0 {
        return domain("the residue series needs at least one right-pole factor (m >= 1)");
    }
    let lnz = z.ln();
    let asymptotic = spec.series_parameter() < 0.0;
    // right poles of distinct factors must not collide
    for j in 0..spec.m {
        for l in (j + 1)..spec.m {
            let (bj, wj) = spec.lower[j];
            let (bl, wl) = spec.lower[l];
            for k in 0..POLE_CHECK {
                let s = (bj + k as f64) / wj;
                let t = s * wl - bl;
                if t >= 0.0 && (t - t.round()).abs() < 1e-12 {
                    return Err(Error::Unsupported(format!(
                        "right poles of two factors coincide at s = {s}"
                    )));
                }
            }
        }
    }

    let mut total = 0.0;
    let mut abs_sum = 0.0;
    let mut tail = 0.0f64;
    for j in 0..spec.m {
        let (b, w) = spec.lower[j];
        let mut sum = 0.0;
        let mut prev = f64::INFINITY;
        let mut min_term = f64::INFINITY;
        let mut converged = false;
        for k in 0..SERIES_CAP {
            let s = (b + k as f64) / w;
            let term = match spec.ln_rest_real(j, s)? {
                None => 0.0,
                Some((ln, sign)) => {
                    let ln_t = ln - ln_gamma(k as f64 + 1.0)? - w.ln() + s * lnz;
                    if ln_t > 709.0 {
                        return Err(Error::Overflow(format!("series term {k} overflows at z = {z}")));
                    }
                    let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
                    parity * sign * ln_t.exp()
                }
            };
            if asymptotic && term != 0.0 {
                if term.abs() > min_term {
                    tail = tail.max(min_term);
                    converged = true;
                    break;
                }
                min_term = term.abs();
            }
            sum += term;
            abs_sum += term.abs();
            if k >= 2 && sum != 0.0 && term.abs() < 1e-16 * sum.abs() && prev < 1e-16 * sum.abs() {
                tail = tail.max(term.abs() + prev);
                converged = true;
                break;
            }
            prev = term.abs();
        }
        if !converged {
            return Err(Error::Convergence {
                msg: format!("residue series did not settle within {SERIES_CAP} terms at z = {z}"),
                best: total + sum,
                abs_err: prev,
            });
        }
        total += sum;
    }
    let abs_err = 32.0 * f64::EPSILON * abs_sum + tail;
    Ok(EvalResult::new(total, abs_err, Method::HfoxSeries))
}

const CONTOUR_MAX_T: f64 = 1e4;

fn contour_integrand(spec: &HFoxSpec, lnz: f64, sigma: f64, t: f64) -> Result<f64> {
    let s = Complex64::new(sigma, t);
    let ln = spec.ln_chi(s)? + s * lnz;
    if ln.re > 709.0 {
        return Err(Error::Overflow(format!("contour integrand overflows at t = {t}")));
    }
    Ok(ln.exp().re / PI)
}

fn check_sigma(spec: &HFoxSpec, sigma: f64) -> Result<()> {
    let (l, r) = spec.pole_gap();
    if l.is_some_and(|l| sigma <= l) || r.is_some_and(|r| sigma >= r) {
        return domain(format!("contour abscissa {sigma} does not separate the pole sets ({l:?}, {r:?})"));
    }
    if spec.contour_decay() <= 0.0 {
        return domain("the integrand does not decay along vertical lines (a* <= 0)");
    }
    Ok(())
}

/// `(1/π) ∫₀^T Re[χ(σ+it) z^{σ+it}] dt` plus an estimate of the cut-off tail.
pub fn hfox_eval_contour(spec: &HFoxSpec, z: f64, contour_sigma: f64, truncation_t: f64) -> Result<EvalResult> {
    if !(z > 0.0 && z.is_finite()) {
        return domain(format!("z must be finite and positive, got {z}"));
    }
    if !(truncation_t > 0.0 && truncation_t.is_finite()) {
        return domain(format!("truncation T must be positive, got {truncation_t}"));
    }
    check_sigma(spec, contour_sigma)?;
    let lnz = z.ln();
    let mut failure = None;
    let mut f = |t: f64| match contour_integrand(spec, lnz, contour_sigma, t) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let (mut total, mut err) = (0.0f64, 0.0f64);
    let mut lo = 0.0;
    while lo < truncation_t {
        let hi = (lo + 1.0).min(truncation_t);
        let (v, e) = adaptive(&mut f, lo, hi, 1e-16 * total.abs().max(1e-300));
        total += v;
        err += e;
        lo = hi;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let decay = 0.5 * PI * spec.contour_decay();
    let edge = contour_integrand(spec, lnz, contour_sigma, truncation_t)?.abs();
    let edge_mag = {
        let s = Complex64::new(contour_sigma, truncation_t);
        (spec.ln_chi(s)? + s * lnz).re.exp() / PI
    };
    err += edge.max(edge_mag) / decay;
    Ok(EvalResult::new(total, err + 8.0 * f64::EPSILON * total.abs(), Method::HfoxContour))
}

/// Contour evaluation with the default abscissa and an adaptively chosen cut-off.
pub fn hfox_eval_contour_auto(spec: &HFoxSpec, z: f64) -> Result<EvalResult> {
    let sigma = spec.default_sigma()?;
    check_sigma(spec, sigma)?;
    if !(z > 0.0 && z.is_finite()) {
        return domain(format!("z must be finite and positive, got {z}"));
    }
    let lnz = z.ln();
    let magnitude = |t: f64| -> Result<f64> {
        let s = Complex64::new(sigma, t);
        Ok((spec.ln_chi(s)? + s * lnz).re.exp() / PI)
    };
    let mut t = 1.0;
    let mut running = magnitude(0.0)?;
    while t < CONTOUR_MAX_T {
        let m = magnitude(t)?;
        running = running.max(m);
        if m < 1e-17 * running && t > 2.0 {
            break;
        }
        t += 1.0;
    }
    hfox_eval_contour(spec, z, sigma, t)
}

/// Series when it is accurate, contour otherwise.
pub fn hfox_eval(spec: &HFoxSpec, z: f64) -> Result<EvalResult> {
    if spec.m > 0 && spec.series_parameter() > 0.0 {
        if let Ok(r) = hfox_eval_series(spec, z) {
            if r.abs_err_estimate <= SERIES_ABS_ERR_LIMIT.max(1e-10 * r.value.abs()) {
                return Ok(r);
            }
        }
    }
    hfox_eval_contour_auto(spec, z)
}

/// `|H(z) − k·H'(z^k)|` with `H'` the scaled-parameter function.
pub fn hfox_scale_identity_check(spec: &HFoxSpec, z: f64, k: f64) -> Result<f64> {
    let lhs = hfox_eval(spec, z)?;
    let rhs = hfox_eval(&spec.scaled(k)?, z.powf(k))?;
    Ok((lhs.value - k * rhs.value).abs())
}

/// The stable density through its H-function representation.
///
/// Uses the specialised residue series
/// `P(x) = (1/(πα)) a^{−1/α} Σ (−1)^k Γ((2k+1)/α)/(2k)! · (|x| a^{−1/α})^{2k}`,
/// and falls back to the Mellin–Barnes contour when cancellation in the
/// series would exceed [`SERIES_ABS_ERR_LIMIT`].
pub fn stable_density_hfox(x: f64, params: &StableParams) -> Result<EvalResult> {
    let alpha = params.alpha();
    if !(alpha > 1.0) {
        return domain(format!("the H-function route requires 1 < alpha <= 2, got {alpha}"));
    }
    if !x.is_finite() {
        return domain(format!("x must be finite, got {x}"));
    }
    let width = params.width();
    if x == 0.0 {
        return Ok(EvalResult::new(peak_value(params), 4.0 * f64::EPSILON / width, Method::HfoxSeries));
    }
    let z = x.abs() / width;
    let pref = 1.0 / (PI * alpha * width);
    if let Ok((sum, err)) = stable_series(alpha, z) {
        if pref * err <= SERIES_ABS_ERR_LIMIT {
            return Ok(EvalResult::new((pref * sum).max(0.0), pref * err, Method::HfoxSeries));
        }
    }
    let spec = HFoxSpec::stable_density(alpha)?;
    let h = hfox_eval_contour_auto(&spec, z)?;
    let scale = 1.0 / (alpha * x.abs());
    Ok(EvalResult::new((scale * h.value).max(0.0), scale * h.abs_err_estimate, Method::HfoxContour))
}

/// `Σ (−1)^k Γ((2k+1)/α)/(2k)! z^{2k}` with a cancellation error estimate.
fn stable_series(alpha: f64, z: f64) -> Result<(f64, f64)> {
    let lnz = z.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..SERIES_CAP {
        let kk = 2.0 * k as f64;
        let ln_t = ln_gamma((kk + 1.0) / alpha)? - ln_gamma(kk + 1.0)? + kk * lnz;
        if ln_t > 709.0 {
            return Err(Error::Overflow("stable series term overflows".into()));
        }
        let t = if k % 2 == 0 { ln_t.exp() } else { -ln_t.exp() };
        sum += t;
        abs_sum += t.abs();
        if k >= 1 && t.abs() < 1e-16 * sum.abs() && prev < 1e-16 * sum.abs() {
            return Ok((sum, 32.0 * f64::EPSILON * abs_sum + t.abs() + prev));
        }
        prev = t.abs();
    }
    Err(Error::Convergence { msg: "stable series did not settle".into(), best: sum, abs_err: prev })
}
