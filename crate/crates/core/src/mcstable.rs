//! Monte Carlo sampling of symmetric α-stable laws and distribution checks.
//!
//! Draws come from the Chambers–Mallows–Stuck transformation, with the exact
//! Cauchy and Gaussian forms at `α = 1` and `α = 2`. The random stream is
//! ChaCha8, split into fixed blocks of [`BLOCK`] draws; block `b` uses stream
//! `b` of the generator seeded with `seed`. Blocks are generated in parallel
//! and concatenated in block order, so the output does not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::params::StableParams;
use crate::propagator::{cdf_1d, density_1d, DensityQuery};
use crate::specfun::gamma_real;

/// Draws per independently seeded block.
pub const BLOCK: usize = 65_536;
/// Identifies the generator and the block layout; stored with every dump.
pub const GENERATOR_ID: &str = "chacha8-block65536-v1";

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub alpha: f64,
    pub a: f64,
    pub seed: u64,
    pub draws: Vec<f64>,
}

impl SampleBatch {
    pub fn generator(&self) -> &'static str {
        GENERATOR_ID
    }

    pub fn params(&self) -> Result<StableParams> {
        StableParams::new(self.alpha, self.a)
    }
}

/// Uniform on the open interval (0, 1).
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn draw(rng: &mut ChaCha8Rng, alpha: f64, width: f64) -> f64 {
    let u1 = open_uniform(rng);
    let u2 = open_uniform(rng);
    if alpha == 2.0 {
        // Box–Muller; characteristic function e^{−a p²} has variance 2a
        return width * std::f64::consts::SQRT_2 * (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
    }
    let u = PI * (u1 - 0.5);
    if alpha == 1.0 {
        return width * u.tan();
    }
    let w = -u2.ln();
    let x = (alpha * u).sin() / u.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * u).cos() / w).powf((1.0 - alpha) / alpha);
    width * x
}

/// `count` draws with characteristic function `e^{−a|p|^α}`.
pub fn sample(alpha: f64, a: f64, count: usize, seed: u64) -> Result<SampleBatch> {
    let params = StableParams::new(alpha, a)?;
    if count < 1 {
        return domain("count must be >= 1");
    }
    let width = params.width();
    let blocks = count.div_ceil(BLOCK);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = BLOCK.min(count - b * BLOCK);
            (0..n).map(|_| draw(&mut rng, alpha, width)).collect()
        })
        .collect();
    Ok(SampleBatch { alpha, a, seed, draws: chunks.concat() })
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.par_sort_unstable_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> f64 {
    let x = sorted(x.to_vec());
    let y = sorted(y.to_vec());
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    d
}

/// KS distance between `m^{−exponent}(X₁+…+X_m)` and a fresh sample of `X`
/// (unit scale).
pub fn stability_check_with_norming(alpha: f64, m: usize, count: usize, seed: u64, exponent: f64) -> Result<f64> {
    if m < 2 {
        return domain(format!("m must be >= 2, got {m}"));
    }
    if count < 10_000 {
        return domain(format!("count must be >= 10^4, got {count}"));
    }
    let parts = sample(alpha, 1.0, count * m, seed)?;
    let fresh = sample(alpha, 1.0, count, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let norm = (m as f64).powf(-exponent);
    let sums: Vec<f64> = parts.draws.chunks_exact(m).map(|c| norm * c.iter().sum::<f64>()).collect();
    Ok(ks_two_sample(&sums, &fresh.draws))
}

/// Stability with the correct norming `m^{1/α}`.
pub fn stability_check(alpha: f64, m: usize, count: usize, seed: u64) -> Result<f64> {
    stability_check_with_norming(alpha, m, count, seed, 1.0 / alpha)
}

/// A CDF on the whole line built once from the quadrature CDF and density:
/// cubic Hermite interpolation on `[0, X]`, the leading power-law tail beyond.
struct CdfTable {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    tail_coeff: f64,
    alpha: f64,
}

impl CdfTable {
    fn build(params: &StableParams, tol: f64) -> Result<Self> {
        let w = params.width();
        let mut nodes = Vec::new();
        let segments: [(f64, f64, f64); 3] = [(0.0, 5.0, 0.02), (5.0, 20.0, 0.1), (20.0, 50.0, 0.5)];
        for &(lo, hi, h) in &segments {
            let n = ((hi - lo) / h).round() as usize;
            nodes.extend((0..n).map(|i| w * (lo + h * i as f64)));
        }
        nodes.push(50.0 * w);
        let evaluated: Vec<Result<(f64, f64)>> = nodes
            .par_iter()
            .map(|&x| {
                let f = cdf_1d(x, params, tol)?;
                let p = density_1d(&DensityQuery::one_d(x, *params, tol)?)?.value;
                Ok((f, p))
            })
            .collect();
        let mut values = Vec::with_capacity(nodes.len());
        let mut slopes = Vec::with_capacity(nodes.len());
        for r in evaluated {
            let (f, p) = r?;
            values.push(f);
            slopes.push(p);
        }
        let alpha = params.alpha();
        let tail_coeff = if alpha < 2.0 {
            params.a() * gamma_real(alpha)? * (0.5 * PI * alpha).sin() / PI
        } else {
            0.0
        };
        Ok(Self { nodes, values, slopes, tail_coeff, alpha })
    }

    fn upper(&self, x: f64) -> f64 {
        let last = *self.nodes.last().expect("non-empty table");
        if x >= last {
            return 1.0 - self.tail_coeff / x.powf(self.alpha);
        }
        let i = self.nodes.partition_point(|&n| n <= x) - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i] + h10 * h * self.slopes[i] + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1]
    }

    fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.upper(x)
        } else {
            1.0 - self.upper(-x)
        }
    }
}

/// One-sample KS distance between the draws and the quadrature CDF.
pub fn ks_against_numeric(batch: &SampleBatch, cdf_tol: f64) -> Result<f64> {
    let params = batch.params()?;
    let table = CdfTable::build(&params, cdf_tol)?;
    let xs = sorted(batch.draws.clone());
    let n = xs.len() as f64;
    let d = xs
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = table.eval(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .reduce(|| 0.0, f64::max);
    Ok(d)
}

/// Hill estimate of the tail index from the largest `fraction` of `|draws|`.
pub fn hill_tail_index(draws: &[f64], fraction: f64) -> Result<f64> {
    let mut mags: Vec<f64> = draws.iter().map(|x| x.abs()).collect();
    mags.par_sort_unstable_by(|a, b| b.total_cmp(a));
    let k = (mags.len() as f64 * fraction).floor() as usize;
    if k < 2 || k >= mags.len() {
        return domain(format!("fraction {fraction} leaves no usable order statistics"));
    }
    let threshold = mags[k].ln();
    let mean: f64 = mags[..k].iter().map(|m| m.ln() - threshold).sum::<f64>() / k as f64;
    Ok(1.0 / mean)
}

/// Sample variance of each prefix `draws[..n]`.
pub fn prefix_variances(draws: &[f64], prefixes: &[usize]) -> Vec<f64> {
    prefixes
        .iter()
        .map(|&n| {
            let s = &draws[..n.min(draws.len())];
            let len = s.len() as f64;
            let mean = s.iter().sum::<f64>() / len;
            s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1.0)
        })
        .collect()
}

/// Mean of `sign(draws)`.
pub fn sign_mean(draws: &[f64]) -> f64 {
    draws.iter().map(|x| x.signum()).sum::<f64>() / draws.len() as f64
}
