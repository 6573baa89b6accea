//! Fixed-order Gauss–Legendre rules and simple adaptive drivers.

use std::f64::consts::PI;
use std::sync::OnceLock;

const ORDER: usize = 31;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=ORDER {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// 31-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    gauss_legendre_abs(f, a, b).0
}

/// The rule applied to `f` and to `|f|`.
fn gauss_legendre_abs<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let r = rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (mut s, mut sa) = (0.0, 0.0);
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        let v = w * f(c + h * x);
        s += v;
        sa += v.abs();
    }
    (s * h, sa * h.abs())
}

/// Recursive halving until the rule on the interval agrees with the rule on
/// its two halves, or the disagreement is at rounding level. Returns
/// `(value, error estimate)`.
pub fn adaptive<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let whole = gauss_legendre(f, a, b);
    adapt_rec(f, a, b, whole, tol, 0)
}

const MAX_DEPTH: u32 = 30;

fn adapt_rec<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (left, la) = gauss_legendre_abs(f, a, m);
    let (right, ra) = gauss_legendre_abs(f, m, b);
    let halves = left + right;
    let diff = (halves - whole).abs();
    let noise = 64.0 * f64::EPSILON * (la + ra);
    if diff <= tol.max(noise) || depth >= MAX_DEPTH || m <= a || m >= b {
        return (halves, diff);
    }
    let (l, el) = adapt_rec(f, a, m, left, 0.5 * tol, depth + 1);
    let (r, er) = adapt_rec(f, m, b, right, 0.5 * tol, depth + 1);
    (l + r, el + er)
}

/// Integral over `[0, h]` of a function behaving like `p^beta` (`beta > −1`)
/// at the origin, using geometrically graded intervals `[h/2^{k+1}, h/2^k]`.
pub fn graded_from_zero<F: FnMut(f64) -> f64>(f: &mut F, h: f64, beta: f64, tol: f64) -> (f64, f64) {
    let q = 0.5f64.powf(beta + 1.0);
    let mut hi = h;
    let (mut total, mut err) = (0.0, 0.0);
    for k in 0..1000 {
        let lo = 0.5 * hi;
        let (v, e) = adaptive(f, lo, hi, 0.01 * tol);
        total += v;
        err += e;
        let rem = v.abs() * q / (1.0 - q);
        if k >= 3 && rem < 0.01 * tol {
            err += rem;
            break;
        }
        hi = lo;
        if hi < f64::MIN_POSITIVE {
            break;
        }
    }
    (total, err)
}

/// Integral over `[a, ∞)` of a function decaying at least exponentially past
/// `a + scale`, by consecutive intervals of width `scale` until the
/// contributions are negligible.
pub fn to_infinity<F: FnMut(f64) -> f64>(f: &mut F, a: f64, scale: f64, tol: f64) -> (f64, f64) {
    let (mut total, mut err) = (0.0, 0.0);
    let mut lo = a;
    let mut width = scale;
    let mut small = 0;
    for _ in 0..10_000 {
        let (v, e) = adaptive(f, lo, lo + width, 0.01 * tol);
        total += v;
        err += e;
        lo += width;
        width *= 1.25;
        if v.abs() < 1e-3 * tol {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (total, err)
}
