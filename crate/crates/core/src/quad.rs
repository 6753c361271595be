//! Quadrature helpers: composite Gauss–Legendre and the trapezoid rule.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre rule over consecutive panels `[b_i, b_{i+1}]`.
pub struct Composite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Composite {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Composite { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> f64 {
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let s: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, wt)| wt * f(mid + half * x))
                .sum();
            total += half * s;
        }
        total
    }
}

/// Breakpoints that grade geometrically from `a` (ratio `q`) until the panel width
/// reaches `h_max`, then continue uniformly to `b`.
pub fn graded_breaks(a: f64, b: f64, h0: f64, q: f64, h_max: f64) -> Vec<f64> {
    let mut out = vec![a];
    let mut x = a;
    let mut h = h0;
    while x < b {
        x = (x + h).min(b);
        out.push(x);
        h = (h * q).min(h_max);
    }
    out
}

/// Trapezoid rule on arbitrary (sorted) samples.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}
