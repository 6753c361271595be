//! Independent reference implementations used only by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::renorm(s, e + self.lo + o.lo)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::new(-q2)));
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2).add(Dd::new(q3))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Kummer's `M(a, b, z)` summed in double-double arithmetic.
pub fn kummer_m_dd(a: f64, b: f64, z: f64) -> f64 {
    let (a, b, z) = (Dd::new(a), Dd::new(b), Dd::new(z));
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    for k in 0..2000 {
        let kd = Dd::new(k as f64);
        term = term.mul(a.add(kd)).mul(z).div(b.add(kd).mul(Dd::new(k as f64 + 1.0)));
        sum = sum.add(term);
        if term.hi == 0.0 || (term.hi.abs() < 1e-34 * sum.hi.abs() && k as f64 > z.hi) {
            break;
        }
    }
    sum.to_f64()
}

/// Gamma function by upward shift and the Stirling series; reflection below 1/2.
pub fn gamma_oracle(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_oracle(1.0 - x));
    }
    let mut shift = 1.0;
    let mut y = x;
    while y < 20.0 {
        shift *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    let ln = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series;
    ln.exp() / shift
}

/// Generalised Laguerre polynomial by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Closed-form spherical Bessel and Neumann functions for `l ≤ 2`.
pub fn jn_closed(l: usize, x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    match l {
        0 => (s / x, -c / x),
        1 => (s / (x * x) - c / x, -c / (x * x) - s / x),
        2 => {
            let x2 = x * x;
            ((3.0 / x2 - 1.0) * s / x - 3.0 * c / x2, (-3.0 / x2 + 1.0) * c / x - 3.0 * s / x2)
        }
        _ => panic!("closed forms only up to l = 2"),
    }
}

/// `tan δ_l` of the step well from an RK4 integration of the free radial equation with a
/// step boundary on the well edge, read off at two points outside the well.
pub fn oracle_tan_delta(l: usize, depth: f64, range: f64, e: f64) -> f64 {
    let n_in = 8000;
    let k = (2.0 * e).sqrt();
    let ll = (l * (l + 1)) as f64;
    let rhs = |r: f64, v: f64, y: [f64; 2]| [y[1], (ll / (r * r) + 2.0 * v - 2.0 * e) * y[0]];
    let step = |r: f64, h: f64, v: f64, y: [f64; 2]| {
        let k1 = rhs(r, v, y);
        let k2 = rhs(r + 0.5 * h, v, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(r + 0.5 * h, v, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(r + h, v, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    // start off the origin on the regular series
    let q2 = 2.0 * (e + depth);
    let c = q2 / (2.0 * (2 * l + 3) as f64);
    let r0 = 1e-3 * range;
    let p = l as i32 + 1;
    let mut y = [r0.powi(p) * (1.0 - c * r0 * r0), r0.powi(p - 1) * (p as f64 - (p as f64 + 2.0) * c * r0 * r0)];
    let h = (range - r0) / n_in as f64;
    for i in 0..n_in {
        y = step(r0 + i as f64 * h, h, -depth, y);
    }
    let h_out = range / n_in as f64;
    let n_out = ((2.0 * std::f64::consts::PI / k + 1.0) / h_out).ceil() as usize;
    let mut samples = Vec::with_capacity(n_out + 1);
    samples.push((range, y[0]));
    for i in 0..n_out {
        y = step(range + i as f64 * h_out, h_out, 0.0, y);
        samples.push((range + (i + 1) as f64 * h_out, y[0]));
    }
    let (r1, u1) = samples[samples.len() - 1 - n_out / 4];
    let (r2, u2) = samples[samples.len() - 1];
    let (j1, y1) = jn_closed(l, k * r1);
    let (j2, y2) = jn_closed(l, k * r2);
    let (g1, g2) = (u1 / r1, u2 / r2);
    (g1 * j2 - g2 * j1) / (g1 * y2 - g2 * y1)
}

fn rk4_run(ll: f64, e: f64, v: f64, mut r: f64, h: f64, n: usize, mut y: [f64; 2]) -> [f64; 2] {
    let rhs = |r: f64, y: [f64; 2]| [y[1], (ll / (r * r) + r * r + 2.0 * v - 2.0 * e) * y[0]];
    for _ in 0..n {
        let k1 = rhs(r, y);
        let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        r += h;
    }
    y
}

/// Scale-free Wronskian mismatch at the well edge of the trapped step well, from RK4
/// integrations started at the origin and far outside.
pub fn oracle_trap_mismatch(l: usize, depth: f64, range: f64, e: f64) -> f64 {
    let ll = (l * (l + 1)) as f64;
    let p = l as i32 + 1;
    let c = 2.0 * (e + depth) / (2.0 * (2 * l + 3) as f64);
    let r0 = 1e-3 * range;
    let seed = [r0.powi(p) * (1.0 - c * r0 * r0), r0.powi(p - 1) * (p as f64 - (p as f64 + 2.0) * c * r0 * r0)];
    let n_in = 8000;
    let inner = rk4_run(ll, e, -depth, r0, (range - r0) / n_in as f64, n_in, seed);

    let r_far = 9.0f64.max((2.0 * e.max(0.0)).sqrt() + 6.0);
    let power = e - 0.5;
    let n_out = ((r_far - range) / 5e-4).ceil() as usize;
    let outer = rk4_run(ll, e, 0.0, r_far, -(r_far - range) / n_out as f64, n_out, [1.0, -r_far + power / r_far]);
    let (a, b) = (inner[1] * outer[0], inner[0] * outer[1]);
    (a - b) / (a.abs() + b.abs())
}

/// Root of [`oracle_trap_mismatch`] bracketed in `[lo, hi]`.
pub fn oracle_trap_level(l: usize, depth: f64, range: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |e| oracle_trap_mismatch(l, depth, range, e);
    let mut flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change in [{lo}, {hi}]");
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm * flo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}
