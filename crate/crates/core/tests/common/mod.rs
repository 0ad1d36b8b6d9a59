//! Reference implementations written independently of the library code.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Rotating-frame acceleration written out component by component.
pub fn rotating_accel(b: f64, omega: f64, s: &[f64; 6]) -> [f64; 3] {
    let xl = b / (1.0 + b);
    let xh = xl - 1.0;
    let [x, y, z, vx, vy, _] = *s;
    let d1 = ((x - xl).powi(2) + y * y + z * z).powf(1.5);
    let d2 = ((x - xh).powi(2) + y * y + z * z).powf(1.5);
    [
        -(x - xl) / d1 - b * (x - xh) / d2 + 2.0 * omega * vy + omega * omega * x,
        -y / d1 - b * y / d2 - 2.0 * omega * vx + omega * omega * y,
        -z / d1 - b * z / d2,
    ]
}

fn deriv(b: f64, omega: f64, s: &[f64; 6]) -> [f64; 6] {
    let a = rotating_accel(b, omega, s);
    [s[3], s[4], s[5], a[0], a[1], a[2]]
}

/// Classical fixed-step RK4 over `steps` equal steps.
pub fn rk4(b: f64, omega: f64, s0: [f64; 6], t_end: f64, steps: usize) -> [f64; 6] {
    let h = t_end / steps as f64;
    let mut s = s0;
    let add = |s: &[f64; 6], k: &[f64; 6], c: f64| {
        let mut o = *s;
        for i in 0..6 {
            o[i] += c * k[i];
        }
        o
    };
    for _ in 0..steps {
        let k1 = deriv(b, omega, &s);
        let k2 = deriv(b, omega, &add(&s, &k1, 0.5 * h));
        let k3 = deriv(b, omega, &add(&s, &k2, 0.5 * h));
        let k4 = deriv(b, omega, &add(&s, &k3, h));
        for i in 0..6 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    s
}

/// Axial force balance `w/r1^3 - b(1-w)/r2^3`.
pub fn axial_force(w: f64, b: f64, v: f64) -> f64 {
    w / (w * w + v * v).powf(1.5) - b * (1.0 - w) / ((1.0 - w).powi(2) + v * v).powf(1.5)
}

/// Every sign change of the axial force on a uniform-in-log scan of
/// `[1e-6, 10]`, each refined by plain bisection.
pub fn scan_roots(w: f64, b: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (1e-6f64, 10.0f64);
    let at = |i: usize| lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
    let mut roots = Vec::new();
    let mut prev = axial_force(w, b, at(0));
    for i in 1..n {
        let cur = axial_force(w, b, at(i));
        if prev.signum() != cur.signum() {
            let (mut a, mut c) = (at(i - 1), at(i));
            for _ in 0..200 {
                let m = 0.5 * (a + c);
                if axial_force(w, b, m).signum() == axial_force(w, b, a).signum() {
                    a = m;
                } else {
                    c = m;
                }
            }
            roots.push(0.5 * (a + c));
        }
        prev = cur;
    }
    roots
}

pub fn potential(w: f64, v: f64, b: f64, m: f64) -> f64 {
    -1.0 / (w * w + v * v).sqrt() - b / ((1.0 - w).powi(2) + v * v).sqrt() + m * m / (2.0 * v * v)
}

/// `(dU/dw, dU/dv)` differentiated by hand.
pub fn potential_grad(w: f64, v: f64, b: f64, m: f64) -> [f64; 2] {
    let r1 = (w * w + v * v).sqrt();
    let r2 = ((1.0 - w).powi(2) + v * v).sqrt();
    [w / r1.powi(3) - b * (1.0 - w) / r2.powi(3), v / r1.powi(3) + b * v / r2.powi(3) - m * m / v.powi(3)]
}

/// Hessian `[uww, uwv, uvv]` by central differences of the gradient, which
/// keeps the rounding error near `eps / h` instead of `eps / h^2`.
pub fn fd_hessian(w: f64, v: f64, b: f64, m: f64, h: f64) -> [f64; 3] {
    let g = |a: f64, c: f64| potential_grad(a, c, b, m);
    let (wp, wm) = (g(w + h, v), g(w - h, v));
    let (vp, vm) = (g(w, v + h), g(w, v - h));
    let uww = (wp[0] - wm[0]) / (2.0 * h);
    let uvv = (vp[1] - vm[1]) / (2.0 * h);
    let uwv = 0.5 * ((wp[1] - wm[1]) + (vp[0] - vm[0])) / (2.0 * h);
    [uww, uwv, uvv]
}

/// Eigenvalues of a symmetric 2x2 matrix, larger first.
pub fn eig2(h: [f64; 3]) -> (f64, f64) {
    let mean = 0.5 * (h[0] + h[2]);
    let rad = (0.25 * (h[0] - h[2]).powi(2) + h[1] * h[1]).sqrt();
    (mean + rad, mean - rad)
}

/// Equilibrium orbit `(v0, f_p)` from the scan oracle and the radial balance.
pub fn oracle_orbit(w: f64, b: f64) -> Option<(f64, f64)> {
    let roots = scan_roots(w, b, 20_000);
    let v0 = *roots.first()?;
    let r1 = (w * w + v0 * v0).sqrt();
    let r2 = ((1.0 - w).powi(2) + v0 * v0).sqrt();
    let fp = (1.0 / r1.powi(3) + b / r2.powi(3)).sqrt();
    Some((v0, fp))
}

/// Stability of the equilibrium at `(w, b)` judged from a finite-difference
/// Hessian of the effective potential.
pub fn oracle_stable(w: f64, b: f64) -> Option<bool> {
    let (v0, fp) = oracle_orbit(w, b)?;
    let h = fd_hessian(w, v0, b, fp * v0 * v0, 1e-5 * v0.min(w).min(1.0 - w));
    let (_, lo) = eig2(h);
    Some(lo > 0.0)
}

pub fn stellar_period(b: f64) -> f64 {
    2.0 * PI / (1.0 + b).sqrt()
}
