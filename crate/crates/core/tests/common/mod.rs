//! Reference values computed without the library.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// First Robin eigenvalue of `−u'' = λu` on `[0, R]`, Robin at 0, Neumann at `R`.
pub fn interval_eigenvalue(r: f64, alpha: f64) -> f64 {
    if alpha > 0.0 {
        let x = bisect(1e-300, PI / (2.0 * r) * (1.0 - 1e-15), |x| x * (x * r).tan() - alpha);
        x * x
    } else {
        let mut hi = 1.0;
        while hi * (hi * r).tanh() < -alpha {
            hi *= 2.0;
        }
        let mu = bisect(0.0, hi, |m| m * (m * r).tanh() + alpha);
        -mu * mu
    }
}

fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `J_n(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    simpson(0.0, PI, 2000, |t| (n as f64 * t - x * t.sin()).cos()) / PI
}

/// First Robin eigenvalue of the unit-radius-`r` disk at `p = 2`:
/// `k J₁(kR) = α J₀(kR)`, `λ = k²` (α > 0).
pub fn disk_eigenvalue(r: f64, alpha: f64) -> f64 {
    let k = bisect(1e-12, 2.404 / r, |k| k * bessel_j(1, k * r) - alpha * bessel_j(0, k * r));
    k * k
}

/// `π_p = 2 ∫₀¹ (1 − s^p)^{−1/p} ds`, with `s = 1 − v^12` removing the endpoint singularity.
pub fn pi_p(p: f64) -> f64 {
    let m = 12.0;
    let g = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        // 1 − s^p without cancellation
        let one_minus = -(p * (-v.powf(m)).ln_1p()).exp_m1();
        m * v.powf(m - 1.0) * one_minus.powf(-1.0 / p)
    };
    2.0 * simpson(0.0, 1.0, 20000, g)
}

/// `(p − 1)(π_p / 2R)^p`.
pub fn dirichlet_neumann(r: f64, p: f64) -> f64 {
    (p - 1.0) * (pi_p(p) / (2.0 * r)).powf(p)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
