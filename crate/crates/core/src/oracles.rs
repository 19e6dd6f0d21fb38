//! Closed-form and transcendental reference values for `p = 2` and the
//! Dirichlet limit, used by the `table` command and the acceptance matrix.

use std::f64::consts::PI;

/// `π_p = 2π / (p sin(π/p))`.
pub fn pi_p(p: f64) -> f64 {
    2.0 * PI / (p * (PI / p).sin())
}

/// First eigenvalue on `[0, R]` with Dirichlet at one end and Neumann at the
/// other: `(p−1)(π_p/(2R))^p`. This is the `α → ∞` limit of the Robin problem.
pub fn dirichlet_neumann_limit(r: f64, p: f64) -> f64 {
    (p - 1.0) * (pi_p(p) / (2.0 * r)).powf(p)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `p = 2`, `w ≡ 1` on `[0, R]` with Robin at one end: `k tan(kR) = α` for
/// `α > 0` (λ = k²) and `k tanh(kR) = −α` for `α < 0` (λ = −k²).
pub fn interval_robin(r: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    if alpha > 0.0 {
        let k = bisect(0.0, PI / (2.0 * r) * (1.0 - 1e-15), |k| k * (k * r).tan() - alpha);
        k * k
    } else {
        let a = -alpha;
        // k tanh(kR) lies between k − 1/R and k for large k
        let k = bisect(0.0, a + 1.0 / r + 1.0, |k| k * (k * r).tanh() - a);
        -k * k
    }
}

fn bessel_series(order: u32, x: f64, sign: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= sign * half * half / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Bessel `J_0`, `J_1` by power series (adequate for `|x| ≲ 20`).
pub fn bessel_j(order: u32, x: f64) -> f64 {
    bessel_series(order, x, -1.0)
}

/// Modified Bessel `I_0`, `I_1` by power series.
pub fn bessel_i(order: u32, x: f64) -> f64 {
    bessel_series(order, x, 1.0)
}

/// `p = 2` Robin eigenvalue of the Euclidean disk of radius `R`:
/// `k J_1(kR)/J_0(kR) = α` (α > 0) or `k I_1(kR)/I_0(kR) = −α` (α < 0).
pub fn disk_robin(r: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    if alpha > 0.0 {
        // first zero of J_0
        let j0 = bisect(2.0, 3.0, |x| bessel_j(0, x)) / r;
        let k = bisect(0.0, j0 * (1.0 - 1e-14), |k| {
            k * bessel_j(1, k * r) / bessel_j(0, k * r) - alpha
        });
        k * k
    } else {
        let a = -alpha;
        let k = bisect(0.0, a + 1.0 / r + 1.0, |k| {
            k * bessel_i(1, k * r) / bessel_i(0, k * r) - a
        });
        -k * k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((interval_robin(1.0, 1.0) - 0.7401738843949228).abs() < 1e-13);
        assert!((interval_robin(1.0, -1.0) + 1.439228839890645).abs() < 1e-12);
        assert!((disk_robin(1.0, 1.0) - 1.5769927308086125).abs() < 1e-12);
        assert!((dirichlet_neumann_limit(1.0, 2.0) - PI * PI / 4.0).abs() < 1e-14);
        assert!((pi_p(2.0) - PI).abs() < 1e-15);
    }
}
