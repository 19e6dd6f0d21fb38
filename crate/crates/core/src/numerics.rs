//! Small shared numerical helpers.

/// Three-point derivative on a possibly non-uniform grid, second order at
/// interior nodes and one-sided second order at the two ends.
pub fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert_eq!(n, y.len());
    assert!(n >= 3, "need at least three samples");
    let three_point = |i0: usize, at: usize| {
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let xt = x[at];
        // derivative of the Lagrange interpolant through (x0, x1, x2) at xt
        let l0 = (2.0 * xt - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (2.0 * xt - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (2.0 * xt - x0 - x1) / ((x2 - x0) * (x2 - x1));
        l0 * y[i0] + l1 * y[i0 + 1] + l2 * y[i0 + 2]
    };
    (0..n)
        .map(|i| match i {
            0 => three_point(0, 0),
            i if i == n - 1 => three_point(n - 3, n - 1),
            i => three_point(i - 1, i),
        })
        .collect()
}

/// Trapezoid rule for samples `y` on nodes `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Uniform grid with `m` cells on `[a, b]`; the last node is exactly `b`.
pub fn uniform_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let h = (b - a) / m as f64;
    (0..=m).map(|j| if j == m { b } else { a + h * j as f64 }).collect()
}

/// Piecewise-linear interpolation of `(x, y)` at `t`, clamped to the ends.
pub fn interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    let i = x.partition_point(|&v| v <= t);
    if i == 0 {
        return y[0];
    }
    if i >= x.len() {
        return y[x.len() - 1];
    }
    let s = (t - x[i - 1]) / (x[i] - x[i - 1]);
    y[i - 1] + s * (y[i] - y[i - 1])
}

/// Fourth-order finite differences on a uniform grid: five-point central
/// stencil inside, five-point one-sided stencils on the two outer nodes at
/// each end. Needs at least five samples.
pub fn derivative4(h: f64, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 5, "derivative4 needs at least five samples");
    let c = 1.0 / (12.0 * h);
    let forward = |y: &[f64], s: f64| {
        [
            s * c * (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]),
            s * c * (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]),
        ]
    };
    let mut out = vec![0.0; n];
    for j in 2..n - 2 {
        out[j] = c * (-y[j + 2] + 8.0 * y[j + 1] - 8.0 * y[j - 1] + y[j - 2]);
    }
    let [d0, d1] = forward(&y[..5], 1.0);
    out[0] = d0;
    out[1] = d1;
    let tail: Vec<f64> = y[n - 5..].iter().rev().cloned().collect();
    let [e0, e1] = forward(&tail, -1.0);
    out[n - 1] = e0;
    out[n - 2] = e1;
    out
}

/// `x` with 12 significant digits in scientific notation (`NaN`/`inf` as
/// `NaN`, `inf`, `-inf`).
pub fn format_sig(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_differences_are_exact_on_quartics() {
        let h = 0.1;
        let x: Vec<f64> = (0..11).map(|j| j as f64 * h).collect();
        let y: Vec<f64> = x.iter().map(|t| t.powi(4) - 2.0 * t * t + t).collect();
        let d = derivative4(h, &y);
        for (t, v) in x.iter().zip(&d) {
            assert!((v - (4.0 * t.powi(3) - 4.0 * t + 1.0)).abs() < 1e-12, "{t}: {v}");
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.740173884394922), "7.40173884395e-1");
        assert_eq!(format_sig(-2.0), "-2.00000000000e0");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(0.740173884394922).parse::<f64>().unwrap(), 0.740173884395);
    }

    #[test]
    fn derivative_is_exact_for_quadratics_on_uneven_grids() {
        let x = [0.0, 1e-6, 0.1, 0.25, 0.3, 0.7, 1.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        for (d, t) in derivative(&x, &y).iter().zip(x) {
            assert!((d - (6.0 * t - 1.0)).abs() < 1e-8, "{d} at {t}");
        }
    }

    #[test]
    fn trapezoid_linear_is_exact() {
        let x = uniform_grid(0.0, 2.0, 7);
        let y: Vec<f64> = x.iter().map(|t| 1.0 + t).collect();
        assert!((trapezoid(&x, &y) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_clamps() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 2.0, 0.0];
        assert_eq!(interpolate(&x, &y, -1.0), 0.0);
        assert_eq!(interpolate(&x, &y, 0.5), 1.0);
        assert_eq!(interpolate(&x, &y, 1.5), 1.0);
        assert_eq!(interpolate(&x, &y, 3.0), 0.0);
    }
}
