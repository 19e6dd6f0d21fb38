//! Space-form and model coefficient functions.
//!
//! `sn_κ` solves `y'' + κy = 0` with `y(0) = 0, y'(0) = 1`; `C_{κ,Λ}` solves
//! the same equation with `C(0) = 1, C'(0) = −Λ`. Everything here is closed
//! form, including derivatives, so the radial ODEs never see numerically
//! differentiated coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude the curvature is treated as exactly zero.
pub const KAPPA_ZERO: f64 = 1e-12;

/// Curvature bound `κ`, mean-curvature bound `Λ` and dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kappa: f64,
    pub lambda_mc: f64,
    pub dim: u32,
}

impl ModelParams {
    pub fn new(kappa: f64, lambda_mc: f64, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {dim}")));
        }
        if !kappa.is_finite() || !lambda_mc.is_finite() {
            return Err(Error::Domain(format!(
                "kappa and lambda_mc must be finite, got ({kappa}, {lambda_mc})"
            )));
        }
        Ok(Self {
            kappa,
            lambda_mc,
            dim,
        })
    }

    /// `C_{κ,Λ}(t)`.
    pub fn c(&self, t: f64) -> f64 {
        c_model(self, t)
    }

    /// `C'_{κ,Λ}(t)`.
    pub fn c_prime(&self, t: f64) -> f64 {
        c_model_prime(self, t)
    }

    pub fn z_cutoff(&self) -> ExtendedReal {
        z_cutoff(self)
    }

    pub fn y_cutoff(&self) -> ExtendedReal {
        y_cutoff(self)
    }
}

/// A positive real or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// The value as an `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match *self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Sign {
    Positive(f64),
    Zero,
    Negative(f64),
}

fn classify(kappa: f64) -> Sign {
    if kappa.abs() < KAPPA_ZERO {
        Sign::Zero
    } else if kappa > 0.0 {
        Sign::Positive(kappa.sqrt())
    } else {
        Sign::Negative((-kappa).sqrt())
    }
}

/// `sn_κ(t)`.
pub fn sn(kappa: f64, t: f64) -> f64 {
    match classify(kappa) {
        Sign::Positive(s) => (s * t).sin() / s,
        Sign::Zero => t,
        Sign::Negative(s) => (s * t).sinh() / s,
    }
}

/// `sn_κ'(t)`.
pub fn sn_prime(kappa: f64, t: f64) -> f64 {
    match classify(kappa) {
        Sign::Positive(s) => (s * t).cos(),
        Sign::Zero => 1.0,
        Sign::Negative(s) => (s * t).cosh(),
    }
}

/// `sn_κ''(t) = −κ sn_κ(t)`.
pub fn sn_second(kappa: f64, t: f64) -> f64 {
    match classify(kappa) {
        Sign::Zero => 0.0,
        _ => -kappa * sn(kappa, t),
    }
}

/// `C_{κ,Λ}(t) = sn_κ'(t) − Λ sn_κ(t)`.
pub fn c_model(params: &ModelParams, t: f64) -> f64 {
    match classify(params.kappa) {
        Sign::Zero => 1.0 - params.lambda_mc * t,
        _ => sn_prime(params.kappa, t) - params.lambda_mc * sn(params.kappa, t),
    }
}

/// `C'_{κ,Λ}(t) = −κ sn_κ(t) − Λ sn_κ'(t)`.
pub fn c_model_prime(params: &ModelParams, t: f64) -> f64 {
    match classify(params.kappa) {
        Sign::Zero => -params.lambda_mc,
        _ => -params.kappa * sn(params.kappa, t) - params.lambda_mc * sn_prime(params.kappa, t),
    }
}

/// `T_{κ,Λ}(t) = C'(t) / C(t)`, defined for `t < Z_{κ,Λ}`.
pub fn t_model(params: &ModelParams, t: f64) -> Result<f64> {
    if let Some(z) = z_cutoff(params).finite() {
        if t >= z {
            return Err(Error::Domain(format!(
                "T_{{κ,Λ}} has a pole at Z = {z}; evaluated at t = {t}"
            )));
        }
    }
    Ok(c_model_prime(params, t) / c_model(params, t))
}

/// First positive zero of `C_{κ,Λ}`.
pub fn z_cutoff(params: &ModelParams) -> ExtendedReal {
    let lam = params.lambda_mc;
    match classify(params.kappa) {
        Sign::Zero => {
            if lam > 0.0 {
                ExtendedReal::Finite(1.0 / lam)
            } else {
                ExtendedReal::Infinite
            }
        }
        // cos(st) − (Λ/s) sin(st) = 0  ⇔  st = atan2(s, Λ) ∈ (0, π)
        Sign::Positive(s) => ExtendedReal::Finite(s.atan2(lam) / s),
        // cosh(st) − (Λ/s) sinh(st) = 0  ⇔  tanh(st) = s/Λ
        Sign::Negative(s) => {
            if lam > s {
                ExtendedReal::Finite((s / lam).atanh() / s)
            } else {
                ExtendedReal::Infinite
            }
        }
    }
}

/// First zero of `C'_{κ,Λ}` on `(0, Z_{κ,Λ}]`.
///
/// When `κ = Λ = 0` the derivative vanishes identically and there is no
/// isolated zero; that case is reported as `+∞`.
pub fn y_cutoff(params: &ModelParams) -> ExtendedReal {
    let lam = params.lambda_mc;
    match classify(params.kappa) {
        Sign::Zero => ExtendedReal::Infinite,
        // −s sin(st) − Λ cos(st) = 0  ⇔  tan(st) = −Λ/s; lies before Z only for Λ < 0
        Sign::Positive(s) => {
            if lam < 0.0 {
                ExtendedReal::Finite((-lam / s).atan() / s)
            } else {
                ExtendedReal::Infinite
            }
        }
        // s sinh(st) − Λ cosh(st) = 0  ⇔  tanh(st) = Λ/s
        Sign::Negative(s) => {
            if lam > 0.0 && lam < s {
                ExtendedReal::Finite((lam / s).atanh() / s)
            } else {
                ExtendedReal::Infinite
            }
        }
    }
}

/// `sn_κ(t)^{n−1}`, the volume density of a geodesic ball in `M^n(κ)`.
pub fn weight_ball(kappa: f64, n: u32, t: f64) -> Result<f64> {
    check_ball_domain(kappa, t)?;
    Ok(sn(kappa, t).powi(n as i32 - 1))
}

/// `(n−1) sn_κ'/sn_κ`, the logarithmic derivative of [`weight_ball`].
pub fn weight_ball_log_derivative(kappa: f64, n: u32, t: f64) -> Result<f64> {
    check_ball_domain(kappa, t)?;
    Ok((n - 1) as f64 * sn_prime(kappa, t) / sn(kappa, t))
}

/// `(log sn_κ^{n−1})'' = −(n−1)(κ + (sn'/sn)²)`.
pub fn weight_ball_log_second_derivative(kappa: f64, n: u32, t: f64) -> Result<f64> {
    check_ball_domain(kappa, t)?;
    let ratio = sn_prime(kappa, t) / sn(kappa, t);
    Ok(-((n - 1) as f64) * (kappa + ratio * ratio))
}

fn check_ball_domain(kappa: f64, t: f64) -> Result<()> {
    if t < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {t}")));
    }
    if kappa >= KAPPA_ZERO {
        let limit = std::f64::consts::PI / kappa.sqrt();
        if t > limit {
            return Err(Error::Domain(format!(
                "t = {t} is past the first zero π/√κ = {limit} of sn_κ"
            )));
        }
    }
    Ok(())
}

/// `C_{κ,Λ}(t)^{n−1}`, the density of the inradius model.
pub fn weight_model(params: &ModelParams, t: f64) -> Result<f64> {
    check_model_domain(params, t)?;
    let c = c_model(params, t);
    // At t = Z the base may round to a tiny negative number.
    Ok(c.max(0.0).powi(params.dim as i32 - 1))
}

/// `(n−1) T_{κ,Λ}`, the logarithmic derivative of [`weight_model`].
pub fn weight_model_log_derivative(params: &ModelParams, t: f64) -> Result<f64> {
    check_model_domain(params, t)?;
    Ok((params.dim - 1) as f64 * c_model_prime(params, t) / c_model(params, t))
}

/// `(log C^{n−1})'' = −(n−1)(κ + T²)`.
pub fn weight_model_log_second_derivative(params: &ModelParams, t: f64) -> Result<f64> {
    check_model_domain(params, t)?;
    let ratio = c_model_prime(params, t) / c_model(params, t);
    Ok(-((params.dim - 1) as f64) * (params.kappa + ratio * ratio))
}

fn check_model_domain(params: &ModelParams, t: f64) -> Result<()> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be >= 0, got {t}")));
    }
    if let Some(z) = z_cutoff(params).finite() {
        if t > z * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "t = {t} is past the zero Z = {z} of C_{{κ,Λ}}"
            )));
        }
    }
    Ok(())
}

/// A positive density on an interval with its logarithmic derivatives.
pub trait WeightFn {
    fn value(&self, t: f64) -> Result<f64>;

    /// `w'/w`.
    fn log_derivative(&self, t: f64) -> Result<f64>;

    /// `(log w)''` when a closed form exists.
    fn log_second_derivative(&self, _t: f64) -> Option<Result<f64>> {
        None
    }
}

/// Adapts a bare closure `t ↦ w(t)`; derivatives fall back to central differences.
pub struct FnWeight<F>(pub F);

impl<F: Fn(f64) -> f64> WeightFn for FnWeight<F> {
    fn value(&self, t: f64) -> Result<f64> {
        Ok((self.0)(t))
    }

    fn log_derivative(&self, t: f64) -> Result<f64> {
        let h = 1e-6 * t.abs().max(1.0);
        Ok(((self.0)(t + h).ln() - (self.0)(t - h).ln()) / (2.0 * h))
    }
}

/// Largest value of `(log w)''` over the interior nodes of an `m`-cell grid on
/// `[a, b]`. A negative result certifies strict log-concavity on that grid.
pub fn log_concavity_margin<W: WeightFn + ?Sized>(w: &W, a: f64, b: f64, m: usize) -> Result<f64> {
    if m < 2 || !(b > a) {
        return Err(Error::Domain(format!(
            "need a < b and m >= 2, got [{a}, {b}], m = {m}"
        )));
    }
    let h = (b - a) / m as f64;
    let node = |j: usize| a + h * j as f64;
    let log_w = |t: f64| -> Result<f64> {
        let v = w.value(t)?;
        if !(v > 0.0) {
            return Err(Error::Domain(format!("weight is {v} <= 0 at t = {t}")));
        }
        Ok(v.ln())
    };
    let mut worst = f64::NEG_INFINITY;
    for j in 1..m {
        let t = node(j);
        let second = match w.log_second_derivative(t) {
            Some(exact) => {
                log_w(t)?;
                exact?
            }
            None => (log_w(node(j + 1))? - 2.0 * log_w(t)? + log_w(node(j - 1))?) / (h * h),
        };
        worst = worst.max(second);
    }
    Ok(worst)
}
