use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Shooting,
    Rayleigh,
}

/// Solver bookkeeping attached to an [`EigenSolution`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Bisection steps (shooting) or descent iterations on the finest level (Rayleigh).
    pub iterations: usize,
    /// Final bracket `[lo, hi]` of the shooting solve.
    pub bracket: Option<(f64, f64)>,
    /// Factor `c` such that `∫ |c φ|^p w = 1` (trapezoid rule on the returned grid).
    pub lp_scale: f64,
    pub converged: bool,
    /// Rayleigh quotient after every accepted descent step on the finest level.
    pub quotient_history: Vec<f64>,
}

/// First eigenpair estimate.
///
/// `phi` is normalized to `max φ = 1` and `psi = |φ'|^{p−2} φ'` is the
/// momentum in the increasing-`t` direction, scaled consistently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// Boundary mismatch (shooting) or final gradient norm (Rayleigh).
    pub residual: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl EigenSolution {
    /// Value of the eigenfunction nearest to `t` (grid lookup).
    pub fn phi_at(&self, t: f64) -> f64 {
        let idx = self.grid.partition_point(|&x| x < t);
        let idx = match idx {
            0 => 0,
            i if i >= self.grid.len() => self.grid.len() - 1,
            i if (self.grid[i] - t).abs() < (t - self.grid[i - 1]).abs() => i,
            i => i - 1,
        };
        self.phi[idx]
    }
}
