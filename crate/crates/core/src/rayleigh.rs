//! Direct minimization of the discrete Rayleigh quotient.
//!
//! Trial functions are piecewise linear on a uniform grid. The energy is
//!
//! ```text
//! E(u) = Σ_cells |Δu/h|^p w_mid h + Σ_robin α_j |u_j|^p,      N(u) = Σ_nodes ω_j |u_j|^p
//! ```
//!
//! where `ω_j` are trapezoid weights with `w` folded in and the Robin
//! coefficient at an endpoint already carries the boundary weight `w(end)`.

use crate::error::{Error, Result};
use crate::numerics;
use crate::problems::{BoundaryCondition, Endpoint, SturmProblem};
use crate::shoot::momentum;
use crate::solution::{Diagnostics, EigenSolution, Method};

pub const MIN_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunctional {
    pub grid: Vec<f64>,
    pub node_weights: Vec<f64>,
    pub mid_weights: Vec<f64>,
    pub p: f64,
    /// `(node, α·w(node))` for every Robin endpoint.
    pub robin_terms: Vec<(usize, f64)>,
    /// Nodes pinned to zero by a Dirichlet condition.
    pub fixed: Vec<usize>,
}

impl DiscreteFunctional {
    pub fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    fn h(&self) -> f64 {
        (self.grid[self.cells()] - self.grid[0]) / self.cells() as f64
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        let h = self.h();
        let p = self.p;
        let cells: f64 = u
            .windows(2)
            .zip(&self.mid_weights)
            .map(|(pair, w)| ((pair[1] - pair[0]) / h).abs().powf(p) * w * h)
            .sum();
        let robin: f64 = self.robin_terms.iter().map(|&(j, a)| a * u[j].abs().powf(p)).sum();
        cells + robin
    }

    pub fn constraint(&self, u: &[f64]) -> f64 {
        u.iter()
            .zip(&self.node_weights)
            .map(|(v, w)| w * v.abs().powf(self.p))
            .sum()
    }

    fn energy_gradient(&self, u: &[f64], out: &mut [f64]) {
        let h = self.h();
        let p = self.p;
        out.iter_mut().for_each(|g| *g = 0.0);
        for (c, w) in self.mid_weights.iter().enumerate() {
            let flux = p * momentum((u[c + 1] - u[c]) / h, p) * w;
            out[c + 1] += flux;
            out[c] -= flux;
        }
        for &(j, a) in &self.robin_terms {
            out[j] += p * a * momentum(u[j], p);
        }
    }

    fn constraint_gradient(&self, u: &[f64], out: &mut [f64]) {
        for ((g, v), w) in out.iter_mut().zip(u).zip(&self.node_weights) {
            *g = self.p * w * momentum(*v, self.p);
        }
    }

    /// Lumped mass `(h/2)(w_{j−½} + w_{j+½})`; positive even at a singular node.
    fn lumped_mass(&self) -> Vec<f64> {
        let h = self.h();
        let n = self.grid.len();
        (0..n)
            .map(|j| {
                let left = if j > 0 { self.mid_weights[j - 1] } else { 0.0 };
                let right = if j + 1 < n { self.mid_weights[j] } else { 0.0 };
                0.5 * h * (left + right)
            })
            .collect()
    }

    /// Diagonal metric for the descent direction: the diagonal of the Hessian
    /// of `E − Q N` with absolute values, slopes floored at `δ` so the
    /// `|Δu/h|^{p−2}` factor stays finite for `p < 2`.
    fn metric(&self, u: &[f64], q: f64, mass: &[f64], out: &mut [f64]) {
        let h = self.h();
        let p = self.p;
        let length = self.grid[self.cells()] - self.grid[0];
        let slopes = u.windows(2).map(|c| ((c[1] - c[0]) / h).abs());
        let max_slope = slopes.clone().fold(0.0, f64::max);
        let scale = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let delta = (1e-6 * max_slope).max(1e-9 * scale / length).max(f64::MIN_POSITIVE);
        let shift = p * q.abs().max(length.powf(-p));
        for (j, m) in mass.iter().enumerate() {
            out[j] = shift * m;
        }
        for (c, (s, w)) in slopes.zip(&self.mid_weights).enumerate() {
            let k = p * (p - 1.0) * w * s.max(delta).powf(p - 2.0) / h;
            out[c] += k;
            out[c + 1] += k;
        }
        for &(j, a) in &self.robin_terms {
            let v = u[j].abs().max(1e-9 * scale).max(f64::MIN_POSITIVE);
            out[j] += p * (p - 1.0) * a.abs() * v.powf(p - 2.0);
        }
    }

    fn free_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.grid.len()];
        for &j in &self.fixed {
            mask[j] = false;
        }
        mask
    }
}

/// Builds the piecewise-linear functional on `m` uniform cells.
pub fn discretize(problem: &SturmProblem, m: usize) -> Result<DiscreteFunctional> {
    if m < MIN_NODES {
        return Err(Error::Domain(format!("need at least {MIN_NODES} cells, got {m}")));
    }
    let grid = numerics::uniform_grid(problem.a(), problem.b(), m);
    let h = problem.length() / m as f64;
    let w_nodes: Vec<f64> = grid.iter().map(|&t| problem.weight_at(t)).collect::<Result<_>>()?;
    let mid_weights: Vec<f64> = grid
        .windows(2)
        .map(|c| problem.weight_at(0.5 * (c[0] + c[1])))
        .collect::<Result<_>>()?;
    if let Some(w) = w_nodes.iter().chain(&mid_weights).find(|w| !(**w >= 0.0)) {
        return Err(Error::Domain(format!("weight {w} at a quadrature point")));
    }
    let node_weights: Vec<f64> = w_nodes
        .iter()
        .enumerate()
        .map(|(j, w)| if j == 0 || j == m { 0.5 * h * w } else { h * w })
        .collect();

    let mut robin_terms = Vec::new();
    let mut fixed = Vec::new();
    for (end, node) in [(Endpoint::Left, 0), (Endpoint::Right, m)] {
        match problem.bc(end) {
            BoundaryCondition::Robin { alpha } => robin_terms.push((node, alpha * w_nodes[node])),
            BoundaryCondition::Dirichlet => fixed.push(node),
            BoundaryCondition::Neumann => {}
        }
    }
    Ok(DiscreteFunctional {
        grid,
        node_weights,
        mid_weights,
        p: problem.p(),
        robin_terms,
        fixed,
    })
}

/// `E(u)/N(u)`; Dirichlet nodes of `u` are ignored.
pub fn quotient(functional: &DiscreteFunctional, u: &[f64]) -> Result<f64> {
    if u.len() != functional.grid.len() {
        return Err(Error::Domain(format!(
            "expected {} samples, got {}",
            functional.grid.len(),
            u.len()
        )));
    }
    let mut v = u.to_vec();
    for &j in &functional.fixed {
        v[j] = 0.0;
    }
    let n = functional.constraint(&v);
    if !(n > 0.0) {
        return Err(Error::Domain("constraint N(u) vanishes".into()));
    }
    Ok(functional.energy(&v) / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighConfig {
    pub max_iterations: usize,
    pub stall_window: usize,
    /// Relative quotient decrease over `stall_window` iterations that ends the descent.
    pub stall_tol: f64,
    pub armijo: f64,
    /// Coarsest grid of the nested solve in [`solve`].
    pub coarsest: usize,
}

impl Default for RayleighConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200_000,
            stall_window: 50,
            stall_tol: 1e-12,
            armijo: 1e-4,
            coarsest: 32,
        }
    }
}

fn normalize(functional: &DiscreteFunctional, u: &mut [f64]) {
    let scale = functional.constraint(u).powf(-1.0 / functional.p);
    u.iter_mut().for_each(|v| *v *= scale);
}

/// Projected gradient descent on `N(u) = 1`.
///
/// On `NonConvergence` the best iterate is still reported through the error;
/// use [`minimize_report`] to get it as a flagged solution instead.
pub fn minimize(
    functional: &DiscreteFunctional,
    seed: Option<&[f64]>,
    config: &RayleighConfig,
) -> Result<EigenSolution> {
    let sol = minimize_report(functional, seed, config)?;
    if !sol.diagnostics.converged {
        return Err(Error::NonConvergence {
            iterations: sol.diagnostics.iterations,
            best: sol.lambda,
        });
    }
    Ok(sol)
}

/// Like [`minimize`], but an exhausted iteration budget returns the best
/// iterate with `diagnostics.converged == false`.
pub fn minimize_report(
    functional: &DiscreteFunctional,
    seed: Option<&[f64]>,
    config: &RayleighConfig,
) -> Result<EigenSolution> {
    let n = functional.grid.len();
    let mut u: Vec<f64> = match seed {
        Some(s) if s.len() == n => s.to_vec(),
        Some(s) => {
            return Err(Error::Domain(format!("seed has {} samples, expected {n}", s.len())));
        }
        None => (0..n).map(|j| 1.0 + 1e-3 * j as f64 / (n - 1) as f64).collect(),
    };
    let free = functional.free_mask();
    for (v, f) in u.iter_mut().zip(&free) {
        if !f {
            *v = 0.0;
        }
    }
    if !(functional.constraint(&u) > 0.0) {
        return Err(Error::Domain("initial iterate has N(u) = 0".into()));
    }
    normalize(functional, &mut u);

    let mass = functional.lumped_mass();
    let mut metric = vec![0.0; n];
    let mut q = functional.energy(&u);
    let mut history = vec![q];
    let mut grad_e = vec![0.0; n];
    let mut grad_n = vec![0.0; n];
    let mut direction = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut step = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;

    while iterations < config.max_iterations {
        functional.energy_gradient(&u, &mut grad_e);
        functional.constraint_gradient(&u, &mut grad_n);
        functional.metric(&u, q, &mass, &mut metric);
        let mut slope = 0.0;
        for j in 0..n {
            let g = if free[j] { grad_e[j] - q * grad_n[j] } else { 0.0 };
            direction[j] = if free[j] { g / metric[j] } else { 0.0 };
            slope += g * direction[j];
        }
        grad_norm = slope.sqrt();
        if slope == 0.0 {
            converged = true;
            break;
        }

        let accepted = loop {
            for j in 0..n {
                trial[j] = u[j] - step * direction[j];
            }
            let nt = functional.constraint(&trial);
            if nt > 0.0 {
                let qt = functional.energy(&trial) / nt;
                if qt <= q - config.armijo * step * slope {
                    break Some(qt);
                }
            }
            step *= 0.5;
            if step < 1e-300 {
                break None;
            }
        };
        let Some(qt) = accepted else {
            // no descent left at machine precision
            converged = true;
            break;
        };
        std::mem::swap(&mut u, &mut trial);
        normalize(functional, &mut u);
        debug_assert!(qt <= q);
        q = qt;
        history.push(q);
        iterations += 1;
        step *= 2.0;

        let w = config.stall_window;
        if history.len() > w {
            let old = history[history.len() - 1 - w];
            if old - q < config.stall_tol * q.abs().max(1.0) {
                converged = true;
                break;
            }
        }
    }

    let max = u.iter().cloned().fold(f64::MIN, f64::max);
    let phi: Vec<f64> = u.iter().map(|v| v / max).collect();
    let slope = numerics::derivative(&functional.grid, &phi);
    let psi = slope.iter().map(|&d| momentum(d, functional.p)).collect();
    Ok(EigenSolution {
        lambda: q,
        grid: functional.grid.clone(),
        phi,
        psi,
        residual: grad_norm,
        method: Method::Rayleigh,
        diagnostics: Diagnostics {
            iterations,
            bracket: None,
            lp_scale: max,
            converged,
            quotient_history: history,
        },
    })
}

/// Minimizes on `m` cells, seeding each level from a coarser one
/// (`m/2^k`, stopping at `config.coarsest`).
pub fn solve(problem: &SturmProblem, m: usize, config: &RayleighConfig) -> Result<EigenSolution> {
    let mut levels = vec![m];
    while levels.last().unwrap() / 2 >= config.coarsest.max(MIN_NODES) {
        let next = levels.last().unwrap().div_ceil(2);
        levels.push(next);
    }
    levels.reverse();
    let mut previous: Option<EigenSolution> = None;
    let mut total = 0;
    for &cells in &levels {
        let functional = discretize(problem, cells)?;
        let seed: Option<Vec<f64>> = previous.as_ref().map(|sol| {
            functional
                .grid
                .iter()
                .map(|&t| numerics::interpolate(&sol.grid, &sol.phi, t))
                .collect()
        });
        let sol = minimize(&functional, seed.as_deref(), config)?;
        total += sol.diagnostics.iterations;
        previous = Some(sol);
    }
    let mut sol = previous.expect("at least one level");
    sol.diagnostics.bracket = None;
    if levels.len() > 1 {
        // finest-level history is kept; the total count covers every level
        sol.diagnostics.iterations = total;
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::ModelParams;
    use crate::problems::{double_robin_problem, geodesic_ball_problem, inradius_model_problem, Weight};
    use std::f64::consts::PI;

    fn flat(alpha: f64, p: f64) -> SturmProblem {
        inradius_model_problem(&ModelParams::new(0.0, 0.0, 2).unwrap(), 1.0, alpha, p).unwrap()
    }

    fn unit(bc_left: BoundaryCondition, bc_right: BoundaryCondition) -> SturmProblem {
        SturmProblem::new(0.0, 1.0, 2.0, Weight::Unit, bc_left, bc_right, false, false).unwrap()
    }

    #[test]
    fn trapezoid_node_weights() {
        let f = discretize(&flat(1.0, 2.0), 16).unwrap();
        let h = 1.0 / 16.0;
        assert_eq!(f.node_weights[0], h / 2.0);
        assert_eq!(f.node_weights[16], h / 2.0);
        assert!(f.node_weights[1..16].iter().all(|&w| w == h));
        assert!(discretize(&flat(1.0, 2.0), 4).is_err());
    }

    #[test]
    fn robin_terms_follow_boundary_conditions() {
        assert_eq!(discretize(&flat(0.5, 2.0), 16).unwrap().robin_terms, vec![(0, 0.5)]);
        let d = discretize(&double_robin_problem(1.0, 2.0, 2.0).unwrap(), 32).unwrap();
        assert_eq!(d.robin_terms, vec![(0, 2.0), (32, 2.0)]);
    }

    #[test]
    fn singular_center_has_zero_node_weight() {
        let f = discretize(&geodesic_ball_problem(0.0, 2, 1.0, 1.0, 2.0).unwrap(), 20).unwrap();
        assert_eq!(f.node_weights[0], 0.0);
        assert!(f.node_weights[1..].iter().all(|&w| w > 0.0));
        // Robin coefficient carries w(R) = 1
        assert_eq!(f.robin_terms, vec![(20, 1.0)]);
    }

    #[test]
    fn constant_quotient_is_alpha_over_length() {
        let prob = inradius_model_problem(&ModelParams::new(0.0, 0.0, 2).unwrap(), 2.0, 0.75, 2.5).unwrap();
        let f = discretize(&prob, 64).unwrap();
        let q = quotient(&f, &vec![1.0; 65]).unwrap();
        assert!((q - 0.375).abs() < 1e-15);
    }

    #[test]
    fn linear_ramp_quotient() {
        let f = discretize(&unit(BoundaryCondition::Dirichlet, BoundaryCondition::Neumann), 2000).unwrap();
        let u: Vec<f64> = f.grid.clone();
        let q = quotient(&f, &u).unwrap();
        assert!((q - 3.0).abs() < 1e-5, "{q}");
    }

    #[test]
    fn zero_constraint_is_rejected() {
        let f = discretize(&flat(1.0, 2.0), 16).unwrap();
        assert!(matches!(quotient(&f, &[0.0; 17]), Err(Error::Domain(_))));
    }

    #[test]
    fn quotient_scale_invariance() {
        let f = discretize(&flat(-0.3, 1.7), 64).unwrap();
        let u: Vec<f64> = f.grid.iter().map(|t| 1.0 + (3.0 * t).sin()).collect();
        let q = quotient(&f, &u).unwrap();
        for c in [-4.0, 1e-3, 7.5] {
            let v: Vec<f64> = u.iter().map(|x| c * x).collect();
            assert!((quotient(&f, &v).unwrap() - q).abs() <= 1e-12 * q.abs());
        }
    }

    #[test]
    fn flat_interval_matches_transcendental_root() {
        let sol = solve(&flat(1.0, 2.0), 2000, &RayleighConfig::default()).unwrap();
        assert!((sol.lambda - 0.7401738843949228).abs() < 1e-3, "{}", sol.lambda);
        assert!(sol.diagnostics.converged);
    }

    #[test]
    fn dirichlet_interval_is_pi_squared() {
        let prob = unit(BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet);
        let sol = solve(&prob, 2000, &RayleighConfig::default()).unwrap();
        assert!((sol.lambda - PI * PI).abs() < 1e-3, "{}", sol.lambda);
        assert_eq!(sol.phi[0], 0.0);
    }

    #[test]
    fn neumann_gives_zero_and_constants() {
        let prob = unit(BoundaryCondition::Neumann, BoundaryCondition::Neumann);
        let f = discretize(&prob, 64).unwrap();
        let sol = minimize(&f, None, &RayleighConfig::default()).unwrap();
        assert!(sol.lambda.abs() < 1e-9, "{}", sol.lambda);
        assert!(sol.phi.iter().all(|v| (v - 1.0).abs() < 1e-4));
    }

    #[test]
    fn descent_is_monotone() {
        for (alpha, p) in [(1.0, 1.5), (-1.0, 3.0)] {
            let f = discretize(&flat(alpha, p), 128).unwrap();
            let sol = minimize(&f, None, &RayleighConfig::default()).unwrap();
            let h = &sol.diagnostics.quotient_history;
            assert!(h.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(sol.lambda.signum(), alpha.signum());
        }
    }

    #[test]
    fn negative_alpha_starts_negative() {
        let f = discretize(&flat(-1.0, 2.0), 64).unwrap();
        assert!(quotient(&f, &vec![1.0; 65]).unwrap() < 0.0);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let f = discretize(&flat(1.0, 2.0), 256).unwrap();
        let cfg = RayleighConfig {
            max_iterations: 3,
            ..RayleighConfig::default()
        };
        assert!(matches!(minimize(&f, None, &cfg), Err(Error::NonConvergence { .. })));
        let report = minimize_report(&f, None, &cfg).unwrap();
        assert!(!report.diagnostics.converged);
        assert_eq!(report.diagnostics.iterations, 3);
    }
}
