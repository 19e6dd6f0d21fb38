mod common;

use robin_eigen::numerics::{derivative, trapezoid};
use robin_eigen::shoot::{self, inverse_momentum, momentum};
use robin_eigen::verify::Geometry;
use robin_eigen::{rayleigh, RayleighConfig, ShootConfig, SturmProblem};

fn matrix() -> Vec<(String, SturmProblem)> {
    let mut out = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for alpha in [-1.0, 1.0] {
            for g in [
                Geometry::FlatInterval { r: 1.0 },
                Geometry::Ball { kappa: 0.0, n: 2, r0: 1.0 },
                Geometry::Ball { kappa: -1.0, n: 3, r0: 1.0 },
                Geometry::Model { kappa: -1.0, lambda_mc: 1.0, n: 3, r: 1.0 },
            ] {
                out.push((format!("{} alpha={alpha} p={p}", g.label()), g.problem(alpha, p).unwrap()));
            }
        }
    }
    out
}

#[test]
fn halving_rk_steps_moves_lambda_by_less_than_ten_tolerances() {
    let fine = ShootConfig::default();
    let coarse = fine.with_rk_steps(fine.rk_steps / 2);
    for (label, problem) in matrix() {
        let a = shoot::solve_first_eigenvalue(&problem, &fine).unwrap().lambda;
        let b = shoot::solve_first_eigenvalue(&problem, &coarse).unwrap().lambda;
        let limit = 10.0 * fine.lambda_tol * a.abs().max(1.0);
        assert!((a - b).abs() < limit, "{label}: {a} vs {b}");
    }
}

#[test]
fn eigenfunction_satisfies_the_equation_and_boundary_conditions() {
    let cfg = ShootConfig::default();
    for (label, problem) in matrix() {
        let sol = shoot::solve_first_eigenvalue(&problem, &cfg).unwrap();
        let p = problem.p();
        let dpsi = derivative(&sol.grid, &sol.psi);
        let n = sol.grid.len();
        let interior = 2..n - 2;
        let residual: Vec<f64> = interior
            .clone()
            .map(|j| {
                let t = sol.grid[j];
                (dpsi[j] + problem.log_derivative(t).unwrap() * sol.psi[j] + sol.lambda * momentum(sol.phi[j], p)).abs()
            })
            .collect();
        let l1 = trapezoid(&sol.grid[interior], &residual) / sol.lambda.abs().max(1.0);
        assert!(l1 < 1e-6, "{label}: L1 residual {l1:.2e}");

        // Robin end: outward momentum + α φ^{p−1} = 0
        let (end, nu) = if problem.bc_left().is_robin() { (0, -1.0) } else { (n - 1, 1.0) };
        let alpha = if end == 0 { problem.bc_left() } else { problem.bc_right() }.alpha().unwrap();
        let robin = nu * sol.psi[end] + alpha * momentum(sol.phi[end], p);
        assert!(robin.abs() < 1e-6, "{label}: Robin residual {robin:.2e}");
        // at a singular centre the first node sits at ε > 0, where ψ ≈ −λε/n
        let (neumann, t0) = if end == 0 { (sol.psi[n - 1], 0.0) } else { (sol.psi[0], sol.grid[0]) };
        assert!(neumann.abs() < 1e-10 + sol.lambda.abs() * t0, "{label}: Neumann residual {neumann:.2e}");
    }
}

#[test]
fn eigenfunction_is_positive_normalized_and_monotone_toward_the_robin_end() {
    let cfg = ShootConfig::default();
    for (label, problem) in matrix() {
        let sol = shoot::solve_first_eigenvalue(&problem, &cfg).unwrap();
        let max = sol.phi.iter().cloned().fold(f64::MIN, f64::max);
        assert!((max - 1.0).abs() < 1e-15, "{label}");
        assert!(sol.phi.iter().all(|v| *v > 0.0), "{label}");
        assert_eq!(sol.lambda.signum(), problem.bc_left().alpha().or(problem.bc_right().alpha()).unwrap().signum());
        // the momentum keeps one sign, pointing the gradient away from the Robin end when α > 0
        let alpha = problem.bc_left().alpha().or(problem.bc_right().alpha()).unwrap();
        let robin_left = problem.bc_left().is_robin();
        let expected = if robin_left { alpha.signum() } else { -alpha.signum() };
        assert!(sol.psi.iter().all(|s| s * expected >= -1e-12), "{label}");
        // φ' and ψ are consistent
        let dphi = derivative(&sol.grid, &sol.phi);
        let n = sol.grid.len();
        for j in (n / 8..n - n / 8).step_by(97) {
            let expect = inverse_momentum(sol.psi[j], problem.p());
            assert!((dphi[j] - expect).abs() < 1e-4 * expect.abs().max(1.0), "{label} at {}", sol.grid[j]);
        }
    }
}

#[test]
fn reintegration_reproduces_the_returned_eigenfunction() {
    let cfg = ShootConfig::default();
    for (label, problem) in matrix().into_iter().step_by(5) {
        let sol = shoot::solve_first_eigenvalue(&problem, &cfg).unwrap();
        let traj = shoot::integrate(&problem, sol.lambda, &cfg).unwrap();
        assert_eq!(traj.grid, sol.grid, "{label}");
        let max = traj.phi.iter().cloned().fold(f64::MIN, f64::max);
        for (a, b) in traj.phi.iter().zip(&sol.phi) {
            assert!((a / max - b).abs() < 1e-12, "{label}");
        }
    }
}

#[test]
fn rayleigh_differences_shrink_under_mesh_doubling() {
    let cfg = RayleighConfig::default();
    for (label, problem) in matrix() {
        let ls: Vec<f64> = [250, 500, 1000, 2000]
            .iter()
            .map(|&m| rayleigh::solve(&problem, m, &cfg).unwrap().lambda)
            .collect();
        let d: Vec<f64> = ls.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
        for k in 0..2 {
            assert!(d[k] >= 1.5 * d[k + 1], "{label}: differences {d:?}");
        }
        let exact = shoot::solve_first_eigenvalue(&problem, &ShootConfig::default()).unwrap().lambda;
        assert!((ls[3] - exact).abs() / exact.abs().max(1.0) <= 1e-3, "{label}");
    }
}

#[test]
fn flat_interval_matches_the_transcendental_oracle() {
    for (r, alpha) in [(0.5, 5.0), (2.0, -0.5), (1.0, 1.0)] {
        let problem = Geometry::FlatInterval { r }.problem(alpha, 2.0).unwrap();
        let l = shoot::solve_first_eigenvalue(&problem, &ShootConfig::default()).unwrap().lambda;
        assert!(common::rel(l, common::interval_eigenvalue(r, alpha)) < 1e-8);
        let lr = rayleigh::solve(&problem, 1000, &RayleighConfig::default()).unwrap().lambda;
        assert!(common::rel(lr, common::interval_eigenvalue(r, alpha)) < 1e-5);
    }
}
