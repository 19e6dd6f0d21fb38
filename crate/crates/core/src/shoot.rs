//! Shooting solver for the first eigenvalue.
//!
//! The degenerate equation `(p−1)|φ'|^{p−2}φ'' + (w'/w)|φ'|^{p−2}φ' = −λ|φ|^{p−2}φ`
//! is integrated as the first-order system
//!
//! ```text
//! φ' = |ψ|^{q−2} ψ,      ψ' = −λ |φ|^{p−2} φ − (w'/w) ψ,      q = p/(p−1)
//! ```
//!
//! from the Neumann (or singular) end with `(φ, ψ) = (1, 0)` toward the
//! opposite end, where the boundary mismatch is bisected in `λ`.
//!
//! Integration runs in the arclength `s` measured from the launch end. In that
//! variable the momentum is `χ = |dφ/ds|^{p−2} dφ/ds`, which is also the
//! outward momentum at the target end, so one mismatch formula serves both
//! orientations.

use crate::error::{Error, Result};
use crate::numerics;
use crate::problems::{BoundaryCondition, Endpoint, SturmProblem, Weight};
use crate::solution::{Diagnostics, EigenSolution, Method};

const OVERFLOW_LIMIT: f64 = 1e12;
const MAX_SUBSTEPS: usize = 512;
const LAUNCH_GRADING: i32 = 4;

/// `|x|^{p−2} x`, with `momentum(0) = 0`.
pub fn momentum(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p - 1.0)
    }
}

/// Inverse of [`momentum`]: `|y|^{q−2} y` with `q = p/(p−1)`.
pub fn inverse_momentum(y: f64, p: f64) -> f64 {
    if p == 2.0 {
        y
    } else if y == 0.0 {
        0.0
    } else {
        y.signum() * y.abs().powf(1.0 / (p - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    /// Number of RK4 cells across the interval.
    pub rk_steps: usize,
    /// Relative bisection width.
    pub lambda_tol: f64,
    pub bracket_growth: f64,
    /// Launch offset from a singular endpoint; `None` means `1e−6·(b−a)`.
    pub eps_singular: Option<f64>,
    pub max_bracket_steps: usize,
    pub max_bisections: usize,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            rk_steps: 4096,
            lambda_tol: 1e-10,
            bracket_growth: 2.0,
            eps_singular: None,
            max_bracket_steps: 60,
            max_bisections: 400,
        }
    }
}

impl ShootConfig {
    pub fn with_rk_steps(mut self, rk_steps: usize) -> Self {
        self.rk_steps = rk_steps;
        self
    }

    pub fn with_lambda_tol(mut self, tol: f64) -> Self {
        self.lambda_tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        let eps_ok = self.eps_singular.is_none_or(|e| e > 0.0);
        if self.rk_steps < 64
            || !(self.lambda_tol > 0.0)
            || !(self.bracket_growth > 1.0)
            || !eps_ok
        {
            return Err(Error::Domain(format!("invalid shooting configuration {self:?}")));
        }
        Ok(())
    }
}

/// Samples of `(φ, ψ)` on an increasing grid in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootTrajectory {
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    /// `|φ'|^{p−2} φ'` in the increasing-`t` direction.
    pub psi: Vec<f64>,
    /// First point where `φ` changes sign, if any.
    pub first_zero: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum LaunchMomentum {
    /// `χ = 0`, regular end.
    Neumann,
    /// `χ(ε) = −λε/k` for a weight `~ s^{k−1}`.
    Singular,
    Given(f64),
}

#[derive(Debug, Clone, Copy)]
struct Launch {
    end: Endpoint,
    momentum: LaunchMomentum,
}

/// Trajectory in the launch coordinate `s ∈ [s0, L]`.
struct RawTrajectory {
    s: Vec<f64>,
    phi: Vec<f64>,
    chi: Vec<f64>,
    /// Index of the first node with `φ <= 0` after a positive node.
    first_zero: Option<usize>,
}

impl RawTrajectory {
    fn zero_location(&self) -> Option<f64> {
        self.first_zero.map(|j| {
            let (s0, s1) = (self.s[j - 1], self.s[j]);
            let (f0, f1) = (self.phi[j - 1], self.phi[j]);
            s0 + (s1 - s0) * f0 / (f0 - f1)
        })
    }
}

fn default_launch(problem: &SturmProblem) -> Result<Launch> {
    for end in [Endpoint::Left, Endpoint::Right] {
        if problem.is_singular(end) {
            return Ok(Launch {
                end,
                momentum: LaunchMomentum::Singular,
            });
        }
    }
    for end in [Endpoint::Left, Endpoint::Right] {
        if problem.bc(end) == BoundaryCondition::Neumann {
            return Ok(Launch {
                end,
                momentum: LaunchMomentum::Neumann,
            });
        }
    }
    Err(Error::Unsupported(
        "shooting needs a Neumann or singular endpoint to launch from".into(),
    ))
}

struct System<'a> {
    problem: &'a SturmProblem,
    lambda: f64,
    p: f64,
    /// `t` of the launch end and the direction of increasing `s`.
    origin: f64,
    direction: f64,
}

impl System<'_> {
    fn t(&self, s: f64) -> f64 {
        self.origin + self.direction * s
    }

    fn rhs(&self, s: f64, phi: f64, chi: f64) -> Result<(f64, f64)> {
        let drift = match self.problem.weight() {
            Weight::Unit => 0.0,
            _ => self.direction * self.problem.log_derivative(self.t(s))? * chi,
        };
        Ok((
            inverse_momentum(chi, self.p),
            -self.lambda * momentum(phi, self.p) - drift,
        ))
    }

    fn rk4(&self, s: f64, y: (f64, f64), ds: f64) -> Result<(f64, f64)> {
        let k1 = self.rhs(s, y.0, y.1)?;
        let k2 = self.rhs(s + 0.5 * ds, y.0 + 0.5 * ds * k1.0, y.1 + 0.5 * ds * k1.1)?;
        let k3 = self.rhs(s + 0.5 * ds, y.0 + 0.5 * ds * k2.0, y.1 + 0.5 * ds * k2.1)?;
        let k4 = self.rhs(s + ds, y.0 + ds * k3.0, y.1 + ds * k3.1)?;
        Ok((
            y.0 + ds / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + ds / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        ))
    }

    /// RK4 across `[s0, s1]` in the variable `τ ∈ [0, 1]` with
    /// `s = s0 + (s1 − s0) τ^β`, which smooths the `s^q` launch profile.
    fn rk4_graded(&self, s0: f64, s1: f64, y: (f64, f64), substeps: usize) -> Result<(f64, f64)> {
        let beta = LAUNCH_GRADING;
        let span = s1 - s0;
        let g = |tau: f64, y: (f64, f64)| -> Result<(f64, f64)> {
            let jac = beta as f64 * span * tau.powi(beta - 1);
            if jac == 0.0 {
                return Ok((0.0, 0.0));
            }
            let (a, b) = self.rhs(s0 + span * tau.powi(beta), y.0, y.1)?;
            Ok((a * jac, b * jac))
        };
        let dt = 1.0 / substeps as f64;
        let mut y = y;
        for i in 0..substeps {
            let tau = i as f64 * dt;
            let k1 = g(tau, y)?;
            let k2 = g(tau + 0.5 * dt, (y.0 + 0.5 * dt * k1.0, y.1 + 0.5 * dt * k1.1))?;
            let k3 = g(tau + 0.5 * dt, (y.0 + 0.5 * dt * k2.0, y.1 + 0.5 * dt * k2.1))?;
            let k4 = g(tau + dt, (y.0 + dt * k3.0, y.1 + dt * k3.1))?;
            y = (
                y.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                y.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            );
        }
        Ok(y)
    }
}

/// Substeps for cell `j` after a zero-momentum launch. Near the launch the
/// solution behaves like `s^q`, so a cell at distance `j·h` carries an RK4
/// error `~ h^q j^{q−5}`; subdividing by `M_j` restores `O(h^4)`.
fn substeps(p: f64, cells: usize, j: usize) -> usize {
    if p == 2.0 {
        return 1;
    }
    let q = p / (p - 1.0);
    let rel_h = 1.0 / cells as f64;
    let want = rel_h.powf((q - 4.0) / 4.0) * (j as f64).powf((q - 5.0) / 4.0);
    (want.ceil() as usize).clamp(1, MAX_SUBSTEPS)
}

fn integrate_raw(
    problem: &SturmProblem,
    launch: Launch,
    lambda: f64,
    config: &ShootConfig,
) -> Result<RawTrajectory> {
    config.validate()?;
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite, got {lambda}")));
    }
    let p = problem.p();
    let length = problem.length();
    let cells = config.rk_steps;
    let h = length / cells as f64;
    let sys = System {
        problem,
        lambda,
        p,
        origin: problem.endpoint(launch.end),
        direction: -launch.end.outward(),
    };

    let (s0, mut y) = match launch.momentum {
        LaunchMomentum::Neumann => (0.0, (1.0, 0.0)),
        LaunchMomentum::Given(chi) => (0.0, (1.0, chi)),
        LaunchMomentum::Singular => {
            let eps = config.eps_singular.unwrap_or(1e-6 * length);
            if eps >= h {
                return Err(Error::Domain(format!(
                    "singular offset {eps} must be smaller than the step {h}"
                )));
            }
            // weight ~ s^{k−1} near the end: (s^{k−1} χ)' = −λ s^{k−1} gives χ = −λ s / k
            let k = sys.direction * problem.log_derivative(sys.t(eps))? * eps + 1.0;
            let chi = -lambda * eps / k;
            let q = p / (p - 1.0);
            let phi = 1.0 - lambda.signum() * (lambda.abs() / k).powf(q - 1.0) * eps.powf(q) / q;
            (eps, (phi, chi))
        }
    };
    let zero_momentum_launch = !matches!(launch.momentum, LaunchMomentum::Given(_));

    let mut s = Vec::with_capacity(cells + 1);
    let mut phi = Vec::with_capacity(cells + 1);
    let mut chi = Vec::with_capacity(cells + 1);
    s.push(s0);
    phi.push(y.0);
    chi.push(y.1);
    let mut first_zero = None;

    for j in 0..cells {
        let a = if j == 0 { s0 } else { h * j as f64 };
        let b = if j + 1 == cells { length } else { h * (j + 1) as f64 };
        y = if !zero_momentum_launch {
            sys.rk4(a, y, b - a)?
        } else if j == 0 {
            let m = (2 * substeps(p, cells, 1)).max(64);
            sys.rk4_graded(a, b, y, m)?
        } else {
            let m = substeps(p, cells, j);
            let ds = (b - a) / m as f64;
            let mut local = y;
            for i in 0..m {
                local = sys.rk4(a + ds * i as f64, local, ds)?;
            }
            local
        };
        if !(y.0.abs() <= OVERFLOW_LIMIT && y.1.abs() <= OVERFLOW_LIMIT) {
            return Err(Error::NumericOverflow {
                t: sys.t(b),
                limit: OVERFLOW_LIMIT,
            });
        }
        if first_zero.is_none() && phi[j] > 0.0 && y.0 <= 0.0 {
            first_zero = Some(j + 1);
        }
        s.push(b);
        phi.push(y.0);
        chi.push(y.1);
    }
    Ok(RawTrajectory {
        s,
        phi,
        chi,
        first_zero,
    })
}

fn to_trajectory(problem: &SturmProblem, launch: Launch, raw: &RawTrajectory) -> ShootTrajectory {
    let origin = problem.endpoint(launch.end);
    let direction = -launch.end.outward();
    let mut grid: Vec<f64> = raw.s.iter().map(|s| origin + direction * s).collect();
    let mut phi = raw.phi.clone();
    let mut psi: Vec<f64> = raw.chi.iter().map(|c| direction * c).collect();
    if direction < 0.0 {
        grid.reverse();
        phi.reverse();
        psi.reverse();
    }
    ShootTrajectory {
        grid,
        phi,
        psi,
        first_zero: raw.zero_location().map(|s| origin + direction * s),
    }
}

/// Integrates from the Neumann (or singular) end at a fixed `λ`.
pub fn integrate(problem: &SturmProblem, lambda: f64, config: &ShootConfig) -> Result<ShootTrajectory> {
    let launch = default_launch(problem)?;
    let raw = integrate_raw(problem, launch, lambda, config)?;
    Ok(to_trajectory(problem, launch, &raw))
}

/// Negative sentinel for trajectories that vanish before the target end:
/// `λ` is then above the first eigenvalue.
fn zero_sentinel(raw: &RawTrajectory, length: f64) -> f64 {
    let s_zero = raw.zero_location().unwrap_or(length);
    -(1.0 + (length - s_zero) / length)
}

/// Mismatch of the target condition; positive below the first eigenvalue,
/// negative above it.
fn mismatch_of(problem: &SturmProblem, launch: Launch, raw: &RawTrajectory) -> f64 {
    let last = raw.s.len() - 1;
    if let Some(j) = raw.first_zero {
        if j < last {
            return zero_sentinel(raw, problem.length());
        }
    }
    let (phi, chi) = (raw.phi[last], raw.chi[last]);
    match problem.bc(launch.end.opposite()) {
        BoundaryCondition::Robin { alpha } => chi + alpha * momentum(phi, problem.p()),
        BoundaryCondition::Neumann => chi,
        BoundaryCondition::Dirichlet => phi,
    }
}

fn mismatch_at(problem: &SturmProblem, launch: Launch, lambda: f64, config: &ShootConfig) -> Result<f64> {
    match integrate_raw(problem, launch, lambda, config) {
        Ok(raw) => Ok(mismatch_of(problem, launch, &raw)),
        // runaway growth of a positive solution: λ is far below the eigenvalue
        Err(Error::NumericOverflow { .. }) => Ok(OVERFLOW_LIMIT),
        Err(e) => Err(e),
    }
}

/// Boundary mismatch `F(λ) = ψ_out(end) + α|φ(end)|^{p−2}φ(end)` at the
/// endpoint opposite the launch. If `φ` vanishes before that end a negative
/// sentinel `−(1 + distance/length)` is returned; overflow maps to `+1e12`.
pub fn robin_mismatch(problem: &SturmProblem, lambda: f64, config: &ShootConfig) -> Result<f64> {
    let launch = default_launch(problem)?;
    mismatch_at(problem, launch, lambda, config)
}

struct Root {
    lambda: f64,
    lo: f64,
    hi: f64,
    iterations: usize,
}

/// Brackets and bisects the sign change of a mismatch that is positive below
/// the root and negative above it.
fn bracket_and_bisect<F>(f0: f64, scale: f64, config: &ShootConfig, mut f: F) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if f0 == 0.0 {
        return Ok(Root {
            lambda: 0.0,
            lo: 0.0,
            hi: 0.0,
            iterations: 0,
        });
    }
    let direction = if f0 > 0.0 { 1.0 } else { -1.0 };
    let mut near = 0.0;
    let mut probe = direction * scale;
    let mut far = None;
    for _ in 0..config.max_bracket_steps {
        let value = f(probe)?;
        if value * f0 < 0.0 {
            far = Some(probe);
            break;
        }
        near = probe;
        probe *= config.bracket_growth;
    }
    let far = far.ok_or(Error::BracketFailure {
        steps: config.max_bracket_steps,
        last: probe,
    })?;
    let (mut lo, mut hi) = if direction > 0.0 { (near, far) } else { (far, near) };

    let mut iterations = 0;
    while hi - lo > config.lambda_tol * lo.abs().max(hi.abs()) {
        if iterations == config.max_bisections {
            return Err(Error::ToleranceFailure { lo, hi, iterations });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Root {
        lambda: 0.5 * (lo + hi),
        lo,
        hi,
        iterations,
    })
}

fn finish(
    problem: &SturmProblem,
    root: &Root,
    mut traj: ShootTrajectory,
    residual: f64,
) -> Result<EigenSolution> {
    let p = problem.p();
    let max = traj.phi.iter().cloned().fold(f64::MIN, f64::max);
    let n = traj.phi.len();
    let interior_ok = traj.phi[1..n - 1].iter().all(|&v| v > 0.0);
    let ends_ok = [traj.phi[0], traj.phi[n - 1]].iter().all(|&v| v > -1e-6 * max);
    if !(max > 0.0 && interior_ok && ends_ok) {
        return Err(Error::Unsupported(format!(
            "eigenfunction at lambda = {} changes sign",
            root.lambda
        )));
    }
    let psi_scale = momentum(max, p);
    // a Dirichlet end can land a rounding error below zero
    traj.phi.iter_mut().for_each(|v| *v = (*v / max).max(0.0));
    traj.psi.iter_mut().for_each(|v| *v /= psi_scale);

    let weighted: Vec<f64> = traj
        .grid
        .iter()
        .zip(&traj.phi)
        .map(|(&t, &v)| Ok(problem.weight_at(t)? * v.powf(p)))
        .collect::<Result<_>>()?;
    let lp_scale = numerics::trapezoid(&traj.grid, &weighted).powf(-1.0 / p);

    Ok(EigenSolution {
        lambda: root.lambda,
        grid: traj.grid,
        phi: traj.phi,
        psi: traj.psi,
        residual,
        method: Method::Shooting,
        diagnostics: Diagnostics {
            iterations: root.iterations,
            bracket: Some((root.lo, root.hi)),
            lp_scale,
            converged: true,
            quotient_history: Vec::new(),
        },
    })
}

/// First eigenvalue of a problem with one Robin end opposite a Neumann (or
/// singular) end, or of a symmetric constant-weight problem with equal Robin
/// conditions at both ends (solved on the half interval and reflected).
pub fn solve_first_eigenvalue(problem: &SturmProblem, config: &ShootConfig) -> Result<EigenSolution> {
    config.validate()?;
    if problem.robin_count() == 2 {
        return solve_symmetric_double_robin(problem, config);
    }
    let launch = default_launch(problem)?;
    let scale = problem.length().powf(-problem.p());
    let f0 = mismatch_at(problem, launch, 0.0, config)?;
    let root = bracket_and_bisect(f0, scale, config, |l| mismatch_at(problem, launch, l, config))?;
    let raw = integrate_raw(problem, launch, root.lambda, config)?;
    let residual = mismatch_of(problem, launch, &raw);
    finish(problem, &root, to_trajectory(problem, launch, &raw), residual)
}

fn solve_symmetric_double_robin(problem: &SturmProblem, config: &ShootConfig) -> Result<EigenSolution> {
    let (left, right) = (problem.bc_left(), problem.bc_right());
    if left != right || *problem.weight() != Weight::Unit {
        return Err(Error::Unsupported(
            "two Robin ends are only supported for w ≡ 1 with equal parameters".into(),
        ));
    }
    let mid = 0.5 * (problem.a() + problem.b());
    let half = SturmProblem::new(
        problem.a(),
        mid,
        problem.p(),
        Weight::Unit,
        left,
        BoundaryCondition::Neumann,
        false,
        false,
    )?;
    let half_config = ShootConfig {
        rk_steps: (config.rk_steps / 2).max(64),
        ..*config
    };
    let sol = solve_first_eigenvalue(&half, &half_config)?;
    // even extension about the midpoint; the momentum is odd
    let n = sol.grid.len();
    let mut grid = sol.grid.clone();
    let mut phi = sol.phi.clone();
    let mut psi = sol.psi.clone();
    for j in (0..n - 1).rev() {
        grid.push(2.0 * mid - sol.grid[j]);
        phi.push(sol.phi[j]);
        psi.push(-sol.psi[j]);
    }
    let mut diagnostics = sol.diagnostics.clone();
    let weighted: Vec<f64> = phi.iter().map(|v| v.powf(problem.p())).collect();
    diagnostics.lp_scale = numerics::trapezoid(&grid, &weighted).powf(-1.0 / problem.p());
    Ok(EigenSolution {
        grid,
        phi,
        psi,
        diagnostics,
        ..sol
    })
}

/// First eigenvalue of a two-Robin problem by shooting across the whole
/// interval from the left Robin end, without assuming any symmetry.
pub fn solve_two_sided(problem: &SturmProblem, config: &ShootConfig) -> Result<EigenSolution> {
    config.validate()?;
    let alpha = problem
        .bc_left()
        .alpha()
        .ok_or_else(|| Error::Unsupported("two-sided shooting launches from a Robin left end".into()))?;
    // −ψ(a) + α|φ(a)|^{p−2}φ(a) = 0 with φ(a) = 1
    let launch = Launch {
        end: Endpoint::Left,
        momentum: LaunchMomentum::Given(alpha),
    };
    let scale = problem.length().powf(-problem.p());
    let f0 = mismatch_at(problem, launch, 0.0, config)?;
    let root = bracket_and_bisect(f0, scale, config, |l| mismatch_at(problem, launch, l, config))?;
    let raw = integrate_raw(problem, launch, root.lambda, config)?;
    let residual = mismatch_of(problem, launch, &raw);
    finish(problem, &root, to_trajectory(problem, launch, &raw), residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::ModelParams;
    use crate::problems::{double_robin_problem, geodesic_ball_problem, inradius_model_problem};
    use std::f64::consts::PI;

    fn flat(r: f64, alpha: f64, p: f64) -> SturmProblem {
        inradius_model_problem(&ModelParams::new(0.0, 0.0, 2).unwrap(), r, alpha, p).unwrap()
    }

    #[test]
    fn momentum_examples() {
        assert_eq!(momentum(-2.0, 3.0), -4.0);
        assert_eq!(inverse_momentum(-4.0, 3.0), -2.0);
        for x in [-3.5, 0.0, 1e-9, 42.0] {
            assert_eq!(momentum(x, 2.0), x);
        }
        assert_eq!(momentum(0.0, 1.5), 0.0);
        assert_eq!(inverse_momentum(0.0, 1.5), 0.0);
    }

    #[test]
    fn zero_lambda_gives_constants() {
        let cfg = ShootConfig::default();
        for prob in [
            flat(1.0, 1.0, 3.0),
            geodesic_ball_problem(-1.0, 3, 1.0, 1.0, 1.5).unwrap(),
        ] {
            let traj = integrate(&prob, 0.0, &cfg).unwrap();
            assert!(traj.phi.iter().all(|&v| v == 1.0));
            assert!(traj.psi.iter().all(|&v| v == 0.0));
            assert!(traj.first_zero.is_none());
        }
    }

    #[test]
    fn quarter_cosine_hits_zero_at_robin_end() {
        let traj = integrate(&flat(1.0, 1.0, 2.0), (PI / 2.0).powi(2), &ShootConfig::default()).unwrap();
        assert!(traj.phi[0].abs() < 1e-6);
        assert_eq!(traj.grid[0], 0.0);
        assert_eq!(*traj.grid.last().unwrap(), 1.0);
        assert!(traj.grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn integrate_reports_first_zero() {
        let traj = integrate(&flat(1.0, 1.0, 2.0), 9.0, &ShootConfig::default()).unwrap();
        // cos(3(1 − t)) vanishes at t = 1 − π/6
        let z = traj.first_zero.unwrap();
        assert!((z - (1.0 - PI / 6.0)).abs() < 1e-6, "{z}");
    }

    #[test]
    fn mismatch_at_zero_lambda_is_alpha() {
        let cfg = ShootConfig::default();
        assert_eq!(robin_mismatch(&flat(1.0, 0.7, 2.0), 0.0, &cfg).unwrap(), 0.7);
        assert_eq!(robin_mismatch(&flat(1.0, -0.7, 3.0), 0.0, &cfg).unwrap(), -0.7);
    }

    #[test]
    fn mismatch_sign_brackets_the_eigenvalue() {
        let cfg = ShootConfig::default();
        let prob = flat(1.0, 1.0, 2.0);
        assert!(robin_mismatch(&prob, 0.5, &cfg).unwrap() > 0.0);
        assert!(robin_mismatch(&prob, 1.0, &cfg).unwrap() < 0.0);
        assert!(robin_mismatch(&prob, 50.0, &cfg).unwrap() < -1.0);
    }

    #[test]
    fn huge_negative_lambda_maps_to_positive_sentinel() {
        let prob = flat(5.0, -1.0, 2.0);
        let f = robin_mismatch(&prob, -1e6, &ShootConfig::default()).unwrap();
        assert_eq!(f, OVERFLOW_LIMIT);
    }

    #[test]
    fn config_validation() {
        let prob = flat(1.0, 1.0, 2.0);
        let bad = ShootConfig::default().with_rk_steps(10);
        assert!(solve_first_eigenvalue(&prob, &bad).is_err());
    }

    #[test]
    fn solution_is_normalized_and_signed() {
        let cfg = ShootConfig::default();
        for alpha in [1.0, -1.0] {
            let sol = solve_first_eigenvalue(&flat(1.0, alpha, 3.0), &cfg).unwrap();
            assert_eq!(sol.lambda.signum(), alpha.signum());
            let max = sol.phi.iter().cloned().fold(0.0, f64::max);
            assert_eq!(max, 1.0);
            assert!(sol.diagnostics.lp_scale > 0.0);
            // Robin at 0: sign of φ' matches α away from the Neumann end
            let n = sol.psi.len();
            assert!(sol.psi[..n - 1].iter().all(|&v| v.signum() == alpha.signum()));
        }
    }

    #[test]
    fn double_robin_reflects_half_solution() {
        let cfg = ShootConfig::default();
        let sol = solve_first_eigenvalue(&double_robin_problem(1.0, 1.0, 2.0).unwrap(), &cfg).unwrap();
        let half = solve_first_eigenvalue(&flat(1.0, 1.0, 2.0), &cfg.with_rk_steps(2048)).unwrap();
        assert_eq!(sol.lambda, half.lambda);
        let n = sol.grid.len();
        assert_eq!(sol.grid[n - 1], 2.0);
        for j in 0..n {
            assert_eq!(sol.phi[j], sol.phi[n - 1 - j]);
        }
    }

    #[test]
    fn two_sided_route_matches_reflection() {
        let cfg = ShootConfig::default();
        let prob = double_robin_problem(1.0, -1.0, 2.0).unwrap();
        let a = solve_first_eigenvalue(&prob, &cfg).unwrap();
        let b = solve_two_sided(&prob, &cfg).unwrap();
        assert!((a.lambda - b.lambda).abs() < 1e-9 * a.lambda.abs());
    }

    #[test]
    fn unsupported_configurations() {
        let cfg = ShootConfig::default();
        let dd = SturmProblem::new(
            0.0,
            1.0,
            2.0,
            Weight::Unit,
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Dirichlet,
            false,
            false,
        )
        .unwrap();
        assert!(matches!(solve_first_eigenvalue(&dd, &cfg), Err(Error::Unsupported(_))));
    }

    #[test]
    fn neumann_dirichlet_is_quarter_wave() {
        let prob = SturmProblem::new(
            0.0,
            1.0,
            2.0,
            Weight::Unit,
            BoundaryCondition::Neumann,
            BoundaryCondition::Dirichlet,
            false,
            false,
        )
        .unwrap();
        let sol = solve_first_eigenvalue(&prob, &ShootConfig::default()).unwrap();
        assert!((sol.lambda - (PI / 2.0).powi(2)).abs() < 1e-8);
        assert!(sol.phi[sol.phi.len() - 1] < 1e-6);
    }
}
