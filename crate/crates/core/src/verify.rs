//! Numerical checks of the comparison results and of the identities behind
//! them, reported as [`VerificationReport`] rows.
//!
//! Every report compares `lhs` with `rhs` under a [`Relation`]; the signed
//! slack is the `margin` and a report passes iff `margin >= −tolerance`.
//! Strict inequalities are checked non-strictly and the `strict` flag records
//! whether the margin exceeds ten times the tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coeffs::{self, log_concavity_margin, ModelParams};
use crate::error::{Error, Result};
use crate::numerics;
use crate::oracles;
use crate::problems::{
    boundary_mean_curvature, double_robin_problem, geodesic_ball_problem, inradius_model_problem,
    ricci_lower_bound, warped_product_problem, BoundaryCondition, SturmProblem, WarpingFunction,
    Weight,
};
use crate::rayleigh::{self, RayleighConfig};
use crate::shoot::{self, inverse_momentum, momentum, ShootConfig};
use crate::solution::EigenSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

impl Relation {
    pub fn margin(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Relation::LessEq => rhs - lhs,
            Relation::GreaterEq => lhs - rhs,
            Relation::Equal => -(lhs - rhs).abs(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::LessEq => "<=",
            Relation::GreaterEq => ">=",
            Relation::Equal => "==",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    /// Short label of the geometry or sample family.
    pub case: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// `margin > 10·tolerance`.
    pub strict: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl VerificationReport {
    pub fn check(
        name: &str,
        case: &str,
        params: BTreeMap<String, f64>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        let margin = relation.margin(lhs, rhs);
        let passed = margin >= -tolerance;
        Self {
            name: name.into(),
            case: case.into(),
            params,
            lhs,
            rhs,
            relation,
            margin,
            tolerance,
            passed,
            strict: margin > 10.0 * tolerance,
            status: if passed { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    /// A check whose hypotheses do not hold; it neither passes nor fails.
    pub fn skip(name: &str, case: &str, params: BTreeMap<String, f64>, note: &str) -> Self {
        Self {
            name: name.into(),
            case: case.into(),
            params,
            lhs: 0.0,
            rhs: 0.0,
            relation: Relation::Equal,
            margin: 0.0,
            tolerance: 0.0,
            passed: true,
            strict: false,
            status: Status::Skip,
            note: note.into(),
        }
    }

    /// A check that could not be evaluated because a solver failed.
    pub fn error(name: &str, case: &str, params: BTreeMap<String, f64>, err: &Error) -> Self {
        let mut r = Self::check(name, case, params, f64::NAN, f64::NAN, Relation::Equal, 0.0);
        r.note = err.to_string();
        r
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Whether `margin` equals the relation applied to `(lhs, rhs)`.
    pub fn margin_is_consistent(&self) -> bool {
        let m = self.relation.margin(self.lhs, self.rhs);
        m == self.margin || (m.is_nan() && self.margin.is_nan())
    }

    pub fn sort_key(&self) -> (String, String, String) {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", numerics::format_sig(*v)))
            .collect::<Vec<_>>()
            .join(";");
        (self.name.clone(), self.case.clone(), params)
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Deterministic order: check name, then case, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by_cached_key(|r| r.sort_key());
}

pub fn to_jsonl(reports: &[VerificationReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub const CSV_HEADER: [&str; 12] = [
    "name", "case", "status", "passed", "strict", "relation", "lhs", "rhs", "margin", "tolerance", "params",
    "note",
];

pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        };
        w.write_record([
            r.name.clone(),
            r.case.clone(),
            status.to_string(),
            r.passed.to_string(),
            r.strict.to_string(),
            r.relation.symbol().to_string(),
            numerics::format_sig(r.lhs),
            numerics::format_sig(r.rhs),
            numerics::format_sig(r.margin),
            numerics::format_sig(r.tolerance),
            r.sort_key().2,
            r.note.clone(),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub shoot: ShootConfig,
    pub rayleigh: RayleighConfig,
    /// Mesh pair for the Rayleigh refinement check.
    pub refine: (usize, usize),
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            shoot: ShootConfig::default(),
            rayleigh: RayleighConfig::default(),
            refine: (1000, 2000),
        }
    }
}

// ---------------------------------------------------------------------------
// Picone

/// Pointwise Picone identity for `u ≥ 0`, `v > 0` on a uniform grid.
///
/// `L = |u'|^p + (p−1)(u/v)^p |v'|^p − p (u/v)^{p−1} |v'|^{p−2} v' u'` and
/// `R = |u'|^p − (u^p / v^{p−1})' |v'|^{p−2} v'`, with derivatives from
/// fourth-order differences. The report's `lhs` is the worst of
/// `max |L − R|` and `−min L`; both are also stored in `params`.
pub fn picone_check(u: &[f64], v: &[f64], grid: &[f64], p: f64, tol: f64) -> Result<VerificationReport> {
    let n = grid.len();
    if u.len() != n || v.len() != n || n < 5 {
        return Err(Error::Domain("picone_check needs equal-length samples (at least 5)".into()));
    }
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    if grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(Error::Domain("picone_check needs a uniform grid".into()));
    }
    if let Some(bad) = v.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::Domain(format!("v must be positive, found {bad}")));
    }
    if let Some(bad) = u.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::Domain(format!("u must be nonnegative, found {bad}")));
    }
    let du = numerics::derivative4(h, u);
    let dv = numerics::derivative4(h, v);
    let composite: Vec<f64> = u.iter().zip(v).map(|(a, b)| a.powf(p) / b.powf(p - 1.0)).collect();
    let dcomposite = numerics::derivative4(h, &composite);

    let mut gap: f64 = 0.0;
    let mut min_l = f64::INFINITY;
    let mut max_abs_l: f64 = 0.0;
    for j in 0..n {
        let ratio = u[j] / v[j];
        let flux = momentum(dv[j], p);
        let l = du[j].abs().powf(p) + (p - 1.0) * ratio.powf(p) * dv[j].abs().powf(p)
            - p * ratio.powf(p - 1.0) * flux * du[j];
        let r = du[j].abs().powf(p) - dcomposite[j] * flux;
        gap = gap.max((l - r).abs());
        min_l = min_l.min(l);
        max_abs_l = max_abs_l.max(l.abs());
    }
    let worst = gap.max(-min_l);
    Ok(VerificationReport::check(
        "picone",
        "",
        params(&[("p", p), ("identity_gap", gap), ("min_l", min_l), ("max_abs_l", max_abs_l)]),
        worst,
        0.0,
        Relation::LessEq,
        tol,
    ))
}

// ---------------------------------------------------------------------------
// Barta

/// Pointwise ratio `(−(w ψ_v)'/w) / |v|^{p−2} v` at interior grid nodes.
/// `psi` defaults to the momentum of the 3-point derivative of `v`.
pub fn barta_ratio(problem: &SturmProblem, grid: &[f64], v: &[f64], psi: Option<&[f64]>) -> Result<Vec<f64>> {
    let n = grid.len();
    if v.len() != n || n < 3 || psi.is_some_and(|s| s.len() != n) {
        return Err(Error::Domain("barta trial samples must match the grid".into()));
    }
    if let Some(bad) = v.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::Domain(format!("trial function must be positive, found {bad}")));
    }
    let p = problem.p();
    let psi: Vec<f64> = match psi {
        Some(s) => s.to_vec(),
        None => numerics::derivative(grid, v).into_iter().map(|d| momentum(d, p)).collect(),
    };
    let dpsi = numerics::derivative(grid, &psi);
    (1..n - 1)
        .map(|j| Ok((-dpsi[j] - problem.log_derivative(grid[j])? * psi[j]) / momentum(v[j], p)))
        .collect()
}

/// Sandwich `inf ratio ≤ λ ≤ sup ratio` for a positive trial function that
/// satisfies the boundary conditions, with `λ` from the shooting solver.
///
/// `lhs = max(inf − λ, λ − sup)`, so the margin is the distance of `λ` to the
/// nearer end of the ratio range. The tolerance is `tol·max(1, |λ|)`.
pub fn barta_sandwich(
    problem: &SturmProblem,
    grid: &[f64],
    v: &[f64],
    psi: Option<&[f64]>,
    config: &ShootConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let ratio = barta_ratio(problem, grid, v, psi)?;
    let lambda = shoot::solve_first_eigenvalue(problem, config)?.lambda;
    let inf = ratio.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = ratio.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(VerificationReport::check(
        "barta.sandwich",
        "",
        params(&[("lambda", lambda), ("inf", inf), ("sup", sup), ("p", problem.p())]),
        (inf - lambda).max(lambda - sup),
        0.0,
        Relation::LessEq,
        tol * lambda.abs().max(1.0),
    ))
}

/// `sin²(π(t−a)/L)`: vanishes with its derivative at both ends, so adding it
/// to a trial function leaves every boundary condition intact.
fn bump(problem: &SturmProblem, t: f64) -> (f64, f64) {
    let k = PI / problem.length();
    let s = k * (t - problem.a());
    (s.sin().powi(2), k * (2.0 * s).sin())
}

// ---------------------------------------------------------------------------
// Geometries used by the suites

/// Named one-dimensional problems; `alpha` and `p` are supplied per check.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// `w ≡ 1` on `[0, R]`, Robin at 0.
    FlatInterval { r: f64 },
    /// Geodesic ball of radius `r0` in `M^n(κ)`, Robin at `r0`.
    Ball { kappa: f64, n: u32, r0: f64 },
    /// Ball reflected by `t ↦ r0 − t` so the Robin end sits at 0.
    ReflectedBall { kappa: f64, n: u32, r0: f64 },
    /// `(κ, Λ)` inradius model on `[0, R]`.
    Model { kappa: f64, lambda_mc: f64, n: u32, r: f64 },
    /// Warped ball `dr² + f² g_{S^{n−1}}` with a pole at 0.
    Warped { f: WarpingFunction, n: u32, r0: f64 },
}

impl Geometry {
    pub fn problem(&self, alpha: f64, p: f64) -> Result<SturmProblem> {
        match self {
            Geometry::FlatInterval { r } => {
                inradius_model_problem(&ModelParams::new(0.0, 0.0, 2)?, *r, alpha, p)
            }
            Geometry::Ball { kappa, n, r0 } => geodesic_ball_problem(*kappa, *n, *r0, alpha, p),
            Geometry::ReflectedBall { kappa, n, r0 } => {
                Ok(geodesic_ball_problem(*kappa, *n, *r0, alpha, p)?.reflected())
            }
            Geometry::Model { kappa, lambda_mc, n, r } => {
                inradius_model_problem(&ModelParams::new(*kappa, *lambda_mc, *n)?, *r, alpha, p)
            }
            Geometry::Warped { f, n, r0 } => warped_product_problem(f, *n, *r0, alpha, p, true),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Geometry::FlatInterval { r } => format!("interval(R={r})"),
            Geometry::Ball { kappa, n, r0 } => format!("ball(kappa={kappa},n={n},R0={r0})"),
            Geometry::ReflectedBall { kappa, n, r0 } => {
                format!("reflected_ball(kappa={kappa},n={n},R0={r0})")
            }
            Geometry::Model { kappa, lambda_mc, n, r } => {
                format!("model(kappa={kappa},Lambda={lambda_mc},n={n},R={r})")
            }
            Geometry::Warped { f, n, r0 } => format!("warped({},n={n},R0={r0})", warping_label(f)),
        }
    }
}

fn warping_label(f: &WarpingFunction) -> String {
    match f {
        WarpingFunction::SpaceForm { kappa } => format!("sn[{kappa}]"),
        WarpingFunction::Polynomial { coefficients } => format!(
            "poly[{}]",
            coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        ),
        WarpingFunction::Exponential { scale, rate } => format!("exp[{scale} {rate}]"),
    }
}

// ---------------------------------------------------------------------------
// Proposition-level checks

/// Sign, Riccati and (on strictly log-concave weights) monotonicity checks
/// for the first eigenfunction of a problem with Robin at the left end and a
/// Neumann (possibly singular) right end.
///
/// With `z = ψ/φ^{p−1} = |u'/u|^{p−2} u'/u` the log-derivative satisfies
/// `z' + (w'/w) z + (p−1)|z|^q + λ = 0`. On strictly log-concave weights
/// `u'/u` is monotone (decreasing for `α > 0`, increasing for `α < 0`) and
/// `|z| ≤ |α|`; otherwise those two checks are reported as skipped.
pub fn prop21_suite(
    problem: &SturmProblem,
    solution: &EigenSolution,
    case: &str,
    tol: f64,
) -> Result<Vec<VerificationReport>> {
    let alpha = match (problem.bc_left(), problem.bc_right()) {
        (BoundaryCondition::Robin { alpha }, BoundaryCondition::Neumann) => alpha,
        _ => {
            return Err(Error::Domain(
                "prop21_suite needs Robin at the left end and Neumann at the right".into(),
            ))
        }
    };
    let p = problem.p();
    let q = p / (p - 1.0);
    let (grid, phi, psi) = (&solution.grid, &solution.phi, &solution.psi);
    let n = grid.len();
    let lambda = solution.lambda;
    let base = params(&[("alpha", alpha), ("p", p), ("lambda", lambda)]);
    let sign = alpha.signum();
    let mut out = Vec::new();

    let min_phi = phi.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(VerificationReport::check(
        "prop21.positive",
        case,
        base.clone(),
        min_phi,
        0.0,
        Relation::GreaterEq,
        0.0,
    ));

    let min_signed_slope = psi[..n - 1].iter().map(|s| sign * s).fold(f64::INFINITY, f64::min);
    out.push(VerificationReport::check(
        "prop21.sign",
        case,
        base.clone(),
        min_signed_slope,
        0.0,
        Relation::GreaterEq,
        0.0,
    ));

    let z: Vec<f64> = psi.iter().zip(phi).map(|(s, f)| s / momentum(*f, p)).collect();
    let dz = numerics::derivative(grid, &z);
    let mut riccati: f64 = 0.0;
    for j in 1..n - 1 {
        let r = dz[j] + problem.log_derivative(grid[j])? * z[j] + (p - 1.0) * z[j].abs().powf(q) + lambda;
        riccati = riccati.max(r.abs());
    }
    out.push(VerificationReport::check(
        "prop21.riccati",
        case,
        base.clone(),
        riccati / lambda.abs().max(1.0),
        0.0,
        Relation::LessEq,
        tol,
    ));

    let concavity = log_concavity_margin(problem.weight(), problem.a(), problem.b(), 1024)?;
    let mut gated = base.clone();
    gated.insert("log_concavity_margin".into(), concavity);
    if concavity < 0.0 {
        let ratio: Vec<f64> = z.iter().map(|v| inverse_momentum(*v, p)).collect();
        let scale = ratio.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        // decreasing for α > 0 means sign·(r_{j+1} − r_j) ≤ 0
        let rise = ratio
            .windows(2)
            .map(|w| sign * (w[1] - w[0]))
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(VerificationReport::check(
            "prop21.monotone",
            case,
            gated.clone(),
            rise / scale,
            0.0,
            Relation::LessEq,
            tol,
        ));
        let max_z = z.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        out.push(VerificationReport::check(
            "prop21.bound",
            case,
            gated,
            max_z,
            alpha.abs(),
            Relation::LessEq,
            1e-6,
        ));
    } else {
        let note = "weight is not strictly log-concave";
        out.push(VerificationReport::skip("prop21.monotone", case, gated.clone(), note));
        out.push(VerificationReport::skip("prop21.bound", case, gated, note));
    }
    Ok(out)
}

/// Equal-parameter Robin problem on `[0, 2R]` against the Robin–Neumann
/// problem on `[0, R]`.
///
/// The double problem is solved by the even reflection of a midpoint
/// Neumann launch (`prop22.identity`) and independently by shooting across
/// the whole interval from the left Robin end (`prop22.two_sided`); the
/// latter eigenfunction is tested for `t ↦ 2R − t` symmetry.
pub fn prop22_identity(r: f64, alpha: f64, p: f64, config: &ShootConfig) -> Result<Vec<VerificationReport>> {
    let case = format!("R={r},alpha={alpha},p={p}");
    let base = params(&[("R", r), ("alpha", alpha), ("p", p)]);
    let half = inradius_model_problem(&ModelParams::new(0.0, 0.0, 2)?, r, alpha, p)?;
    let double = double_robin_problem(r, alpha, p)?;
    let half_sol = shoot::solve_first_eigenvalue(&half, config)?;
    let reflected = shoot::solve_first_eigenvalue(&double, config)?;
    let two_sided = shoot::solve_two_sided(&double, config)?;
    let scale = half_sol.lambda.abs().max(1.0);

    let mut out = vec![
        VerificationReport::check(
            "prop22.identity",
            &case,
            base.clone(),
            reflected.lambda,
            half_sol.lambda,
            Relation::Equal,
            1e-8 * scale,
        ),
        VerificationReport::check(
            "prop22.two_sided",
            &case,
            base.clone(),
            two_sided.lambda,
            half_sol.lambda,
            Relation::Equal,
            1e-8 * scale,
        ),
    ];
    let phi = &two_sided.phi;
    let n = phi.len();
    let asymmetry = (0..n).map(|j| (phi[j] - phi[n - 1 - j]).abs()).fold(0.0, f64::max);
    out.push(VerificationReport::check(
        "prop22.symmetry",
        &case,
        base,
        asymmetry,
        0.0,
        Relation::LessEq,
        1e-6,
    ));
    Ok(out)
}

/// Strict decrease of the interval eigenvalue in `R` for `α > 0`.
/// For `α < 0` the hypothesis fails and a single skip is returned.
pub fn radius_monotonicity(radii: &[f64], alpha: f64, p: f64, config: &ShootConfig) -> Result<Vec<VerificationReport>> {
    if alpha <= 0.0 {
        return Ok(vec![VerificationReport::skip(
            "monotone.radius",
            &format!("alpha={alpha},p={p}"),
            params(&[("alpha", alpha), ("p", p)]),
            "decrease in R needs alpha > 0",
        )]);
    }
    let lambdas = radii
        .iter()
        .map(|&r| Ok(shoot::solve_first_eigenvalue(&Geometry::FlatInterval { r }.problem(alpha, p)?, config)?.lambda))
        .collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for i in 0..radii.len().saturating_sub(1) {
        let tol = config.lambda_tol * 10.0 * lambdas[i].abs().max(1.0);
        out.push(VerificationReport::check(
            "monotone.radius",
            &format!("alpha={alpha},p={p}"),
            params(&[("alpha", alpha), ("p", p), ("R_small", radii[i]), ("R_large", radii[i + 1])]),
            lambdas[i + 1],
            lambdas[i],
            Relation::LessEq,
            tol,
        ));
    }
    Ok(out)
}

/// Strict increase of `λ` in `α` at a fixed geometry, plus `sign λ = sign α`.
pub fn alpha_monotonicity(
    geometry: &Geometry,
    alphas: &[f64],
    p: f64,
    config: &ShootConfig,
) -> Result<Vec<VerificationReport>> {
    let case = format!("{},p={p}", geometry.label());
    let lambdas = alphas
        .iter()
        .map(|&a| Ok(shoot::solve_first_eigenvalue(&geometry.problem(a, p)?, config)?.lambda))
        .collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for (a, l) in alphas.iter().zip(&lambdas) {
        out.push(VerificationReport::check(
            "monotone.sign",
            &case,
            params(&[("alpha", *a), ("p", p), ("lambda", *l)]),
            a.signum() * l,
            0.0,
            Relation::GreaterEq,
            0.0,
        ));
    }
    for i in 0..alphas.len().saturating_sub(1) {
        let tol = config.lambda_tol * 10.0 * lambdas[i].abs().max(1.0);
        out.push(VerificationReport::check(
            "monotone.alpha",
            &case,
            params(&[("p", p), ("alpha_low", alphas[i]), ("alpha_high", alphas[i + 1])]),
            lambdas[i + 1],
            lambdas[i],
            Relation::GreaterEq,
            tol,
        ));
    }
    Ok(out)
}

/// `α = 10⁶` interval eigenvalue within 1% of `(p−1)(π_p/(2R))^p`.
pub fn dirichlet_limit(r: f64, p: f64, config: &ShootConfig) -> Result<VerificationReport> {
    let alpha = 1e6;
    let lambda = shoot::solve_first_eigenvalue(&Geometry::FlatInterval { r }.problem(alpha, p)?, config)?.lambda;
    let limit = oracles::dirichlet_neumann_limit(r, p);
    Ok(VerificationReport::check(
        "monotone.dirichlet_limit",
        &format!("R={r},p={p}"),
        params(&[("R", r), ("p", p), ("alpha", alpha), ("lambda", lambda), ("limit", limit)]),
        (lambda / limit - 1.0).abs(),
        0.01,
        Relation::LessEq,
        0.0,
    ))
}

/// Balls of equal radius in space forms: a larger curvature lower bound
/// gives a smaller eigenvalue for `α > 0` and a larger one for `α < 0`.
/// Every ordered pair of the grid is reported, including `κ₁ = κ₀`.
pub fn cheng_comparison_suite(
    kappas: &[f64],
    n: u32,
    r0: f64,
    alpha: f64,
    p: f64,
    config: &ShootConfig,
) -> Result<Vec<VerificationReport>> {
    let mut sorted = kappas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let case = format!("n={n},R0={r0},alpha={alpha},p={p}");
    let solve = |kappa: f64| -> Result<f64> {
        Ok(shoot::solve_first_eigenvalue(&geodesic_ball_problem(kappa, n, r0, alpha, p)?, config)?.lambda)
    };
    let lambdas = sorted.iter().map(|&k| solve(k)).collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        for j in i..sorted.len() {
            let (k0, k1) = (sorted[i], sorted[j]);
            let ps = params(&[("kappa0", k0), ("kappa1", k1), ("n", n as f64), ("R0", r0), ("alpha", alpha), ("p", p)]);
            let report = if i == j {
                // independent re-solve of the identical problem
                VerificationReport::check("cheng.equal", &case, ps, solve(k1)?, lambdas[i], Relation::Equal, 1e-9)
            } else {
                let relation = if alpha > 0.0 { Relation::LessEq } else { Relation::GreaterEq };
                let tol = config.lambda_tol * 10.0 * lambdas[i].abs().max(1.0);
                VerificationReport::check("cheng.order", &case, ps, lambdas[j], lambdas[i], relation, tol)
            };
            out.push(report);
        }
    }
    Ok(out)
}

fn model_eigenvalue(kappa: f64, lambda_mc: f64, n: u32, r: f64, alpha: f64, p: f64, config: &ShootConfig) -> Result<f64> {
    let model = inradius_model_problem(&ModelParams::new(kappa, lambda_mc, n)?, r, alpha, p)?;
    Ok(shoot::solve_first_eigenvalue(&model, config)?.lambda)
}

/// Comparison with the `(κ, Λ)` inradius model.
///
/// For a space-form ball the model built from its exact curvature data must
/// reproduce the eigenvalue (`theoremC.equal`), the Rayleigh approximation of
/// the model must approach it under mesh doubling (`theoremC.refine`), and
/// models with a slackened `Λ − 0.3` or `κ − 0.5` must bound it from below
/// for `α > 0` (above for `α < 0`). For a warped ball the curvature data are
/// extracted numerically and only the bound is checked.
pub fn theorem_c_suite(geometry: &Geometry, alpha: f64, p: f64, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let case = format!("{},alpha={alpha},p={p}", geometry.label());
    let (kappa, lambda_mc, n, r0, exact) = match geometry {
        Geometry::Ball { kappa, n, r0 } => {
            let mc = coeffs::sn_prime(*kappa, *r0) / coeffs::sn(*kappa, *r0);
            (*kappa, mc, *n, *r0, true)
        }
        Geometry::Warped { f, n, r0 } => {
            (ricci_lower_bound(f, *n, *r0)?, boundary_mean_curvature(f, *n, *r0)?, *n, *r0, false)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "theorem_c_suite needs a ball geometry, got {}",
                geometry.label()
            )))
        }
    };
    let sc = &config.shoot;
    let actual = shoot::solve_first_eigenvalue(&geometry.problem(alpha, p)?, sc)?.lambda;
    let scale = actual.abs().max(1.0);
    let base = params(&[("kappa", kappa), ("Lambda", lambda_mc), ("n", n as f64), ("R", r0), ("alpha", alpha), ("p", p)]);
    let bound = if alpha > 0.0 { Relation::GreaterEq } else { Relation::LessEq };
    let mut out = Vec::new();

    if !exact {
        let model = model_eigenvalue(kappa, lambda_mc, n, r0, alpha, p, sc)?;
        out.push(
            VerificationReport::check("theoremC.bound", &case, base, actual, model, bound, 1e-6 * scale)
                .with_note("curvature bounds extracted from the warping function"),
        );
        return Ok(out);
    }

    let model = model_eigenvalue(kappa, lambda_mc, n, r0, alpha, p, sc)?;
    out.push(VerificationReport::check("theoremC.equal", &case, base.clone(), actual, model, Relation::Equal, 1e-5 * scale));

    let model_problem = inradius_model_problem(&ModelParams::new(kappa, lambda_mc, n)?, r0, alpha, p)?;
    let (m1, m2) = config.refine;
    let coarse = (rayleigh::solve(&model_problem, m1, &config.rayleigh)?.lambda - actual).abs();
    let fine = (rayleigh::solve(&model_problem, m2, &config.rayleigh)?.lambda - actual).abs();
    let mut refine = base.clone();
    refine.insert("margin_coarse".into(), coarse);
    refine.insert("margin_fine".into(), fine);
    refine.insert("m_coarse".into(), m1 as f64);
    refine.insert("m_fine".into(), m2 as f64);
    out.push(VerificationReport::check("theoremC.refine", &case, refine, coarse / fine, 1.5, Relation::GreaterEq, 0.0));

    for (name, k, mc) in [
        ("theoremC.slack_Lambda", kappa, lambda_mc - 0.3),
        ("theoremC.slack_kappa", kappa - 0.5, lambda_mc),
    ] {
        let slack = model_eigenvalue(k, mc, n, r0, alpha, p, sc)?;
        let mut ps = base.clone();
        ps.insert("kappa_model".into(), k);
        ps.insert("Lambda_model".into(), mc);
        out.push(VerificationReport::check(name, &case, ps, actual, slack, bound, 1e-6 * scale));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Default suite

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PiconeFamily {
    /// `u = c v`.
    Proportional { c: f64 },
    /// Smooth positive trigonometric pair indexed by `k`.
    Smooth { k: u32 },
    /// `u = (t − ½)⁴`, vanishing at an interior point.
    WithZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BartaTrial {
    Eigenfunction,
    /// Eigenfunction plus `0.05·sin²(π(t−a)/L)`.
    Perturbed,
    /// `v ≡ 1` on the Neumann interval.
    NeumannConstant,
}

/// One unit of work of the default suite.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Picone { p: f64, family: PiconeFamily },
    Barta { geometry: Geometry, alpha: f64, p: f64, trial: BartaTrial },
    Prop21 { geometry: Geometry, alpha: f64, p: f64 },
    Prop22 { r: f64, alpha: f64, p: f64 },
    Radius { radii: Vec<f64>, alpha: f64, p: f64 },
    Alpha { geometry: Geometry, alphas: Vec<f64>, p: f64 },
    DirichletLimit { r: f64, p: f64 },
    Cheng { kappas: Vec<f64>, n: u32, r0: f64, alpha: f64, p: f64 },
    TheoremC { geometry: Geometry, alpha: f64, p: f64 },
}

const PICONE_NODES: usize = 2001;

/// Smooth positive sample pair on `[0, 1]` parameterized by `k`.
pub fn picone_pair(k: u32) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let grid = numerics::uniform_grid(0.0, 1.0, PICONE_NODES - 1);
    let a = 0.3 + 0.05 * (k % 7) as f64;
    let b = 1.0 + (k % 5) as f64;
    let c = 0.5 + 0.25 * (k % 3) as f64;
    let u = grid.iter().map(|t| 1.2 + a * (b * t + 0.1 * k as f64).sin()).collect();
    let v = grid.iter().map(|t| 1.0 + 0.5 * t * t + 0.4 * (c * PI * t).cos()).collect();
    (grid, u, v)
}

fn run_picone(p: f64, family: PiconeFamily) -> Result<Vec<VerificationReport>> {
    let (grid, u, v, label) = match family {
        PiconeFamily::Proportional { c } => {
            let (grid, _, v) = picone_pair(3);
            let u = v.iter().map(|x| c * x).collect();
            (grid, u, v, format!("proportional(c={c})"))
        }
        PiconeFamily::Smooth { k } => {
            let (grid, u, v) = picone_pair(k);
            (grid, u, v, format!("smooth(k={k})"))
        }
        PiconeFamily::WithZero => {
            let (grid, _, v) = picone_pair(1);
            let u = grid.iter().map(|t| (t - 0.5_f64).powi(4)).collect();
            (grid, u, v, "with_zero".to_string())
        }
    };
    let mut r = picone_check(&u, &v, &grid, p, 1e-8)?;
    r.case = label;
    Ok(vec![r])
}

fn run_barta(geometry: &Geometry, alpha: f64, p: f64, trial: BartaTrial, config: &ShootConfig) -> Result<Vec<VerificationReport>> {
    let tol = 1e-4;
    if trial == BartaTrial::NeumannConstant {
        let problem = SturmProblem::new(0.0, 1.0, p, Weight::Unit, BoundaryCondition::Neumann, BoundaryCondition::Neumann, false, false)?;
        let grid = numerics::uniform_grid(0.0, 1.0, 256);
        let v = vec![1.0; grid.len()];
        let mut r = barta_sandwich(&problem, &grid, &v, None, config, tol)?;
        r.name = "barta.sandwich".into();
        r.case = format!("neumann_constant,p={p}");
        return Ok(vec![r]);
    }
    let problem = geometry.problem(alpha, p)?;
    let sol = shoot::solve_first_eigenvalue(&problem, config)?;
    let case = format!("{},alpha={alpha},p={p}", geometry.label());
    match trial {
        BartaTrial::Eigenfunction => {
            let ratio = barta_ratio(&problem, &sol.grid, &sol.phi, Some(&sol.psi))?;
            let inf = ratio.iter().cloned().fold(f64::INFINITY, f64::min);
            let sup = ratio.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut sandwich = barta_sandwich(&problem, &sol.grid, &sol.phi, Some(&sol.psi), config, tol)?;
            sandwich.case = format!("eigenfunction,{case}");
            let spread = VerificationReport::check(
                "barta.spread",
                &format!("eigenfunction,{case}"),
                params(&[("lambda", sol.lambda), ("inf", inf), ("sup", sup), ("p", p)]),
                (sup - inf) / sol.lambda.abs().max(1.0),
                0.0,
                Relation::LessEq,
                tol,
            );
            Ok(vec![sandwich, spread])
        }
        BartaTrial::Perturbed => {
            let mut v = Vec::with_capacity(sol.grid.len());
            let mut psi = Vec::with_capacity(sol.grid.len());
            for ((t, f), s) in sol.grid.iter().zip(&sol.phi).zip(&sol.psi) {
                let (b, db) = bump(&problem, *t);
                v.push(f + 0.05 * b);
                psi.push(momentum(inverse_momentum(*s, p) + 0.05 * db, p));
            }
            let mut r = barta_sandwich(&problem, &sol.grid, &v, Some(&psi), config, 1e-6)?;
            r.case = format!("perturbed,{case}");
            Ok(vec![r])
        }
        BartaTrial::NeumannConstant => unreachable!(),
    }
}

/// Executes one check. Solver failures are returned as errors.
pub fn run_check(check: &Check, config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let sc = &config.shoot;
    match check {
        Check::Picone { p, family } => run_picone(*p, *family),
        Check::Barta { geometry, alpha, p, trial } => run_barta(geometry, *alpha, *p, *trial, sc),
        Check::Prop21 { geometry, alpha, p } => {
            let problem = geometry.problem(*alpha, *p)?;
            let sol = shoot::solve_first_eigenvalue(&problem, sc)?;
            prop21_suite(&problem, &sol, &format!("{},alpha={alpha},p={p}", geometry.label()), 1e-4)
        }
        Check::Prop22 { r, alpha, p } => prop22_identity(*r, *alpha, *p, sc),
        Check::Radius { radii, alpha, p } => radius_monotonicity(radii, *alpha, *p, sc),
        Check::Alpha { geometry, alphas, p } => alpha_monotonicity(geometry, alphas, *p, sc),
        Check::DirichletLimit { r, p } => Ok(vec![dirichlet_limit(*r, *p, sc)?]),
        Check::Cheng { kappas, n, r0, alpha, p } => cheng_comparison_suite(kappas, *n, *r0, *alpha, *p, sc),
        Check::TheoremC { geometry, alpha, p } => theorem_c_suite(geometry, *alpha, *p, config),
    }
}

/// The standard parameter matrix of every check.
pub fn default_checks() -> Vec<Check> {
    let ps = [1.5, 2.0, 3.0];
    let signs = [-1.0, 1.0];
    let flat = Geometry::FlatInterval { r: 1.0 };
    let disk = Geometry::Ball { kappa: 0.0, n: 2, r0: 1.0 };
    let hyperbolic = Geometry::Ball { kappa: -1.0, n: 3, r0: 1.0 };
    let log_linear = Geometry::Model { kappa: -1.0, lambda_mc: 1.0, n: 3, r: 1.0 };
    let mut checks = Vec::new();

    for &p in &ps {
        checks.push(Check::Picone { p, family: PiconeFamily::Proportional { c: 2.5 } });
        checks.push(Check::Picone { p, family: PiconeFamily::WithZero });
        for k in 0..4 {
            checks.push(Check::Picone { p, family: PiconeFamily::Smooth { k } });
        }
        checks.push(Check::Barta { geometry: flat.clone(), alpha: 0.0, p, trial: BartaTrial::NeumannConstant });
        for &alpha in &signs {
            for g in [&flat, &disk, &hyperbolic] {
                for trial in [BartaTrial::Eigenfunction, BartaTrial::Perturbed] {
                    checks.push(Check::Barta { geometry: g.clone(), alpha, p, trial });
                }
            }
            for g in [
                flat.clone(),
                log_linear.clone(),
                Geometry::ReflectedBall { kappa: 1.0, n: 3, r0: 1.0 },
                Geometry::ReflectedBall { kappa: 0.0, n: 2, r0: 1.0 },
                Geometry::ReflectedBall { kappa: -1.0, n: 3, r0: 1.0 },
            ] {
                checks.push(Check::Prop21 { geometry: g, alpha, p });
            }
            for r in [0.5, 1.0] {
                checks.push(Check::Prop22 { r, alpha, p });
            }
            checks.push(Check::Cheng { kappas: vec![-1.0, -0.5, 0.0, 0.5, 1.0], n: 2, r0: 1.0, alpha, p });
            checks.push(Check::Radius { radii: vec![0.5, 1.0, 2.0], alpha, p });
        }
        for g in [&flat, &disk, &hyperbolic] {
            checks.push(Check::Alpha { geometry: g.clone(), alphas: vec![-1.0, -0.1, 0.1, 1.0], p });
        }
        checks.push(Check::DirichletLimit { r: 1.0, p });
    }
    for &p in &[2.0, 3.0] {
        for &alpha in &signs {
            for g in [&disk, &hyperbolic] {
                checks.push(Check::TheoremC { geometry: g.clone(), alpha, p });
            }
        }
    }
    let warped = Geometry::Warped {
        f: WarpingFunction::Polynomial { coefficients: vec![0.0, 1.0, 0.0, 0.1] },
        n: 2,
        r0: 1.0,
    };
    for &p in &ps {
        for &alpha in &signs {
            checks.push(Check::TheoremC { geometry: warped.clone(), alpha, p });
        }
    }
    checks
}

/// Runs every default check sequentially and returns the sorted reports.
pub fn default_suite(config: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for check in default_checks() {
        reports.extend(run_check(&check, config)?);
    }
    sort_reports(&mut reports);
    Ok(reports)
}

/// `true` iff no report failed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(alpha: f64, p: f64) -> SturmProblem {
        Geometry::FlatInterval { r: 1.0 }.problem(alpha, p).unwrap()
    }

    #[test]
    fn margin_and_pass_rule() {
        let r = VerificationReport::check("x", "", BTreeMap::new(), 1.0, 2.0, Relation::LessEq, 0.0);
        assert_eq!(r.margin, 1.0);
        assert!(r.passed && r.strict && r.margin_is_consistent());
        let r = VerificationReport::check("x", "", BTreeMap::new(), 2.0, 1.0, Relation::LessEq, 0.5);
        assert!(!r.passed);
        assert_eq!(r.status, Status::Fail);
        let r = VerificationReport::check("x", "", BTreeMap::new(), 1.0, 1.0 + 1e-9, Relation::Equal, 1e-8);
        assert!(r.passed && !r.strict);
        let s = VerificationReport::skip("x", "", BTreeMap::new(), "why");
        assert!(s.passed && s.status == Status::Skip && s.margin_is_consistent());
        let e = VerificationReport::error("x", "", BTreeMap::new(), &Error::Domain("bad".into()));
        assert!(!e.passed && e.margin_is_consistent());
    }

    #[test]
    fn jsonl_and_csv_have_one_row_per_report() {
        let reports = vec![
            VerificationReport::check("b", "c,1", params(&[("p", 2.0)]), 1.0, 2.0, Relation::LessEq, 0.0),
            VerificationReport::skip("a", "", BTreeMap::new(), "hypothesis"),
        ];
        let jsonl = to_jsonl(&reports).unwrap();
        assert_eq!(jsonl.lines().count(), 2);
        let back: VerificationReport = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(back, reports[0]);
        let csv = to_csv(&reports).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("b,\"c,1\",pass,true,true,<=,"));
    }

    #[test]
    fn sorting_is_by_name_then_case() {
        let mut reports = vec![
            VerificationReport::skip("b", "x", BTreeMap::new(), ""),
            VerificationReport::skip("a", "z", BTreeMap::new(), ""),
            VerificationReport::skip("a", "y", BTreeMap::new(), ""),
        ];
        sort_reports(&mut reports);
        let keys: Vec<_> = reports.iter().map(|r| (r.name.as_str(), r.case.as_str())).collect();
        assert_eq!(keys, [("a", "y"), ("a", "z"), ("b", "x")]);
    }

    #[test]
    fn picone_vanishes_for_proportional_pairs() {
        let (grid, _, v) = picone_pair(2);
        for p in [1.5, 2.0, 3.0] {
            let u: Vec<f64> = v.iter().map(|x| 0.7 * x).collect();
            let r = picone_check(&u, &v, &grid, p, 1e-8).unwrap();
            assert!(r.params["max_abs_l"] < 1e-10, "{p}: {:?}", r.params);
            assert!(r.passed);
        }
    }

    #[test]
    fn picone_rejects_nonpositive_v() {
        let (grid, u, mut v) = picone_pair(0);
        v[10] = 0.0;
        assert!(matches!(picone_check(&u, &v, &grid, 2.0, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn picone_allows_zero_of_u() {
        let r = run_picone(1.5, PiconeFamily::WithZero).unwrap();
        assert!(r[0].passed, "{:?}", r[0]);
        assert!(r[0].params["min_l"] > -1e-10);
    }

    #[test]
    fn barta_with_the_eigenfunction_is_tight() {
        let cfg = ShootConfig::default();
        let reports = run_barta(&Geometry::FlatInterval { r: 1.0 }, 1.0, 2.0, BartaTrial::Eigenfunction, &cfg).unwrap();
        assert!(reports.iter().all(|r| r.passed), "{reports:?}");
        let spread = &reports[1];
        assert!(spread.lhs < 1e-4);
    }

    #[test]
    fn barta_perturbed_is_a_strict_sandwich() {
        let cfg = ShootConfig::default();
        let r = run_barta(&Geometry::Ball { kappa: 0.0, n: 2, r0: 1.0 }, 1.0, 3.0, BartaTrial::Perturbed, &cfg).unwrap();
        assert!(r[0].passed && r[0].strict, "{:?}", r[0]);
        assert!(r[0].params["inf"] < r[0].params["lambda"]);
        assert!(r[0].params["sup"] > r[0].params["lambda"]);
    }

    #[test]
    fn barta_constant_on_neumann_interval() {
        let r = run_barta(&Geometry::FlatInterval { r: 1.0 }, 0.0, 2.5, BartaTrial::NeumannConstant, &ShootConfig::default())
            .unwrap();
        assert_eq!(r[0].params["inf"], 0.0);
        assert_eq!(r[0].params["sup"], 0.0);
        assert_eq!(r[0].params["lambda"], 0.0);
        assert!(r[0].passed);
    }

    #[test]
    fn barta_rejects_nonpositive_trial() {
        let prob = flat(1.0, 2.0);
        let grid = numerics::uniform_grid(0.0, 1.0, 16);
        let mut v = vec![1.0; 17];
        v[3] = -0.1;
        assert!(barta_sandwich(&prob, &grid, &v, None, &ShootConfig::default(), 1e-4).is_err());
    }

    #[test]
    fn prop21_skips_on_log_linear_weight() {
        let geometry = Geometry::Model { kappa: -1.0, lambda_mc: 1.0, n: 3, r: 1.0 };
        let reports = run_check(&Check::Prop21 { geometry, alpha: 1.0, p: 2.0 }, &VerifyConfig::default()).unwrap();
        let status: BTreeMap<_, _> = reports.iter().map(|r| (r.name.as_str(), r.status)).collect();
        assert_eq!(status["prop21.sign"], Status::Pass);
        assert_eq!(status["prop21.riccati"], Status::Pass);
        assert_eq!(status["prop21.monotone"], Status::Skip);
        assert_eq!(status["prop21.bound"], Status::Skip);
    }

    #[test]
    fn prop21_on_reflected_sphere_weight_passes_everything() {
        let geometry = Geometry::ReflectedBall { kappa: 1.0, n: 3, r0: 1.0 };
        for alpha in [1.0, -1.0] {
            let reports = run_check(&Check::Prop21 { geometry: geometry.clone(), alpha, p: 2.0 }, &VerifyConfig::default()).unwrap();
            assert_eq!(reports.len(), 5);
            assert!(reports.iter().all(|r| r.status == Status::Pass), "{reports:#?}");
        }
    }

    #[test]
    fn prop21_requires_robin_left() {
        let prob = geodesic_ball_problem(0.0, 2, 1.0, 1.0, 2.0).unwrap();
        let sol = shoot::solve_first_eigenvalue(&prob, &ShootConfig::default()).unwrap();
        assert!(prop21_suite(&prob, &sol, "", 1e-4).is_err());
    }

    #[test]
    fn radius_monotonicity_skips_negative_alpha() {
        let r = radius_monotonicity(&[0.5, 1.0], -1.0, 2.0, &ShootConfig::default()).unwrap();
        assert_eq!(r[0].status, Status::Skip);
    }

    #[test]
    fn cheng_equal_curvature_has_zero_margin() {
        let r = cheng_comparison_suite(&[0.0], 2, 1.0, 1.0, 2.0, &ShootConfig::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].margin, 0.0);
    }

    #[test]
    fn theorem_c_rejects_non_ball_geometry() {
        let g = Geometry::FlatInterval { r: 1.0 };
        assert!(theorem_c_suite(&g, 1.0, 2.0, &VerifyConfig::default()).is_err());
    }

    #[test]
    fn default_checks_cover_every_family() {
        let checks = default_checks();
        let has = |f: fn(&Check) -> bool| checks.iter().any(f);
        assert!(has(|c| matches!(c, Check::Picone { .. })));
        assert!(has(|c| matches!(c, Check::Barta { .. })));
        assert!(has(|c| matches!(c, Check::Prop21 { .. })));
        assert!(has(|c| matches!(c, Check::Prop22 { .. })));
        assert!(has(|c| matches!(c, Check::Radius { .. })));
        assert!(has(|c| matches!(c, Check::Alpha { .. })));
        assert!(has(|c| matches!(c, Check::DirichletLimit { .. })));
        assert!(has(|c| matches!(c, Check::Cheng { .. })));
        assert!(has(|c| matches!(c, Check::TheoremC { .. })));
    }
}
