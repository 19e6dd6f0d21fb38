use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use robin_eigen::problems::{ProblemSpec, SturmProblem};
use robin_eigen::solution::EigenSolution;
use robin_eigen::verify::{self, Status, VerifyConfig};
use robin_eigen::{rayleigh, shoot};

use crate::config::{Settings, Spacing};
use crate::error::{CliError, Result};
use crate::output::{self, num, opt, Series};

pub const PARAM_COLUMNS: [&str; 9] = ["type", "kappa", "lambda_mc", "n", "R", "alpha", "p", "warping", "pole"];

pub fn param_cells(spec: &ProblemSpec) -> Vec<String> {
    let kind = serde_json::to_value(spec.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let warping = spec
        .warping
        .as_ref()
        .map(|w| {
            let coeffs: Vec<String> = w.coefficients.iter().map(|c| num(*c)).collect();
            format!("{}[{}]", w.kind, coeffs.join(" "))
        })
        .unwrap_or_default();
    vec![
        kind,
        num(spec.kappa),
        num(spec.lambda_mc),
        spec.n.to_string(),
        num(spec.r),
        num(spec.alpha),
        num(spec.p),
        warping,
        spec.pole.map(|b| b.to_string()).unwrap_or_default(),
    ]
}

/// Decimal rendering with 12 significant digits for terminal output.
pub fn plain(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{x:.*}", (11 - mag) as usize)
    } else {
        num(x)
    }
}

pub(crate) fn build(spec: &ProblemSpec) -> Result<SturmProblem> {
    spec.build().map_err(CliError::config)
}

pub struct Solved {
    pub shoot: Option<EigenSolution>,
    pub rayleigh: Option<EigenSolution>,
}

impl Solved {
    pub fn disagreement(&self) -> Option<f64> {
        match (&self.shoot, &self.rayleigh) {
            (Some(s), Some(r)) => Some((s.lambda - r.lambda).abs() / s.lambda.abs().max(1.0)),
            _ => None,
        }
    }
}

pub fn solve_problem(problem: &SturmProblem, settings: &Settings) -> Result<Solved> {
    let shoot = if settings.solver.shoot() {
        Some(shoot::solve_first_eigenvalue(problem, &settings.shoot)?)
    } else {
        None
    };
    let rayleigh = if settings.solver.rayleigh() {
        Some(rayleigh::solve(problem, settings.m, &settings.rayleigh)?)
    } else {
        None
    };
    Ok(Solved { shoot, rayleigh })
}

pub(crate) fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(CliError::config)
}

pub fn solve(settings: &Settings, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let spec = settings.problem.as_ref().expect("validated in Settings::resolve");
    let problem = build(spec)?;
    let solved = solve_problem(&problem, settings)?;
    output::ensure_dir(&settings.out)?;

    let json = spec.to_json().map_err(CliError::config)?;
    let _ = writeln!(out, "problem   {json}");
    let mut rows = Vec::new();
    for sol in [&solved.shoot, &solved.rayleigh].into_iter().flatten() {
        let method = match sol.method {
            robin_eigen::Method::Shooting => "shoot",
            robin_eigen::Method::Rayleigh => "rayleigh",
        };
        let detail = match sol.method {
            robin_eigen::Method::Shooting => {
                format!("rk_steps = {}, bisection steps = {}", settings.shoot.rk_steps, sol.diagnostics.iterations)
            }
            robin_eigen::Method::Rayleigh => {
                format!("m = {}, descent steps = {}", settings.m, sol.diagnostics.iterations)
            }
        };
        let _ = writeln!(out, "{method:<9} lambda = {}  ({detail})", plain(sol.lambda));
        for j in 0..sol.grid.len() {
            let mut row = param_cells(spec);
            row.extend([method.to_string(), num(sol.lambda), num(sol.grid[j]), num(sol.phi[j]), num(sol.psi[j])]);
            rows.push(row);
        }
    }
    if let Some(d) = solved.disagreement() {
        let _ = writeln!(out, "agreement |shoot - rayleigh| / max(1, |shoot|) = {}", num(d));
    }
    let mut header = PARAM_COLUMNS.to_vec();
    header.extend(["method", "lambda", "t", "phi", "psi"]);
    let path = output::write_file(&settings.out.join("eigenfunction.csv"), &output::csv_string(&header, &rows))?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(vec![path])
}

pub fn sweep(settings: &Settings, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let spec = settings.problem.as_ref().expect("validated in Settings::resolve");
    let sweep = settings.sweep.as_ref().expect("validated in Settings::resolve");
    let grid = sweep.grid()?;
    let specs = grid
        .iter()
        .map(|&v| sweep.axis.apply(spec, v))
        .collect::<Result<Vec<_>>>()?;
    let problems = specs.iter().map(build).collect::<Result<Vec<_>>>()?;
    output::ensure_dir(&settings.out)?;

    let solved: Vec<Result<Solved>> =
        pool(settings.jobs)?.install(|| problems.par_iter().map(|p| solve_problem(p, settings)).collect());
    let solved = solved.into_iter().collect::<Result<Vec<_>>>()?;

    let axis = sweep.axis.name();
    let mut header = PARAM_COLUMNS.to_vec();
    header.extend(["axis", "value", "lambda_shoot", "lambda_rayleigh", "disagreement"]);
    let mut rows = Vec::new();
    let _ = writeln!(out, "{axis:>14} {:>20} {:>20} {:>12}", "lambda_shoot", "lambda_rayleigh", "disagreement");
    for ((s, value), res) in specs.iter().zip(&grid).zip(&solved) {
        let ls = res.shoot.as_ref().map(|x| x.lambda);
        let lr = res.rayleigh.as_ref().map(|x| x.lambda);
        let mut row = param_cells(s);
        row.extend([axis.to_string(), num(*value), opt(ls), opt(lr), opt(res.disagreement())]);
        rows.push(row);
        let show = |x: Option<f64>| x.map(plain).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>14} {:>20} {:>20} {:>12}",
            plain(*value),
            show(ls),
            show(lr),
            res.disagreement().map(num).unwrap_or_else(|| "-".into())
        );
    }
    let csv_path = output::write_file(&settings.out.join("sweep.csv"), &output::csv_string(&header, &rows))?;

    let mut series = Vec::new();
    if settings.solver.shoot() {
        let points = grid.iter().zip(&solved).filter_map(|(x, s)| Some((*x, s.shoot.as_ref()?.lambda))).collect();
        series.push(Series { label: "shoot", points });
    }
    if settings.solver.rayleigh() {
        let points = grid.iter().zip(&solved).filter_map(|(x, s)| Some((*x, s.rayleigh.as_ref()?.lambda))).collect();
        series.push(Series { label: "rayleigh", points });
    }
    let log_x = sweep.spacing == Spacing::Log && grid.iter().all(|x| *x > 0.0);
    let svg = output::line_chart(&format!("first eigenvalue vs {axis}"), axis, "lambda", &series, log_x);
    let svg_path = output::write_file(&settings.out.join("sweep.svg"), &svg)?;
    let _ = writeln!(out, "wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(vec![csv_path, svg_path])
}

pub fn verify(settings: &Settings, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let config = VerifyConfig {
        shoot: settings.shoot,
        rayleigh: settings.rayleigh,
        ..VerifyConfig::default()
    };
    output::ensure_dir(&settings.out)?;
    let checks = verify::default_checks();
    let results: Vec<_> = pool(settings.jobs)?.install(|| {
        checks.par_iter().map(|c| verify::run_check(c, &config)).collect()
    });
    let mut reports = Vec::new();
    let mut solver_errors = Vec::new();
    for (check, res) in checks.iter().zip(results) {
        match res {
            Ok(r) => reports.extend(r),
            Err(e) => solver_errors.push(format!("{check:?}: {e}")),
        }
    }
    verify::sort_reports(&mut reports);
    let jsonl = verify::to_jsonl(&reports)?;
    let csv = verify::to_csv(&reports)?;
    let jsonl_path = output::write_file(&settings.out.join("verify.jsonl"), &jsonl)?;
    let csv_path = output::write_file(&settings.out.join("verify.csv"), &csv)?;

    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (pass, skip, fail) = (count(Status::Pass), count(Status::Skip), count(Status::Fail));
    for r in reports.iter().filter(|r| r.status == Status::Fail) {
        let _ = writeln!(out, "FAIL {} [{}] margin {} (tol {}) {}", r.name, r.case, num(r.margin), num(r.tolerance), r.note);
    }
    let _ = writeln!(out, "{} reports: {pass} pass, {skip} skip, {fail} fail", reports.len());
    let _ = writeln!(out, "wrote {} and {}", jsonl_path.display(), csv_path.display());
    if let Some(first) = solver_errors.first() {
        return Err(CliError::Solver(robin_eigen::Error::Unsupported(format!(
            "{} check(s) could not run; first: {first}",
            solver_errors.len()
        ))));
    }
    if fail > 0 {
        return Err(CliError::Verification { failed: fail });
    }
    Ok(vec![jsonl_path, csv_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_keeps_twelve_significant_digits() {
        assert_eq!(plain(0.740173884394922), "0.740173884395");
        assert_eq!(plain(-2.5), "-2.50000000000");
        assert_eq!(plain(1234.5), "1234.50000000");
        assert_eq!(plain(1e-7), num(1e-7));
        assert_eq!(plain(0.0), "0");
    }

    #[test]
    fn param_cells_follow_the_header() {
        let spec = ProblemSpec::from_json(
            r#"{"type":"warped_product","n":3,"R":1,"alpha":-1,"p":2,
                "warping":{"kind":"polynomial","coefficients":[0,1,0.5]},"pole":true}"#,
        )
        .unwrap();
        let cells = param_cells(&spec);
        assert_eq!(cells.len(), PARAM_COLUMNS.len());
        assert_eq!(cells[0], "warped_product");
        assert_eq!(cells[3], "3");
        assert_eq!(cells[7], format!("polynomial[{} {} {}]", num(0.0), num(1.0), num(0.5)));
        assert_eq!(cells[8], "true");
    }
}
