use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use robin_eigen::verify::{
    self, run_check, BartaTrial, Check, Geometry, Relation, Status, VerificationReport, VerifyConfig,
};
use robin_eigen::{oracles, rayleigh, shoot, Result as CoreResult};

use crate::commands::pool;
use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::output::{self, num};

pub const CRITERIA: [&str; 10] = [
    "interval oracle (p = 2)",
    "Dirichlet limit",
    "shoot vs rayleigh",
    "doubling identity",
    "model equality",
    "model inequality with slack",
    "monotonicity in kappa",
    "qualitative eigenfunction suite",
    "Picone identity",
    "Barta sandwich",
];

/// A report tagged with its criterion. `ok` can be stricter than
/// `report.passed` (strict margins, required skips).
pub struct Row {
    pub criterion: usize,
    pub report: VerificationReport,
    pub ok: bool,
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn plain_rows(criterion: usize, reports: Vec<VerificationReport>) -> Vec<Row> {
    reports
        .into_iter()
        .map(|report| Row { criterion, ok: report.status != Status::Fail, report })
        .collect()
}

fn flat() -> Geometry {
    Geometry::FlatInterval { r: 1.0 }
}

fn disk() -> Geometry {
    Geometry::Ball { kappa: 0.0, n: 2, r0: 1.0 }
}

fn hyperbolic() -> Geometry {
    Geometry::Ball { kappa: -1.0, n: 3, r0: 1.0 }
}

fn log_linear() -> Geometry {
    Geometry::Model { kappa: -1.0, lambda_mc: 1.0, n: 3, r: 1.0 }
}

fn relative_check(name: &str, case: &str, ps: BTreeMap<String, f64>, value: f64, reference: f64, tol: f64) -> VerificationReport {
    let dev = (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
    VerificationReport::check(name, case, ps, dev, tol, Relation::LessEq, 0.0)
}

fn interval_oracle(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut cases = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        for alpha in [0.5, 1.0, 5.0, -0.5, -1.0] {
            cases.push((r, alpha));
        }
    }
    let reports = cases
        .par_iter()
        .map(|&(r, alpha)| {
            let lambda = shoot::solve_first_eigenvalue(&Geometry::FlatInterval { r }.problem(alpha, 2.0)?, &cfg.shoot)?.lambda;
            let exact = oracles::interval_robin(r, alpha);
            Ok(relative_check(
                "oracle.interval",
                &format!("R={r},alpha={alpha}"),
                params(&[("R", r), ("alpha", alpha), ("lambda", lambda), ("oracle", exact)]),
                lambda,
                exact,
                1e-6,
            ))
        })
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(plain_rows(1, reports))
}

fn dirichlet(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let reports = [1.5, 2.0, 3.0]
        .par_iter()
        .map(|&p| verify::dirichlet_limit(1.0, p, &cfg.shoot))
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(plain_rows(2, reports))
}

fn cross_solver(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut cases = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for alpha in [-1.0, 1.0] {
            for g in [flat(), disk(), hyperbolic(), log_linear()] {
                cases.push((g, alpha, p));
            }
        }
    }
    let reports = cases
        .par_iter()
        .map(|(g, alpha, p)| {
            let problem = g.problem(*alpha, *p)?;
            let ls = shoot::solve_first_eigenvalue(&problem, &cfg.shoot)?.lambda;
            let lr = rayleigh::solve(&problem, 2000, &cfg.rayleigh)?.lambda;
            Ok(VerificationReport::check(
                "solvers.agree",
                &format!("{},alpha={alpha},p={p}", g.label()),
                params(&[("alpha", *alpha), ("p", *p), ("lambda_shoot", ls), ("lambda_rayleigh", lr)]),
                (ls - lr).abs() / ls.abs().max(1.0),
                1e-3,
                Relation::LessEq,
                0.0,
            ))
        })
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(plain_rows(3, reports))
}

fn run_all(checks: Vec<Check>, cfg: &VerifyConfig) -> CoreResult<Vec<VerificationReport>> {
    let nested = checks.par_iter().map(|c| run_check(c, cfg)).collect::<CoreResult<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn doubling(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut checks = Vec::new();
    for r in [0.5, 1.0] {
        for alpha in [-1.0, 1.0] {
            for p in [1.5, 2.0, 3.0] {
                checks.push(Check::Prop22 { r, alpha, p });
            }
        }
    }
    Ok(plain_rows(4, run_all(checks, cfg)?))
}

fn model_suite(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut checks = Vec::new();
    for g in [disk(), hyperbolic()] {
        for alpha in [-1.0, 1.0] {
            for p in [2.0, 3.0] {
                checks.push(Check::TheoremC { geometry: g.clone(), alpha, p });
            }
        }
    }
    let rows = run_all(checks, cfg)?
        .into_iter()
        .map(|report| {
            if report.name.contains("slack") {
                // strict, by more than ten tolerances
                let ok = report.passed && report.margin > 10.0 * report.tolerance;
                Row { criterion: 6, report, ok }
            } else {
                Row { criterion: 5, ok: report.status == Status::Pass, report }
            }
        })
        .collect();
    Ok(rows)
}

fn kappa_monotone(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let kappas = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut rows = Vec::new();
    for alpha in [1.0, -1.0] {
        for report in verify::cheng_comparison_suite(&kappas, 2, 1.0, alpha, 2.0, &cfg.shoot)? {
            let ok = if report.name == "cheng.order" { report.passed && report.strict } else { report.passed };
            rows.push(Row { criterion: 7, report, ok });
        }
    }
    let lambda = shoot::solve_first_eigenvalue(&disk().problem(1.0, 2.0)?, &cfg.shoot)?.lambda;
    let exact = oracles::disk_robin(1.0, 1.0);
    let report = relative_check(
        "oracle.disk",
        "R0=1,alpha=1,p=2",
        params(&[("lambda", lambda), ("oracle", exact), ("sqrt_lambda", lambda.sqrt())]),
        lambda,
        exact,
        1e-6,
    );
    rows.push(Row { criterion: 7, ok: report.passed, report });
    Ok(rows)
}

fn qualitative(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut checks = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for alpha in [-1.0, 1.0] {
            for g in [
                flat(),
                log_linear(),
                Geometry::ReflectedBall { kappa: 1.0, n: 3, r0: 1.0 },
                Geometry::ReflectedBall { kappa: 0.0, n: 2, r0: 1.0 },
                Geometry::ReflectedBall { kappa: -1.0, n: 3, r0: 1.0 },
            ] {
                checks.push(Check::Prop21 { geometry: g, alpha, p });
            }
        }
    }
    let log_linear_label = log_linear().label();
    let rows = run_all(checks, cfg)?
        .into_iter()
        .map(|report| {
            let gated = report.name == "prop21.monotone" || report.name == "prop21.bound";
            let ok = if gated && report.case.starts_with(&log_linear_label) {
                report.status == Status::Skip
            } else {
                report.status != Status::Fail
            };
            Row { criterion: 8, report, ok }
        })
        .collect();
    Ok(rows)
}

fn picone() -> CoreResult<Vec<Row>> {
    let ps = [1.5, 2.0, 3.0];
    let mut rows = (0..100u32)
        .into_par_iter()
        .map(|k| {
            let p = ps[k as usize % 3];
            let (grid, u, v) = verify::picone_pair(k);
            let mut report = verify::picone_check(&u, &v, &grid, p, 1e-8)?;
            report.case = format!("smooth(k={k})");
            let ok = report.passed && report.params["identity_gap"] < 1e-8 && report.params["min_l"] > -1e-10;
            Ok(Row { criterion: 9, report, ok })
        })
        .collect::<CoreResult<Vec<_>>>()?;
    for p in ps {
        let (grid, _, v) = verify::picone_pair(3);
        let u: Vec<f64> = v.iter().map(|x| 2.5 * x).collect();
        let mut report = verify::picone_check(&u, &v, &grid, p, 1e-8)?;
        report.case = "proportional(c=2.5)".into();
        let ok = report.passed && report.params["max_abs_l"] < 1e-10;
        rows.push(Row { criterion: 9, report, ok });
    }
    Ok(rows)
}

fn barta(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let mut checks = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for alpha in [-1.0, 1.0] {
            for g in [flat(), disk(), hyperbolic()] {
                for trial in [BartaTrial::Eigenfunction, BartaTrial::Perturbed] {
                    checks.push(Check::Barta { geometry: g.clone(), alpha, p, trial });
                }
            }
        }
    }
    let rows = run_all(checks, cfg)?
        .into_iter()
        .map(|report| {
            let ok = if report.case.starts_with("perturbed") {
                report.passed && report.strict
            } else {
                report.status == Status::Pass
            };
            Row { criterion: 10, report, ok }
        })
        .collect();
    Ok(rows)
}

pub fn collect_rows(cfg: &VerifyConfig) -> CoreResult<Vec<Row>> {
    let parts: Vec<CoreResult<Vec<Row>>> = (1..=10usize)
        .into_par_iter()
        .map(|c| match c {
            1 => interval_oracle(cfg),
            2 => dirichlet(cfg),
            3 => cross_solver(cfg),
            4 => doubling(cfg),
            5 => model_suite(cfg),
            7 => kappa_monotone(cfg),
            8 => qualitative(cfg),
            9 => picone(),
            10 => barta(cfg),
            _ => Ok(Vec::new()),
        })
        .collect();
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    rows.sort_by(|a, b| a.criterion.cmp(&b.criterion).then_with(|| a.report.sort_key().cmp(&b.report.sort_key())));
    Ok(rows)
}

pub fn table(settings: &Settings, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let cfg = VerifyConfig {
        shoot: settings.shoot,
        rayleigh: settings.rayleigh,
        ..VerifyConfig::default()
    };
    output::ensure_dir(&settings.out)?;
    let rows = pool(settings.jobs)?.install(|| collect_rows(&cfg))?;

    let header = [
        "criterion", "name", "case", "lhs", "relation", "rhs", "margin", "tolerance", "status", "ok", "params",
    ];
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let r = &row.report;
            let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
            vec![
                row.criterion.to_string(),
                r.name.clone(),
                r.case.clone(),
                num(r.lhs),
                r.relation.symbol().to_string(),
                num(r.rhs),
                num(r.margin),
                num(r.tolerance),
                format!("{:?}", r.status).to_lowercase(),
                row.ok.to_string(),
                ps.join(";"),
            ]
        })
        .collect();
    let path = output::write_file(&settings.out.join("table.csv"), &output::csv_string(&header, &csv_rows))?;

    let mut failed = 0;
    for (i, title) in CRITERIA.iter().enumerate() {
        let mine: Vec<&Row> = rows.iter().filter(|r| r.criterion == i + 1).collect();
        let good = mine.iter().filter(|r| r.ok).count();
        let verdict = if good == mine.len() && !mine.is_empty() { "PASS" } else { "FAIL" };
        if verdict == "FAIL" {
            failed += 1;
        }
        let _ = writeln!(out, "{verdict} {:>2} {title:<32} {good}/{}", i + 1, mine.len());
    }
    let _ = writeln!(out, "wrote {}", path.display());
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    Ok(vec![path])
}
