use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use robin_eigen::problems::ProblemSpec;
use robin_eigen::rayleigh::RayleighConfig;
use robin_eigen::shoot::ShootConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Sweep,
    Verify,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Shoot,
    Rayleigh,
    #[default]
    Both,
}

impl SolverChoice {
    pub fn shoot(self) -> bool {
        matches!(self, SolverChoice::Shoot | SolverChoice::Both)
    }

    pub fn rayleigh(self) -> bool {
        matches!(self, SolverChoice::Rayleigh | SolverChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    R,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "lambda_mc")]
    LambdaMc,
    #[serde(rename = "n")]
    N,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::R => "R",
            Axis::Alpha => "alpha",
            Axis::P => "p",
            Axis::Kappa => "kappa",
            Axis::LambdaMc => "lambda_mc",
            Axis::N => "n",
        }
    }

    /// Copy of `spec` with this coordinate set to `value`.
    pub fn apply(self, spec: &ProblemSpec, value: f64) -> Result<ProblemSpec> {
        let mut s = spec.clone();
        match self {
            Axis::R => s.r = value,
            Axis::Alpha => s.alpha = value,
            Axis::P => s.p = value,
            Axis::Kappa => s.kappa = value,
            Axis::LambdaMc => s.lambda_mc = value,
            Axis::N => {
                if value.fract() != 0.0 || value < 2.0 {
                    return Err(CliError::Config(format!("sweep over n needs integers >= 2, got {value}")));
                }
                s.n = value as u32;
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Either an explicit `values` list or `start`/`stop`/`count` with a spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if let Some(v) = &self.values {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Config("sweep values must be finite and nonempty".into()));
            }
            return Ok(v.clone());
        }
        let (Some(start), Some(stop), Some(count)) = (self.start, self.stop, self.count) else {
            return Err(CliError::Config("sweep needs `values` or `start`, `stop` and `count`".into()));
        };
        if count < 2 || !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Config("sweep needs finite bounds and count >= 2".into()));
        }
        let step = |i: usize| i as f64 / (count - 1) as f64;
        match self.spacing {
            Spacing::Linear => Ok((0..count).map(|i| start + (stop - start) * step(i)).collect()),
            Spacing::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::Config("log spacing needs positive bounds".into()));
                }
                let (a, b) = (start.ln(), stop.ln());
                Ok((0..count)
                    .map(|i| match i {
                        0 => start,
                        i if i == count - 1 => stop,
                        i => (a + (b - a) * step(i)).exp(),
                    })
                    .collect())
            }
        }
    }
}

/// JSON run description: a problem plus the command envelope.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub problem: Option<ProblemSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub solver: Option<SolverChoice>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub rk_steps: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Parser)]
#[command(name = "robin-eigen", version, about = "First Robin eigenvalue of the radial p-Laplacian")]
pub struct Cli {
    /// Command to run; may instead be given as "command" in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    /// Rayleigh grid cells.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "rk-steps")]
    pub rk_steps: Option<usize>,
    /// Relative bisection tolerance of the shooting solver.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads for sweeps, tables and verification (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Fully resolved settings: command-line flags override the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub command: Command,
    pub problem: Option<ProblemSpec>,
    pub sweep: Option<SweepSpec>,
    pub solver: SolverChoice,
    pub m: usize,
    pub shoot: ShootConfig,
    pub rayleigh: RayleighConfig,
    pub out: PathBuf,
    pub jobs: usize,
}

pub const DEFAULT_M: usize = 2000;

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        let command = match (cli.command, file.command) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Config(format!(
                    "command {a:?} on the command line conflicts with {b:?} in the config"
                )))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(CliError::Config("no command given".into())),
        };
        let mut shoot = ShootConfig::default();
        if let Some(n) = cli.rk_steps.or(file.rk_steps) {
            shoot.rk_steps = n;
        }
        if let Some(t) = cli.tol.or(file.tol) {
            shoot.lambda_tol = t;
        }
        if shoot.rk_steps < 64 || !(shoot.lambda_tol > 0.0 && shoot.lambda_tol < 1.0) {
            return Err(CliError::Config(format!(
                "need rk_steps >= 64 and 0 < tol < 1, got {} and {}",
                shoot.rk_steps, shoot.lambda_tol
            )));
        }
        let m = cli.m.or(file.m).unwrap_or(DEFAULT_M);
        if m < robin_eigen::rayleigh::MIN_NODES {
            return Err(CliError::Config(format!("--m must be at least {}", robin_eigen::rayleigh::MIN_NODES)));
        }
        let settings = Settings {
            command,
            problem: file.problem,
            sweep: file.sweep,
            solver: cli.solver.or(file.solver).unwrap_or_default(),
            m,
            shoot,
            rayleigh: RayleighConfig::default(),
            out: cli.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            jobs: cli.jobs.or(file.jobs).unwrap_or(0),
        };
        match command {
            Command::Solve if settings.problem.is_none() => {
                Err(CliError::Config("solve needs a \"problem\" in the config".into()))
            }
            Command::Sweep if settings.problem.is_none() || settings.sweep.is_none() => Err(CliError::Config(
                "sweep needs a \"problem\" and a \"sweep\" axis in the config".into(),
            )),
            _ => Ok(settings),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_both_ends() {
        let s: SweepSpec =
            serde_json::from_str(r#"{"axis":"alpha","start":0.1,"stop":10,"count":5,"spacing":"log"}"#).unwrap();
        let g = s.grid().unwrap();
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], 10.0);
        assert!((g[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_needs_values_or_range() {
        let s: SweepSpec = serde_json::from_str(r#"{"axis":"R"}"#).unwrap();
        assert!(s.grid().is_err());
        assert!(serde_json::from_str::<SweepSpec>(r#"{"axis":"radius"}"#).is_err());
    }

    #[test]
    fn axis_n_must_be_integral() {
        let spec = ProblemSpec::from_json(r#"{"type":"geodesic_ball","R":1,"alpha":1,"p":2}"#).unwrap();
        assert_eq!(Axis::N.apply(&spec, 3.0).unwrap().n, 3);
        assert!(Axis::N.apply(&spec, 2.5).is_err());
        assert_eq!(Axis::Alpha.apply(&spec, -2.0).unwrap().alpha, -2.0);
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"command":"solve","bogus":1}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"command":"verify","jobs":2}"#).unwrap();
        assert_eq!(c.command, Some(Command::Verify));
    }
}
