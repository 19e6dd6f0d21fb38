//! One-dimensional weighted p-Laplacian eigenproblems and the builders that
//! produce them from geometric data.
//!
//! Every problem has the form
//!
//! ```text
//! (p−1)|φ'|^{p−2} φ'' + (w'/w)|φ'|^{p−2} φ' = −λ |φ|^{p−2} φ   on [a, b]
//! ```
//!
//! with a boundary condition at each end. Robin conditions are stored in the
//! orientation-free form `ψ·ν + α|φ|^{p−2}φ = 0`, where `ψ = |φ'|^{p−2}φ'`
//! and `ν` is the outward direction (`−1` at `a`, `+1` at `b`). The left
//! condition `ψ(0) = α|φ(0)|^{p−2}φ(0)` of the inradius model and the right
//! condition `ψ(R) = −α|φ(R)|^{p−2}φ(R)` of a geodesic ball are therefore
//! both `Robin { alpha }`.

use serde::{Deserialize, Serialize};

use crate::coeffs::{self, ModelParams, WeightFn};
use crate::error::{Error, Result};

/// Robin parameters smaller than this are rejected; use Neumann instead.
pub const MIN_ROBIN_ALPHA: f64 = 1e-14;

const POSITIVITY_SAMPLES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Robin { alpha: f64 },
}

impl BoundaryCondition {
    pub fn robin(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("Robin parameter must be finite, got {alpha}")));
        }
        if alpha.abs() < MIN_ROBIN_ALPHA {
            return Err(Error::Domain(format!(
                "Robin parameter {alpha} is degenerate; use Neumann for alpha = 0"
            )));
        }
        Ok(BoundaryCondition::Robin { alpha })
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            BoundaryCondition::Robin { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_robin(&self) -> bool {
        matches!(self, BoundaryCondition::Robin { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

impl Endpoint {
    /// Sign of the outward normal in the `t` direction.
    pub fn outward(self) -> f64 {
        match self {
            Endpoint::Left => -1.0,
            Endpoint::Right => 1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Endpoint::Left => Endpoint::Right,
            Endpoint::Right => Endpoint::Left,
        }
    }
}

/// Warping function `f` of a metric `dr² + f(r)² g_{S^{n−1}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpingFunction {
    /// `f = sn_κ`.
    SpaceForm { kappa: f64 },
    /// `f = Σ c_k r^k`.
    Polynomial { coefficients: Vec<f64> },
    /// `f = scale · e^{rate·r}`.
    Exponential { scale: f64, rate: f64 },
}

impl WarpingFunction {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            WarpingFunction::SpaceForm { kappa } => coeffs::sn(*kappa, r),
            WarpingFunction::Polynomial { coefficients } => horner(coefficients, r),
            WarpingFunction::Exponential { scale, rate } => scale * (rate * r).exp(),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            WarpingFunction::SpaceForm { kappa } => coeffs::sn_prime(*kappa, r),
            WarpingFunction::Polynomial { coefficients } => horner(&poly_derivative(coefficients), r),
            WarpingFunction::Exponential { scale, rate } => scale * rate * (rate * r).exp(),
        }
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        match self {
            WarpingFunction::SpaceForm { kappa } => coeffs::sn_second(*kappa, r),
            WarpingFunction::Polynomial { coefficients } => {
                horner(&poly_derivative(&poly_derivative(coefficients)), r)
            }
            WarpingFunction::Exponential { scale, rate } => scale * rate * rate * (rate * r).exp(),
        }
    }
}

/// JSON shape of a warping function: `{kind, coefficients}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpingSpec {
    pub kind: String,
    pub coefficients: Vec<f64>,
}

impl TryFrom<&WarpingSpec> for WarpingFunction {
    type Error = Error;

    fn try_from(spec: &WarpingSpec) -> Result<Self> {
        let c = &spec.coefficients;
        match (spec.kind.as_str(), c.len()) {
            ("space_form", 1) => Ok(WarpingFunction::SpaceForm { kappa: c[0] }),
            ("polynomial", n) if n > 0 => Ok(WarpingFunction::Polynomial {
                coefficients: c.clone(),
            }),
            ("exponential", 2) => Ok(WarpingFunction::Exponential {
                scale: c[0],
                rate: c[1],
            }),
            (kind, n) => Err(Error::Domain(format!(
                "unknown warping kind {kind:?} with {n} coefficients"
            ))),
        }
    }
}

impl From<&WarpingFunction> for WarpingSpec {
    fn from(f: &WarpingFunction) -> Self {
        match f {
            WarpingFunction::SpaceForm { kappa } => WarpingSpec {
                kind: "space_form".into(),
                coefficients: vec![*kappa],
            },
            WarpingFunction::Polynomial { coefficients } => WarpingSpec {
                kind: "polynomial".into(),
                coefficients: coefficients.clone(),
            },
            WarpingFunction::Exponential { scale, rate } => WarpingSpec {
                kind: "exponential".into(),
                coefficients: vec![*scale, *rate],
            },
        }
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_derivative(coefficients: &[f64]) -> Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Density `w` of a one-dimensional problem, with closed-form log-derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// `w ≡ 1`.
    Unit,
    /// `sn_κ^{n−1}`.
    Ball { kappa: f64, n: u32 },
    /// `C_{κ,Λ}^{n−1}`.
    Model { params: ModelParams },
    /// `f^{n−1}`.
    Warped { f: WarpingFunction, n: u32 },
    /// `exp(Σ c_k t^k)`.
    ExpPolynomial { coefficients: Vec<f64> },
    /// `t ↦ inner(about − t)`.
    Reflected { inner: Box<Weight>, about: f64 },
}

impl WeightFn for Weight {
    fn value(&self, t: f64) -> Result<f64> {
        match self {
            Weight::Unit => Ok(1.0),
            Weight::Ball { kappa, n } => coeffs::weight_ball(*kappa, *n, t),
            Weight::Model { params } => coeffs::weight_model(params, t),
            Weight::Warped { f, n } => Ok(f.value(t).powi(*n as i32 - 1)),
            Weight::ExpPolynomial { coefficients } => Ok(horner(coefficients, t).exp()),
            Weight::Reflected { inner, about } => inner.value(about - t),
        }
    }

    fn log_derivative(&self, t: f64) -> Result<f64> {
        match self {
            Weight::Unit => Ok(0.0),
            Weight::Ball { kappa, n } => coeffs::weight_ball_log_derivative(*kappa, *n, t),
            Weight::Model { params } => coeffs::weight_model_log_derivative(params, t),
            Weight::Warped { f, n } => Ok((*n - 1) as f64 * f.derivative(t) / f.value(t)),
            Weight::ExpPolynomial { coefficients } => Ok(horner(&poly_derivative(coefficients), t)),
            Weight::Reflected { inner, about } => Ok(-inner.log_derivative(about - t)?),
        }
    }

    fn log_second_derivative(&self, t: f64) -> Option<Result<f64>> {
        Some(match self {
            Weight::Unit => Ok(0.0),
            Weight::Ball { kappa, n } => coeffs::weight_ball_log_second_derivative(*kappa, *n, t),
            Weight::Model { params } => coeffs::weight_model_log_second_derivative(params, t),
            Weight::Warped { f, n } => {
                let (v, d1, d2) = (f.value(t), f.derivative(t), f.second_derivative(t));
                Ok((*n - 1) as f64 * (d2 / v - (d1 / v).powi(2)))
            }
            Weight::ExpPolynomial { coefficients } => {
                Ok(horner(&poly_derivative(&poly_derivative(coefficients)), t))
            }
            Weight::Reflected { inner, about } => return inner.log_second_derivative(about - t),
        })
    }
}

/// A weighted p-Laplacian eigenproblem on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmProblem {
    a: f64,
    b: f64,
    p: f64,
    weight: Weight,
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
    singular_left: bool,
    singular_right: bool,
}

impl SturmProblem {
    /// Validates the problem invariants; the weight is sampled for positivity
    /// on the open interval.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        p: f64,
        weight: Weight,
        bc_left: BoundaryCondition,
        bc_right: BoundaryCondition,
        singular_left: bool,
        singular_right: bool,
    ) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!("need finite a < b, got [{a}, {b}]")));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Domain(format!("exponent must satisfy 1 < p < ∞, got {p}")));
        }
        if singular_left && singular_right {
            return Err(Error::Domain("at most one endpoint may be singular".into()));
        }
        for (singular, bc, side) in [
            (singular_left, bc_left, "left"),
            (singular_right, bc_right, "right"),
        ] {
            if let BoundaryCondition::Robin { alpha } = bc {
                BoundaryCondition::robin(alpha)?;
            }
            if singular && bc != BoundaryCondition::Neumann {
                return Err(Error::Domain(format!(
                    "singular {side} endpoint must carry the Neumann condition"
                )));
            }
        }
        let h = (b - a) / POSITIVITY_SAMPLES as f64;
        for j in 1..POSITIVITY_SAMPLES {
            let t = a + h * j as f64;
            let w = weight.value(t)?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Domain(format!("weight is {w} at interior point t = {t}")));
            }
        }
        Ok(Self {
            a,
            b,
            p,
            weight,
            bc_left,
            bc_right,
            singular_left,
            singular_right,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn bc(&self, end: Endpoint) -> BoundaryCondition {
        match end {
            Endpoint::Left => self.bc_left,
            Endpoint::Right => self.bc_right,
        }
    }

    pub fn bc_left(&self) -> BoundaryCondition {
        self.bc_left
    }

    pub fn bc_right(&self) -> BoundaryCondition {
        self.bc_right
    }

    pub fn is_singular(&self, end: Endpoint) -> bool {
        match end {
            Endpoint::Left => self.singular_left,
            Endpoint::Right => self.singular_right,
        }
    }

    pub fn endpoint(&self, end: Endpoint) -> f64 {
        match end {
            Endpoint::Left => self.a,
            Endpoint::Right => self.b,
        }
    }

    /// `w(t)`, with singular endpoints pinned to exactly zero.
    pub fn weight_at(&self, t: f64) -> Result<f64> {
        if (self.singular_left && t == self.a) || (self.singular_right && t == self.b) {
            return Ok(0.0);
        }
        self.weight.value(t)
    }

    /// `w'(t)/w(t)`.
    pub fn log_derivative(&self, t: f64) -> Result<f64> {
        self.weight.log_derivative(t)
    }

    /// Number of Robin endpoints.
    pub fn robin_count(&self) -> usize {
        [self.bc_left, self.bc_right].iter().filter(|bc| bc.is_robin()).count()
    }

    /// The same problem under `t ↦ a + b − t`.
    pub fn reflected(&self) -> SturmProblem {
        SturmProblem {
            a: self.a,
            b: self.b,
            p: self.p,
            weight: Weight::Reflected {
                inner: Box::new(self.weight.clone()),
                about: self.a + self.b,
            },
            bc_left: self.bc_right,
            bc_right: self.bc_left,
            singular_left: self.singular_right,
            singular_right: self.singular_left,
        }
    }

    /// The same problem with the right end moved to `b`; the right condition
    /// is kept.
    pub fn truncated(&self, b: f64) -> Result<SturmProblem> {
        SturmProblem::new(
            self.a,
            b,
            self.p,
            self.weight.clone(),
            self.bc_left,
            self.bc_right,
            self.singular_left,
            self.singular_right && b == self.b,
        )
    }

    /// The same geometry with a different Robin parameter on every Robin end.
    pub fn with_alpha(&self, alpha: f64) -> Result<SturmProblem> {
        let swap = |bc: BoundaryCondition| -> Result<BoundaryCondition> {
            match bc {
                BoundaryCondition::Robin { .. } => BoundaryCondition::robin(alpha),
                other => Ok(other),
            }
        };
        Ok(SturmProblem {
            bc_left: swap(self.bc_left)?,
            bc_right: swap(self.bc_right)?,
            ..self.clone()
        })
    }
}

fn check_common(alpha: f64, p: f64, radius: f64) -> Result<()> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::Domain(format!("exponent must satisfy 1 < p < ∞, got {p}")));
    }
    BoundaryCondition::robin(alpha).map(|_| ())
}

/// The comparison problem on `[0, R]` with drift `(n−1)T_{κ,Λ}`: Robin at 0,
/// Neumann at `R`. When `R = Z_{κ,Λ}` the weight vanishes at `R` and that end
/// is marked singular.
pub fn inradius_model_problem(params: &ModelParams, r: f64, alpha: f64, p: f64) -> Result<SturmProblem> {
    check_common(alpha, p, r)?;
    let mut singular_right = false;
    if let Some(z) = coeffs::z_cutoff(params).finite() {
        if r > z * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "R = {r} exceeds Z_{{κ,Λ}} = {z}; T_{{κ,Λ}} has a pole inside the interval"
            )));
        }
        singular_right = (r - z).abs() <= 1e-12 * z;
    }
    SturmProblem::new(
        0.0,
        r,
        p,
        Weight::Model { params: *params },
        BoundaryCondition::robin(alpha)?,
        BoundaryCondition::Neumann,
        false,
        singular_right,
    )
}

/// Radial problem of the geodesic ball `V(κ, R0)` in `M^n(κ)`: regular
/// centre at 0, Robin at `R0`.
pub fn geodesic_ball_problem(kappa: f64, n: u32, r0: f64, alpha: f64, p: f64) -> Result<SturmProblem> {
    check_common(alpha, p, r0)?;
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    if kappa >= coeffs::KAPPA_ZERO {
        let limit = std::f64::consts::PI / kappa.sqrt();
        if r0 >= limit {
            return Err(Error::Domain(format!(
                "radius {r0} must be below π/√κ = {limit}"
            )));
        }
    }
    SturmProblem::new(
        0.0,
        r0,
        p,
        Weight::Ball { kappa, n },
        BoundaryCondition::Neumann,
        BoundaryCondition::robin(alpha)?,
        true,
        false,
    )
}

/// Constant-coefficient problem on `[0, 2R]` with Robin(α) at both ends.
pub fn double_robin_problem(r: f64, alpha: f64, p: f64) -> Result<SturmProblem> {
    check_common(alpha, p, r)?;
    let bc = BoundaryCondition::robin(alpha)?;
    SturmProblem::new(0.0, 2.0 * r, p, Weight::Unit, bc, bc, false, false)
}

/// Radial problem of `[0, R0] × S^{n−1}` with metric `dr² + f(r)² g`.
///
/// With `pole = true` the metric must close smoothly at `r = 0`
/// (`f(0) = 0`, `f'(0) = 1`) and the centre is a singular Neumann end;
/// otherwise `f` must be positive on `[0, R0]` and the inner end is an
/// ordinary Neumann boundary.
pub fn warped_product_problem(
    f: &WarpingFunction,
    n: u32,
    r0: f64,
    alpha: f64,
    p: f64,
    pole: bool,
) -> Result<SturmProblem> {
    check_common(alpha, p, r0)?;
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    if pole {
        let (f0, df0) = (f.value(0.0), f.derivative(0.0));
        if f0.abs() > 1e-12 || (df0 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "a smooth pole needs f(0) = 0 and f'(0) = 1, got f(0) = {f0}, f'(0) = {df0}"
            )));
        }
        if let WarpingFunction::SpaceForm { kappa } = f {
            return geodesic_ball_problem(*kappa, n, r0, alpha, p);
        }
    }
    let first = if pole { 1 } else { 0 };
    for k in first..=POSITIVITY_SAMPLES {
        let r = r0 * k as f64 / POSITIVITY_SAMPLES as f64;
        let v = f.value(r);
        if !(v > 0.0) {
            return Err(Error::Domain(format!("warping function is {v} <= 0 at r = {r}")));
        }
    }
    SturmProblem::new(
        0.0,
        r0,
        p,
        Weight::Warped { f: f.clone(), n },
        BoundaryCondition::Neumann,
        BoundaryCondition::robin(alpha)?,
        pole,
        false,
    )
}

const CURVATURE_SAMPLES: usize = 4096;

/// Lower bound of `Ric / (n−1)` for `dr² + f² g_{S^{n−1}}` on `(0, R0]`,
/// taken as the grid infimum of the radial eigenvalue `−f''/f` and the
/// tangential eigenvalue `(−f''/f + (n−2)(1 − f'²)/f²)/(n−1)`.
pub fn ricci_lower_bound(f: &WarpingFunction, n: u32, r0: f64) -> Result<f64> {
    if n < 2 || !(r0 > 0.0) {
        return Err(Error::Domain(format!("need n >= 2 and R0 > 0, got n = {n}, R0 = {r0}")));
    }
    let mut inf = f64::INFINITY;
    for k in 1..=CURVATURE_SAMPLES {
        let r = r0 * k as f64 / CURVATURE_SAMPLES as f64;
        let (v, d1, d2) = (f.value(r), f.derivative(r), f.second_derivative(r));
        if !(v > 0.0) {
            return Err(Error::Domain(format!("warping function is {v} <= 0 at r = {r}")));
        }
        let radial = -d2 / v;
        let tangential = (radial + (n - 2) as f64 * (1.0 - d1 * d1) / (v * v)) / (n - 1) as f64;
        inf = inf.min(radial.min(tangential));
    }
    Ok(inf)
}

/// Mean curvature of the boundary sphere `{R0} × S^{n−1}` divided by `n−1`.
pub fn boundary_mean_curvature(f: &WarpingFunction, _n: u32, r0: f64) -> Result<f64> {
    let v = f.value(r0);
    if !(v > 0.0) {
        return Err(Error::Domain(format!("warping function is {v} <= 0 at R0 = {r0}")));
    }
    Ok(f.derivative(r0) / v)
}

/// JSON problem descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(rename = "type")]
    pub kind: ProblemKind,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub lambda_mc: f64,
    #[serde(default = "default_dim")]
    pub n: u32,
    #[serde(rename = "R")]
    pub r: f64,
    pub alpha: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warping: Option<WarpingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<bool>,
}

fn default_dim() -> u32 {
    2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    InradiusModel,
    GeodesicBall,
    DoubleRobin,
    WarpedProduct,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<SturmProblem> {
        match self.kind {
            ProblemKind::InradiusModel => {
                let params = ModelParams::new(self.kappa, self.lambda_mc, self.n)?;
                inradius_model_problem(&params, self.r, self.alpha, self.p)
            }
            ProblemKind::GeodesicBall => {
                geodesic_ball_problem(self.kappa, self.n, self.r, self.alpha, self.p)
            }
            ProblemKind::DoubleRobin => double_robin_problem(self.r, self.alpha, self.p),
            ProblemKind::WarpedProduct => {
                let spec = self
                    .warping
                    .as_ref()
                    .ok_or_else(|| Error::Domain("warped_product needs a warping function".into()))?;
                let f = WarpingFunction::try_from(spec)?;
                warped_product_problem(&f, self.n, self.r, self.alpha, self.p, self.pole.unwrap_or(true))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
