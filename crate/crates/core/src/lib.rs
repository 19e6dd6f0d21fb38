//! First Robin eigenvalue of the one-dimensional weighted p-Laplacian.
//!
//! Radial reductions on geodesic balls, inradius model domains and warped
//! products are solved by shooting and by direct minimization of the
//! discrete Rayleigh quotient. [`verify`] holds the comparison checks built
//! on top of both solvers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod error;
pub mod numerics;
pub mod oracles;
pub mod problems;
pub mod rayleigh;
pub mod shoot;
pub mod solution;
pub mod verify;

pub use coeffs::{ExtendedReal, ModelParams};
pub use error::{Error, Result};
pub use problems::{BoundaryCondition, Endpoint, ProblemSpec, SturmProblem, Weight, WarpingFunction};
pub use rayleigh::RayleighConfig;
pub use shoot::ShootConfig;
pub use solution::{Diagnostics, EigenSolution, Method};
