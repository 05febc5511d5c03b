//! Principal eigenvalues of the one-dimensional anisotropic p-Laplacian with
//! sign-changing weight, and everything built on top of them: spectral
//! optimization of the weight (bang-bang structure, optimal-interval
//! localization), monotone and anisotropic rearrangement inequalities, and the
//! survival threshold of the associated logistic steady-state problem.
//!
//! The domain is always the unit interval. The diffusion is governed by a
//! positively homogeneous norm `H(s) = a·s` for `s ≥ 0`, `−b·s` for `s < 0`,
//! which is *not* even unless `a = b`; that asymmetry is the whole point.
//!
//! Module map:
//! - [`anisotropy`]: the norm `H`, its polar, reflection, flux, and energy.
//! - [`mesh`]: uniform grids, nodal functions, quadrature, boundary data.
//! - [`weight`]: the admissible class of sign-changing weights and the
//!   bathtub step that produces bang-bang weights.
//! - [`eigen`]: projected-gradient solvers for the principal eigenvalues
//!   `λ⁺`, `λ⁻` and the shifted eigenvalue `μ⁺`.
//! - [`oracle`]: an independent tridiagonal-pencil route to `λ⁺` for the
//!   linear case, used for cross-checks.
//! - [`optimize`]: minimization of `λ±` over the weight class and the
//!   structure checks on optimizers.
//! - [`rearrange`]: exact monotone and anisotropic rearrangements of
//!   piecewise-affine functions and the associated energy inequalities.
//! - [`logistic`]: the nonlinear steady state via sub/super-solutions and the
//!   survival-threshold bisection.
//! - [`cli`]: configuration, dispatch, and file output for the `anisoeig`
//!   binary.
//! - [`verify`]: the self-check battery run by `anisoeig verify`.

pub mod anisotropy;
pub mod cli;
pub mod eigen;
mod error;
pub mod io;
pub mod logistic;
pub mod mesh;
pub mod optimize;
pub mod oracle;
pub mod rearrange;
pub mod svg;
pub mod verify;
pub mod weight;

pub use anisotropy::AnisotropyH;
pub use error::{Error, Result};
pub use mesh::{BoundaryCondition, GridFunction, Mesh1D};
pub use weight::{Weight, WeightClassParams};
