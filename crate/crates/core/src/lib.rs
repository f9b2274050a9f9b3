//! Compactly supported, moment-matched regularizations of the Dirac delta and
//! the harnesses used to measure how well they converge.
//!
//! The crate is organised bottom-up:
//!
//! - [`basis`], [`linalg`], [`quadrature`]: numerical building blocks.
//! - [`moment`]: assembles and solves the finite moment problem for radial profiles.
//! - [`kernel`] and [`catalog`]: evaluable n-dimensional regularized deltas and the
//!   named kernels.
//! - [`weakstar`]: weak-* error against a Gaussian test function and rate fitting.
//! - [`bessel`] and [`elliptic`]: Helmholtz point-source benchmarks.
//! - [`spectral`]: Fourier pseudospectral advection and KdV runs.
//! - [`report`], [`config`], [`study`]: experiment orchestration and serialization.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bessel;
pub mod catalog;
pub mod config;
pub mod elliptic;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod moment;
pub mod quadrature;
pub mod report;
pub mod spectral;
pub mod study;
pub mod weakstar;

pub use basis::{shifted_legendre_eval, BasisFamily, BasisKind};
pub use catalog::{catalog, catalog_lookup, CatalogEntry, KernelBuilder, KernelSource};
pub use error::{Error, Result};
pub use kernel::{eval_delta, fourier_transform_1d, tensor_product, Geometry, RadialProfile, RegularizedDelta};
pub use linalg::DenseLinearSystem;
pub use moment::{
    assemble_moment_system, moment_residuals, reduced_moment_residuals, solve_cosine_moment_problem,
    solve_moment_problem, EtaKernel, MomentProblemSpec, Normalization,
};
pub use quadrature::{gauss_legendre, integrate_1d, GaussRule};
pub use weakstar::{convergence_slope, parse_h_schedule, weak_star_error, SlopeFit};
pub use bessel::{bessel01, bessel_j0_y0, bessel_series_j0_y0, Bessel01};
pub use config::{ExperimentConfig, Format, StudyKind};
pub use report::{ConvergenceReport, ReportRow, RowStatus};
pub use study::run_study;
pub use elliptic::{
    exact_point_solution_1d, exact_point_solution_2d_radial, pointwise_error, solve_regularized_1d,
    solve_regularized_2d_radial, weighted_sobolev_error, Helmholtz1D, QuadratureMesh, RadialHelmholtz2D,
    SolutionProfile, WeightedNormSpec,
};
