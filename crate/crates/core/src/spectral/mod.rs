//! Fourier pseudospectral experiments on periodic grids: linear advection with
//! leapfrog time stepping and KdV with integrating-factor RK4.

mod advection;
mod fft;
mod grid;
mod kdv;

pub use advection::{
    advect_exact, advect_leapfrog, leapfrog_frequency, pointwise_error_after_periods, AdvectionResult, AdvectionRun,
    ErrorProfile, Startup,
};
pub use fft::{dft, idft, SpectralPlan};
pub use grid::PeriodicGrid1D;
pub use kdv::{
    conserved_quantities, gaussian_source, kdv_solve, peak_location, soliton, GaussianVariant, KdvResult, KdvRun,
    Snapshot, BLOW_UP_THRESHOLD,
};
