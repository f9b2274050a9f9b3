use thiserror::Error;

/// Errors produced by kernel construction, quadrature and the PDE harnesses.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular system: pivot {pivot:.3e} at constraint `{constraint}`")]
    Rank { constraint: String, pivot: f64 },

    #[error("invalid moment problem: {0}")]
    InvalidSpec(String),

    #[error("Newton iteration for Gauss-Legendre order {order} did not converge")]
    NoConvergence { order: usize },

    #[error("quadrature did not reach tolerance {tol:.1e} (last difference {diff:.3e})")]
    Quadrature { tol: f64, diff: f64 },

    #[error("unknown kernel `{name}`; available: {available}")]
    UnknownKernel { name: String, available: String },

    #[error("resonant wavenumber k0 = {k0}: {what} = {value:.3e}")]
    Resonance { k0: f64, what: &'static str, value: f64 },

    #[error("kernel support {support} exceeds the domain {domain}")]
    Support { support: f64, domain: f64 },

    #[error("convergence data: {0}")]
    Convergence(String),

    #[error("transform length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("CFL condition violated: k_max * dt = {0:.4}")]
    Cfl(f64),

    #[error("final time {t} is not an integer number of periods of length {period}")]
    Period { t: f64, period: f64 },

    #[error("solution blew up at t = {t:.6} (step {step}, max |u| = {max_abs:.3e})")]
    BlowUp { t: f64, step: usize, max_abs: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
