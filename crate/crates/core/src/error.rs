use num_complex::Complex64;
use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator vanishes at xi = {xi}")]
    PoleOnRealAxis { xi: f64 },

    #[error("point xi = {xi} outside tabulated range [{min}, {max}]")]
    OutOfRange { xi: f64, min: f64, max: f64 },

    #[error("{what} must satisfy {constraint}, got {value}")]
    Parameter {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error(
        "drift b = {b} violates the branch condition \
         0 < |b| < 2*sqrt(beta)*tan(pi/beta)*min(sqrt(a1), sqrt(a2)) = {bound}"
    )]
    BranchCondition { b: f64, bound: f64 },

    #[error("operation undefined at {value}: {reason}")]
    PhiDomain { value: Complex64, reason: &'static str },

    #[error("value {value} outside kernel range (0, 1]")]
    KernelRange { value: f64 },

    #[error("exponent not proportional to the reference (best fit a = {a}, residual {residual})")]
    Structure { a: f64, residual: f64 },

    #[error("repeated denominator root near {root}; mixture decomposition needs simple roots")]
    RepeatedRoot { root: f64 },

    #[error("denominator root {re}{im:+}i in u = xi^2 is not real; no Laplace-mixture form")]
    ComplexRootPair { re: f64, im: f64 },

    #[error("rational function is not real and even within tolerance")]
    NotEvenReal,

    #[error("numerator degree exceeds denominator degree; unbounded at infinity")]
    Improper,

    #[error("denominator root u = {u} is not strictly negative; no Laplace-mixture form")]
    PoleSign { u: f64 },

    #[error("partial-fraction recombination residual {residual} exceeds tolerance")]
    Recombination { residual: f64 },

    #[error("mixture mass {mass} differs from 1 by more than 1e-9")]
    MassMismatch { mass: f64 },

    #[error("density not certified nonnegative (grid minimum {min}); refusing to sample")]
    UncertifiedDensity { min: f64 },

    #[error("rejection acceptance rate {rate:.4} fell below 1%")]
    RejectionEnvelope { rate: f64 },

    #[error("kernel {kernel} has no closed-form mixing law; cannot sample the random time")]
    MixingLawUnavailable { kernel: String },

    #[error("pgf pole at z = {pole} lies in the closed unit disk")]
    InvalidPgfPole { pole: f64 },

    #[error("defining-equation residual {residual} exceeds tolerance {tolerance}")]
    DefiningEquation { residual: f64, tolerance: f64 },

    #[error("claimed symmetry is inconsistent with extracted drift gamma = {gamma}")]
    SymmetryMismatch { gamma: f64 },

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
