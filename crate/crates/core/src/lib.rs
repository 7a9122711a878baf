//! Numerical toolkit for nonlinear factorization problems on characteristic
//! functions, centered on Kac's operation Phi(x, y) = 1/(1/x + 1/y - 1) and
//! the Laplace family 1/(1 + a xi^2).
//!
//! The crate builds and cross-checks, at double precision on finite grids:
//!
//! - the counterexample families showing that Phi(f1, f2) = 1/(1 + xi^2)
//!   does not force Laplace factors, together with their generalizations
//!   under Phi_beta and Phi_n ([`charfn`]);
//! - completely monotone kernels L with closed-form inverses, the operation
//!   Phi_L, subordinated compositions L(a psi(xi)), and proportional-factor
//!   recovery ([`kernels`]);
//! - Lévy–Khintchine exponents with atomic Lévy measures, the
//!   indecomposability classifier, geometric infinite divisibility, and the
//!   classifier that recovers (drifted) Laplace parameters from factor pairs
//!   ([`lk`]);
//! - partial-fraction Fourier inversion onto signed Laplace mixtures with
//!   positivity certification, quadrature inversion, and the Bochner
//!   Gram-matrix test ([`inversion`]);
//! - seeded, stream-reproducible samplers for every constructed law with
//!   empirical characteristic-function validation ([`montecarlo`]);
//! - the discrete analog on probability generating functions ([`pgf`]).

pub mod charfn;
pub mod grid;
pub mod inversion;
pub mod kernels;
pub mod lk;
pub mod montecarlo;
pub mod pgf;
pub mod poly;

mod error;

pub use error::{Error, Result};

pub use charfn::{
    gaussian_limit_scan, kac_phi, make_counterexample, principal_branch_check, verify_identity,
    BranchReport, CharFn, CounterexampleKind, CounterexamplePair, LimitReport, LimitScan,
    PhiVariant, VerificationReport,
};
pub use inversion::{
    bochner_min_eig, density_from_even_rational, numeric_inversion, partial_fractions_even,
    positivity_grid, positivity_report, DensityMixture, MixtureTerm, NumericDensity,
    PositivityReport,
};
pub use kernels::{compose, factor_recover, phi_l, CMKernel, MixingLaw};
pub use lk::{
    defining_equation_residual, geometric_id_check, main_theorem_classify, Atom, Classification,
    DriftedLKExponent, Exponent, GidReport, GidVerdict, Indecomposability, LKExponent, Symmetry,
};
pub use montecarlo::{
    empirical_cf, kolmogorov_distance, mc_validate, sample, sample_stream, EmpiricalCF, LawSpec,
    McReport, SampleBatch,
};
pub use pgf::{
    coefficients, discrete_counterexample, discrete_factor_recover, family_affine_residual,
    pgf_eval, pgf_phi, BernsteinAtom, BernsteinClass, BernsteinFn, DiscretePair, DiscretePfData,
    DiscretePhi, NonnegReport, Pgf,
};
pub use poly::{ComplexRational, Poly};
