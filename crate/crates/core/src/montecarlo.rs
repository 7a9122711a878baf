//! Seeded samplers for the laws constructed throughout the crate and
//! empirical-characteristic-function validation against closed forms.
//!
//! Streams are ChaCha8 counter-based: a batch is a pure function of
//! (law, n, seed, stream), so parallel batches over distinct stream indices
//! stay reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson, StandardNormal};
use serde::Serialize;

use crate::charfn::CharFn;
use crate::inversion::{positivity_grid, positivity_report, DensityMixture};
use crate::kernels::{CMKernel, MixingLaw};
use crate::lk::LKExponent;
use crate::poly::ComplexRational;
use crate::{Error, Result};

/// A law with a shipped sampler.
#[derive(Debug, Clone, Serialize)]
pub enum LawSpec {
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
    Normal { mean: f64, var: f64 },
    /// Density rate/2 e^{-rate |x|}.
    Laplace { rate: f64 },
    /// Atom of weight w0 at 0, Laplace otherwise.
    AtomLaplaceMix { w0: f64, rate: f64 },
    /// P(X = k t) = ((1-r)/(1+r)) r^{|k|} on t Z.
    TwoSidedGeometric { r: f64, t: f64 },
    /// X - Y for independent X ~ Exp(rate1), Y ~ Exp(rate2).
    ExpDifference { rate1: f64, rate2: f64 },
    /// b G + sqrt(2 a G) Z for G ~ Gamma(beta, 1/beta), Z standard normal.
    GammaNormalDrift { beta: f64, a: f64, b: f64 },
    /// Rejection sampling from a certified-nonnegative Laplace mixture.
    SignedMixture(DensityMixture),
    /// Y1(T) + Y2(T): independent symmetric Lévy processes run to the same
    /// random time T distributed by the kernel's mixing law.
    SubordinatedSum {
        psi1: LKExponent,
        psi2: LKExponent,
        kernel: CMKernel,
    },
}

impl LawSpec {
    fn validate(&self) -> Result<()> {
        let positive = |what: &'static str, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter {
                    what,
                    constraint: "be > 0",
                    value: v,
                })
            }
        };
        match self {
            LawSpec::Exponential { rate } => positive("rate", *rate),
            LawSpec::Gamma { shape, scale } => {
                positive("shape", *shape)?;
                positive("scale", *scale)
            }
            LawSpec::Normal { var, .. } => {
                if *var >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "var",
                        constraint: "be >= 0",
                        value: *var,
                    })
                }
            }
            LawSpec::Laplace { rate } => positive("rate", *rate),
            LawSpec::AtomLaplaceMix { w0, rate } => {
                positive("rate", *rate)?;
                if (0.0..=1.0).contains(w0) {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "w0",
                        constraint: "lie in [0, 1]",
                        value: *w0,
                    })
                }
            }
            LawSpec::TwoSidedGeometric { r, t } => {
                positive("t", *t)?;
                if (0.0..1.0).contains(r) {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "r",
                        constraint: "lie in [0, 1)",
                        value: *r,
                    })
                }
            }
            LawSpec::ExpDifference { rate1, rate2 } => {
                positive("rate1", *rate1)?;
                positive("rate2", *rate2)
            }
            LawSpec::GammaNormalDrift { beta, a, .. } => {
                positive("beta", *beta)?;
                positive("a", *a)
            }
            LawSpec::SignedMixture(m) => {
                if m.atom0 >= 0.0 && m.atom0 <= 1.0 && !m.terms.is_empty() {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "mixture atom0",
                        constraint: "lie in [0, 1] with at least one term",
                        value: m.atom0,
                    })
                }
            }
            LawSpec::SubordinatedSum { kernel, .. } => kernel.validate(),
        }
    }

    /// Closed-form characteristic function of the law, used as the default
    /// Monte Carlo validation target.
    pub fn closed_form_cf(&self) -> Result<CharFn> {
        match self {
            LawSpec::Exponential { rate } => Ok(CharFn::Rational(ComplexRational::new(
                crate::poly::Poly::one(),
                crate::poly::Poly::new(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, -1.0 / rate),
                ]),
            )?)),
            LawSpec::Gamma { shape, scale } => Ok(CharFn::Power {
                base: ComplexRational::new(
                    crate::poly::Poly::new(vec![
                        Complex64::new(1.0, 0.0),
                        Complex64::new(0.0, -*scale),
                    ]),
                    crate::poly::Poly::one(),
                )?,
                exponent: -shape,
            }),
            LawSpec::Normal { mean, var } => Ok(CharFn::Composed {
                kernel: CMKernel::Exp,
                scale: 1.0,
                exponent: crate::lk::Exponent::Drifted(crate::lk::DriftedLKExponent::new(
                    *mean,
                    *var,
                    vec![],
                )?),
            }),
            LawSpec::Laplace { rate } => CharFn::laplace(1.0 / (rate * rate)),
            LawSpec::AtomLaplaceMix { w0, rate } => {
                let a = 1.0 / (rate * rate);
                Ok(CharFn::Rational(ComplexRational::from_real(
                    &[1.0, 0.0, w0 * a],
                    &[1.0, 0.0, a],
                )?))
            }
            LawSpec::TwoSidedGeometric { r, t } => {
                let c = 2.0 * r / ((1.0 - r) * (1.0 - r));
                let psi = if *r == 0.0 {
                    LKExponent::zero()
                } else {
                    LKExponent::new(0.0, vec![crate::lk::Atom { t: *t, c }])?
                };
                Ok(CharFn::Composed {
                    kernel: CMKernel::Kac,
                    scale: 1.0,
                    exponent: crate::lk::Exponent::Symmetric(psi),
                })
            }
            LawSpec::ExpDifference { rate1, rate2 } => {
                // 1 / ((1 - i xi/r1)(1 + i xi/r2))
                let den = crate::poly::Poly::new(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, -1.0 / rate1),
                ])
                .mul(&crate::poly::Poly::new(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0 / rate2),
                ]));
                Ok(CharFn::Rational(ComplexRational::new(
                    crate::poly::Poly::one(),
                    den,
                )?))
            }
            LawSpec::GammaNormalDrift { beta, a, b } => Ok(CharFn::Power {
                base: ComplexRational::new(
                    crate::poly::Poly::new(vec![
                        Complex64::new(1.0, 0.0),
                        Complex64::new(0.0, -b / beta),
                        Complex64::new(a / beta, 0.0),
                    ]),
                    crate::poly::Poly::one(),
                )?,
                exponent: -beta,
            }),
            LawSpec::SignedMixture(m) => m.char_fn(),
            LawSpec::SubordinatedSum {
                psi1,
                psi2,
                kernel,
            } => {
                let combined = psi1.combine(psi2, 1.0, 1.0)?;
                crate::kernels::compose(kernel, 1.0, &crate::lk::Exponent::Symmetric(combined))
            }
        }
    }
}

/// Output of a sampler run.
#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    /// Acceptance rate of the rejection sampler, when one was used.
    pub acceptance: Option<f64>,
}

/// Draw n samples deterministically from (law, n, seed), stream 0.
pub fn sample(law: &LawSpec, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_stream(law, n, seed, 0)
}

/// Draw n samples on an explicit ChaCha stream index.
pub fn sample_stream(law: &LawSpec, n: usize, seed: u64, stream: u64) -> Result<SampleBatch> {
    law.validate()?;
    if n == 0 {
        return Err(Error::Parameter {
            what: "n",
            constraint: "be >= 1",
            value: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut acceptance = None;

    let values: Vec<f64> = match law {
        LawSpec::Exponential { rate } => {
            let d = Exp::new(*rate).expect("validated rate");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        LawSpec::Gamma { shape, scale } => {
            let d = Gamma::new(*shape, *scale).expect("validated parameters");
            (0..n).map(|_| d.sample(&mut rng)).collect()
        }
        LawSpec::Normal { mean, var } => {
            let sd = var.sqrt();
            (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    mean + sd * z
                })
                .collect()
        }
        LawSpec::Laplace { rate } => {
            let d = Exp::new(*rate).expect("validated rate");
            (0..n).map(|_| d.sample(&mut rng) - d.sample(&mut rng)).collect()
        }
        LawSpec::AtomLaplaceMix { w0, rate } => {
            let d = Exp::new(*rate).expect("validated rate");
            (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    if u < *w0 {
                        0.0
                    } else {
                        d.sample(&mut rng) - d.sample(&mut rng)
                    }
                })
                .collect()
        }
        LawSpec::TwoSidedGeometric { r, t } => {
            let draw_geom = |rng: &mut ChaCha8Rng| -> i64 {
                if *r == 0.0 {
                    return 0;
                }
                let u: f64 = rng.random();
                // P(G = k) = (1 - r) r^k on {0, 1, ...}
                ((1.0 - u).ln() / r.ln()).floor() as i64
            };
            (0..n)
                .map(|_| {
                    let k = draw_geom(&mut rng) - draw_geom(&mut rng);
                    *t * k as f64
                })
                .collect()
        }
        LawSpec::ExpDifference { rate1, rate2 } => {
            let d1 = Exp::new(*rate1).expect("validated rate");
            let d2 = Exp::new(*rate2).expect("validated rate");
            (0..n).map(|_| d1.sample(&mut rng) - d2.sample(&mut rng)).collect()
        }
        LawSpec::GammaNormalDrift { beta, a, b } => {
            let gamma = Gamma::new(*beta, 1.0 / beta).expect("validated parameters");
            (0..n)
                .map(|_| {
                    let g = gamma.sample(&mut rng);
                    let z: f64 = StandardNormal.sample(&mut rng);
                    b * g + (2.0 * a * g).sqrt() * z
                })
                .collect()
        }
        LawSpec::SignedMixture(m) => {
            let (vals, rate) = sample_signed_mixture(m, n, &mut rng)?;
            acceptance = Some(rate);
            vals
        }
        LawSpec::SubordinatedSum {
            psi1,
            psi2,
            kernel,
        } => {
            let law = kernel.mixing_law().ok_or(Error::MixingLawUnavailable {
                kernel: kernel.name(),
            })?;
            (0..n)
                .map(|_| -> Result<f64> {
                    let t = match law {
                        MixingLaw::PointMass(c) => c,
                        MixingLaw::Exponential { rate } => {
                            Exp::new(rate).expect("positive rate").sample(&mut rng)
                        }
                        MixingLaw::Gamma { shape, scale } => Gamma::new(shape, scale)
                            .expect("positive parameters")
                            .sample(&mut rng),
                    };
                    Ok(levy_at(psi1, t, &mut rng)? + levy_at(psi2, t, &mut rng)?)
                })
                .collect::<Result<Vec<f64>>>()?
        }
    };
    Ok(SampleBatch { values, acceptance })
}

/// Value at time t of the symmetric Lévy process with exponent psi:
/// Brownian part of variance sigma^2 t plus, per atom (u, c), a Poisson(c t)
/// number of fair-coin +-u jumps, matching e^{-t c (1 - cos(u xi))}.
fn levy_at(psi: &LKExponent, t: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut x = 0.0;
    if psi.sigma2() > 0.0 && t > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        x += (psi.sigma2() * t).sqrt() * z;
    }
    for atom in psi.atoms() {
        let mean = atom.c * t;
        if mean <= 0.0 {
            continue;
        }
        let count = Poisson::new(mean)
            .map_err(|_| Error::Parameter {
                what: "Poisson mean",
                constraint: "be positive and finite",
                value: mean,
            })?
            .sample(rng) as u64;
        for _ in 0..count {
            x += if rng.random::<bool>() { atom.t } else { -atom.t };
        }
    }
    Ok(x)
}

fn sample_signed_mixture(
    m: &DensityMixture,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, f64)> {
    let report = positivity_report(m, &positivity_grid(m));
    if !report.pass {
        return Err(Error::UncertifiedDensity {
            min: report.min_density,
        });
    }
    // dominating envelope: (sum of positive peak heights) e^{-r_min |x|}
    let envelope_height: f64 = m
        .terms
        .iter()
        .filter(|t| t.weight > 0.0)
        .map(|t| t.weight / (2.0 * t.rate))
        .sum();
    let r_min = m.min_rate();
    if !(envelope_height > 0.0) || !r_min.is_finite() {
        return Err(Error::UncertifiedDensity { min: 0.0 });
    }
    let proposal = Exp::new(r_min).expect("positive rate");

    let mut values = Vec::with_capacity(n);
    let mut proposals = 0u64;
    let mut accepted = 0u64;
    while values.len() < n {
        let u0: f64 = rng.random();
        if u0 < m.atom0 {
            values.push(0.0);
            continue;
        }
        loop {
            proposals += 1;
            let mag = proposal.sample(rng);
            let x = if rng.random::<bool>() { mag } else { -mag };
            let u: f64 = rng.random();
            if u * envelope_height * (-r_min * x.abs()).exp() <= m.density(x) {
                accepted += 1;
                values.push(x);
                break;
            }
            if proposals > 1000 && (accepted as f64) < 0.01 * proposals as f64 {
                return Err(Error::RejectionEnvelope {
                    rate: accepted as f64 / proposals as f64,
                });
            }
        }
    }
    let rate = if proposals == 0 {
        1.0
    } else {
        accepted as f64 / proposals as f64
    };
    Ok((values, rate))
}

/// Empirical characteristic function on a grid.
#[derive(Debug, Clone)]
pub struct EmpiricalCF {
    pub grid: Vec<f64>,
    pub estimates: Vec<Complex64>,
    pub n: usize,
}

pub fn empirical_cf(batch: &SampleBatch, grid: &[f64]) -> Result<EmpiricalCF> {
    if batch.values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = batch.values.len();
    let estimates = grid
        .iter()
        .map(|&xi| {
            let mut sum = Complex64::default();
            for &x in &batch.values {
                let (s, c) = (xi * x).sin_cos();
                sum += Complex64::new(c, s);
            }
            sum / n as f64
        })
        .collect();
    Ok(EmpiricalCF {
        grid: grid.to_vec(),
        estimates,
        n,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub grid: Vec<f64>,
    pub errors: Vec<f64>,
    pub max_error: f64,
    /// c / sqrt(n).
    pub tolerance: f64,
    pub n: usize,
    pub seed: u64,
    pub acceptance: Option<f64>,
    pub pass: bool,
}

/// Default slack constant in the c/sqrt(n) tolerance: union-bound headroom
/// across up to 64 grid points.
pub const MC_TOLERANCE_CONSTANT: f64 = 5.0;

/// Sample the law and compare the empirical characteristic function with the
/// target pointwise at tolerance c/sqrt(n).
pub fn mc_validate(
    law: &LawSpec,
    target: &CharFn,
    grid: &[f64],
    n: usize,
    seed: u64,
    c: f64,
) -> Result<McReport> {
    if grid.len() > 64 || grid.is_empty() {
        return Err(Error::Parameter {
            what: "grid",
            constraint: "contain between 1 and 64 points",
            value: grid.len() as f64,
        });
    }
    if n < 10_000 {
        return Err(Error::Parameter {
            what: "n",
            constraint: "be >= 10000",
            value: n as f64,
        });
    }
    let batch = sample(law, n, seed)?;
    let ecf = empirical_cf(&batch, grid)?;
    let tolerance = c / (n as f64).sqrt();
    let mut errors = Vec::with_capacity(grid.len());
    for (&xi, est) in grid.iter().zip(&ecf.estimates) {
        errors.push((est - target.eval(xi)?).norm());
    }
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    Ok(McReport {
        grid: grid.to_vec(),
        errors,
        max_error,
        tolerance,
        n,
        seed,
        acceptance: batch.acceptance,
        pass: max_error < tolerance,
    })
}

/// Kolmogorov distance between the sample and a reference CDF.
pub fn kolmogorov_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::{make_counterexample, CounterexampleKind};
    use crate::grid::linspace;
    use crate::inversion::density_from_even_rational;

    #[test]
    fn determinism() {
        let law = LawSpec::GammaNormalDrift {
            beta: 3.0,
            a: 1.0,
            b: 1.0,
        };
        let a = sample(&law, 1000, 42).unwrap();
        let b = sample(&law, 1000, 42).unwrap();
        assert_eq!(a.values, b.values);
        let c = sample(&law, 1000, 43).unwrap();
        assert_ne!(a.values, c.values);
        let d = sample_stream(&law, 1000, 42, 1).unwrap();
        assert_ne!(a.values, d.values);
    }

    #[test]
    fn exponential_mean() {
        let batch = sample(&LawSpec::Exponential { rate: 1.0 }, 1_000_000, 7).unwrap();
        let mean = batch.values.iter().sum::<f64>() / batch.values.len() as f64;
        assert!((mean - 1.0).abs() < 4.0 / 1000.0);
    }

    #[test]
    fn empirical_cf_degenerate_and_two_point() {
        let zeros = SampleBatch {
            values: vec![0.0; 100],
            acceptance: None,
        };
        let ecf = empirical_cf(&zeros, &[0.0, 1.0, 2.0]).unwrap();
        for v in &ecf.estimates {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }

        let two_point = SampleBatch {
            values: [1.0, -1.0].repeat(50),
            acceptance: None,
        };
        let grid = [0.0, 0.5, 1.0, 2.0];
        let ecf = empirical_cf(&two_point, &grid).unwrap();
        for (&xi, v) in grid.iter().zip(&ecf.estimates) {
            assert!((v - Complex64::new(xi.cos(), 0.0)).norm() < 1e-12);
        }

        assert!(matches!(
            empirical_cf(
                &SampleBatch {
                    values: vec![],
                    acceptance: None
                },
                &grid
            ),
            Err(Error::EmptyBatch)
        ));
    }

    #[test]
    fn empirical_cf_is_one_at_zero_and_bounded() {
        let batch = sample(&LawSpec::Laplace { rate: 1.0 }, 50_000, 5).unwrap();
        let grid = linspace(-5.0, 5.0, 21);
        let ecf = empirical_cf(&batch, &grid).unwrap();
        for (&xi, v) in grid.iter().zip(&ecf.estimates) {
            assert!(v.norm() <= 1.0 + 1e-12);
            if xi == 0.0 {
                assert_eq!(*v, Complex64::new(1.0, 0.0));
            }
        }
        // Hermitian symmetry on the symmetric grid
        for i in 0..10 {
            let lo = ecf.estimates[i];
            let hi = ecf.estimates[20 - i];
            assert!((lo - hi.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn laplace_cf_value() {
        let batch = sample(&LawSpec::Laplace { rate: 1.0 }, 1_000_000, 11).unwrap();
        let ecf = empirical_cf(&batch, &[1.0]).unwrap();
        assert!((ecf.estimates[0].re - 0.5).abs() < 5.0 / 1000.0);
    }

    #[test]
    fn two_sided_geometric_mass_at_zero() {
        let law = LawSpec::TwoSidedGeometric { r: 0.5, t: 1.0 };
        let batch = sample(&law, 1_000_000, 9).unwrap();
        let zeros = batch.values.iter().filter(|&&v| v == 0.0).count();
        let want = 1.0 / 3.0;
        assert!((zeros as f64 / 1e6 - want).abs() < 4.0 / 1000.0);
    }

    #[test]
    fn mc_validate_exp_difference() {
        let pair = make_counterexample(&CounterexampleKind::ExpDifference).unwrap();
        let report = mc_validate(
            &LawSpec::ExpDifference {
                rate1: 1.0,
                rate2: 2.0,
            },
            &pair.f1,
            &linspace(-5.0, 5.0, 21),
            200_000,
            1,
            MC_TOLERANCE_CONSTANT,
        )
        .unwrap();
        assert!(report.pass, "max error {}", report.max_error);
    }

    #[test]
    fn mc_validate_two_sided_geometric() {
        let law = LawSpec::TwoSidedGeometric { r: 0.5, t: 1.0 };
        let target = law.closed_form_cf().unwrap();
        let report = mc_validate(
            &law,
            &target,
            &linspace(-4.0, 4.0, 17),
            100_000,
            3,
            MC_TOLERANCE_CONSTANT,
        )
        .unwrap();
        assert!(report.pass, "max error {}", report.max_error);
    }

    #[test]
    fn subordinated_sum_kac_matches_laplace() {
        let law = LawSpec::SubordinatedSum {
            psi1: LKExponent::gaussian(2.0 * 0.3),
            psi2: LKExponent::gaussian(2.0 * 0.7),
            kernel: CMKernel::Kac,
        };
        let target = CharFn::laplace(1.0).unwrap();
        let report = mc_validate(
            &law,
            &target,
            &linspace(-5.0, 5.0, 21),
            200_000,
            4,
            MC_TOLERANCE_CONSTANT,
        )
        .unwrap();
        assert!(report.pass, "max error {}", report.max_error);
    }

    #[test]
    fn subordinated_sum_with_zero_exponents_is_degenerate() {
        let law = LawSpec::SubordinatedSum {
            psi1: LKExponent::zero(),
            psi2: LKExponent::zero(),
            kernel: CMKernel::Kac,
        };
        let batch = sample(&law, 1000, 2).unwrap();
        assert!(batch.values.iter().all(|&v| v == 0.0));
        let ecf = empirical_cf(&batch, &[0.7, 1.9]).unwrap();
        for v in &ecf.estimates {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn subordinated_sum_needs_mixing_law() {
        let law = LawSpec::SubordinatedSum {
            psi1: LKExponent::gaussian(1.0),
            psi2: LKExponent::zero(),
            kernel: CMKernel::StableExp(0.5),
        };
        assert!(matches!(
            sample(&law, 10, 0),
            Err(Error::MixingLawUnavailable { .. })
        ));
    }

    #[test]
    fn signed_mixture_sampler_ks() {
        let pair = make_counterexample(&CounterexampleKind::SignedMixture { a: 0.25 }).unwrap();
        let m = density_from_even_rational(&pair.f2).unwrap();
        let law = LawSpec::SignedMixture(m.clone());
        let batch = sample(&law, 200_000, 17).unwrap();
        assert!(batch.acceptance.unwrap() > 0.5);
        let d = kolmogorov_distance(&batch.values, |x| m.cdf(x));
        assert!(d < 2.0 / (200_000f64).sqrt(), "KS distance {d}");
    }

    #[test]
    fn signed_mixture_refuses_uncertified_density() {
        use crate::inversion::MixtureTerm;
        // 0.5 e^{-2|x|} - 0.5 e^{-|x|} is negative for x != 0
        let bad = DensityMixture {
            atom0: 0.0,
            terms: vec![
                MixtureTerm {
                    weight: 2.0,
                    rate: 2.0,
                },
                MixtureTerm {
                    weight: -1.0,
                    rate: 1.0,
                },
            ],
        };
        assert!(matches!(
            sample(&LawSpec::SignedMixture(bad), 10, 0),
            Err(Error::UncertifiedDensity { .. })
        ));
    }

    #[test]
    fn error_shrinks_with_sqrt_n() {
        let law = LawSpec::Laplace { rate: 1.0 };
        let target = CharFn::laplace(1.0).unwrap();
        let grid = linspace(-5.0, 5.0, 21);
        let mut ratios = Vec::new();
        for seed in 0..20u64 {
            let med = |n: usize| {
                let batch = sample(&law, n, seed).unwrap();
                let ecf = empirical_cf(&batch, &grid).unwrap();
                let mut errs: Vec<f64> = grid
                    .iter()
                    .zip(&ecf.estimates)
                    .map(|(&xi, v)| (v - target.eval(xi).unwrap()).norm())
                    .collect();
                errs.sort_by(f64::total_cmp);
                errs[errs.len() / 2]
            };
            ratios.push(med(30_000) / med(60_000));
        }
        ratios.sort_by(f64::total_cmp);
        let median_ratio = ratios[ratios.len() / 2];
        assert!(
            (1.2..=1.7).contains(&median_ratio),
            "median ratio {median_ratio}"
        );
    }

    #[test]
    fn closed_form_cf_matches_known_values() {
        let law = LawSpec::AtomLaplaceMix { w0: 0.5, rate: 2.0 };
        let cf = law.closed_form_cf().unwrap();
        // w0 + (1 - w0)/(1 + xi^2/4) at xi = 2
        let want = 0.5 + 0.5 / 2.0;
        assert!((cf.eval(2.0).unwrap().re - want).abs() < 1e-12);

        let exp = LawSpec::Exponential { rate: 2.0 };
        let cf = exp.closed_form_cf().unwrap();
        let want = Complex64::new(1.0, 0.0) / Complex64::new(1.0, -0.5);
        assert!((cf.eval(1.0).unwrap() - want).norm() < 1e-14);
    }
}
