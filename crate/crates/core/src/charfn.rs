//! Characteristic functions, Kac's operation Phi, identity verification on
//! grids, and constructors for the counterexample families to the Laplace
//! factorization problem.
//!
//! Identities quantified over all real xi are checked on finite grids; a
//! passing report is a necessary-condition certificate, not a proof.

use num_complex::Complex64;
use serde::Serialize;

use crate::kernels::{phi_beta, phi_l_complex, CMKernel};
use crate::lk::{Exponent, LKExponent};
use crate::poly::{ComplexRational, Poly};
use crate::{Error, Result};

/// Default identity-residual tolerance for closed forms.
pub const IDENTITY_TOL: f64 = 1e-10;

/// An evaluable characteristic function.
#[derive(Debug, Clone, PartialEq)]
pub enum CharFn {
    /// Ratio of complex polynomials in xi.
    Rational(ComplexRational),
    /// L(scale * psi(xi)) for a completely monotone kernel L.
    Composed {
        kernel: CMKernel,
        scale: f64,
        exponent: Exponent,
    },
    /// base(xi)^exponent via the principal branch. Keeps non-integer powers
    /// unexpanded and integer powers at degree-2 cost for large n.
    Power {
        base: ComplexRational,
        exponent: f64,
    },
    /// Values on a sorted grid, linearly interpolated.
    Tabulated {
        grid: Vec<f64>,
        values: Vec<Complex64>,
    },
}

impl CharFn {
    /// Laplace characteristic function 1/(1 + a xi^2).
    pub fn laplace(a: f64) -> Result<CharFn> {
        if !(a > 0.0) {
            return Err(Error::Parameter {
                what: "a",
                constraint: "be > 0",
                value: a,
            });
        }
        Ok(CharFn::Rational(ComplexRational::from_real(
            &[1.0],
            &[1.0, 0.0, a],
        )?))
    }

    /// Centered Gaussian e^{-a xi^2}.
    pub fn gaussian(a: f64) -> Result<CharFn> {
        if !(a >= 0.0) {
            return Err(Error::Parameter {
                what: "a",
                constraint: "be >= 0",
                value: a,
            });
        }
        Ok(CharFn::Composed {
            kernel: CMKernel::Exp,
            scale: a,
            exponent: Exponent::Symmetric(LKExponent::xi_squared()),
        })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<Complex64>) -> Result<CharFn> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::Parameter {
                what: "tabulated grid",
                constraint: "match the value count and contain at least two points",
                value: grid.len() as f64,
            });
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parameter {
                what: "tabulated grid",
                constraint: "be strictly increasing",
                value: f64::NAN,
            });
        }
        let f = CharFn::Tabulated { grid, values };
        if let CharFn::Tabulated { grid, .. } = &f {
            if grid[0] <= 0.0 && *grid.last().unwrap() >= 0.0 {
                let at0 = f.eval(0.0)?;
                if (at0 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                    return Err(Error::Parameter {
                        what: "tabulated value at 0",
                        constraint: "equal 1 within 1e-12",
                        value: at0.norm(),
                    });
                }
            }
        }
        Ok(f)
    }

    /// Evaluate at a real frequency.
    pub fn eval(&self, xi: f64) -> Result<Complex64> {
        match self {
            CharFn::Rational(r) => r.eval(xi),
            CharFn::Composed {
                kernel,
                scale,
                exponent,
            } => kernel.eval_complex(exponent.eval(xi) * *scale),
            CharFn::Power { base, exponent } => {
                let w = base.eval(xi)?;
                if w.norm() == 0.0 {
                    return Err(Error::PhiDomain {
                        value: w,
                        reason: "power base vanishes",
                    });
                }
                if w.im == 0.0 && w.re < 0.0 {
                    return Err(Error::PhiDomain {
                        value: w,
                        reason: "power base on the branch cut",
                    });
                }
                Ok(w.powf(*exponent))
            }
            CharFn::Tabulated { grid, values } => {
                let (min, max) = (grid[0], *grid.last().unwrap());
                if xi < min || xi > max {
                    return Err(Error::OutOfRange { xi, min, max });
                }
                let idx = grid.partition_point(|&g| g < xi);
                if idx == 0 {
                    return Ok(values[0]);
                }
                if idx == grid.len() {
                    return Ok(values[grid.len() - 1]);
                }
                let (x0, x1) = (grid[idx - 1], grid[idx]);
                let w = (xi - x0) / (x1 - x0);
                Ok(values[idx - 1] * (1.0 - w) + values[idx] * w)
            }
        }
    }

    /// Exact rational form, when one exists. Composed Kac-kernel functions
    /// with atomless exponents convert, which lets the classifier consume
    /// them directly.
    pub fn as_rational(&self) -> Option<ComplexRational> {
        match self {
            CharFn::Rational(r) => Some(r.clone()),
            CharFn::Power { base, exponent } if *exponent == 1.0 => Some(base.clone()),
            CharFn::Power { base, exponent } if *exponent == -1.0 => {
                ComplexRational::new(base.den().clone(), base.num().clone()).ok()
            }
            CharFn::Composed {
                kernel: CMKernel::Kac,
                scale,
                exponent,
            } => {
                // 1/(1 + scale * psi) with psi polynomial of degree <= 2
                let psi_poly = match exponent {
                    Exponent::Symmetric(psi) if psi.atoms().is_empty() => {
                        Poly::from_real(&[0.0, 0.0, 0.5 * psi.sigma2() * scale])
                    }
                    Exponent::Drifted(psi) if psi.atoms().is_empty() => Poly::new(vec![
                        Complex64::default(),
                        Complex64::new(0.0, -psi.gamma() * scale),
                        Complex64::new(0.5 * psi.sigma2() * scale, 0.0),
                    ]),
                    _ => return None,
                };
                ComplexRational::new(Poly::one(), Poly::one().add(&psi_poly)).ok()
            }
            _ => None,
        }
    }
}

/// Kac's operation Phi(x, y) = 1/(1/x + 1/y - 1).
pub fn kac_phi(x: Complex64, y: Complex64) -> Result<Complex64> {
    for v in [x, y] {
        if v.norm() == 0.0 {
            return Err(Error::PhiDomain {
                value: v,
                reason: "zero argument",
            });
        }
    }
    let d = x.inv() + y.inv() - 1.0;
    if d.norm() < 1e-14 * (x.inv().norm() + y.inv().norm() + 1.0) {
        return Err(Error::PhiDomain {
            value: d,
            reason: "1/x + 1/y - 1 vanishes",
        });
    }
    Ok(d.inv())
}

/// The operation applied pointwise by `verify_identity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PhiVariant {
    /// Kac's Phi.
    Kac,
    /// Phi_beta(x, y) = (x^{-1/beta} + y^{-1/beta} - 1)^{-beta}.
    Beta(f64),
    /// Phi_n, the integer case of Phi_beta.
    Power(u32),
    /// Phi_L for an arbitrary kernel (real arguments unless the kernel has a
    /// complex closed form).
    Kernel(CMKernel),
}

impl PhiVariant {
    pub fn apply(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        match *self {
            PhiVariant::Kac => kac_phi(x, y),
            PhiVariant::Beta(beta) => phi_beta(beta, x, y),
            PhiVariant::Power(n) => phi_beta(n as f64, x, y),
            PhiVariant::Kernel(k) => phi_l_complex(&k, x, y),
        }
    }
}

/// Grid report for Phi(f1, f2) = target.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub points: usize,
    /// Grid points where evaluation failed, with the failure text.
    pub failures: Vec<(f64, String)>,
    pub pass: bool,
}

/// Check Phi(f1(xi), f2(xi)) = target(xi) over the grid. Evaluation errors
/// are recorded per point rather than aborting the sweep.
pub fn verify_identity(
    f1: &CharFn,
    f2: &CharFn,
    target: &CharFn,
    grid: &[f64],
    op: &PhiVariant,
    tolerance: f64,
) -> VerificationReport {
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    for &xi in grid {
        let step = (|| -> Result<f64> {
            let v1 = f1.eval(xi)?;
            let v2 = f2.eval(xi)?;
            let t = target.eval(xi)?;
            Ok((op.apply(v1, v2)? - t).norm())
        })();
        match step {
            Ok(r) => max_residual = max_residual.max(r),
            Err(e) => failures.push((xi, e.to_string())),
        }
    }
    let pass = failures.is_empty() && max_residual < tolerance;
    VerificationReport {
        max_residual,
        tolerance,
        points: grid.len(),
        failures,
        pass,
    }
}

/// The counterexample families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CounterexampleKind {
    /// Difference of independent Exp(1) and Exp(2) variables and its mirror:
    /// complex-valued factors solving the Kac identity.
    ExpDifference,
    /// Real, even factors: f1 = (2 + a xi^2)/(2 (1 + a xi^2)) and the
    /// signed-Laplace-mixture partner, 0 < a < 1/2.
    SignedMixture { a: f64 },
    /// Gamma-subordinated normal with drift: factors
    /// (1 + (a_j xi^2 -+ i b xi)/beta)^{-beta} under Phi_beta.
    GammaDrift { beta: f64, a1: f64, a2: f64, b: f64 },
    /// n-fold powers of rescaled mixture factors under Phi_n.
    PowerFamily { a: f64, n: u32, theta: f64 },
}

/// A constructed counterexample: two factors, the target they combine to,
/// and the operation under which they do.
#[derive(Debug, Clone)]
pub struct CounterexamplePair {
    pub f1: CharFn,
    pub f2: CharFn,
    pub target: CharFn,
    pub op: PhiVariant,
}

/// Admissibility bound 2 sqrt(beta) tan(pi/beta) min(sqrt(a1), sqrt(a2))
/// for the drift size when beta > 2.
pub fn gamma_drift_bound(beta: f64, a1: f64, a2: f64) -> f64 {
    2.0 * beta.sqrt() * (std::f64::consts::PI / beta).tan() * a1.sqrt().min(a2.sqrt())
}

pub fn make_counterexample(kind: &CounterexampleKind) -> Result<CounterexamplePair> {
    match *kind {
        CounterexampleKind::ExpDifference => {
            let half_i = Complex64::new(0.0, 0.5);
            let one = Complex64::new(1.0, 0.0);
            let half = Complex64::new(0.5, 0.0);
            let f1 = CharFn::Rational(ComplexRational::new(
                Poly::one(),
                Poly::new(vec![one, -half_i, half]),
            )?);
            let f2 = CharFn::Rational(ComplexRational::new(
                Poly::one(),
                Poly::new(vec![one, half_i, half]),
            )?);
            Ok(CounterexamplePair {
                f1,
                f2,
                target: CharFn::laplace(1.0)?,
                op: PhiVariant::Kac,
            })
        }
        CounterexampleKind::SignedMixture { a } => {
            if !(a > 0.0 && a < 0.5) {
                return Err(Error::Parameter {
                    what: "a",
                    constraint: "lie in (0, 1/2)",
                    value: a,
                });
            }
            let f1 = CharFn::Rational(ComplexRational::from_real(
                &[2.0, 0.0, a],
                &[2.0, 0.0, 2.0 * a],
            )?);
            let f2 = CharFn::Rational(ComplexRational::from_real(
                &[2.0, 0.0, a],
                &[2.0, 0.0, 2.0, 0.0, a],
            )?);
            Ok(CounterexamplePair {
                f1,
                f2,
                target: CharFn::laplace(1.0)?,
                op: PhiVariant::Kac,
            })
        }
        CounterexampleKind::GammaDrift { beta, a1, a2, b } => {
            for (what, v) in [("beta", beta), ("a1", a1), ("a2", a2)] {
                if !(v > 0.0) {
                    return Err(Error::Parameter {
                        what: match what {
                            "beta" => "beta",
                            "a1" => "a1",
                            _ => "a2",
                        },
                        constraint: "be > 0",
                        value: v,
                    });
                }
            }
            if b == 0.0 || !b.is_finite() {
                return Err(Error::Parameter {
                    what: "b",
                    constraint: "be nonzero",
                    value: b,
                });
            }
            if beta > 2.0 {
                let bound = gamma_drift_bound(beta, a1, a2);
                if b.abs() >= bound {
                    return Err(Error::BranchCondition { b, bound });
                }
            }
            let base = |aj: f64, sign: f64| {
                ComplexRational::new(
                    Poly::new(vec![
                        Complex64::new(1.0, 0.0),
                        Complex64::new(0.0, sign * b / beta),
                        Complex64::new(aj / beta, 0.0),
                    ]),
                    Poly::one(),
                )
            };
            let f1 = CharFn::Power {
                base: base(a1, -1.0)?,
                exponent: -beta,
            };
            let f2 = CharFn::Power {
                base: base(a2, 1.0)?,
                exponent: -beta,
            };
            let target = CharFn::Power {
                base: ComplexRational::from_real(&[1.0, 0.0, (a1 + a2) / beta], &[1.0])?,
                exponent: -beta,
            };
            Ok(CounterexamplePair {
                f1,
                f2,
                target,
                op: PhiVariant::Beta(beta),
            })
        }
        CounterexampleKind::PowerFamily { a, n, theta } => {
            if !(a > 0.0) {
                return Err(Error::Parameter {
                    what: "a",
                    constraint: "be > 0",
                    value: a,
                });
            }
            if n < 1 {
                return Err(Error::Parameter {
                    what: "n",
                    constraint: "be >= 1",
                    value: n as f64,
                });
            }
            if !(theta > 0.0 && theta < 0.5) {
                return Err(Error::Parameter {
                    what: "theta",
                    constraint: "lie in (0, 1/2)",
                    value: theta,
                });
            }
            let an = a / n as f64;
            let c = theta * an;
            let u1 = ComplexRational::from_real(&[2.0, 0.0, c], &[2.0, 0.0, 2.0 * c])?;
            let u2 = ComplexRational::from_real(
                &[2.0, 0.0, c],
                &[2.0, 0.0, 2.0 * an, 0.0, theta * an * an],
            )?;
            let target = CharFn::Power {
                base: ComplexRational::from_real(&[1.0, 0.0, an], &[1.0])?,
                exponent: -(n as f64),
            };
            Ok(CounterexamplePair {
                f1: CharFn::Power {
                    base: u1,
                    exponent: n as f64,
                },
                f2: CharFn::Power {
                    base: u2,
                    exponent: n as f64,
                },
                target,
                op: PhiVariant::Power(n),
            })
        }
    }
}

/// Report on the principal-branch argument of w(xi) = 1 + (a xi^2 - i b xi)/beta.
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    /// Max of |arg w| over the supplied grid.
    pub grid_max_arg: f64,
    /// Closed-form maximum arctan(|b| / (2 sqrt(a beta))).
    pub analytic_max_arg: f64,
    /// Where the closed-form maximum is attained: |xi| = sqrt(beta/a).
    pub maximizer_xi: f64,
    /// The branch threshold pi/beta.
    pub limit: f64,
    /// Max over the grid of |(w^-beta)^(-1/beta) - w|.
    pub roundtrip_max_err: f64,
    /// Strict inequality max |arg w| < pi/beta together with the round trip.
    pub pass: bool,
}

pub fn principal_branch_check(beta: f64, a: f64, b: f64, grid: &[f64]) -> Result<BranchReport> {
    if !(beta > 0.0) {
        return Err(Error::Parameter {
            what: "beta",
            constraint: "be > 0",
            value: beta,
        });
    }
    if !(a > 0.0) {
        return Err(Error::Parameter {
            what: "a",
            constraint: "be > 0",
            value: a,
        });
    }
    let mut grid_max_arg = 0.0f64;
    let mut roundtrip_max_err = 0.0f64;
    for &xi in grid {
        let w = Complex64::new(1.0 + a * xi * xi / beta, -b * xi / beta);
        grid_max_arg = grid_max_arg.max(w.arg().abs());
        let back = w.powf(-beta).powf(-1.0 / beta);
        roundtrip_max_err = roundtrip_max_err.max((back - w).norm());
    }
    let analytic_max_arg = (b.abs() / (2.0 * (a * beta).sqrt())).atan();
    let limit = std::f64::consts::PI / beta;
    let arg_ok = analytic_max_arg < limit && grid_max_arg < limit;
    Ok(BranchReport {
        grid_max_arg,
        analytic_max_arg,
        maximizer_xi: (beta / a).sqrt(),
        limit,
        roundtrip_max_err,
        pass: arg_ok && roundtrip_max_err <= 1e-12,
    })
}

/// Which family to drive toward its Gaussian limit.
#[derive(Debug, Clone, Serialize)]
pub enum LimitScan {
    /// f_{j,n} -> e^{-theta a/2 xi^2} and e^{-(1 - theta/2) a xi^2}.
    PowerFamily { a: f64, theta: f64, ns: Vec<u32> },
    /// Factors -> e^{-a_j xi^2} along an admissible drift sequence
    /// b_beta = min(1, sqrt(beta) tan(pi/max(beta, 2.01)) min(sqrt a_j)).
    GammaDrift { a1: f64, a2: f64, betas: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    /// n or beta, in scan order.
    pub indices: Vec<f64>,
    pub sup_f1: Vec<f64>,
    pub sup_f2: Vec<f64>,
    /// max(sup_f1, sup_f2) per index.
    pub sup: Vec<f64>,
    pub non_increasing: bool,
    pub final_sup: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Default admissible drift for the gamma-drift scan.
pub fn default_beta_drift(beta: f64, a1: f64, a2: f64) -> f64 {
    let root = a1.sqrt().min(a2.sqrt());
    (beta.sqrt() * (std::f64::consts::PI / beta.max(2.01)).tan() * root).min(1.0)
}

pub fn gaussian_limit_scan(scan: &LimitScan, grid: &[f64], threshold: f64) -> Result<LimitReport> {
    let mut indices = Vec::new();
    let mut sup_f1 = Vec::new();
    let mut sup_f2 = Vec::new();

    let mut push = |idx: f64, pair: &CounterexamplePair, g1: &CharFn, g2: &CharFn| -> Result<()> {
        let mut s1 = 0.0f64;
        let mut s2 = 0.0f64;
        for &xi in grid {
            s1 = s1.max((pair.f1.eval(xi)? - g1.eval(xi)?).norm());
            s2 = s2.max((pair.f2.eval(xi)? - g2.eval(xi)?).norm());
        }
        indices.push(idx);
        sup_f1.push(s1);
        sup_f2.push(s2);
        Ok(())
    };

    match scan {
        LimitScan::PowerFamily { a, theta, ns } => {
            let g1 = CharFn::gaussian(theta * a / 2.0)?;
            let g2 = CharFn::gaussian((1.0 - theta / 2.0) * a)?;
            for &n in ns {
                let pair = make_counterexample(&CounterexampleKind::PowerFamily {
                    a: *a,
                    n,
                    theta: *theta,
                })?;
                push(n as f64, &pair, &g1, &g2)?;
            }
        }
        LimitScan::GammaDrift { a1, a2, betas } => {
            let g1 = CharFn::gaussian(*a1)?;
            let g2 = CharFn::gaussian(*a2)?;
            for &beta in betas {
                let b = default_beta_drift(beta, *a1, *a2);
                let pair = make_counterexample(&CounterexampleKind::GammaDrift {
                    beta,
                    a1: *a1,
                    a2: *a2,
                    b,
                })?;
                push(beta, &pair, &g1, &g2)?;
            }
        }
    }

    let sup: Vec<f64> = sup_f1
        .iter()
        .zip(&sup_f2)
        .map(|(x, y)| x.max(*y))
        .collect();
    let non_increasing = sup.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let final_sup = *sup.last().unwrap_or(&f64::INFINITY);
    let pass = non_increasing && final_sup < threshold;
    Ok(LimitReport {
        indices,
        sup_f1,
        sup_f2,
        sup,
        non_increasing,
        final_sup,
        threshold,
        pass,
    })
}
