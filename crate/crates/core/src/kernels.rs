//! Completely monotone kernels L: [0, inf) -> (0, 1], the generalized
//! operation Phi_L(x, y) = L(L^{-1}(x) + L^{-1}(y)), kernel composition
//! L(a psi(xi)), and proportional-factor recovery.
//!
//! The kernels are an enumerated family rather than user closures: each
//! carries a closed-form inverse and, where one exists, the Bernstein-Widder
//! mixing law of the random time it subordinates.

use num_complex::Complex64;
use serde::Serialize;

use crate::charfn::CharFn;
use crate::lk::{Exponent, Indecomposability, LKExponent};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CMKernel {
    /// L(s) = e^{-s}; Phi_L is plain multiplication.
    Exp,
    /// L(s) = (1+s)^{-1}; Phi_L is Kac's operation.
    Kac,
    /// L(s) = (1 + s/beta)^{-beta}, beta > 0.
    GammaBeta(f64),
    /// L(s) = (1 + s^beta)^{-alpha}, alpha > 0, 0 < beta <= 1.
    GenLinnik { alpha: f64, beta: f64 },
    /// L(s) = e^{-s^beta}, 0 < beta <= 1.
    StableExp(f64),
}

/// Mixing law rho with L(s) = E[e^{-sT}], T ~ rho, where known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MixingLaw {
    PointMass(f64),
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl CMKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CMKernel::Exp | CMKernel::Kac => Ok(()),
            CMKernel::GammaBeta(beta) => {
                if beta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "beta",
                        constraint: "be > 0",
                        value: beta,
                    })
                }
            }
            CMKernel::GenLinnik { alpha, beta } => {
                if !(alpha > 0.0) {
                    Err(Error::Parameter {
                        what: "alpha",
                        constraint: "be > 0",
                        value: alpha,
                    })
                } else if !(beta > 0.0 && beta <= 1.0) {
                    Err(Error::Parameter {
                        what: "beta",
                        constraint: "lie in (0, 1]",
                        value: beta,
                    })
                } else {
                    Ok(())
                }
            }
            CMKernel::StableExp(beta) => {
                if beta > 0.0 && beta <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter {
                        what: "beta",
                        constraint: "lie in (0, 1]",
                        value: beta,
                    })
                }
            }
        }
    }

    /// L(s) for s >= 0; strictly decreasing with L(0) = 1.
    pub fn eval(&self, s: f64) -> Result<f64> {
        self.validate()?;
        if !(s >= 0.0) {
            return Err(Error::Parameter {
                what: "s",
                constraint: "be >= 0",
                value: s,
            });
        }
        Ok(match *self {
            CMKernel::Exp => (-s).exp(),
            CMKernel::Kac => 1.0 / (1.0 + s),
            CMKernel::GammaBeta(beta) => (-beta * (s / beta).ln_1p()).exp(),
            CMKernel::GenLinnik { alpha, beta } => (-alpha * s.powf(beta).ln_1p()).exp(),
            CMKernel::StableExp(beta) => (-s.powf(beta)).exp(),
        })
    }

    /// L at a complex argument with Re s >= 0, via principal branches.
    pub fn eval_complex(&self, s: Complex64) -> Result<Complex64> {
        self.validate()?;
        if s.re < -1e-12 {
            return Err(Error::PhiDomain {
                value: s,
                reason: "kernel argument must have nonnegative real part",
            });
        }
        Ok(match *self {
            CMKernel::Exp => (-s).exp(),
            CMKernel::Kac => (Complex64::new(1.0, 0.0) + s).inv(),
            CMKernel::GammaBeta(beta) => {
                let w = Complex64::new(1.0, 0.0) + s / beta;
                w.powf(-beta)
            }
            CMKernel::GenLinnik { alpha, beta } => {
                let w = Complex64::new(1.0, 0.0) + s.powf(beta);
                w.powf(-alpha)
            }
            CMKernel::StableExp(beta) => (-s.powf(beta)).exp(),
        })
    }

    /// The unique s >= 0 with L(s) = v, for v in the range I_L = (0, 1].
    pub fn inverse(&self, v: f64) -> Result<f64> {
        self.validate()?;
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::KernelRange { value: v });
        }
        Ok(match *self {
            CMKernel::Exp => -v.ln(),
            CMKernel::Kac => 1.0 / v - 1.0,
            CMKernel::GammaBeta(beta) => beta * (v.powf(-1.0 / beta) - 1.0),
            CMKernel::GenLinnik { alpha, beta } => {
                (v.powf(-1.0 / alpha) - 1.0).max(0.0).powf(1.0 / beta)
            }
            CMKernel::StableExp(beta) => (-v.ln()).powf(1.0 / beta),
        })
    }

    /// Bernstein-Widder mixing law, where a closed form is shipped.
    /// GenLinnik and StableExp mix over positive stable laws and are
    /// evaluation-only kernels here.
    pub fn mixing_law(&self) -> Option<MixingLaw> {
        match *self {
            CMKernel::Exp => Some(MixingLaw::PointMass(1.0)),
            CMKernel::Kac => Some(MixingLaw::Exponential { rate: 1.0 }),
            CMKernel::GammaBeta(beta) => Some(MixingLaw::Gamma {
                shape: beta,
                scale: 1.0 / beta,
            }),
            _ => None,
        }
    }

    /// Exponent beta when Phi_L has the closed form
    /// (x^{-1/beta} + y^{-1/beta} - 1)^{-beta} valid for complex arguments.
    pub fn phi_beta_exponent(&self) -> Option<f64> {
        match *self {
            CMKernel::Kac => Some(1.0),
            CMKernel::GammaBeta(beta) => Some(beta),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            CMKernel::Exp => "exp".into(),
            CMKernel::Kac => "kac".into(),
            CMKernel::GammaBeta(beta) => format!("gamma-beta({beta})"),
            CMKernel::GenLinnik { alpha, beta } => format!("gen-linnik({alpha},{beta})"),
            CMKernel::StableExp(beta) => format!("stable-exp({beta})"),
        }
    }
}

/// Phi_L(x, y) = L(L^{-1}(x) + L^{-1}(y)) on real arguments in I_L.
pub fn phi_l(kernel: &CMKernel, x: f64, y: f64) -> Result<f64> {
    kernel.eval(kernel.inverse(x)? + kernel.inverse(y)?)
}

/// Principal-branch (x^{-1/beta} + y^{-1/beta} - 1)^{-beta}; arguments must
/// stay off the cut (-inf, 0].
pub fn phi_beta(beta: f64, x: Complex64, y: Complex64) -> Result<Complex64> {
    if !(beta > 0.0) {
        return Err(Error::Parameter {
            what: "beta",
            constraint: "be > 0",
            value: beta,
        });
    }
    for v in [x, y] {
        if v.norm() == 0.0 {
            return Err(Error::PhiDomain {
                value: v,
                reason: "zero argument",
            });
        }
        if v.im == 0.0 && v.re < 0.0 {
            return Err(Error::PhiDomain {
                value: v,
                reason: "argument on the branch cut",
            });
        }
    }
    let w = x.powf(-1.0 / beta) + y.powf(-1.0 / beta) - 1.0;
    if w.norm() == 0.0 {
        return Err(Error::PhiDomain {
            value: w,
            reason: "denominator base vanishes",
        });
    }
    if w.im == 0.0 && w.re < 0.0 {
        return Err(Error::PhiDomain {
            value: w,
            reason: "combined value on the branch cut",
        });
    }
    Ok(w.powf(-beta))
}

/// Phi_L on complex arguments. Only the Kac and GammaBeta kernels extend to
/// the slit plane; the rest are restricted to (numerically) real arguments.
pub fn phi_l_complex(kernel: &CMKernel, x: Complex64, y: Complex64) -> Result<Complex64> {
    if let Some(beta) = kernel.phi_beta_exponent() {
        return phi_beta(beta, x, y);
    }
    if x.im.abs() > 1e-10 || y.im.abs() > 1e-10 {
        return Err(Error::Unsupported(
            "complex Phi_L is only available for the Kac and GammaBeta kernels",
        ));
    }
    phi_l(kernel, x.re, y.re).map(|v| Complex64::new(v, 0.0))
}

/// L(a psi(xi)) as a characteristic function.
pub fn compose(kernel: &CMKernel, a: f64, psi: &Exponent) -> Result<CharFn> {
    kernel.validate()?;
    if !(a >= 0.0) {
        return Err(Error::Parameter {
            what: "a",
            constraint: "be >= 0",
            value: a,
        });
    }
    Ok(CharFn::Composed {
        kernel: *kernel,
        scale: a,
        exponent: psi.clone(),
    })
}

/// Recover a in [0, 1] with eta = a psi from a characteristic function
/// f = L(eta). The reference psi must be indecomposable. For composed f the
/// stored exponent is used directly; otherwise eta is reconstructed on the
/// grid by inverting the kernel pointwise.
pub fn factor_recover(
    kernel: &CMKernel,
    psi: &LKExponent,
    f: &CharFn,
    grid: &[f64],
) -> Result<f64> {
    kernel.validate()?;
    match psi.classify() {
        Indecomposability::IndecomposableGaussian | Indecomposability::IndecomposableCosine(_) => {}
        _ => {
            return Err(Error::Parameter {
                what: "psi",
                constraint: "be indecomposable (a single Gaussian or cosine ray)",
                value: f64::NAN,
            })
        }
    }

    let eta: Vec<f64> = match f {
        CharFn::Composed {
            kernel: k2,
            scale,
            exponent: Exponent::Symmetric(eta),
        } if k2 == kernel => grid.iter().map(|&xi| scale * eta.eval(xi)).collect(),
        _ => grid
            .iter()
            .map(|&xi| {
                let v = f.eval(xi)?;
                if v.im.abs() > 1e-10 {
                    return Err(Error::PhiDomain {
                        value: v,
                        reason: "factor value is not real; cannot invert the kernel",
                    });
                }
                kernel.inverse(v.re)
            })
            .collect::<Result<Vec<f64>>>()?,
    };

    let psi_vals: Vec<f64> = grid.iter().map(|&xi| psi.eval(xi)).collect();
    let denom: f64 = psi_vals.iter().map(|p| p * p).sum();
    if denom == 0.0 {
        return Err(Error::Parameter {
            what: "psi on the grid",
            constraint: "not vanish identically",
            value: 0.0,
        });
    }
    let a: f64 = eta
        .iter()
        .zip(&psi_vals)
        .map(|(e, p)| e * p)
        .sum::<f64>()
        / denom;
    let residual = eta
        .iter()
        .zip(&psi_vals)
        .map(|(e, p)| (e - a * p).abs())
        .fold(0.0, f64::max);
    if residual > 1e-10 {
        return Err(Error::Structure { a, residual });
    }
    if !(-1e-10..=1.0 + 1e-10).contains(&a) {
        return Err(Error::Structure { a, residual });
    }
    Ok(a.clamp(0.0, 1.0))
}
