//! Probability generating functions on the nonnegative integers: Bernstein
//! exponents, composed pgfs L(a eta(1-z)), the discrete Phi operations,
//! discrete counterexample pairs, and series-coefficient certification.

use serde::Serialize;

use crate::grid::linspace;
use crate::kernels::CMKernel;
use crate::poly::{real_poly_roots, ComplexRational, Poly};
use crate::{Error, Result};

/// One atom c * delta_s of the Bernstein measure on (0, inf).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernsteinAtom {
    pub s: f64,
    pub c: f64,
}

/// eta(u) = b u + sum c_i (1 - e^{-u s_i}): nondecreasing, eta(0) = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinFn {
    b: f64,
    atoms: Vec<BernsteinAtom>,
}

impl BernsteinFn {
    pub fn new(b: f64, atoms: Vec<BernsteinAtom>) -> Result<Self> {
        if !(b >= 0.0) {
            return Err(Error::Parameter {
                what: "b",
                constraint: "be >= 0",
                value: b,
            });
        }
        for a in &atoms {
            if !(a.s > 0.0) {
                return Err(Error::Parameter {
                    what: "atom location s",
                    constraint: "be > 0",
                    value: a.s,
                });
            }
            if !(a.c > 0.0) {
                return Err(Error::Parameter {
                    what: "atom weight c",
                    constraint: "be > 0",
                    value: a.c,
                });
            }
        }
        let mut atoms = atoms;
        atoms.sort_by(|x, y| x.s.total_cmp(&y.s));
        Ok(BernsteinFn { b, atoms })
    }

    /// eta(u) = u.
    pub fn linear() -> Self {
        BernsteinFn {
            b: 1.0,
            atoms: vec![],
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn atoms(&self) -> &[BernsteinAtom] {
        &self.atoms
    }

    pub fn eval(&self, u: f64) -> f64 {
        let mut v = self.b * u;
        for a in &self.atoms {
            v += a.c * (1.0 - (-u * a.s).exp());
        }
        v
    }

    /// Classify against the indecomposable rays: multiples of u and of
    /// 1 - e^{-t u}.
    pub fn classify(&self) -> BernsteinClass {
        match (self.b > 0.0, self.atoms.len()) {
            (false, 0) => BernsteinClass::Zero,
            (true, 0) => BernsteinClass::Linear,
            (false, 1) => BernsteinClass::ExpAtom(self.atoms[0].s),
            _ => BernsteinClass::Decomposable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BernsteinClass {
    Linear,
    ExpAtom(f64),
    Decomposable,
    Zero,
}

/// An evaluable probability generating function.
#[derive(Debug, Clone, PartialEq)]
pub enum Pgf {
    /// Ratio of real polynomials in z with G(1) = 1.
    RationalZ(ComplexRational),
    /// L(scale * eta(1 - z)).
    ComposedZ {
        kernel: CMKernel,
        scale: f64,
        eta: BernsteinFn,
    },
    /// base(z)^n.
    PowerOf { base: Box<Pgf>, n: u32 },
}

impl Pgf {
    pub fn rational(num: &[f64], den: &[f64]) -> Result<Pgf> {
        let r = ComplexRational::from_real(num, den)?;
        Ok(Pgf::RationalZ(r))
    }

    /// Geometric pgf (1 + mu (1 - z))^{-1}.
    pub fn geometric(mu: f64) -> Result<Pgf> {
        if !(mu > 0.0) {
            return Err(Error::Parameter {
                what: "mu",
                constraint: "be > 0",
                value: mu,
            });
        }
        Pgf::rational(&[1.0], &[1.0 + mu, -mu])
    }
}

/// Evaluate a pgf at z in [0, 1].
pub fn pgf_eval(g: &Pgf, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Parameter {
            what: "z",
            constraint: "lie in [0, 1]",
            value: z,
        });
    }
    match g {
        Pgf::RationalZ(r) => Ok(r.eval(z)?.re),
        Pgf::ComposedZ { kernel, scale, eta } => kernel.eval(scale * eta.eval(1.0 - z)),
        Pgf::PowerOf { base, n } => Ok(pgf_eval(base, z)?.powi(*n as i32)),
    }
}

/// The discrete operations: Kac's Phi and its negative-binomial power form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiscretePhi {
    Kac,
    N(u32),
}

/// Apply the operation to pgf values at z.
pub fn pgf_phi(op: DiscretePhi, g1: &Pgf, g2: &Pgf, z: f64) -> Result<f64> {
    let x = pgf_eval(g1, z)?;
    let y = pgf_eval(g2, z)?;
    for v in [x, y] {
        if !(v > 0.0) {
            return Err(Error::PhiDomain {
                value: num_complex::Complex64::new(v, 0.0),
                reason: "pgf value must be positive",
            });
        }
    }
    match op {
        DiscretePhi::Kac => Ok(1.0 / (1.0 / x + 1.0 / y - 1.0)),
        DiscretePhi::N(n) => {
            let e = n as f64;
            Ok((x.powf(-1.0 / e) + y.powf(-1.0 / e) - 1.0).powf(-e))
        }
    }
}

/// Partial-fraction data of the second discrete factor with base parameter
/// mu: G2 = A/(1 - p z) + B/(1 - q z).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscretePfData {
    pub r: f64,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
}

/// A discrete counterexample pair with the target it combines to.
#[derive(Debug, Clone)]
pub struct DiscretePair {
    pub g1: Pgf,
    pub g2: Pgf,
    pub target: Pgf,
    pub op: DiscretePhi,
    pub pf: DiscretePfData,
}

/// Construct the discrete pair: for n = 1 the rational factors
/// G1 = 1/2 + 1/(2 (1 + theta lambda (1-z))) and its quadratic partner;
/// for n > 1 their lambda/n-rescaled n-th powers under Phi_n.
pub fn discrete_counterexample(lambda: f64, theta: f64, n: u32) -> Result<DiscretePair> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter {
            what: "lambda",
            constraint: "be > 0",
            value: lambda,
        });
    }
    if !(theta > 0.0 && theta < 0.5) {
        return Err(Error::Parameter {
            what: "theta",
            constraint: "lie in (0, 1/2)",
            value: theta,
        });
    }
    if n < 1 {
        return Err(Error::Parameter {
            what: "n",
            constraint: "be >= 1",
            value: n as f64,
        });
    }
    let mu = lambda / n as f64;
    let tm = theta * mu;
    // G1 = (2 + tm (1-z)) / (2 (1 + tm (1-z)))
    let g1 = Pgf::rational(&[2.0 + tm, -tm], &[2.0 * (1.0 + tm), -2.0 * tm])?;
    // G2 = (2 + tm (1-z)) / (2 + 2 mu (1-z) + theta mu^2 (1-z)^2)
    let g2 = Pgf::rational(
        &[2.0 + tm, -tm],
        &[
            2.0 + 2.0 * mu + theta * mu * mu,
            -2.0 * mu - 2.0 * theta * mu * mu,
            theta * mu * mu,
        ],
    )?;
    let target_base = Pgf::geometric(mu)?;

    let r = (1.0 - 2.0 * theta).sqrt();
    let pf = DiscretePfData {
        r,
        p: mu * (1.0 + r) / (2.0 + mu * (1.0 + r)),
        q: mu * (1.0 - r) / (2.0 + mu * (1.0 - r)),
        a: (1.0 + r - theta) / (r * (2.0 + mu * (1.0 + r))),
        b: (theta + r - 1.0) / (r * (2.0 + mu * (1.0 - r))),
    };

    if n == 1 {
        Ok(DiscretePair {
            g1,
            g2,
            target: target_base,
            op: DiscretePhi::Kac,
            pf,
        })
    } else {
        Ok(DiscretePair {
            g1: Pgf::PowerOf {
                base: Box::new(g1),
                n,
            },
            g2: Pgf::PowerOf {
                base: Box::new(g2),
                n,
            },
            target: Pgf::PowerOf {
                base: Box::new(target_base),
                n,
            },
            op: DiscretePhi::N(n),
            pf,
        })
    }
}

/// Nonnegativity certificate for series coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct NonnegReport {
    pub order: usize,
    pub min_coeff: f64,
    pub first_negative: Option<usize>,
    pub partial_sum: f64,
    /// (p, A + B): coefficient_n >= p^n (A + B) for two-term signed
    /// decompositions with the negative weight on the faster-decaying term.
    pub lower_bound_base: Option<(f64, f64)>,
    pub lower_bound_holds: Option<bool>,
    pub pass: bool,
}

fn series_mul(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    for (i, &x) in a.iter().enumerate().take(order + 1) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_pow(base: &[f64], n: u32, order: usize) -> Vec<f64> {
    let mut result = vec![0.0; order + 1];
    result[0] = 1.0;
    let mut acc: Vec<f64> = base.iter().copied().take(order + 1).collect();
    acc.resize(order + 1, 0.0);
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = series_mul(&result, &acc, order);
        }
        k >>= 1;
        if k > 0 {
            acc = series_mul(&acc, &acc, order);
        }
    }
    result
}

/// Partial fractions of a proper real rational in z over simple real poles:
/// returns (weight, ratio) pairs meaning weight * ratio^m contributions,
/// sorted by descending ratio.
fn rational_z_pf(num: &Poly, den: &Poly) -> Result<Option<Vec<(f64, f64)>>> {
    let den_coeffs: Vec<f64> = den.coeffs().iter().map(|c| c.re).collect();
    let roots = real_poly_roots(&den_coeffs)?;
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for root in &roots {
        if root.norm() <= 1.0 + 1e-9 {
            return Err(Error::InvalidPgfPole { pole: root.re });
        }
    }
    if roots.iter().any(|r| r.im.abs() > 1e-8 * scale) {
        return Ok(None);
    }
    let mut zs: Vec<f64> = roots.iter().map(|r| r.re).collect();
    zs.sort_by(f64::total_cmp);
    for w in zs.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-8 * scale {
            return Err(Error::RepeatedRoot { root: w[0] });
        }
    }
    let den_d = den.derivative();
    let mut terms: Vec<(f64, f64)> = zs
        .iter()
        .map(|&zk| {
            let residue = (num.eval_real(zk) / den_d.eval_real(zk)).re;
            // R/(z - zk) expands to sum_m (-R/zk) zk^{-m} z^m
            (-residue / zk, 1.0 / zk)
        })
        .collect();
    terms.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    Ok(Some(terms))
}

/// First `order` + 1 series coefficients of the pgf with a nonnegativity
/// report. Rational pgfs expand through partial fractions over simple real
/// poles (division recurrence for complex pole pairs); powers expand by
/// truncated Cauchy products. Composed pgfs have no series path here.
pub fn coefficients(g: &Pgf, order: usize) -> Result<(Vec<f64>, NonnegReport)> {
    if order < 1 {
        return Err(Error::Parameter {
            what: "order",
            constraint: "be >= 1",
            value: order as f64,
        });
    }
    let (coeffs, bound) = coefficients_inner(g, order)?;
    let min_coeff = coeffs.iter().copied().fold(f64::INFINITY, f64::min);
    let first_negative = coeffs.iter().position(|&c| c < -1e-14);
    let partial_sum: f64 = coeffs.iter().sum();
    let lower_bound_holds = bound.map(|(p, ab)| {
        let mut pm = 1.0f64;
        coeffs.iter().all(|&c| {
            let ok = c >= pm * ab - 1e-13 * pm.max(c.abs());
            pm *= p;
            ok
        })
    });
    let report = NonnegReport {
        order,
        min_coeff,
        first_negative,
        partial_sum,
        lower_bound_base: bound,
        lower_bound_holds,
        pass: first_negative.is_none(),
    };
    Ok((coeffs, report))
}

fn coefficients_inner(g: &Pgf, order: usize) -> Result<(Vec<f64>, Option<(f64, f64)>)> {
    match g {
        Pgf::RationalZ(r) => {
            let num = r.num().clone();
            let den = r.den().clone();
            if den.degree() == 0 {
                // den(0) = 1 after normalization: a polynomial pgf
                let mut c: Vec<f64> = num.coeffs().iter().map(|v| v.re).collect();
                c.resize(order + 1, 0.0);
                c.truncate(order + 1);
                return Ok((c, None));
            }
            // polynomial part plus proper remainder
            let (quot, rem) = if num.degree() >= den.degree() {
                num.div_rem(&den)
            } else {
                (Poly::zero(), num.clone())
            };
            match rational_z_pf(&rem, &den)? {
                Some(terms) => {
                    let mut coeffs = vec![0.0; order + 1];
                    for (k, c) in coeffs.iter_mut().enumerate() {
                        *c = quot.coeff(k).re;
                        for (w, ratio) in &terms {
                            *c += w * ratio.powi(k as i32);
                        }
                    }
                    // the printable lower bound applies to the two-term
                    // signed structure with the slow term positive
                    let bound = match terms.as_slice() {
                        [(a, p), (b, _q)] if *a > 0.0 && *b < 0.0 => Some((*p, a + b)),
                        _ => None,
                    };
                    Ok((coeffs, bound))
                }
                None => {
                    // complex pole pairs: series by division recurrence
                    let mut coeffs = vec![0.0; order + 1];
                    let d0 = den.coeff(0).re;
                    for k in 0..=order {
                        let mut v = num.coeff(k).re;
                        for j in 1..=k.min(den.degree()) {
                            v -= den.coeff(j).re * coeffs[k - j];
                        }
                        coeffs[k] = v / d0;
                    }
                    Ok((coeffs, None))
                }
            }
        }
        Pgf::PowerOf { base, n } => {
            let (base_coeffs, _) = coefficients_inner(base, order)?;
            Ok((series_pow(&base_coeffs, *n, order), None))
        }
        Pgf::ComposedZ { .. } => Err(Error::Unsupported(
            "series coefficients are not available for composed pgfs",
        )),
    }
}

/// Relative residual of fitting G(z)^{-1/n} - 1 = mu (1 - z) on [0, 1]:
/// membership test for the geometric (n = 1) and negative-binomial families.
pub fn family_affine_residual(g: &Pgf, n: u32) -> Result<f64> {
    let zs = linspace(0.0, 1.0, 11);
    let e = n as f64;
    let mut ys = Vec::with_capacity(zs.len());
    for &z in &zs {
        let v = pgf_eval(g, z)?;
        if !(v > 0.0) {
            return Err(Error::PhiDomain {
                value: num_complex::Complex64::new(v, 0.0),
                reason: "pgf value must be positive",
            });
        }
        ys.push(v.powf(-1.0 / e) - 1.0);
    }
    let ws: Vec<f64> = zs.iter().map(|&z| 1.0 - z).collect();
    let denom: f64 = ws.iter().map(|w| w * w).sum();
    let mu: f64 = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / denom;
    let scale = ys.iter().map(|y| y.abs()).fold(f64::MIN_POSITIVE, f64::max);
    let residual = ys
        .iter()
        .zip(&ws)
        .map(|(y, w)| (y - mu * w).abs())
        .fold(0.0, f64::max);
    Ok(residual / scale)
}

/// True when the affineness test keeps G inside the geometric
/// (resp. negative-binomial) family.
pub fn is_in_power_family(g: &Pgf, n: u32) -> Result<bool> {
    Ok(family_affine_residual(g, n)? <= 1e-8)
}

/// Recover a in [0, 1] with eta_G = a eta for a pgf G = L(eta_G(1-z)),
/// mirroring the continuous factor recovery.
pub fn discrete_factor_recover(kernel: &CMKernel, eta: &BernsteinFn, g: &Pgf) -> Result<f64> {
    kernel.validate()?;
    match eta.classify() {
        BernsteinClass::Linear | BernsteinClass::ExpAtom(_) => {}
        _ => {
            return Err(Error::Parameter {
                what: "eta",
                constraint: "be indecomposable (linear or a single exponential atom)",
                value: f64::NAN,
            })
        }
    }
    let zs = linspace(0.0, 1.0, 21);
    let eta_g: Vec<f64> = match g {
        Pgf::ComposedZ {
            kernel: k2,
            scale,
            eta: stored,
        } if k2 == kernel => zs.iter().map(|&z| scale * stored.eval(1.0 - z)).collect(),
        _ => zs
            .iter()
            .map(|&z| {
                let v = pgf_eval(g, z)?;
                kernel.inverse(v)
            })
            .collect::<Result<Vec<f64>>>()?,
    };
    let eta_ref: Vec<f64> = zs.iter().map(|&z| eta.eval(1.0 - z)).collect();
    let denom: f64 = eta_ref.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::Parameter {
            what: "eta on the grid",
            constraint: "not vanish identically",
            value: 0.0,
        });
    }
    let a: f64 = eta_g
        .iter()
        .zip(&eta_ref)
        .map(|(x, y)| x * y)
        .sum::<f64>()
        / denom;
    let residual = eta_g
        .iter()
        .zip(&eta_ref)
        .map(|(x, y)| (x - a * y).abs())
        .fold(0.0, f64::max);
    if residual > 1e-10 || !(-1e-10..=1.0 + 1e-10).contains(&a) {
        return Err(Error::Structure { a, residual });
    }
    Ok(a.clamp(0.0, 1.0))
}
