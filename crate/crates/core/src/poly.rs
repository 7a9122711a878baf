//! Dense complex polynomials and rational functions in one variable.
//!
//! The rational functions arising here have degree at most 4, so plain
//! double-precision Horner evaluation and a tolerance-based Euclid gcd are
//! entirely adequate. Coefficients are stored in ascending order.

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative coefficient tolerance used for trimming and gcd reduction.
pub const COEFF_TOL: f64 = 1e-12;

/// Absolute threshold below which a denominator value counts as a pole.
const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::new(vec![Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop trailing coefficients that are negligible relative to the largest.
    fn trim(&mut self) {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= COEFF_TOL * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: `self = q * div + r` with deg r < deg div.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dlead = *div.coeffs.last().unwrap();
        let dd = div.degree();
        if rem.len() <= dd {
            return (Poly::zero(), Poly::new(rem));
        }
        let mut quot = vec![Complex64::default(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k] / dlead;
            quot[k - dd] = q;
            for j in 0..=dd {
                rem[k - dd + j] -= q * div.coeffs[j];
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Gcd up to the coefficient tolerance; coprime inputs yield a constant.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                break;
            }
            if b.degree() == 0 {
                return Poly::one();
            }
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
            // keep coefficients tame between rounds
            let lead = a.coeffs.last().copied().unwrap_or(Complex64::new(1.0, 0.0));
            a = a.scale(1.0 / lead);
        }
        if a.degree() == 0 {
            Poly::one()
        } else {
            a
        }
    }

    /// True when every coefficient is real within tolerance.
    pub fn is_real(&self) -> bool {
        let scale = self.max_coeff_norm().max(1.0);
        self.coeffs.iter().all(|c| c.im.abs() <= 1e-10 * scale)
    }

    /// True when odd-degree coefficients vanish within tolerance.
    pub fn is_even(&self) -> bool {
        let scale = self.max_coeff_norm().max(1.0);
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.norm() <= 1e-10 * scale)
    }

    /// Real coefficients of p viewed as a polynomial in u = x^2.
    /// Requires `is_real() && is_even()`.
    pub fn even_to_u(&self) -> Vec<f64> {
        self.coeffs.iter().step_by(2).map(|c| c.re).collect()
    }
}

/// Ratio of complex polynomials, normalized so den(0) = 1 and gcd-reduced.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRational {
    num: Poly,
    den: Poly,
}

impl ComplexRational {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parameter {
                what: "denominator",
                constraint: "be a nonzero polynomial",
                value: 0.0,
            });
        }
        let d0 = den.coeff(0);
        if d0.norm() <= COEFF_TOL * den.max_coeff_norm() {
            return Err(Error::Parameter {
                what: "denominator value at 0",
                constraint: "be nonzero",
                value: d0.norm(),
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let d0 = den.coeff(0);
        num = num.scale(1.0 / d0);
        den = den.scale(1.0 / d0);
        // pin the normalization exactly
        if !den.is_zero() {
            let mut c = den.coeffs().to_vec();
            c[0] = Complex64::new(1.0, 0.0);
            den = Poly::new(c);
        }
        Ok(ComplexRational { num, den })
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        ComplexRational::new(Poly::from_real(num), Poly::from_real(den))
    }

    /// The constant function 1.
    pub fn one() -> Self {
        ComplexRational {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, xi: f64) -> Result<Complex64> {
        let d = self.den.eval_real(xi);
        if d.norm() < POLE_TOL {
            return Err(Error::PoleOnRealAxis { xi });
        }
        Ok(self.num.eval_real(xi) / d)
    }

    /// 1/f - 1 as a rational function, i.e. (den - num) / num.
    pub fn reciprocal_minus_one(&self) -> Result<ComplexRational> {
        ComplexRational::new(self.den.sub(&self.num), self.num.clone())
    }

    pub fn is_real_even(&self) -> bool {
        self.num.is_real() && self.den.is_real() && self.num.is_even() && self.den.is_even()
    }
}

/// Roots of a real-coefficient polynomial (ascending coefficients), degree <= 8.
/// Closed forms for degrees 1-2, companion-matrix eigenvalues beyond.
pub fn real_poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut c: Vec<f64> = coeffs.to_vec();
    while let Some(&last) = c.last() {
        if last.abs() <= COEFF_TOL * scale {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len().saturating_sub(1);
    match deg {
        0 => Ok(vec![]),
        1 => Ok(vec![Complex64::new(-c[0] / c[1], 0.0)]),
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                // citardauq split avoids cancellation
                let q = -0.5 * (b + b.signum() * sq);
                let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, cc / q) };
                Ok(vec![Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)])
            } else {
                let re = -b / (2.0 * a);
                let im = (-disc).sqrt() / (2.0 * a);
                Ok(vec![Complex64::new(re, im), Complex64::new(re, -im)])
            }
        }
        d if d <= 8 => {
            let lead = c[d];
            let n = d;
            let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
            for i in 1..n {
                m[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                m[(i, n - 1)] = -c[i] / lead;
            }
            Ok(m.complex_eigenvalues().iter().copied().collect())
        }
        _ => Err(Error::Unsupported("polynomial degree above 8")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_eval() {
        let p = Poly::from_real(&[1.0, 0.0, 0.5]);
        assert_eq!(p.eval_real(2.0), c(3.0, 0.0));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn mul_matches_pointwise() {
        let p = Poly::from_real(&[1.0, 2.0]);
        let q = Poly::new(vec![c(0.0, 1.0), c(3.0, 0.0)]);
        let pq = p.mul(&q);
        for &x in &[0.3, -1.7, 2.0] {
            let lhs = pq.eval_real(x);
            let rhs = p.eval_real(x) * q.eval_real(x);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = Poly::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let b = Poly::from_real(&[1.0, 1.0]);
        let (q, r) = a.div_rem(&b);
        let back = q.mul(&b).add(&r);
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn rational_normalizes_den_at_zero() {
        // (2 + a xi^2) / (2 (1 + a xi^2)) with a = 0.25
        let f = ComplexRational::from_real(&[2.0, 0.0, 0.25], &[2.0, 0.0, 0.5]).unwrap();
        assert_eq!(f.den().coeff(0), c(1.0, 0.0));
        assert!((f.eval(0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((f.eval(1.0).unwrap() - c(0.9, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gcd_reduction_cancels_common_factor() {
        // (1+x^2)(2+x^2) / ((1+x^2)(3+x^2)) -> (2+x^2)/(3+x^2)
        let common = Poly::from_real(&[1.0, 0.0, 1.0]);
        let num = common.mul(&Poly::from_real(&[2.0, 0.0, 1.0]));
        let den = common.mul(&Poly::from_real(&[3.0, 0.0, 1.0]));
        let f = ComplexRational::new(num, den).unwrap();
        assert_eq!(f.num().degree(), 2);
        assert_eq!(f.den().degree(), 2);
        let v = f.eval(1.0).unwrap();
        assert!((v - c(0.75, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let f = ComplexRational::from_real(&[1.0], &[1.0, 0.0, -1.0]).unwrap();
        assert!(matches!(f.eval(1.0), Err(Error::PoleOnRealAxis { .. })));
    }

    #[test]
    fn quadratic_roots_exact() {
        // 0.125 u^2 + u + 1 has roots -4 ± 2 sqrt(2)
        let roots = real_poly_roots(&[1.0, 1.0, 0.125]).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] - (-4.0 - 2.0 * 2.0f64.sqrt())).abs() < 1e-12);
        assert!((re[1] - (-4.0 + 2.0 * 2.0f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn companion_roots_quartic() {
        // (u+1)(u+2)(u+3)(u+4)
        let p = [24.0, 50.0, 35.0, 10.0, 1.0];
        let mut roots: Vec<f64> = real_poly_roots(&p)
            .unwrap()
            .iter()
            .map(|r| {
                assert!(r.im.abs() < 1e-9);
                r.re
            })
            .collect();
        roots.sort_by(f64::total_cmp);
        for (r, want) in roots.iter().zip([-4.0, -3.0, -2.0, -1.0]) {
            assert!((r - want).abs() < 1e-8);
        }
    }
}
