//! Fourier inversion of even rational characteristic functions to explicit
//! mixtures of Laplace kernels, grid positivity certification, a generic
//! quadrature fallback, and the Bochner positive-definiteness test.

use num_complex::Complex64;
use serde::Serialize;

use crate::charfn::CharFn;
use crate::grid::linspace;
use crate::poly::{real_poly_roots, ComplexRational, Poly};
use crate::{Error, Result};

/// Grid positivity threshold: values above this count as nonnegative.
pub const POSITIVITY_THRESHOLD: f64 = -1e-12;

/// One continuous component A/(2 sqrt(lambda)) e^{-sqrt(lambda) |x|};
/// `rate` stores sqrt(lambda). Weights may be negative individually.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureTerm {
    pub weight: f64,
    pub rate: f64,
}

impl MixtureTerm {
    fn lambda(&self) -> f64 {
        self.rate * self.rate
    }
}

/// Atom at 0 plus a signed combination of Laplace kernels; the inverse
/// Fourier transform of atom0 + sum A_k/(xi^2 + lambda_k).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMixture {
    pub atom0: f64,
    pub terms: Vec<MixtureTerm>,
}

impl DensityMixture {
    /// Continuous part of the density at x (the atom is carried separately).
    pub fn density(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight / (2.0 * t.rate) * (-t.rate * x.abs()).exp())
            .sum()
    }

    /// Total mass atom0 + sum A_k / lambda_k; equals f(0) for a mixture
    /// obtained by inversion.
    pub fn mass(&self) -> f64 {
        self.atom0 + self.terms.iter().map(|t| t.weight / t.lambda()).sum::<f64>()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let mut v = if x >= 0.0 { self.atom0 } else { 0.0 };
        for t in &self.terms {
            let half = t.weight / (2.0 * t.lambda());
            v += if x < 0.0 {
                half * (t.rate * x).exp()
            } else {
                t.weight / t.lambda() - half * (-t.rate * x).exp()
            };
        }
        v
    }

    pub fn min_rate(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.rate)
            .fold(f64::INFINITY, f64::min)
    }

    /// The characteristic function atom0 + sum A_k/(xi^2 + lambda_k) as an
    /// exact rational.
    pub fn char_fn(&self) -> Result<CharFn> {
        let mut den = Poly::one();
        for t in &self.terms {
            den = den.mul(&Poly::from_real(&[t.lambda(), 0.0, 1.0]));
        }
        let mut num = den.scale(Complex64::new(self.atom0, 0.0));
        for (k, t) in self.terms.iter().enumerate() {
            let mut part = Poly::from_real(&[t.weight]);
            for (j, other) in self.terms.iter().enumerate() {
                if j != k {
                    part = part.mul(&Poly::from_real(&[other.lambda(), 0.0, 1.0]));
                }
            }
            num = num.add(&part);
        }
        Ok(CharFn::Rational(ComplexRational::new(num, den)?))
    }
}

/// Default certification grid: 2001 points on [0, 10/min-rate]. Beyond that
/// range the slowest-decaying positive term dominates analytically.
pub fn positivity_grid(p: &DensityMixture) -> Vec<f64> {
    let r = p.min_rate();
    let upper = if r.is_finite() && r > 0.0 { 10.0 / r } else { 10.0 };
    linspace(0.0, upper, 2001)
}

/// Decompose an even real rational f into sum A_k/(xi^2 + lambda_k) with
/// lambda_k ascending. Requires a proper rational (numerator degree in
/// u = xi^2 strictly below the denominator degree) with simple negative
/// real roots in u.
pub fn partial_fractions_even(f: &ComplexRational) -> Result<Vec<(f64, f64)>> {
    if !f.is_real_even() {
        return Err(Error::NotEvenReal);
    }
    let num_u = f.num().even_to_u();
    let den_u = f.den().even_to_u();
    if num_u.len() >= den_u.len() {
        return Err(Error::Improper);
    }
    partial_fractions_u(&num_u, &den_u, 0.0, f)
}

fn partial_fractions_u(
    num_u: &[f64],
    den_u: &[f64],
    constant: f64,
    original: &ComplexRational,
) -> Result<Vec<(f64, f64)>> {
    let roots = real_poly_roots(den_u)?;
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for r in &roots {
        if r.im.abs() > 1e-8 * scale {
            return Err(Error::ComplexRootPair { re: r.re, im: r.im });
        }
    }
    let mut us: Vec<f64> = roots.iter().map(|r| r.re).collect();
    us.sort_by(f64::total_cmp);
    for w in us.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-8 * scale {
            return Err(Error::RepeatedRoot { root: w[0] });
        }
    }

    let num_p = Poly::from_real(num_u);
    let den_p = Poly::from_real(den_u);
    let den_d = den_p.derivative();
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(us.len());
    for &u in &us {
        if u >= 0.0 {
            return Err(Error::PoleSign { u });
        }
        let residue = (num_p.eval_real(u) / den_d.eval_real(u)).re;
        terms.push((residue, -u));
    }
    terms.sort_by(|a, b| a.1.total_cmp(&b.1));

    // recombination must reproduce f on the grid
    let mut residual = 0.0f64;
    for xi in linspace(-20.0, 20.0, 401) {
        let recombined: f64 = constant
            + terms
                .iter()
                .map(|(a, l)| a / (xi * xi + l))
                .sum::<f64>();
        let want = original.eval(xi)?.re;
        residual = residual.max((recombined - want).abs());
    }
    if residual > 1e-10 {
        return Err(Error::Recombination { residual });
    }
    Ok(terms)
}

/// Invert an even real rational characteristic function into an explicit
/// mixture. The limit of f at infinity becomes the atom at 0.
pub fn density_from_even_rational(f: &CharFn) -> Result<DensityMixture> {
    let rational = f
        .as_rational()
        .ok_or(Error::Unsupported("mixture inversion needs a rational characteristic function"))?;
    if !rational.is_real_even() {
        return Err(Error::NotEvenReal);
    }
    let num_u = rational.num().even_to_u();
    let den_u = rational.den().even_to_u();
    if num_u.len() > den_u.len() {
        return Err(Error::Improper);
    }
    let atom0 = if num_u.len() == den_u.len() {
        num_u[num_u.len() - 1] / den_u[den_u.len() - 1]
    } else {
        0.0
    };
    // strip the constant: f - atom0 = (num - atom0 den)/den is proper
    let proper: Vec<f64> = (0..den_u.len() - 1)
        .map(|k| num_u.get(k).copied().unwrap_or(0.0) - atom0 * den_u[k])
        .collect();
    let terms = partial_fractions_u(&proper, &den_u, atom0, &rational)?;
    let mixture = DensityMixture {
        atom0,
        terms: terms
            .into_iter()
            .map(|(a, l)| MixtureTerm {
                weight: a,
                rate: l.sqrt(),
            })
            .collect(),
    };
    let mass = mixture.mass();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(Error::MassMismatch { mass });
    }
    Ok(mixture)
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub min_density: f64,
    pub argmin: f64,
    /// Lower-bound constant A_+/(2 sqrt(lambda_-)) + A_-/(2 sqrt(lambda_+))
    /// for two-term mixtures with one negative weight; nonnegativity of this
    /// constant certifies the density analytically.
    pub analytic_bound: Option<f64>,
    pub mass: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Certify pointwise nonnegativity of a mixture on a grid of x >= 0 (the
/// density is symmetric).
pub fn positivity_report(p: &DensityMixture, grid: &[f64]) -> PositivityReport {
    let mut min_density = f64::INFINITY;
    let mut argmin = 0.0;
    for &x in grid {
        let v = p.density(x);
        if v < min_density {
            min_density = v;
            argmin = x;
        }
    }
    let analytic_bound = match p.terms.as_slice() {
        [plus, minus] if plus.weight > 0.0 && minus.weight < 0.0 && plus.rate < minus.rate => {
            Some(plus.weight / (2.0 * plus.rate) + minus.weight / (2.0 * minus.rate))
        }
        _ => None,
    };
    let pass = min_density >= POSITIVITY_THRESHOLD && p.atom0 >= 0.0;
    PositivityReport {
        min_density,
        argmin,
        analytic_bound,
        mass: p.mass(),
        threshold: POSITIVITY_THRESHOLD,
        pass,
    }
}

/// Tabulated output of the quadrature inversion.
#[derive(Debug, Clone, Serialize)]
pub struct NumericDensity {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Richardson difference against the half-resolution rule plus a crude
    /// truncated-tail bound.
    pub quad_error: f64,
    /// |xi| beyond which |f| < 1e-8 (the kappa-estimation radius).
    pub truncation: f64,
    /// Set when the tail target was not reached; the result then carries an
    /// unquantified truncation error.
    pub tail_warning: bool,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Fourier inversion p(x) = (1/2 pi) \int e^{-i xi x} f(xi) d xi by composite
/// Simpson quadrature, using the Hermitian symmetry of f to fold onto
/// [0, Xi]. A matched C/(1 + xi^2) tail is split off and inverted in closed
/// form so that slowly decaying rational tails do not poison the truncation.
pub fn numeric_inversion(f: &CharFn, xs: &[f64]) -> Result<NumericDensity> {
    // locate the tail: double until |f| drops below 1e-8
    let mut xi_tail = 8.0f64;
    let mut tail_warning = false;
    loop {
        match (f.eval(xi_tail), f.eval(-xi_tail)) {
            (Ok(a), Ok(b)) => {
                if a.norm() < 1e-8 && b.norm() < 1e-8 {
                    break;
                }
                if xi_tail >= 8.0 * (1 << 20) as f64 {
                    tail_warning = true;
                    break;
                }
                xi_tail *= 2.0;
            }
            _ => {
                // range-limited input: fall back to the largest usable radius
                tail_warning = true;
                xi_tail /= 2.0;
                if xi_tail < 1.0 {
                    return Err(Error::Unsupported(
                        "cannot find a usable truncation radius for quadrature",
                    ));
                }
                break;
            }
        }
    }
    let kappa = f.eval(xi_tail)?.re * xi_tail * xi_tail;

    let xi_quad = xi_tail.min(200.0);
    let x_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let n = {
        let resolved = (64.0 * xi_quad * x_max.max(1.0)).ceil() as usize;
        let n = resolved.max(4096).min(1 << 22);
        n + n % 4
    };
    let h = xi_quad / n as f64;

    // g = f - kappa/(1+xi^2) sampled once on the nodes
    let mut g_re = Vec::with_capacity(n + 1);
    let mut g_im = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let xi = i as f64 * h;
        let v = f.eval(xi)?;
        g_re.push(v.re - kappa / (1.0 + xi * xi));
        g_im.push(v.im);
    }

    let simpson = |stride: usize, x: f64| -> f64 {
        let m = n / stride;
        let hh = h * stride as f64;
        let mut terms = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let i = j * stride;
            let xi = i as f64 * h;
            let w = if j == 0 || j == m {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let osc = (xi * x).cos() * g_re[i] + (xi * x).sin() * g_im[i];
            terms.push(w * osc);
        }
        pairwise_sum(&terms) * hh / 3.0 / std::f64::consts::PI
    };

    let mut values = Vec::with_capacity(xs.len());
    let mut quad_error = 0.0f64;
    for &x in xs {
        let fine = simpson(1, x);
        let coarse = simpson(2, x);
        quad_error = quad_error.max((fine - coarse).abs());
        values.push(kappa / 2.0 * (-x.abs()).exp() + fine);
    }
    let tail_mag = (g_re[n].powi(2) + g_im[n].powi(2)).sqrt();
    quad_error += tail_mag * xi_quad;

    Ok(NumericDensity {
        xs: xs.to_vec(),
        values,
        quad_error,
        truncation: xi_tail,
        tail_warning,
    })
}

/// Minimum eigenvalue of a Hermitian matrix given by rows, via the real
/// symmetric embedding [[Re, -Im], [Im, Re]].
pub fn min_eig_hermitian(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    let mut big = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = m[i][j];
            big[(i, j)] = v.re;
            big[(n + i, n + j)] = v.re;
            big[(i, n + j)] = -v.im;
            big[(n + i, j)] = v.im;
        }
    }
    let eigs = big.symmetric_eigen().eigenvalues;
    eigs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Minimum eigenvalue of the Gram matrix [f(xi_j - xi_k)]. A genuine
/// characteristic function stays above -1e-10 up to numerical noise.
pub fn bochner_min_eig(f: &CharFn, points: &[f64]) -> Result<f64> {
    bochner_min_eig_fn(|d| f.eval(d), points)
}

/// Gram-matrix test for any evaluator, reused for e^{-t psi} checks.
pub fn bochner_min_eig_fn(
    f: impl Fn(f64) -> Result<Complex64>,
    points: &[f64],
) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Parameter {
            what: "points",
            constraint: "contain at least two values",
            value: points.len() as f64,
        });
    }
    let m: Vec<Vec<Complex64>> = points
        .iter()
        .map(|&xi| {
            points
                .iter()
                .map(|&xj| f(xi - xj))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(min_eig_hermitian(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::{make_counterexample, CharFn, CounterexampleKind};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mixture_pair(a: f64) -> (CharFn, CharFn) {
        let pair = make_counterexample(&CounterexampleKind::SignedMixture { a }).unwrap();
        (pair.f1, pair.f2)
    }

    #[test]
    fn single_pole_partial_fractions() {
        let f = ComplexRational::from_real(&[1.0], &[1.0, 0.0, 1.0]).unwrap();
        let terms = partial_fractions_even(&f).unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].0 - 1.0).abs() < 1e-12);
        assert!((terms[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_f2_partial_fractions_frozen() {
        // A_pm = (2 sqrt(1-2a))^{-1} (sqrt(1-2a) pm 1), lambda_pm = (1 pm sqrt(1-2a))/a
        let a = 0.25f64;
        let s = (1.0 - 2.0 * a).sqrt();
        let a_plus = (s + 1.0) / (2.0 * s);
        let a_minus = (s - 1.0) / (2.0 * s);
        let l_plus = (1.0 + s) / a;
        let l_minus = (1.0 - s) / a;

        let (_, f2) = mixture_pair(a);
        let rational = f2.as_rational().unwrap();
        let terms = partial_fractions_even(&rational).unwrap();
        assert_eq!(terms.len(), 2);
        // ascending lambda: (A_plus, lambda_minus) then (A_minus, lambda_plus)
        assert!((terms[0].0 - a_plus).abs() < 1e-10);
        assert!((terms[0].1 - l_minus).abs() < 1e-10);
        assert!((terms[1].0 - a_minus).abs() < 1e-10);
        assert!((terms[1].1 - l_plus).abs() < 1e-10);
        // spot values
        assert!((terms[0].0 - 1.20711).abs() < 1e-5);
        assert!((terms[0].1 - 1.17157).abs() < 1e-5);
        assert!((terms[1].0 + 0.20711).abs() < 1e-5);
        assert!((terms[1].1 - 6.82843).abs() < 1e-5);

        // recombination at xi = 1 gives f2(1)
        let recombined: f64 = terms.iter().map(|(aa, l)| aa / (1.0 + l)).sum();
        assert!((recombined - 2.25 / 4.25).abs() < 1e-12);
    }

    #[test]
    fn density_examples() {
        let laplace = CharFn::laplace(1.0).unwrap();
        let m = density_from_even_rational(&laplace).unwrap();
        assert_eq!(m.atom0, 0.0);
        assert_eq!(m.terms.len(), 1);
        assert!((m.terms[0].weight - 1.0).abs() < 1e-12);
        assert!((m.terms[0].rate - 1.0).abs() < 1e-12);
        assert!((m.mass() - 1.0).abs() < 1e-12);

        let (f1, f2) = mixture_pair(0.25);
        let m1 = density_from_even_rational(&f1).unwrap();
        assert!((m1.atom0 - 0.5).abs() < 1e-12);
        assert_eq!(m1.terms.len(), 1);
        assert!((m1.terms[0].rate - 2.0).abs() < 1e-12);
        assert!((m1.terms[0].weight - 2.0).abs() < 1e-12);
        assert!((m1.mass() - 1.0).abs() < 1e-12);

        let m2 = density_from_even_rational(&f2).unwrap();
        assert!((m2.mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn positivity_certificates() {
        let laplace = density_from_even_rational(&CharFn::laplace(1.0).unwrap()).unwrap();
        let report = positivity_report(&laplace, &positivity_grid(&laplace));
        assert!(report.pass);
        assert!(report.min_density > 0.0);

        let (_, f2) = mixture_pair(0.25);
        let m2 = density_from_even_rational(&f2).unwrap();
        let report = positivity_report(&m2, &positivity_grid(&m2));
        assert!(report.pass);
        let bound = report.analytic_bound.expect("two-term signed mixture");
        assert!(bound >= 0.0);
    }

    #[test]
    fn quartic_is_rejected_by_partial_fractions_then_quadrature() {
        // 1/(1 + xi^4): complex roots in u, so no mixture form
        let f = ComplexRational::from_real(&[1.0], &[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            partial_fractions_even(&f),
            Err(Error::ComplexRootPair { .. })
        ));

        // quadrature shows the sign change: closed form
        // p(x) = e^{-t}(cos t + sin t)/(2 sqrt 2), t = |x|/sqrt 2
        let cf = CharFn::Rational(f);
        let xs = linspace(0.0, 10.0, 401);
        let d = numeric_inversion(&cf, &xs).unwrap();
        let min = d.values.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min < -1e-3, "minimum {min}");
        for (x, v) in d.xs.iter().zip(&d.values) {
            let t = x / 2.0f64.sqrt();
            let want = (-t).exp() * (t.cos() + t.sin()) / (2.0 * 2.0f64.sqrt());
            assert!((v - want).abs() < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn repeated_root_is_rejected() {
        // 1/(1+xi^2)^2 has a double root in u
        let f = ComplexRational::from_real(&[1.0], &[1.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            partial_fractions_even(&f),
            Err(Error::RepeatedRoot { .. })
        ));
    }

    #[test]
    fn numeric_inversion_closed_forms() {
        let laplace = CharFn::laplace(1.0).unwrap();
        let d = numeric_inversion(&laplace, &[0.0]).unwrap();
        assert!((d.values[0] - 0.5).abs() < 1e-6);
        assert!(!d.tail_warning);

        let gaussian = CharFn::gaussian(1.0).unwrap();
        let d = numeric_inversion(&gaussian, &[0.0]).unwrap();
        let want = 0.5 / std::f64::consts::PI.sqrt();
        assert!((d.values[0] - want).abs() < 1e-6);
    }

    #[test]
    fn numeric_inversion_matches_mixture_oracle() {
        let (_, f2) = mixture_pair(0.25);
        let m2 = density_from_even_rational(&f2).unwrap();
        let xs = linspace(-10.0, 10.0, 81);
        let d = numeric_inversion(&f2, &xs).unwrap();
        for (x, v) in d.xs.iter().zip(&d.values) {
            assert!((v - m2.density(*x)).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn mixture_char_fn_roundtrip() {
        let (_, f2) = mixture_pair(0.3);
        let m2 = density_from_even_rational(&f2).unwrap();
        let back = m2.char_fn().unwrap();
        for &xi in &[0.0, 0.7, 3.0, 11.0] {
            let d = (back.eval(xi).unwrap() - f2.eval(xi).unwrap()).norm();
            assert!(d < 1e-10, "xi = {xi}: {d}");
        }
    }

    #[test]
    fn bochner_examples() {
        let one = CharFn::Rational(ComplexRational::one());
        let points = [0.0, 1.0, 2.5];
        let eig = bochner_min_eig(&one, &points).unwrap();
        assert!(eig.abs() < 1e-12);

        let pair = make_counterexample(&CounterexampleKind::ExpDifference).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<f64> = (0..16).map(|_| rng.random_range(-10.0..10.0)).collect();
        assert!(bochner_min_eig(&pair.f1, &pts).unwrap() >= -1e-10);

        // 1 - xi^2 clipped to a grid is not positive definite
        let grid = linspace(-8.0, 8.0, 1601);
        let vals = grid
            .iter()
            .map(|&x| Complex64::new(1.0 - x * x, 0.0))
            .collect();
        let clipped = CharFn::tabulated(grid, vals).unwrap();
        let eig = bochner_min_eig(&clipped, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(eig < -0.5);
    }
}
