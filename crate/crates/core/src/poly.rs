//! Complex polynomials in ascending coefficient order, optionally carrying
//! their roots for product-form evaluation.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{cabs, log_abs, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<Complex<T>>>,
}

impl<T: Real> Polynomial<T> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new(), roots: None }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Trailing exact zeros are dropped so the leading coefficient is nonzero.
    pub fn from_coeffs(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs, roots: None }
    }

    /// Monic polynomial with the given roots, which are retained.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        let mut coeffs = vec![Complex::new(T::one(), T::zero())];
        for &r in roots {
            // multiply by (z - r)
            coeffs.insert(0, Complex::zero());
            for i in 0..coeffs.len() - 1 {
                let next = coeffs[i + 1];
                coeffs[i] -= r * next;
            }
        }
        Polynomial { coeffs, roots: Some(roots.to_vec()) }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn roots(&self) -> Option<&[Complex<T>]> {
        self.roots.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Complex<T> {
        self.coeffs.get(i).copied().unwrap_or_else(Complex::zero)
    }

    /// Horner evaluation of the coefficient list.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Evaluates the product form when roots are known, Horner otherwise.
    pub fn eval_factored(&self, z: Complex<T>) -> Complex<T> {
        match &self.roots {
            Some(r) => r.iter().fold(Complex::new(T::one(), T::zero()), |acc, &a| acc * (z - a)),
            None => self.eval(z),
        }
    }

    /// `log |p(z)|` accumulated in log-space when roots are known.
    pub fn log_abs_at(&self, z: Complex<T>) -> f64 {
        match &self.roots {
            Some(r) => r.iter().map(|&a| log_abs(z - a)).sum(),
            None => log_abs(self.eval(z)),
        }
    }

    /// `|p(z)|`, in product form when roots are known.
    pub fn abs_at(&self, z: Complex<T>) -> T {
        cabs(self.eval_factored(z))
    }

    /// Coefficients (ascending in `z`) of `(p(zeta) - p(z)) / (zeta - z)`,
    /// obtained by synthetic division. The result has `degree()` entries.
    pub fn divided_difference(&self, zeta: Complex<T>) -> Vec<Complex<T>> {
        let m = self.degree();
        if self.coeffs.len() < 2 {
            return Vec::new();
        }
        let mut b = vec![Complex::zero(); m];
        b[m - 1] = self.coeffs[m];
        for j in (0..m - 1).rev() {
            b[j] = self.coeffs[j + 1] + zeta * b[j + 1];
        }
        b
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let roots = match (&self.roots, &other.roots) {
            (Some(r1), Some(r2)) => Some(r1.iter().chain(r2).copied().collect()),
            _ => None,
        };
        let mut p = Self::from_coeffs(out);
        p.roots = roots;
        p
    }

    /// Drops coefficients whose modulus is at most `threshold`.
    pub fn chop(&self, threshold: f64) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|&c| if cabs(c).f64() <= threshold { Complex::zero() } else { c })
                .collect(),
        )
    }

    /// Converts the scalar type through `f64`-free lifting where possible.
    pub fn map<U: Real>(&self, f: impl Fn(Complex<T>) -> Complex<U>) -> Polynomial<U> {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
            roots: self.roots.as_ref().map(|r| r.iter().map(|&c| f(c)).collect()),
        }
    }

    /// Maximum coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|&c| cabs(c).f64()).fold(0.0, f64::max)
    }

    /// Roots, taken from the stored list when present and otherwise found by
    /// Aberth iteration started on a circle of Cauchy-bound radius.
    pub fn find_roots(&self) -> Vec<Complex<T>> {
        if let Some(r) = &self.roots {
            return r.clone();
        }
        let m = self.degree();
        if m == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[m];
        let bound = 1.0 + self.coeffs[..m].iter().map(|&c| cabs(c / lead).f64()).fold(0.0, f64::max);
        let deriv: Vec<Complex<T>> = (1..=m).map(|i| self.coeffs[i] * T::of_usize(i)).collect();
        let dp = Polynomial { coeffs: deriv, roots: None };
        let mut z: Vec<Complex<T>> = (0..m)
            .map(|j| {
                let t = std::f64::consts::TAU * (j as f64 + 0.25) / m as f64;
                Complex::new(T::of(0.5 * bound * t.cos()), T::of(0.5 * bound * t.sin()))
            })
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..m {
                let p = self.eval(z[i]);
                if p.is_zero() {
                    continue;
                }
                let ratio = p / dp.eval(z[i]);
                let repulsion = (0..m).filter(|&j| j != i).fold(Complex::zero(), |acc: Complex<T>, j| acc + (z[i] - z[j]).inv());
                let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * repulsion);
                z[i] -= step;
                moved = moved.max(cabs(step).f64() / cabs(z[i]).f64().max(1.0));
            }
            if moved < 4.0 * T::EPS {
                break;
            }
        }
        z
    }
}
