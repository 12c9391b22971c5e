//! Periodic trapezoid rule on circles and sup-norms over samples.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{CircleContour, CompactSample};
use crate::scalar::{cabs, is_finite_c, lower, Real};

/// A complex function of one complex variable.
pub trait ComplexFn<T>: Sync {
    fn eval(&self, z: Complex<T>) -> Complex<T>;
}

impl<T, F> ComplexFn<T> for F
where
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        self(z)
    }
}

/// Evaluates `f` at `z`, rejecting non-finite values.
pub fn eval_checked<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, z: Complex<T>, index: usize) -> Result<Complex<T>> {
    let v = f.eval(z);
    if is_finite_c(v) {
        Ok(v)
    } else {
        let z = lower(z);
        Err(Error::NodeEvaluation { index, re: z.re, im: z.im })
    }
}

/// Values of `f` at every node of `c`.
pub fn sample_on<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, c: &CircleContour<T>) -> Result<Vec<Complex<T>>> {
    c.nodes().into_iter().enumerate().map(|(j, z)| eval_checked(f, z, j)).collect()
}

/// Trapezoid approximation of `(1 / 2 pi i) \oint f(zeta) d zeta`, counter-clockwise.
pub fn contour_integral<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, c: &CircleContour<T>) -> Result<Complex<T>> {
    let units = c.unit_nodes();
    let mut acc = Complex::zero();
    for (j, u) in units.iter().enumerate() {
        let z = c.center + *u * c.radius;
        acc += eval_checked(f, z, j)? * *u;
    }
    Ok(acc * (c.radius / T::of_usize(c.node_count)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveOptions {
    pub start_nodes: usize,
    pub tolerance: f64,
    pub max_nodes: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { start_nodes: 256, tolerance: 1e-10, max_nodes: 1 << 16 }
    }
}

/// Result of a doubling trapezoid run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveIntegral<T> {
    pub value: Complex<T>,
    pub nodes: usize,
    pub last_change: f64,
    pub converged: bool,
}

/// Doubles the node count until two successive results agree to
/// `opts.tolerance`, reusing the even nodes of the previous level.
pub fn contour_integral_adaptive<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    center: Complex<T>,
    radius: T,
    opts: &AdaptiveOptions,
) -> Result<AdaptiveIntegral<T>> {
    let mut c = CircleContour::new(center, radius, opts.start_nodes)?;
    let mut sum = {
        let mut acc = Complex::zero();
        for (j, u) in c.unit_nodes().iter().enumerate() {
            acc += eval_checked(f, center + *u * radius, j)? * *u;
        }
        acc
    };
    let mut value = sum * (radius / T::of_usize(c.node_count));
    loop {
        let n2 = c.node_count * 2;
        if n2 > opts.max_nodes {
            return Ok(AdaptiveIntegral { value, nodes: c.node_count, last_change: f64::INFINITY, converged: false });
        }
        let finer = c.with_nodes(n2)?;
        let units = finer.unit_nodes();
        let mut odd = Complex::zero();
        for j in (1..n2).step_by(2) {
            odd += eval_checked(f, center + units[j] * radius, j)? * units[j];
        }
        sum += odd;
        let next = sum * (radius / T::of_usize(n2));
        let change = cabs(next - value).f64();
        c = finer;
        value = next;
        if change <= opts.tolerance {
            return Ok(AdaptiveIntegral { value, nodes: n2, last_change: change, converged: true });
        }
    }
}

/// `max |f|` over the sample.
pub fn sup_norm<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, s: &CompactSample<T>) -> Result<T> {
    let mut best = T::zero();
    for (j, &z) in s.points().iter().enumerate() {
        best = best.max(cabs(eval_checked(f, z, j)?));
    }
    Ok(best)
}
