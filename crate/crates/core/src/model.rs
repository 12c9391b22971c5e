//! The function families the toolkit works with: pole series
//! `sum c_n / (z - a_n)`, `exp(1/z)`, `1/sin(pi/z)` and rational functions.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CompactSample;
use crate::poly::Polynomial;
use crate::quadrature::ComplexFn;
use crate::scalar::{cexp, csin, lift, Real};

/// Terms with `log |c_n|` below this contribute nothing representable.
const LOG_NEGLIGIBLE: f64 = -740.0;

/// A sequence indexed from `n = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeqSpec {
    /// `1 / n`
    Reciprocal,
    /// `exp(-n^2) / n^2`
    GaussianDecay,
    /// `ratio^n`
    Geometric { ratio: f64 },
    /// A finite sequence; entries past the end are zero.
    Explicit { values: Vec<Complex<f64>> },
    /// Numeric samples of an infinite sequence with no known tail.
    Sampled { values: Vec<Complex<f64>> },
}

impl SeqSpec {
    /// Number of available entries, `None` when unbounded.
    pub fn len(&self) -> Option<usize> {
        match self {
            SeqSpec::Explicit { values } | SeqSpec::Sampled { values } => Some(values.len()),
            _ => None,
        }
    }

    pub fn value<T: Real>(&self, n: usize) -> Complex<T> {
        let nn = T::of_usize(n);
        match self {
            SeqSpec::Reciprocal => Complex::new(T::one() / nn, T::zero()),
            SeqSpec::GaussianDecay => Complex::new((-(nn * nn)).exp() / (nn * nn), T::zero()),
            SeqSpec::Geometric { ratio } => Complex::new(T::of(*ratio).powi(n as i32), T::zero()),
            SeqSpec::Explicit { values } | SeqSpec::Sampled { values } => values.get(n - 1).map(|&v| lift(v)).unwrap_or_else(Complex::zero),
        }
    }

    /// `log |s_n|` without underflow.
    pub fn log_abs(&self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            SeqSpec::Reciprocal => -x.ln(),
            SeqSpec::GaussianDecay => -x * x - 2.0 * x.ln(),
            SeqSpec::Geometric { ratio } => x * ratio.abs().ln(),
            SeqSpec::Explicit { values } | SeqSpec::Sampled { values } => values.get(n - 1).map_or(f64::NEG_INFINITY, |v| v.norm().ln()),
        }
    }

    /// `sup_{k >= n} |s_{k+1}| / |s_k|` when known in closed form.
    pub(crate) fn ratio_bound(&self, n: usize) -> Option<f64> {
        let x = n as f64;
        match self {
            SeqSpec::Reciprocal => Some(1.0),
            SeqSpec::GaussianDecay => Some((-2.0 * x - 1.0).exp()),
            SeqSpec::Geometric { ratio } => Some(ratio.abs()),
            SeqSpec::Explicit { .. } | SeqSpec::Sampled { .. } => None,
        }
    }

    /// `sup_{k >= n} |s_k| / |s_{k+1}|` when known in closed form.
    pub(crate) fn inverse_ratio_bound(&self, n: usize) -> Option<f64> {
        match self {
            SeqSpec::Reciprocal => Some((n as f64 + 1.0) / n as f64),
            SeqSpec::Geometric { ratio } if *ratio != 0.0 => Some(1.0 / ratio.abs()),
            _ => None,
        }
    }

    /// Accumulation point of the sequence, for center sequences.
    pub fn limit_point(&self) -> Option<Complex<f64>> {
        match self {
            SeqSpec::Reciprocal | SeqSpec::GaussianDecay => Some(Complex::zero()),
            SeqSpec::Geometric { ratio } if ratio.abs() < 1.0 => Some(Complex::zero()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionModel {
    PoleSeries { centers: SeqSpec, coeffs: SeqSpec, n_max: usize },
    ExpReciprocal,
    RecipSinPi,
    Rational { p: Polynomial<f64>, q: Polynomial<f64> },
}

/// `log(e^a + e^b)`.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl FunctionModel {
    /// Gaussian-weighted poles: `a_n = 1/n`, `c_n = exp(-n^2)/n^2`.
    pub fn gaussian_poles(n_max: usize) -> Self {
        FunctionModel::PoleSeries { centers: SeqSpec::Reciprocal, coeffs: SeqSpec::GaussianDecay, n_max }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionModel::PoleSeries { centers, coeffs, n_max } => {
                if *n_max == 0 {
                    return Err(Error::InvalidInput("n_max must be positive".into()));
                }
                for s in [centers, coeffs] {
                    if let SeqSpec::Sampled { values } = s {
                        if values.len() < *n_max {
                            return Err(Error::InvalidInput(format!("sampled sequence has {} entries, n_max is {n_max}", values.len())));
                        }
                    }
                }
                for n in 1..=self.series_len().expect("series") {
                    let a: Complex<f64> = centers.value(n);
                    if a.is_zero() && coeffs.log_abs(n) > f64::NEG_INFINITY {
                        return Err(Error::InvalidInput(format!("center a_{n} is zero")));
                    }
                }
                Ok(())
            }
            FunctionModel::Rational { q, .. } if q.is_zero() => Err(Error::InvalidInput("zero denominator".into())),
            _ => Ok(()),
        }
    }

    /// Number of stored terms of a pole series.
    pub fn series_len(&self) -> Option<usize> {
        match self {
            FunctionModel::PoleSeries { centers, coeffs, n_max } => {
                Some([centers.len(), coeffs.len()].into_iter().flatten().fold(*n_max, usize::min))
            }
            _ => None,
        }
    }

    /// Evaluator in scalar type `T`, with pole-series terms precomputed.
    pub fn evaluator<T: Real>(&self) -> ModelFn<T> {
        let terms = match self {
            FunctionModel::PoleSeries { centers, coeffs, .. } => (1..=self.series_len().expect("series"))
                .filter(|&n| coeffs.log_abs(n) > LOG_NEGLIGIBLE)
                .map(|n| (centers.value::<T>(n), coeffs.value::<T>(n)))
                .collect(),
            _ => Vec::new(),
        };
        let (p, q) = match self {
            FunctionModel::Rational { p, q } => (p.map(lift), q.map(lift)),
            _ => (Polynomial::zero(), Polynomial::zero()),
        };
        ModelFn { kind: self.kind(), terms, p, q }
    }

    fn kind(&self) -> Kind {
        match self {
            FunctionModel::PoleSeries { .. } => Kind::Series,
            FunctionModel::ExpReciprocal => Kind::Exp,
            FunctionModel::RecipSinPi => Kind::Sin,
            FunctionModel::Rational { .. } => Kind::Rational,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionModel::PoleSeries { .. } => "pole_series",
            FunctionModel::ExpReciprocal => "exp_reciprocal",
            FunctionModel::RecipSinPi => "recip_sin_pi",
            FunctionModel::Rational { .. } => "rational",
        }
    }

    /// The isolated singularities actually present in the model; for a
    /// truncated series these are its poles only.
    pub fn pole_set(&self, depth: usize) -> Result<CompactSample<f64>> {
        let pts: Vec<Complex<f64>> = match self {
            FunctionModel::PoleSeries { centers, coeffs, .. } => (1..=self.series_len().expect("series"))
                .filter(|&n| coeffs.log_abs(n) > f64::NEG_INFINITY)
                .map(|n| centers.value(n))
                .collect(),
            FunctionModel::ExpReciprocal => vec![Complex::zero()],
            FunctionModel::RecipSinPi => (1..=depth.max(1)).flat_map(|n| [Complex::new(1.0 / n as f64, 0.0), Complex::new(-1.0 / n as f64, 0.0)]).collect(),
            FunctionModel::Rational { q, .. } => q.find_roots(),
        };
        dedup_sample(pts)
    }

    /// Sample of the closed singular set: the poles together with their
    /// accumulation point. `depth` bounds how many zeros of `sin(pi/z)` are listed.
    pub fn singular_set(&self, depth: usize) -> Result<CompactSample<f64>> {
        let mut pts = self.pole_set(depth)?.points().to_vec();
        let limit = match self {
            FunctionModel::PoleSeries { centers, .. } => centers.limit_point(),
            FunctionModel::RecipSinPi => Some(Complex::zero()),
            _ => None,
        };
        if let Some(l) = limit {
            pts.retain(|p| (p - l).norm() > 1e-12);
            pts.push(l);
        }
        dedup_sample(pts)
    }

    /// `log sum_{k >= n} |c_k| |a_k|^{-power}` for `power` in {0, 1}, summing the
    /// stored terms exactly and bounding the rest by a ratio test.
    pub fn log_tail(&self, n: usize, power: i32) -> Result<f64> {
        let FunctionModel::PoleSeries { centers, coeffs, .. } = self else {
            return Err(Error::UnsupportedFamily(self.name().into()));
        };
        let len = self.series_len().expect("series");
        let log_term = |k: usize| coeffs.log_abs(k) - power as f64 * centers.log_abs(k);
        let finite = matches!(coeffs, SeqSpec::Explicit { .. }) || matches!(centers, SeqSpec::Explicit { .. });
        let mut acc = f64::NEG_INFINITY;
        let start = n.max(1);
        if finite {
            for k in start..=len {
                acc = log_add(acc, log_term(k));
            }
            return Ok(acc);
        }
        let tail_from = len + 1;
        for k in start..tail_from {
            acc = log_add(acc, log_term(k));
        }
        let from = start.max(tail_from);
        let theta = match (coeffs.ratio_bound(from), power) {
            (Some(rc), 0) => Some(rc),
            (Some(rc), _) => centers.inverse_ratio_bound(from).map(|ra| rc * ra),
            _ => None,
        };
        match theta {
            Some(t) if t < 1.0 => Ok(log_add(acc, log_term(from) - (-t).ln_1p())),
            _ => Err(Error::TailUncertifiable),
        }
    }

    /// `log gamma_N` for `N = 1 ..= series_len + 1`, with `gamma_N = sum_{n >= N} |c_n|`.
    pub fn log_gammas(&self) -> Result<Vec<f64>> {
        let FunctionModel::PoleSeries { coeffs, .. } = self else {
            return Err(Error::UnsupportedFamily(self.name().into()));
        };
        let len = self.series_len().expect("series");
        let mut out = vec![0.0; len + 1];
        out[len] = self.log_tail(len + 1, 0)?;
        for n in (1..=len).rev() {
            out[n - 1] = log_add(out[n], coeffs.log_abs(n));
        }
        Ok(out)
    }
}

fn dedup_sample(mut pts: Vec<Complex<f64>>) -> Result<CompactSample<f64>> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-14);
    CompactSample::new(pts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Series,
    Exp,
    Sin,
    Rational,
}

/// A [`FunctionModel`] ready for evaluation in one scalar type.
#[derive(Clone, Debug)]
pub struct ModelFn<T> {
    kind: Kind,
    terms: Vec<(Complex<T>, Complex<T>)>,
    p: Polynomial<T>,
    q: Polynomial<T>,
}

impl<T: Real> ModelFn<T> {
    pub fn at(&self, z: Complex<T>) -> Complex<T> {
        match self.kind {
            Kind::Series => self.terms.iter().fold(Complex::zero(), |acc, &(a, c)| acc + c / (z - a)),
            Kind::Exp => cexp(z.inv()),
            Kind::Sin => {
                let s = csin(Complex::new(T::pi(), T::zero()) / z);
                s.inv()
            }
            Kind::Rational => self.p.eval(z) / self.q.eval_factored(z),
        }
    }
}

impl<T: Real> ComplexFn<T> for ModelFn<T> {
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.at(z)
    }
}
