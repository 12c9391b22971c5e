//! Leja point systems on finite samples and the capacity diagnostic
//! `d_m = ||q_m||_K^{1/m}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CompactSample;
use crate::poly::Polynomial;
use crate::scalar::{cabs, log_abs, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub m: usize,
    pub d: f64,
    /// `log d_m`, `-inf` once the polynomial vanishes on the whole sample.
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub log_d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeketeSystem<T> {
    pub base_set: CompactSample<T>,
    pub points: Vec<Complex<T>>,
    /// Sample index of each selected point.
    pub indices: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
    /// First `m` at which `d_m` is exactly zero (sample consumed).
    pub degenerate_from: Option<usize>,
    /// Always "leja": greedy points stand in for true Fekete points.
    pub selection: String,
}

impl<T: Real> FeketeSystem<T> {
    /// `q_m`, the monic polynomial on the first `m` points, roots retained.
    pub fn q(&self, m: usize) -> Polynomial<T> {
        Polynomial::from_roots(&self.points[..m.min(self.points.len())])
    }

    pub fn d(&self, m: usize) -> Option<f64> {
        self.diagnostics.get(m.checked_sub(1)?).map(|d| d.d)
    }
}

/// Greedy Leja sequence: the first point maximises `|z|`, each later point
/// maximises the product of distances to those already chosen. Ties go to the
/// smallest sample index.
pub fn leja_points<T: Real>(k: &CompactSample<T>, m: usize) -> Result<FeketeSystem<T>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if k.len() < m {
        return Err(Error::InsufficientSample { needed: m, available: k.len() });
    }
    let pts = k.points();
    let mut first = 0;
    let mut best = cabs(pts[0]);
    for (i, &p) in pts.iter().enumerate().skip(1) {
        let v = cabs(p);
        if v > best {
            best = v;
            first = i;
        }
    }
    let mut log_prod = vec![0.0f64; pts.len()];
    let mut indices = Vec::with_capacity(m);
    let mut diagnostics = Vec::with_capacity(m);
    let mut degenerate_from = None;
    let mut next = first;
    for deg in 1..=m {
        indices.push(next);
        let chosen = pts[next];
        for (i, lp) in log_prod.iter_mut().enumerate() {
            *lp += if i == next { f64::NEG_INFINITY } else { log_abs(pts[i] - chosen) };
        }
        let (arg, max) = argmax(&log_prod);
        let log_d = max / deg as f64;
        if max == f64::NEG_INFINITY && degenerate_from.is_none() {
            degenerate_from = Some(deg);
        }
        diagnostics.push(Diagnostic { m: deg, d: log_d.exp(), log_d });
        next = arg;
    }
    Ok(FeketeSystem {
        base_set: k.clone(),
        points: indices.iter().map(|&i| pts[i]).collect(),
        indices,
        diagnostics,
        degenerate_from,
        selection: "leja".into(),
    })
}

fn argmax(v: &[f64]) -> (usize, f64) {
    let mut arg = 0;
    let mut best = v[0];
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > best {
            best = x;
            arg = i;
        }
    }
    (arg, best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    /// `d_m` strictly decreased over the last five entries.
    pub monotone: bool,
    /// The estimate is exact zero because the sample was consumed.
    pub degenerate: bool,
}

/// Extrapolates `d_m` to `m -> infinity` by a least-squares fit of
/// `d_m ~ c + b / m` over the last half of the diagnostics. With fewer than
/// eight entries the last `d_m` is returned unextrapolated.
pub fn capacity_estimate<T: Real>(sys: &FeketeSystem<T>) -> CapacityEstimate {
    let d: Vec<f64> = sys.diagnostics.iter().map(|x| x.d).collect();
    let n = d.len();
    let monotone = n >= 6 && d[n - 6..].windows(2).all(|w| w[1] < w[0]);
    if sys.degenerate_from.is_some() || d.iter().all(|&x| x == 0.0) {
        return CapacityEstimate { value: 0.0, monotone, degenerate: true };
    }
    if n < 8 {
        return CapacityEstimate { value: d[n - 1], monotone, degenerate: false };
    }
    let tail = &sys.diagnostics[n / 2..];
    let len = tail.len() as f64;
    let xs: Vec<f64> = tail.iter().map(|t| 1.0 / t.m as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|t| t.d).collect();
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let value = (my - slope * mx).max(0.0);
    CapacityEstimate { value, monotone, degenerate: false }
}
