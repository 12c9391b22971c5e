//! The plurisubharmonic field `u(z, w) = sum_nu nu^-2 u_nu(z, w)` built from
//! rational approximants, certified level by level on finite grids, plus the
//! discrete Evans potential of the singular sample.

use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fekete::leja_points;
use crate::geometry::CompactSample;
use crate::laurent::LaurentOptions;
use crate::model::{FunctionModel, ModelFn};
use crate::ratapprox::{approximate, ApproxOptions, RationalApproximant};
use crate::scalar::{cabs, is_finite_c, lift, log_abs, lower, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PshOptions {
    /// Grid refinement: lattice points per axis and nodes per ring.
    pub density: usize,
    /// Largest `N` tried at any level.
    pub max_big_n: usize,
    /// Number of Leja points; defaults to the sample size.
    pub m: Option<usize>,
    pub approx: ApproxOptions,
    pub laurent: LaurentOptions,
}

impl Default for PshOptions {
    fn default() -> Self {
        PshOptions {
            density: 24,
            max_big_n: 60,
            m: None,
            approx: ApproxOptions::default(),
            laurent: LaurentOptions { k_max: 64, ..Default::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationGrid {
    pub nu: usize,
    /// Points of `D_nu`: `|z| < nu` and farther than `1/nu` from the sample.
    pub graph_nodes: Vec<Complex<f64>>,
    /// Torus `|z| = |w| = nu`, the distinguished boundary of the bidisk.
    pub box_nodes: Vec<(Complex<f64>, Complex<f64>)>,
    /// `w = f(z) + (1/nu) e^{i phi}` slightly outside the tube, `|w| < nu`.
    pub offgraph_nodes: Vec<(Complex<f64>, Complex<f64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PshLevel<T> {
    pub nu: usize,
    pub big_n: usize,
    pub degree: usize,
    pub approximant: RationalApproximant<T>,
    /// Upper bound of `h` over the graph nodes, round-off included.
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub h_bound_graph: f64,
    pub h_bound_box: f64,
    /// Lower bound of `h` over the off-graph nodes.
    pub h_bound_offgraph: f64,
    /// `u_nu` separation between graph and off-graph nodes.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PshField<T> {
    pub model: FunctionModel,
    pub levels: Vec<PshLevel<T>>,
    pub floor_value: f64,
    pub evans_weights: Vec<(Complex<T>, f64)>,
    pub grids: Vec<CertificationGrid>,
    /// Graph bounds strictly decrease from level to level.
    pub monotone: bool,
}

impl<T: Real> PshField<T> {
    /// A field with no levels and no atoms; `u` is identically zero.
    pub fn empty(model: FunctionModel) -> Self {
        PshField { model, levels: Vec::new(), floor_value: -1.0, evans_weights: Vec::new(), grids: Vec::new(), monotone: true }
    }
}

/// Lowest useful value of `h` for a schedule up to `nu_max`: one below the
/// deepest clamp.
pub fn floor_for(nu_max: usize) -> f64 {
    let nu = nu_max as f64;
    -(nu + (nu + 2.0).ln()) - 1.0
}

/// `(1/n) log |(w - a(z)) q(z)^N - p(z)|`, or `-inf` below `floor`.
pub fn h_eval<T: Real>(approx: &RationalApproximant<T>, z: Complex<T>, w: Complex<T>, floor: f64) -> f64 {
    let v = approx.log_abs_numerator(z, w) / approx.degree as f64;
    if v.is_nan() || v < floor {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Bounds `(lower, upper)` on the exact `h`, widening the computed modulus
/// by the round-off of the terms that were cancelled.
fn h_bounds<T: Real>(approx: &RationalApproximant<T>, z: Complex<T>, w: Complex<T>) -> (f64, f64) {
    let n = approx.degree as f64;
    let value = approx.log_abs_numerator(z, w);
    let big_n = approx.big_n as f64;
    let log_q = approx.q_m.log_abs_at(z);
    let log_w = log_abs(w - approx.analytic_at(z));
    let log_p = approx
        .coeff_polys
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let scale: f64 = c.coeffs().iter().enumerate().map(|(i, a)| cabs(*a).f64() * cabs(z).f64().powi(i as i32)).sum();
            scale.ln() + (big_n - 1.0 - k as f64) * log_q
        })
        .fold(f64::NEG_INFINITY, crate::model::log_add);
    let log_scale = crate::model::log_add(log_w + big_n * log_q, log_p);
    // relative error of the product form, Horner and the N-term sum
    let kappa = 4.0 * (approx.degree as f64 + approx.m as f64 + 4.0);
    let log_err = log_scale + (kappa * T::EPS).ln();
    let upper = crate::model::log_add(value, log_err) / n;
    let lower = if value > log_err + 2f64.ln() {
        (value.exp_m1_diff(log_err)) / n
    } else {
        f64::NEG_INFINITY
    };
    (lower, upper)
}

trait LogDiff {
    fn exp_m1_diff(self, other: f64) -> f64;
}

impl LogDiff for f64 {
    /// `log(e^self - e^other)` for `self > other`.
    fn exp_m1_diff(self, other: f64) -> f64 {
        self + (-(other - self).exp()).ln_1p()
    }
}

fn distance_to(k: &[Complex<f64>], z: Complex<f64>) -> f64 {
    k.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
}

/// Grids for level `nu`. The off-graph ring sits a relative `1e-6`
/// outside `|w - f(z)| = 1/nu`.
pub fn certification_grid<T: Real>(f: &ModelFn<T>, k: &CompactSample<T>, nu: usize, density: usize) -> CertificationGrid {
    let d = density.max(4);
    let nuf = nu as f64;
    let kf: Vec<Complex<f64>> = k.points().iter().map(|&p| lower(p)).collect();
    let inside = |z: Complex<f64>| z.norm() < nuf && distance_to(&kf, z) > 1.0 / nuf;
    let mut graph = Vec::new();
    let step = 2.0 * nuf / d as f64;
    for i in 0..d {
        for j in 0..d {
            graph.push(Complex::new(-nuf + step * (j as f64 + 0.5), -nuf + step * (i as f64 + 0.5)));
        }
    }
    let ring = |center: Complex<f64>, r: f64, count: usize| -> Vec<Complex<f64>> {
        (0..count).map(|j| center + Complex::from_polar(r, std::f64::consts::TAU * j as f64 / count as f64)).collect()
    };
    graph.extend(ring(Complex::new(0.0, 0.0), nuf * (1.0 - 1e-6), 4 * d));
    for &p in &kf {
        graph.extend(ring(p, (1.0 + 1e-6) / nuf, d));
    }
    graph.retain(|&z| inside(z));
    let values: Vec<Complex<f64>> = graph.iter().map(|&z| lower(f.at(lift(z)))).collect();
    let keep: Vec<bool> = values.iter().map(|v| is_finite_c(*v)).collect();
    let graph_nodes: Vec<Complex<f64>> = graph.iter().zip(&keep).filter(|(_, &k)| k).map(|(z, _)| *z).collect();
    let fz: Vec<Complex<f64>> = values.iter().zip(&keep).filter(|(_, &k)| k).map(|(v, _)| *v).collect();

    let mut box_nodes = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let z = Complex::from_polar(nuf, std::f64::consts::TAU * (a as f64 + 0.5) / d as f64);
            let w = Complex::from_polar(nuf, std::f64::consts::TAU * b as f64 / d as f64);
            box_nodes.push((z, w));
        }
    }

    let per = (d / 2).max(8);
    let mut offgraph_nodes = Vec::new();
    for (&z, &v) in graph_nodes.iter().zip(&fz) {
        for w in ring(v, (1.0 + 1e-6) / nuf, per) {
            if w.norm() < nuf {
                offgraph_nodes.push((z, w));
            }
        }
    }
    CertificationGrid { nu, graph_nodes, box_nodes, offgraph_nodes }
}

#[derive(Clone, Copy, Debug)]
struct Bounds {
    graph: f64,
    box_bound: f64,
    offgraph: f64,
}

fn measure<T: Real>(approx: &RationalApproximant<T>, f: &ModelFn<T>, grid: &CertificationGrid) -> Bounds {
    let graph = grid
        .graph_nodes
        .par_iter()
        .map(|&z| {
            let zt = lift(z);
            h_bounds(approx, zt, f.at(zt)).1
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let box_bound = grid
        .box_nodes
        .par_iter()
        .map(|&(z, w)| h_bounds(approx, lift(z), lift(w)).1)
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let offgraph = grid
        .offgraph_nodes
        .par_iter()
        .map(|&(z, w)| h_bounds(approx, lift(z), lift(w)).0)
        .reduce(|| f64::INFINITY, f64::min);
    Bounds { graph, box_bound, offgraph }
}

/// Equal weights `1/|k|` on the sample atoms.
pub fn evans_discrete<T: Real>(k: &CompactSample<T>) -> Vec<(Complex<T>, f64)> {
    let w = 1.0 / k.len() as f64;
    k.points().iter().map(|&p| (p, w)).collect()
}

/// `sum_i weight_i log |z - p_i|`; `-inf` on an atom.
pub fn evans_potential<T: Real>(weights: &[(Complex<T>, f64)], z: Complex<T>) -> f64 {
    weights.iter().map(|&(p, c)| c * log_abs(z - p)).sum()
}

/// Searches `N = N_prev, N_prev + 1, ...` at each level `nu = 2 ..= nu_max`
/// and keeps the first approximant meeting the graph, box and off-graph bounds.
pub fn certify_schedule<T: Real>(model: &FunctionModel, k: &CompactSample<T>, nu_max: usize, opts: &PshOptions) -> Result<PshField<T>> {
    if !(2..=12).contains(&nu_max) {
        return Err(Error::InvalidInput(format!("nu_max must lie in 2..=12, got {nu_max}")));
    }
    model.validate()?;
    let f = model.evaluator::<T>();
    let m = opts.m.unwrap_or(k.len()).min(k.len());
    let sys = leja_points(k, m)?;
    let floor_value = floor_for(nu_max);
    let cap = opts.max_big_n.max(1);

    let mut built: Option<RationalApproximant<T>> = None;
    let mut levels: Vec<PshLevel<T>> = Vec::new();
    let mut grids = Vec::new();
    let mut big_n = 1;
    for nu in 2..=nu_max {
        let grid = certification_grid(&f, k, nu, opts.density);
        let nuf = nu as f64;
        let mut best = Bounds { graph: f64::INFINITY, box_bound: f64::INFINITY, offgraph: f64::NEG_INFINITY };
        let mut found = None;
        while big_n <= cap {
            if built.as_ref().is_none_or(|a| a.big_n < big_n) {
                let target = (2 * big_n).clamp(4, cap).max(big_n);
                built = Some(approximate(&f, &sys, m, target, &opts.approx, &opts.laurent).map_err(|e| Error::Schedule { index: nu, source: Box::new(e) })?);
            }
            let approx = built.as_ref().expect("built").truncated(big_n);
            let b = measure(&approx, &f, &grid);
            best.graph = best.graph.min(b.graph);
            best.box_bound = best.box_bound.min(b.box_bound);
            best.offgraph = best.offgraph.max(b.offgraph);
            if b.graph <= -nuf && b.box_bound <= (nuf + 2.0).ln() && b.offgraph >= -(nuf + 1.0).ln() {
                found = Some((approx, b));
                break;
            }
            big_n += 1;
        }
        let Some((approx, b)) = found else {
            return Err(Error::ScheduleExhausted { nu, max_degree: m * cap, graph: best.graph, box_bound: best.box_bound, offgraph: best.offgraph });
        };
        let gap = b.offgraph.max(-nuf) - b.graph.max(-nuf);
        levels.push(PshLevel {
            nu,
            big_n,
            degree: approx.degree,
            approximant: approx,
            h_bound_graph: b.graph,
            h_bound_box: b.box_bound,
            h_bound_offgraph: b.offgraph,
            gap,
        });
        grids.push(grid);
    }
    let monotone = levels.windows(2).all(|w| w[1].h_bound_graph < w[0].h_bound_graph);
    Ok(PshField { model: model.clone(), levels, floor_value, evans_weights: evans_discrete(k), grids, monotone })
}

fn level_value<T: Real>(level: &PshLevel<T>, z: Complex<T>, w: Complex<T>, floor: f64, clamp: bool) -> f64 {
    let nu = level.nu as f64;
    let shift = (nu + 2.0).ln();
    let h = h_eval(&level.approximant, z, w, floor) - shift;
    if clamp {
        h.max(-nu - shift)
    } else {
        h
    }
}

fn field_value<T: Real>(field: &PshField<T>, z: Complex<T>, w: Complex<T>, clamp: bool) -> f64 {
    let evans = evans_potential(&field.evans_weights, z);
    if evans == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let levels: f64 = field
        .levels
        .iter()
        .map(|l| level_value(l, z, w, field.floor_value, clamp) / (l.nu * l.nu) as f64)
        .sum();
    levels + evans
}

/// `u(z, w)` with each `u_nu` clamped at `-nu - log(nu + 2)`; `-inf` only on
/// Evans atoms.
pub fn u_eval<T: Real>(field: &PshField<T>, z: Complex<T>, w: Complex<T>) -> f64 {
    field_value(field, z, w, true)
}

/// Same sum without the clamps.
pub fn u_eval_raw<T: Real>(field: &PshField<T>, z: Complex<T>, w: Complex<T>) -> f64 {
    field_value(field, z, w, false)
}

/// Axis-aligned grid; `n_re x n_im` points including both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectGrid {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

impl RectGrid {
    /// Row-major: rows run over the imaginary axis, columns over the real.
    pub fn points(&self) -> Vec<Complex<f64>> {
        let axis = |lo: f64, hi: f64, n: usize, i: usize| if n <= 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let mut out = Vec::with_capacity(self.n_re * self.n_im);
        for i in 0..self.n_im {
            for j in 0..self.n_re {
                out.push(Complex::new(axis(self.re[0], self.re[1], self.n_re, j), axis(self.im[0], self.im[1], self.n_im, i)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "slice", rename_all = "snake_case")]
pub enum FieldSlice {
    FixedW { w: Complex<f64>, z: RectGrid },
    FixedZ { z: Complex<f64>, w: RectGrid },
    /// Points `(z, f(z) + t)` over a grid of `z`.
    GraphTube { t: Complex<f64>, z: RectGrid },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub z: Complex<f64>,
    pub w: Complex<f64>,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub u: f64,
}

pub fn export_field<T: Real>(field: &PshField<T>, slice: &FieldSlice) -> Vec<FieldRow> {
    let pairs: Vec<(Complex<f64>, Complex<f64>)> = match slice {
        FieldSlice::FixedW { w, z } => z.points().into_iter().map(|zz| (zz, *w)).collect(),
        FieldSlice::FixedZ { z, w } => w.points().into_iter().map(|ww| (*z, ww)).collect(),
        FieldSlice::GraphTube { t, z } => {
            let f = field.model.evaluator::<T>();
            z.points().into_iter().map(|zz| (zz, lower(f.at(lift(zz))) + t)).collect()
        }
    };
    pairs
        .par_iter()
        .map(|&(z, w)| FieldRow { z, w, u: u_eval(field, lift(z), lift(w)) })
        .collect()
}

fn csv_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

/// CSV with header `z_re,z_im,w_re,w_im,u`.
pub fn field_csv(rows: &[FieldRow]) -> String {
    let mut s = String::from("z_re,z_im,w_re,w_im,u\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            csv_number(r.z.re),
            csv_number(r.z.im),
            csv_number(r.w.re),
            csv_number(r.w.im),
            csv_number(r.u)
        );
    }
    s
}
