//! One-variable potential theory: analytic covers of `{|f| >= R}`, the
//! Wiener test for thinness, explicit subharmonic witnesses and harmonic
//! measure by walk-on-spheres or relaxation.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fekete::leja_points;
use crate::geometry::{CompactSample, Disk, DiskUnion};
use crate::model::{log_add, FunctionModel, SeqSpec};

/// Closed disk with its radius stored as a logarithm, so radii far below the
/// smallest double stay meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverDisk {
    pub center: Complex64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub log_radius: f64,
}

impl CoverDisk {
    pub fn radius(&self) -> f64 {
        self.log_radius.exp()
    }
}

/// How the radii of the disks past the enumerated ones are bounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRadius {
    /// `log r_n <= log_scale + (log |c_n| - log(1 - theta_n)) / 2`
    Series { log_scale: f64, coeffs: SeqSpec },
    /// `r_n = 2 / (pi n^2 R)`
    SinZeros { threshold: f64 },
}

/// The disks with index `n >= first` that were not enumerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverTail {
    pub first: usize,
    pub centers: SeqSpec,
    /// Disks sit at both `a_n` and `-a_n`.
    pub symmetric: bool,
    pub radius: TailRadius,
}

impl CoverTail {
    fn log_radius(&self, n: usize) -> f64 {
        match &self.radius {
            TailRadius::Series { log_scale, coeffs } => match coeffs.ratio_bound(n) {
                Some(t) if t < 1.0 => log_scale + 0.5 * (coeffs.log_abs(n) - (-t).ln_1p()),
                _ => f64::INFINITY,
            },
            TailRadius::SinZeros { threshold } => (2.0 / (PI * threshold)).ln() - 2.0 * (n as f64).ln(),
        }
    }

    fn center_abs(&self, n: usize) -> f64 {
        self.centers.log_abs(n).exp()
    }

    /// Index range `n >= first` with `lo <= |a_n| <= hi`, for centers whose
    /// modulus decreases to zero. `None` when unknown or unbounded.
    fn index_range(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        if lo <= 0.0 {
            return None;
        }
        let (a, b) = match self.centers {
            SeqSpec::Reciprocal => (1.0 / hi, 1.0 / lo),
            SeqSpec::Geometric { ratio } if ratio.abs() < 1.0 && ratio != 0.0 => {
                let l = ratio.abs().ln();
                (hi.ln() / l, lo.ln() / l)
            }
            _ => return None,
        };
        Some((a.ceil().max(self.first as f64), b.floor()))
    }

    /// Contribution to `sum 1/log(d / cap(E_i))` over tail disks meeting the
    /// annulus `rho1 <= |z - p| <= rho2`.
    fn subadditive_term(&self, p: Complex64, rho1: f64, rho2: f64) -> f64 {
        let ln_d = (2.0 * rho2).ln();
        let r_first = self.log_radius(self.first).exp();
        let reach = self.center_abs(self.first) + r_first;
        if p.norm() - reach > rho2 {
            return 0.0;
        }
        let coarse = 1.0 / (ln_d - reach.min(rho2).ln());
        if p.norm() > 0.0 {
            return coarse;
        }
        let Some((n_lo, n_hi)) = self.index_range(rho1 - r_first, rho2 + r_first) else {
            return coarse;
        };
        if n_hi < n_lo {
            return 0.0;
        }
        if n_lo > 1e15 {
            return coarse;
        }
        let count = (n_hi - n_lo + 1.0) * if self.symmetric { 2.0 } else { 1.0 };
        let log_r = self.log_radius(n_lo as usize).min(rho2.ln());
        (count / (ln_d - log_r)).min(coarse * count)
    }
}

/// A union of closed disks, possibly followed by an unenumerated tail.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub disks: Vec<CoverDisk>,
    pub tail: Option<CoverTail>,
}

impl From<&DiskUnion<f64>> for Cover {
    fn from(u: &DiskUnion<f64>) -> Self {
        Cover { disks: u.disks.iter().map(|d| CoverDisk { center: d.center, log_radius: d.radius.ln() }).collect(), tail: None }
    }
}

impl Cover {
    /// Disks with representable positive radius, as obstacles for walks.
    pub fn to_union(&self) -> DiskUnion<f64> {
        DiskUnion::new(self.disks.iter().filter_map(|d| Disk::new(d.center, d.radius()).ok()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelCover {
    pub family: String,
    pub threshold: f64,
    pub center: Complex64,
    pub radius: f64,
    /// Proven bound on `|f|` off the cover, never above `threshold`.
    pub certificate: f64,
    /// The power of two `C` in `r_n = C sqrt(gamma_n)`.
    pub scale: Option<f64>,
    pub cover: Cover,
    /// Radius around the accumulation point inside which disks are only
    /// represented by the tail; zero when every disk is enumerated.
    pub resolved_radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverOptions {
    /// Highest disk index enumerated for families with infinitely many disks.
    pub max_index: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { max_index: 1 << 14 }
    }
}

/// Below this threshold the linearised zero disks of `1/sin(pi/z)` are not
/// certified.
pub const SIN_MIN_THRESHOLD: f64 = 4.0;

/// Analytic cover of `{|f| >= big_r}` inside `D(z0, radius)`.
pub fn sublevel_cover(f: &FunctionModel, big_r: f64, z0: Complex64, radius: f64, opts: &CoverOptions) -> Result<SublevelCover> {
    if !(big_r > 0.0 && big_r.is_finite() && radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput("threshold and radius must be positive".into()));
    }
    let meets = |c: Complex64, log_r: f64| (c - z0).norm() - log_r.exp() < radius;
    let base = SublevelCover {
        family: f.name().into(),
        threshold: big_r,
        center: z0,
        radius,
        certificate: big_r,
        scale: None,
        cover: Cover::default(),
        resolved_radius: 0.0,
    };
    match f {
        FunctionModel::PoleSeries { centers, coeffs, .. } => {
            f.validate()?;
            let len = f.series_len().expect("series");
            let log_gamma = f.log_gammas()?;
            let finite = matches!(coeffs, SeqSpec::Explicit { .. }) || matches!(centers, SeqSpec::Explicit { .. });
            // S = sum |c_n| / sqrt(gamma_n), with the tail bounded through
            // |c_n| <= gamma_n and the ratio test on gamma.
            let mut log_s = f64::NEG_INFINITY;
            for n in 1..=len {
                log_s = log_add(log_s, coeffs.log_abs(n) - 0.5 * log_gamma[n - 1]);
            }
            let mut tail_theta = None;
            if !finite {
                let theta = coeffs.ratio_bound(len + 1).filter(|&t| t < 1.0).ok_or(Error::TailUncertifiable)?;
                log_s = log_add(log_s, 0.5 * log_gamma[len] - (-theta.sqrt()).ln_1p());
                tail_theta = Some(theta);
            }
            if log_s == f64::NEG_INFINITY {
                return Ok(SublevelCover { certificate: 0.0, ..base });
            }
            let exponent = ((log_s - big_r.ln()) / LN_2).ceil();
            let log_scale = exponent * LN_2;
            let certificate = (log_s - log_scale).exp();
            let mut disks = Vec::new();
            for n in 1..=len {
                if coeffs.log_abs(n) == f64::NEG_INFINITY {
                    continue;
                }
                let log_r = log_scale + 0.5 * log_gamma[n - 1];
                if log_r >= centers.log_abs(n) {
                    return Err(Error::ThresholdTooSmall { threshold: big_r, index: n });
                }
                let c: Complex64 = centers.value(n);
                if meets(c, log_r) {
                    disks.push(CoverDisk { center: c, log_radius: log_r });
                }
            }
            let tail = match tail_theta {
                Some(_) => {
                    let t = CoverTail {
                        first: len + 1,
                        centers: centers.clone(),
                        symmetric: false,
                        radius: TailRadius::Series { log_scale, coeffs: coeffs.clone() },
                    };
                    if t.log_radius(len + 1) >= centers.log_abs(len + 1) {
                        return Err(Error::ThresholdTooSmall { threshold: big_r, index: len + 1 });
                    }
                    Some(t)
                }
                None => None,
            };
            let resolved_radius = tail.as_ref().map_or(0.0, |t| t.center_abs(t.first) + t.log_radius(t.first).exp());
            Ok(SublevelCover { certificate, scale: Some(exponent.exp2()), cover: Cover { disks, tail }, resolved_radius, ..base })
        }
        FunctionModel::ExpReciprocal => {
            if big_r <= 1.0 {
                return Err(Error::ThresholdTooSmall { threshold: big_r, index: 0 });
            }
            // |exp(1/z)| >= R  <=>  re(1/z) >= ln R  <=>  |z - c| <= c, c = 1/(2 ln R)
            let c = 0.5 / big_r.ln();
            let disk = CoverDisk { center: Complex64::new(c, 0.0), log_radius: c.ln() };
            let disks = if meets(disk.center, disk.log_radius) { vec![disk] } else { Vec::new() };
            Ok(SublevelCover { cover: Cover { disks, tail: None }, ..base })
        }
        FunctionModel::RecipSinPi => {
            if big_r < SIN_MIN_THRESHOLD {
                return Err(Error::ThresholdTooSmall { threshold: big_r, index: 0 });
            }
            // The component around infinity lies in |z| >= pi R / 1.2.
            if z0.norm() + radius >= PI * big_r / 1.2 {
                return Err(Error::UnsupportedGeometry("cover disk reaches the component at infinity".into()));
            }
            let tail = CoverTail { first: opts.max_index + 1, centers: SeqSpec::Reciprocal, symmetric: true, radius: TailRadius::SinZeros { threshold: big_r } };
            let mut disks = Vec::new();
            for n in 1..=opts.max_index {
                let log_r = tail.log_radius(n);
                for s in [1.0, -1.0] {
                    let c = Complex64::new(s / n as f64, 0.0);
                    if meets(c, log_r) {
                        disks.push(CoverDisk { center: c, log_radius: log_r });
                    }
                }
            }
            let resolved_radius = tail.center_abs(tail.first) + tail.log_radius(tail.first).exp();
            Ok(SublevelCover { cover: Cover { disks, tail: Some(tail) }, resolved_radius, ..base })
        }
        FunctionModel::Rational { .. } => Err(Error::UnsupportedFamily(f.name().into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Thin,
    NonThin,
    Inconclusive,
}

/// Which one-sided capacity bound decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictBound {
    Lower,
    Upper,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerOptions {
    pub thin_tolerance: f64,
    pub thin_window: usize,
    pub slope: f64,
    pub slope_window: usize,
    /// Inscribed disks entering the energy bound of one annulus.
    pub energy_disks: usize,
}

impl Default for WienerOptions {
    fn default() -> Self {
        WienerOptions { thin_tolerance: 1e-3, thin_window: 5, slope: 0.1, slope_window: 10, energy_disks: 256 }
    }
}

pub const MAX_DEPTH: usize = 60;
pub const DEFAULT_DEPTH: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusEntry {
    pub index: usize,
    pub inner: f64,
    pub outer: f64,
    pub capacity_lower: f64,
    pub capacity_upper: f64,
    /// Enumerated cover disks meeting the annulus.
    pub disks: usize,
    /// `d_m` of a Leja system on the boundary of the intersection, for at
    /// most three disks. Reported only; verdicts use the proven bounds.
    pub leja_estimate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerReport {
    pub point: Complex64,
    pub depth: usize,
    pub annuli: Vec<AnnulusEntry>,
    /// Partial sums of `n / log(1/cap_n)` from the capacity lower bounds.
    pub partial_sums_lower: Vec<f64>,
    /// The same from the capacity upper bounds.
    pub partial_sums_upper: Vec<f64>,
    pub verdict: Verdict,
    pub verdict_bound: VerdictBound,
    pub tolerance: f64,
    pub slope: f64,
    /// Least-squares slope of the lower partial sums over the second half.
    pub fitted_slope: f64,
    pub options: WienerOptions,
}

fn wiener_term(n: usize, cap: f64) -> f64 {
    if n == 0 || cap <= 0.0 {
        return 0.0;
    }
    if cap >= 1.0 {
        return f64::INFINITY;
    }
    n as f64 / (1.0 / cap).ln()
}

/// Largest disk found inside `D(c, r) ∩ {rho1 <= |z - p| <= rho2}`.
fn inscribed(p: Complex64, c: Complex64, r: f64, rho1: f64, rho2: f64) -> Option<(Complex64, f64)> {
    let offset = c - p;
    let dist = offset.norm();
    let phi0 = offset.arg();
    let half = if dist > 0.0 { (r / dist).min(1.0).asin() } else { PI };
    let mut best: Option<(Complex64, f64)> = None;
    for j in -7..=7 {
        let phi = phi0 + half * j as f64 / 8.0;
        for i in 0..8 {
            let t = rho1 + (rho2 - rho1) * (i as f64 + 0.5) / 8.0;
            let x = p + Complex64::from_polar(t, phi);
            let s = (r - (x - c).norm()).min(t - rho1).min(rho2 - t);
            if s > 0.0 && best.is_none_or(|(_, b)| s > b) {
                best = Some((x, s));
            }
        }
    }
    best
}

/// `exp(-I(mu))` for equal masses on the boundary circles of the disks, with
/// mutual energies bounded through subharmonicity.
fn energy_bound(disks: &[(Complex64, f64)]) -> f64 {
    let m = disks.len() as f64;
    let mut energy = 0.0;
    for (i, &(ci, si)) in disks.iter().enumerate() {
        energy -= si.ln();
        for &(cj, sj) in &disks[i + 1..] {
            energy -= 2.0 * (ci - cj).norm().max(si).max(sj).ln();
        }
    }
    (-energy / (m * m)).exp()
}

fn leja_estimate(p: Complex64, disks: &[(Complex64, f64)], rho1: f64, rho2: f64) -> Option<f64> {
    let inside_annulus = |z: Complex64| {
        let d = (z - p).norm();
        d >= rho1 && d <= rho2
    };
    let mut pts = Vec::new();
    for &(c, r) in disks {
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            let z = c + Complex64::from_polar(r, t);
            if inside_annulus(z) {
                pts.push(z);
            }
            for rho in [rho1, rho2] {
                let w = p + Complex64::from_polar(rho, t);
                if (w - c).norm() <= r {
                    pts.push(w);
                }
            }
        }
    }
    let sample = CompactSample::new(pts).ok()?;
    let m = sample.len().min(8);
    if m == 0 {
        return None;
    }
    leja_points(&sample, m).ok()?.d(m)
}

/// Wiener test at `point` over the dyadic annuli `2^{-n-1} <= |z - point| <= 2^{-n}`,
/// `n = 0 ..= depth`.
pub fn wiener_test(cover: &Cover, point: Complex64, depth: usize, opts: &WienerOptions) -> Result<WienerReport> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow { depth });
    }
    if depth < opts.slope_window.max(opts.thin_window) {
        return Err(Error::InvalidInput(format!("depth {depth} is shorter than the verdict windows")));
    }
    // bucket disks by the annuli they can meet
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for (i, d) in cover.disks.iter().enumerate() {
        let dist = (d.center - point).norm();
        let r = d.radius();
        let far = dist + r;
        if far <= 0.0 {
            continue;
        }
        let k_min = (-far.log2() - 1.0).floor().max(0.0) as usize;
        let near = dist - r;
        let k_max = if near > 0.0 { ((-near.log2()).ceil() as usize).min(depth) } else { depth };
        for bucket in buckets.iter_mut().take(k_max + 1).skip(k_min) {
            bucket.push(i);
        }
    }
    let annuli: Vec<AnnulusEntry> = buckets
        .par_iter()
        .enumerate()
        .map(|(k, idx)| annulus_entry(cover, point, k, idx, opts))
        .collect();
    let mut lower = Vec::with_capacity(depth + 1);
    let mut upper = Vec::with_capacity(depth + 1);
    let (mut sl, mut su) = (0.0, 0.0);
    for a in &annuli {
        sl += wiener_term(a.index, a.capacity_lower);
        su += wiener_term(a.index, a.capacity_upper);
        lower.push(sl);
        upper.push(su);
    }
    let thin = upper[depth] - upper[depth - opts.thin_window] < opts.thin_tolerance;
    let non_thin = (depth + 1 - opts.slope_window..=depth).all(|k| lower[k] >= opts.slope * k as f64);
    let (verdict, verdict_bound) = match (thin, non_thin) {
        (true, false) => (Verdict::Thin, VerdictBound::Upper),
        (false, true) => (Verdict::NonThin, VerdictBound::Lower),
        _ => (Verdict::Inconclusive, VerdictBound::None),
    };
    let half = depth / 2;
    let xs: Vec<f64> = (half..=depth).map(|k| k as f64).collect();
    let ys = &lower[half..];
    let fitted_slope = least_squares_slope(&xs, ys);
    Ok(WienerReport {
        point,
        depth,
        annuli,
        partial_sums_lower: lower,
        partial_sums_upper: upper,
        verdict,
        verdict_bound,
        tolerance: opts.thin_tolerance,
        slope: opts.slope,
        fitted_slope,
        options: *opts,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx > 0.0 && sxy.is_finite() {
        sxy / sxx
    } else {
        0.0
    }
}

fn annulus_entry(cover: &Cover, p: Complex64, k: usize, idx: &[usize], opts: &WienerOptions) -> AnnulusEntry {
    let rho2 = (-(k as f64)).exp2();
    let rho1 = 0.5 * rho2;
    let ln_d = (2.0 * rho2).ln();
    let mut full = false;
    let mut inner = Vec::new();
    let mut best = 0.0f64;
    let mut sub = 0.0;
    let mut count = 0;
    for &i in idx {
        let d = &cover.disks[i];
        let dist = (d.center - p).norm();
        let r = d.radius();
        if dist - r > rho2 || dist + r < rho1 {
            continue;
        }
        count += 1;
        sub += 1.0 / (ln_d - d.log_radius.min(rho2.ln()));
        if dist + rho2 <= r {
            full = true;
        } else if dist == 0.0 {
            if r > rho1 {
                best = best.max(r.min(rho2));
            }
        } else if let Some(disk) = inscribed(p, d.center, r, rho1, rho2) {
            best = best.max(disk.1);
            inner.push(disk);
        }
    }
    if let Some(t) = &cover.tail {
        sub += t.subadditive_term(p, rho1, rho2);
    }
    let capacity_upper = if sub > 0.0 { rho2.min(2.0 * rho2 * (-1.0 / sub).exp()) } else { 0.0 };
    let capacity_lower = if full {
        rho2
    } else {
        if inner.len() > opts.energy_disks {
            let stride = inner.len() as f64 / opts.energy_disks as f64;
            inner = (0..opts.energy_disks).map(|j| inner[(j as f64 * stride) as usize]).collect();
        }
        if inner.len() > 1 {
            best = best.max(energy_bound(&inner));
        }
        best.min(capacity_upper)
    };
    let leja = if (1..=3).contains(&count) && !full {
        let disks: Vec<(Complex64, f64)> = idx
            .iter()
            .map(|&i| (cover.disks[i].center, cover.disks[i].radius()))
            .filter(|&(c, r)| r > 0.0 && (c - p).norm() - r <= rho2 && (c - p).norm() + r >= rho1)
            .collect();
        leja_estimate(p, &disks, rho1, rho2)
    } else {
        None
    };
    AnnulusEntry { index: k, inner: rho1, outer: rho2, capacity_lower, capacity_upper: capacity_upper.max(capacity_lower), disks: count, leja_estimate: leja }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinnessWitness {
    pub centers: Vec<Complex64>,
    #[serde(with = "crate::serde_ext::extended_f64_vec")]
    pub log_radii: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `s_n = log(|a_n| / (1 + |a_n|)) / log r_n`.
    pub base_terms: Vec<f64>,
    /// Terms `-alpha_n s_n` of `u(0)`.
    pub point_terms: Vec<f64>,
    /// `alpha_n (log r_n - log(1 + |a_n|)) / log(1/r_n)`, bounding `u` on each disk.
    pub disk_sup_bounds: Vec<f64>,
    pub value_at_point: f64,
}

/// Builds `u(z) = sum alpha_n / log(1/r_n) (log|z - a_n| - log(1 + |a_n|))`
/// with `alpha_n = min(n, T_n^{-1/2})`, `T_n` the tail of the base series.
pub fn witness_build(centers: &[Complex64], log_radii: &[f64]) -> Result<ThinnessWitness> {
    if centers.len() != log_radii.len() {
        return Err(Error::InvalidInput("centers and radii differ in length".into()));
    }
    for (n, (&a, &lr)) in centers.iter().zip(log_radii).enumerate() {
        if !(a.norm() > 0.0 && a.norm() <= 1.0) {
            return Err(Error::InvalidInput(format!("center {} must lie in the punctured closed unit disk", n + 1)));
        }
        if !(lr < 0.0) {
            return Err(Error::InvalidInput(format!("radius {} must be below 1", n + 1)));
        }
    }
    let base: Vec<f64> = centers.iter().zip(log_radii).map(|(a, lr)| (a.norm() / (1.0 + a.norm())).ln() / lr).collect();
    if diverges(&base) {
        return Err(Error::DivergentBase);
    }
    let mut tails = vec![0.0; base.len()];
    let mut acc = 0.0;
    for n in (0..base.len()).rev() {
        acc += base[n];
        tails[n] = acc;
    }
    let alphas: Vec<f64> = tails.iter().enumerate().map(|(i, &t)| ((i + 1) as f64).min(1.0 / t.sqrt())).collect();
    let point_terms: Vec<f64> = alphas.iter().zip(&base).map(|(al, s)| -al * s).collect();
    let disk_sup_bounds = alphas
        .iter()
        .zip(centers.iter().zip(log_radii))
        .map(|(al, (a, lr))| if lr.is_finite() { al * (lr - a.norm().ln_1p()) / -lr } else { -al })
        .collect();
    let value_at_point = point_terms.iter().rev().sum();
    Ok(ThinnessWitness {
        centers: centers.to_vec(),
        log_radii: log_radii.to_vec(),
        alphas,
        base_terms: base,
        point_terms,
        disk_sup_bounds,
        value_at_point,
    })
}

/// A power-law fit over the second half with exponent at most one.
fn diverges(terms: &[f64]) -> bool {
    if terms.iter().any(|t| !t.is_finite()) {
        return true;
    }
    let n = terms.len();
    if n < 8 {
        return false;
    }
    let pts: Vec<(f64, f64)> = (n / 2..n).filter(|&i| terms[i] > 0.0).map(|i| (((i + 1) as f64).ln(), terms[i].ln())).collect();
    if pts.len() < 4 {
        return false;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    -least_squares_slope(&xs, &ys) <= 1.0
}

/// Where the boundary value 1 is taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Closed disks, absorbing on their boundary circles.
    Disks { union: DiskUnion<f64> },
    Circle { center: Complex64, radius: f64 },
}

impl Target {
    fn distance(&self, z: Complex64) -> f64 {
        match self {
            Target::Disks { union } => union.signed_distance(z).unwrap_or(f64::INFINITY),
            Target::Circle { center, radius } => ((z - center).norm() - radius).abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MeasureMethod {
    Wos,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    pub method: MeasureMethod,
    /// Absorption distance; `None` gives `1e-4` times the domain radius.
    pub epsilon: Option<f64>,
    pub max_steps: usize,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub grid_residual: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { method: MeasureMethod::Wos, epsilon: None, max_steps: 100_000, grid_radial: 65, grid_angular: 32, grid_residual: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub walks: usize,
    pub seed: u64,
    pub method: MeasureMethod,
    pub epsilon: f64,
    pub mean_steps: f64,
    /// Walks stopped by the step cap, counted as absorbed with value 0.
    pub truncated_walks: usize,
    /// Relaxation sweeps for the grid method.
    pub sweeps: Option<usize>,
}

const WALK_CHUNK: usize = 256;

/// Harmonic measure of `target` seen from `z` in `domain` minus `obstacles`.
pub fn harmonic_measure(
    z: Complex64,
    target: &Target,
    domain: &Disk<f64>,
    obstacles: &DiskUnion<f64>,
    walks: usize,
    seed: u64,
    opts: &MeasureOptions,
) -> Result<MeasureEstimate> {
    if walks == 0 {
        return Err(Error::InvalidInput("walks must be positive".into()));
    }
    if (z - domain.center).norm() >= domain.radius {
        return Err(Error::InvalidInput("start point lies outside the domain".into()));
    }
    let inside_target = match target {
        Target::Disks { union } => union.disks.iter().any(|d| (z - d.center).norm() <= d.radius),
        Target::Circle { .. } => target.distance(z) == 0.0,
    };
    if inside_target {
        return Err(Error::StartInsideTarget);
    }
    if obstacles.disks.iter().any(|d| (z - d.center).norm() <= d.radius) {
        return Err(Error::StartInsideObstacle);
    }
    let epsilon = opts.epsilon.unwrap_or(1e-4 * domain.radius);
    match opts.method {
        MeasureMethod::Wos => Ok(walk_on_spheres(z, target, domain, obstacles, walks, seed, epsilon, opts.max_steps)),
        MeasureMethod::Grid => grid_relaxation(z, target, domain, obstacles, walks, seed, epsilon, opts),
    }
}

#[allow(clippy::too_many_arguments)]
fn walk_on_spheres(z: Complex64, target: &Target, domain: &Disk<f64>, obstacles: &DiskUnion<f64>, walks: usize, seed: u64, epsilon: f64, max_steps: usize) -> MeasureEstimate {
    // A fixed shell would inflate small obstacles to radius epsilon; each disk
    // gets a shell proportional to its radius, floored at the coordinate
    // resolution near its center.
    let shells: Vec<f64> = obstacles
        .disks
        .iter()
        .map(|d| (epsilon * (d.radius / domain.radius).min(1.0)).max(16.0 * f64::EPSILON * (d.center.norm() + d.radius)))
        .collect();
    let one_walk = |index: usize| -> (f64, usize, bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut x = z;
        for step in 0..max_steps {
            let d_domain = domain.radius - (x - domain.center).norm();
            let d_target = target.distance(x);
            let mut d_obstacle = f64::INFINITY;
            let mut absorbed = false;
            for (disk, &shell) in obstacles.disks.iter().zip(&shells) {
                let dk = (x - disk.center).norm() - disk.radius;
                d_obstacle = d_obstacle.min(dk);
                absorbed |= dk < shell;
            }
            let d = d_domain.min(d_target).min(d_obstacle);
            if d_target.min(d_domain) < epsilon || absorbed {
                let hit = d_target < epsilon && d_target <= d_domain.min(d_obstacle);
                return (if hit { 1.0 } else { 0.0 }, step, false);
            }
            let theta: f64 = rng.random::<f64>() * TAU;
            x += Complex64::from_polar(d, theta);
        }
        (0.0, max_steps, true)
    };
    let chunks: Vec<(f64, f64, usize, usize)> = (0..walks.div_ceil(WALK_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = (0.0, 0.0, 0, 0);
            for i in c * WALK_CHUNK..((c + 1) * WALK_CHUNK).min(walks) {
                let (v, steps, cut) = one_walk(i);
                acc.0 += v;
                acc.1 += v * v;
                acc.2 += steps;
                acc.3 += cut as usize;
            }
            acc
        })
        .collect();
    let (mut sum, mut sq, mut steps, mut cut) = (0.0, 0.0, 0, 0);
    for c in chunks {
        sum += c.0;
        sq += c.1;
        steps += c.2;
        cut += c.3;
    }
    let n = walks as f64;
    let mean = sum / n;
    let var = if walks > 1 { ((sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    MeasureEstimate {
        value: mean.clamp(0.0, 1.0),
        std_error: (var / n).sqrt(),
        walks,
        seed,
        method: MeasureMethod::Wos,
        epsilon,
        mean_steps: steps as f64 / n,
        truncated_walks: cut,
        sweeps: None,
    }
}

/// Jacobi relaxation of the five-point Laplacian on the log-polar rectangle
/// of a concentric annulus, where harmonic functions solve `u_ss + u_tt = 0`.
#[allow(clippy::too_many_arguments)]
fn grid_relaxation(z: Complex64, target: &Target, domain: &Disk<f64>, obstacles: &DiskUnion<f64>, walks: usize, seed: u64, epsilon: f64, opts: &MeasureOptions) -> Result<MeasureEstimate> {
    let unsupported = || Error::UnsupportedGeometry("relaxation needs a concentric annulus".into());
    let concentric = |c: Complex64| (c - domain.center).norm() <= 1e-12 * domain.radius;
    let (inner, inner_value, outer_value) = match (target, obstacles.disks.as_slice()) {
        (Target::Circle { center, radius }, []) if concentric(*center) && *radius < domain.radius => (*radius, 1.0, 0.0),
        (Target::Circle { center, radius }, [ob]) if concentric(*center) && (radius - domain.radius).abs() <= 1e-12 * domain.radius && concentric(ob.center) => (ob.radius, 0.0, 1.0),
        _ => return Err(unsupported()),
    };
    let rho = (z - domain.center).norm();
    if rho <= inner {
        return Err(unsupported());
    }
    let (ns, nt) = (opts.grid_radial.max(3), opts.grid_angular.max(4));
    let (s0, s1) = (inner.ln(), domain.radius.ln());
    let ds = (s1 - s0) / (ns - 1) as f64;
    let dt = TAU / nt as f64;
    let (ws, wt) = (1.0 / (ds * ds), 1.0 / (dt * dt));
    let mut u = vec![0.0; ns * nt];
    for j in 0..nt {
        u[j] = inner_value;
        u[(ns - 1) * nt + j] = outer_value;
    }
    let mut next = u.clone();
    let mut sweeps = 0;
    loop {
        let mut residual = 0.0f64;
        for i in 1..ns - 1 {
            for j in 0..nt {
                let (jm, jp) = ((j + nt - 1) % nt, (j + 1) % nt);
                let lap_s = u[(i + 1) * nt + j] + u[(i - 1) * nt + j];
                let lap_t = u[i * nt + jm] + u[i * nt + jp];
                let c = u[i * nt + j];
                residual = residual.max(((lap_s - 2.0 * c) * ws + (lap_t - 2.0 * c) * wt).abs() / (ws + wt));
                next[i * nt + j] = (ws * lap_s + wt * lap_t) / (2.0 * (ws + wt));
            }
        }
        std::mem::swap(&mut u, &mut next);
        sweeps += 1;
        if residual < opts.grid_residual || sweeps >= 10_000_000 {
            break;
        }
    }
    let s = (rho.ln() - s0) / ds;
    let theta = (z - domain.center).arg().rem_euclid(TAU) / dt;
    let (i0, j0) = ((s.floor() as usize).min(ns - 2), theta.floor() as usize % nt);
    let (fs, ft) = (s - i0 as f64, theta - theta.floor());
    let j1 = (j0 + 1) % nt;
    let at = |i: usize, j: usize| u[i * nt + j];
    let value = (1.0 - fs) * ((1.0 - ft) * at(i0, j0) + ft * at(i0, j1)) + fs * ((1.0 - ft) * at(i0 + 1, j0) + ft * at(i0 + 1, j1));
    Ok(MeasureEstimate {
        value: value.clamp(0.0, 1.0),
        std_error: 0.0,
        walks,
        seed,
        method: MeasureMethod::Grid,
        epsilon,
        mean_steps: 0.0,
        truncated_walks: 0,
        sweeps: Some(sweeps),
    })
}

/// `H - (H - C) omega`, the two-constants bound.
pub fn two_constants_check(h: f64, c: f64, omega: &MeasureEstimate) -> Result<f64> {
    if !(h >= c) {
        return Err(Error::InvalidBounds { h, c });
    }
    if !(0.0..=1.0).contains(&omega.value) {
        return Err(Error::InvalidInput("harmonic measure outside [0, 1]".into()));
    }
    let bound = h - (h - c) * omega.value;
    if omega.value >= 0.5 {
        assert!(bound <= 0.5 * (h + c) + 1e-12 * (h.abs() + c.abs()), "two-constants midpoint violated");
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex64;

    fn union(disks: &[(f64, f64, f64)]) -> Cover {
        Cover::from(&DiskUnion::new(disks.iter().map(|&(x, y, r)| Disk::new(C::new(x, y), r).unwrap()).collect()))
    }

    #[test]
    fn exp_cover_at_e_is_the_half_disk() {
        let c = sublevel_cover(&FunctionModel::ExpReciprocal, std::f64::consts::E, C::new(0.0, 0.0), 2.0, &CoverOptions::default()).unwrap();
        let d = c.cover.disks[0];
        assert!((d.center - C::new(0.5, 0.0)).norm() < 1e-15);
        assert!((d.radius() - 0.5).abs() < 1e-15);
        // re(1/z) >= 1 on the disk boundary
        for j in (1..16).filter(|&j| j != 8) {
            let z = d.center + C::from_polar(d.radius(), j as f64 * TAU / 16.0);
            assert!(((1.0 / z).re - 1.0).abs() < 1e-9);
        }
        let mut last = f64::INFINITY;
        for r in [3.0, 10.0, 100.0, 1e6] {
            let rad = sublevel_cover(&FunctionModel::ExpReciprocal, r, C::new(0.0, 0.0), 2.0, &CoverOptions::default()).unwrap().cover.disks[0].radius();
            assert!(rad < last);
            last = rad;
        }
        assert!(matches!(sublevel_cover(&FunctionModel::ExpReciprocal, 0.5, C::new(0.0, 0.0), 1.0, &CoverOptions::default()), Err(Error::ThresholdTooSmall { .. })));
    }

    #[test]
    fn gaussian_cover_radii_match_direct_tails() {
        let f = FunctionModel::gaussian_poles(40);
        let c = sublevel_cover(&f, 1.0, C::new(0.0, 0.0), 2.0, &CoverOptions::default()).unwrap();
        let scale = c.scale.unwrap();
        assert!(c.certificate <= 1.0);
        assert!(c.certificate > 0.5, "smallest power of two: {}", c.certificate);
        for d in &c.cover.disks[..6] {
            let n = (1.0 / d.center.re).round() as usize;
            let gamma: f64 = (n..n + 30).map(|k| (-(k as f64).powi(2)).exp() / (k * k) as f64).sum();
            assert!((d.radius() - scale * gamma.sqrt()).abs() < 1e-13 * d.radius().max(1e-300), "n = {n}");
        }
        // |f| stays below the certificate off the disks
        let ev = f.evaluator::<f64>();
        for j in 0..400 {
            let z = C::from_polar(0.05 + 1.5 * j as f64 / 400.0, j as f64 * 0.7);
            if c.cover.disks.iter().all(|d| (z - d.center).norm() > d.radius()) {
                assert!(ev.at(z).norm() < c.certificate);
            }
        }
    }

    #[test]
    fn small_thresholds_are_rejected() {
        let f = FunctionModel::gaussian_poles(40);
        assert!(matches!(sublevel_cover(&f, 1e-3, C::new(0.0, 0.0), 2.0, &CoverOptions::default()), Err(Error::ThresholdTooSmall { .. })));
        let rational = FunctionModel::Rational { p: crate::poly::Polynomial::constant(C::new(1.0, 0.0)), q: crate::poly::Polynomial::from_roots(&[C::new(0.0, 0.0)]) };
        assert!(matches!(sublevel_cover(&rational, 2.0, C::new(0.0, 0.0), 1.0, &CoverOptions::default()), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn sin_cover_contains_the_level_set() {
        let c = sublevel_cover(&FunctionModel::RecipSinPi, 8.0, C::new(0.0, 0.0), 1.0, &CoverOptions { max_index: 64 }).unwrap();
        let f = FunctionModel::RecipSinPi.evaluator::<f64>();
        for j in 0..20000 {
            let z = C::new(0.02 + 0.98 * j as f64 / 20000.0, 1e-4 * (j % 7) as f64);
            if f.at(z).norm() >= 8.0 {
                assert!(c.cover.disks.iter().any(|d| (z - d.center).norm() <= d.radius()), "{z}");
            }
        }
    }

    #[test]
    fn far_disk_is_thin() {
        let r = wiener_test(&union(&[(3.0, 0.0, 0.5)]), C::new(0.0, 0.0), 40, &WienerOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Thin);
        assert!(r.annuli.iter().all(|a| a.capacity_upper == 0.0));
        assert!(r.partial_sums_upper.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn tangent_disk_is_not_thin() {
        let cover = union(&[(0.5, 0.0, 0.5)]);
        let r = wiener_test(&cover, C::new(0.0, 0.0), 40, &WienerOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NonThin);
        assert_eq!(r.verdict_bound, VerdictBound::Lower);
        for a in &r.annuli[3..] {
            // contains the segment [rho1, rho2] on the real axis: cap >= (rho2 - rho1)/4
            assert!(a.capacity_upper >= 0.25 * (a.outer - a.inner));
            assert!(a.capacity_lower >= 0.02 * a.outer, "{a:?}");
        }
        assert!(r.fitted_slope > 0.5);
    }

    #[test]
    fn depth_limits() {
        let cover = union(&[(3.0, 0.0, 0.5)]);
        assert!(matches!(wiener_test(&cover, C::new(0.0, 0.0), 61, &WienerOptions::default()), Err(Error::DepthOverflow { depth: 61 })));
    }

    #[test]
    fn gaussian_cover_is_thin_at_origin() {
        let f = FunctionModel::gaussian_poles(40);
        let c = sublevel_cover(&f, 1.0, C::new(0.0, 0.0), 2.0, &CoverOptions::default()).unwrap();
        let r = wiener_test(&c.cover, C::new(0.0, 0.0), 40, &WienerOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Thin, "{:?}", r.partial_sums_upper);
        // the tail contributes to the deep annuli
        assert!(r.annuli[10].capacity_upper > 0.0);
    }

    #[test]
    fn single_disk_witness() {
        let w = witness_build(&[C::new(0.5, 0.0)], &[1e-6f64.ln()]).unwrap();
        let expect = w.alphas[0] / 1e6f64.ln() * (0.5f64.ln() - 1.5f64.ln());
        assert_eq!(w.alphas[0], 1.0);
        assert!((w.value_at_point - expect).abs() < 1e-15);
        let empty = witness_build(&[], &[]).unwrap();
        assert_eq!(empty.value_at_point, 0.0);
    }

    #[test]
    fn gaussian_witness() {
        let f = FunctionModel::gaussian_poles(40);
        let c = sublevel_cover(&f, 1.0, C::new(0.0, 0.0), 2.0, &CoverOptions::default()).unwrap();
        let a: Vec<C> = c.cover.disks.iter().map(|d| d.center).collect();
        let lr: Vec<f64> = c.cover.disks.iter().map(|d| d.log_radius).collect();
        let w = witness_build(&a, &lr).unwrap();
        assert!(w.value_at_point.is_finite() && w.value_at_point < 0.0);
        assert!(w.alphas.windows(2).all(|p| p[1] >= p[0]));
        // the first disk has |a_1| = 1, which weighs log(1 + |a_1|) more heavily
        assert!(w.disk_sup_bounds[1..].windows(2).all(|p| p[1] < p[0]));
        assert!(*w.disk_sup_bounds.last().unwrap() < -10.0);
    }

    #[test]
    fn divergent_base_is_rejected() {
        // s_n ~ 1/n
        let a: Vec<C> = (1..=64).map(|_| C::new(0.5, 0.0)).collect();
        let lr: Vec<f64> = (1..=64).map(|n| -(n as f64)).collect();
        assert!(matches!(witness_build(&a, &lr), Err(Error::DivergentBase)));
    }

    fn annulus_setup() -> (Target, Disk<f64>) {
        (Target::Circle { center: C::new(0.0, 0.0), radius: 0.1 }, Disk::new(C::new(0.0, 0.0), 1.0).unwrap())
    }

    #[test]
    fn annulus_measure_matches_closed_form() {
        let (target, domain) = annulus_setup();
        let exact = (1.0f64 / 0.4).ln() / (1.0f64 / 0.1).ln();
        assert!((exact - 0.39794).abs() < 1e-5);
        let est = harmonic_measure(C::new(0.4, 0.0), &target, &domain, &DiskUnion::default(), 100_000, 11, &MeasureOptions::default()).unwrap();
        assert!((est.value - exact).abs() < 0.02, "{est:?}");
        let grid = harmonic_measure(C::new(0.4, 0.0), &target, &domain, &DiskUnion::default(), 1, 0, &MeasureOptions { method: MeasureMethod::Grid, ..Default::default() }).unwrap();
        assert!((grid.value - exact).abs() < 1e-4, "{grid:?}");
        assert!((grid.value - est.value).abs() < 0.01);
    }

    #[test]
    fn measure_is_reproducible_and_thread_independent() {
        let (target, domain) = annulus_setup();
        let run = || harmonic_measure(C::new(0.3, 0.2), &target, &domain, &DiskUnion::default(), 3000, 5, &MeasureOptions::default()).unwrap();
        let a = run();
        let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        assert_eq!(a, b);
    }

    #[test]
    fn adjacent_start_is_absorbed() {
        let (target, domain) = annulus_setup();
        let est = harmonic_measure(C::new(0.10005, 0.0), &target, &domain, &DiskUnion::default(), 1000, 1, &MeasureOptions::default()).unwrap();
        assert!(est.value > 0.99);
        let inside = Target::Disks { union: DiskUnion::new(vec![Disk::new(C::new(0.0, 0.0), 0.1).unwrap()]) };
        assert_eq!(harmonic_measure(C::new(0.05, 0.0), &inside, &domain, &DiskUnion::default(), 10, 1, &MeasureOptions::default()), Err(Error::StartInsideTarget));
        let obstacles = DiskUnion::new(vec![Disk::new(C::new(0.5, 0.0), 0.1).unwrap()]);
        assert_eq!(harmonic_measure(C::new(0.5, 0.05), &target, &domain, &obstacles, 10, 1, &MeasureOptions::default()), Err(Error::StartInsideObstacle));
    }

    #[test]
    fn grid_rejects_other_geometry() {
        let (target, domain) = annulus_setup();
        let obstacles = DiskUnion::new(vec![Disk::new(C::new(0.5, 0.0), 0.1).unwrap()]);
        let r = harmonic_measure(C::new(0.3, 0.0), &target, &domain, &obstacles, 1, 0, &MeasureOptions { method: MeasureMethod::Grid, ..Default::default() });
        assert!(matches!(r, Err(Error::UnsupportedGeometry(_))));
    }

    #[test]
    fn annulus_oracle_across_seeds() {
        let (target, domain) = annulus_setup();
        let exact = (1.0f64 / 0.4).ln() / (1.0f64 / 0.1).ln();
        let misses = (0..50u64)
            .filter(|&s| {
                let e = harmonic_measure(C::new(0.0, 0.4), &target, &domain, &DiskUnion::default(), 4000, s, &MeasureOptions::default()).unwrap();
                (e.value - exact).abs() >= 3.0 * e.std_error
            })
            .count();
        assert!(misses == 0, "{misses} of 50 seeds miss");
    }

    #[test]
    fn two_constants() {
        let om = |v: f64| MeasureEstimate { value: v, std_error: 0.0, walks: 1, seed: 0, method: MeasureMethod::Wos, epsilon: 0.0, mean_steps: 0.0, truncated_walks: 0, sweeps: None };
        assert_eq!(two_constants_check(0.0, -10.0, &om(0.5)).unwrap(), -5.0);
        assert_eq!(two_constants_check(3.0, -2.0, &om(1.0)).unwrap(), -2.0);
        assert_eq!(two_constants_check(3.0, -2.0, &om(0.0)).unwrap(), 3.0);
        assert!(matches!(two_constants_check(-1.0, 0.0, &om(0.5)), Err(Error::InvalidBounds { .. })));
    }

    fn disk_strategy() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.001f64..0.3), 1..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enlarging_never_turns_non_thin_into_thin(disks in disk_strategy(), grow in 1.0f64..3.0) {
            let p = C::new(0.0, 0.0);
            prop_assume!(disks.iter().all(|&(x, y, r)| C::new(x, y).norm() > r * grow));
            let small = union(&disks);
            let big = union(&disks.iter().map(|&(x, y, r)| (x, y, r * grow)).collect::<Vec<_>>());
            let a = wiener_test(&small, p, 30, &WienerOptions::default()).unwrap();
            let b = wiener_test(&big, p, 30, &WienerOptions::default()).unwrap();
            for (x, y) in a.annuli.iter().zip(&b.annuli) {
                prop_assert!(y.capacity_upper >= x.capacity_upper);
            }
            prop_assert!(!(a.verdict == Verdict::NonThin && b.verdict == Verdict::Thin));
        }

        #[test]
        fn witnessed_covers_are_never_non_thin(pts in prop::collection::vec((0.05f64..0.95, 0.0f64..TAU, 2.0f64..30.0), 1..12)) {
            let a: Vec<C> = pts.iter().map(|&(r, t, _)| C::from_polar(r, t)).collect();
            let lr: Vec<f64> = pts.iter().map(|&(r, _, k)| (r / 4.0).ln().min(-k)).collect();
            let w = witness_build(&a, &lr);
            prop_assume!(w.is_ok());
            let cover = Cover { disks: a.iter().zip(&lr).map(|(&c, &l)| CoverDisk { center: c, log_radius: l }).collect(), tail: None };
            let r = wiener_test(&cover, C::new(0.0, 0.0), 40, &WienerOptions::default()).unwrap();
            prop_assert!(r.verdict != Verdict::NonThin);
        }

        #[test]
        fn capacity_bounds_are_ordered(disks in disk_strategy(), px in -0.5f64..0.5) {
            let r = wiener_test(&union(&disks), C::new(px, 0.0), 20, &WienerOptions::default()).unwrap();
            for a in &r.annuli {
                prop_assert!(0.0 <= a.capacity_lower && a.capacity_lower <= a.capacity_upper && a.capacity_upper <= a.outer);
            }
            prop_assert!(r.partial_sums_lower.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn obstacles_never_raise_the_measure(ox in -0.6f64..0.6, oy in -0.6f64..0.6, or in 0.02f64..0.2, seed in 0u64..1000) {
            let (target, domain) = annulus_setup();
            let z = C::new(0.0, -0.5);
            prop_assume!((C::new(ox, oy) - z).norm() > or + 0.01 && C::new(ox, oy).norm() > or + 0.11 && C::new(ox, oy).norm() + or < 0.99);
            let obstacles = DiskUnion::new(vec![Disk::new(C::new(ox, oy), or).unwrap()]);
            let free = harmonic_measure(z, &target, &domain, &DiskUnion::default(), 4000, seed, &MeasureOptions::default()).unwrap();
            let blocked = harmonic_measure(z, &target, &domain, &obstacles, 4000, seed, &MeasureOptions::default()).unwrap();
            prop_assert!((0.0..=1.0).contains(&blocked.value));
            let sigma = (free.std_error.powi(2) + blocked.std_error.powi(2)).sqrt();
            prop_assert!(blocked.value <= free.value + 3.0 * sigma);
        }
    }
}
