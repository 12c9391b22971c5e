//! Rational approximants `f_N = sum_k c_k / q^{k+1}` whose poles are Leja
//! points of the singular set, with coefficient polynomials obtained from
//! contour integrals of the divided-difference kernel.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fekete::FeketeSystem;
use crate::geometry::{unit_roots, CircleContour, CompactSample};
use crate::laurent::{split_at_infinity, LaurentOptions};
use crate::poly::Polynomial;
use crate::quadrature::{eval_checked, sup_norm, ComplexFn};
use crate::scalar::{cabs, log_abs, Real};

/// Floor applied to `rho` when `q_m` vanishes on the whole sample.
pub const RHO_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rho {
    pub value: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub log: f64,
}

/// `n^{2m} ||q||_K`, accumulated in log-space.
pub fn rho_of<T: Real>(q: &Polynomial<T>, k: &CompactSample<T>, n: usize) -> Rho {
    let m = q.degree() as f64;
    let log_sup = k.points().iter().map(|&p| q.log_abs_at(p)).fold(f64::NEG_INFINITY, f64::max);
    let log = 2.0 * m * (n as f64).ln() + log_sup;
    Rho { value: log.exp(), log }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxOptions {
    /// The `n` in `rho = n^{2m} ||q_m||_K`.
    pub n_scale: usize,
    /// Sample points closer than this share one contour circle.
    pub cluster_link: f64,
    /// Largest distance a circle may keep from its cluster.
    pub max_radius: f64,
    /// Smallest circle considered, as a fraction of the admissible clearance.
    pub min_radius_fraction: f64,
    /// Multiplies every chosen radius; used to check contour independence.
    pub radius_multiplier: f64,
    pub start_nodes: usize,
    pub max_nodes: usize,
    /// Relative agreement between node doublings; `None` picks a value
    /// from the precision of the scalar type.
    pub node_tolerance: Option<f64>,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            n_scale: 1,
            cluster_link: 0.0,
            max_radius: 1.0,
            min_radius_fraction: 0.25,
            radius_multiplier: 1.0,
            start_nodes: 128,
            max_nodes: 1 << 14,
            node_tolerance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalApproximant<T> {
    pub q_m: Polynomial<T>,
    pub m: usize,
    pub big_n: usize,
    pub rho_m: Rho,
    pub n_scale: usize,
    /// `c_{m0}, ..., c_{m,N-1}`, each of degree at most `m - 1`.
    pub coeff_polys: Vec<Polynomial<T>>,
    pub contour: Vec<CircleContour<T>>,
    pub degree: usize,
    /// Part analytic at infinity, added back exactly; in powers of
    /// `z - analytic_center`.
    pub analytic: Polynomial<T>,
    pub analytic_center: Complex<T>,
    /// `rho_m` was floored because `q_m` vanishes on the sample.
    pub degenerate: bool,
    /// Largest `|q_m|` over the contour nodes.
    pub contour_q_max: f64,
    pub selection: String,
}

impl<T: Real> RationalApproximant<T> {
    pub fn poles(&self) -> &[Complex<T>] {
        self.q_m.roots().unwrap_or(&[])
    }

    pub fn analytic_at(&self, z: Complex<T>) -> Complex<T> {
        self.analytic.eval(z - self.analytic_center)
    }

    /// `sum_k c_k(z) / q(z)^{k+1}`, Horner in `1/q`.
    pub fn principal_at(&self, z: Complex<T>) -> Complex<T> {
        let q = self.q_m.eval_factored(z);
        let u = q.inv();
        self.coeff_polys.iter().rev().fold(Complex::zero(), |acc, c| (acc + c.eval(z)) * u)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.analytic_at(z) + self.principal_at(z)
    }

    /// Same approximant with only the first `big_n` coefficient polynomials.
    pub fn truncated(&self, big_n: usize) -> Self {
        let n = big_n.min(self.big_n).max(1);
        let mut out = self.clone();
        out.coeff_polys.truncate(n);
        out.big_n = n;
        out.degree = self.m * n;
        out
    }

    /// `log |(w - a(z)) q(z)^N - p(z)|` with `p = sum_k c_k q^{N-1-k}`,
    /// never dividing by `q`. Far from the poles the common factor
    /// `q^N` is pulled out in log-space to avoid overflow.
    pub fn log_abs_numerator(&self, z: Complex<T>, w: Complex<T>) -> f64 {
        let q = self.q_m.eval_factored(z);
        let aq = cabs(q);
        let dw = w - self.analytic_at(z);
        let n = self.big_n as i32;
        if aq >= T::one() {
            let log_q = self.q_m.log_abs_at(z);
            let v = dw - self.principal_at(z);
            n as f64 * log_q + log_abs(v)
        } else {
            // sum_k c_k q^{N-1-k}, Horner in q from the last coefficient
            let p = self.coeff_polys.iter().fold(Complex::zero(), |acc, c| acc * q + c.eval(z));
            let val = dw * q.powi(n) - p;
            log_abs(val)
        }
    }
}

/// Groups sample points by single linkage at distance `link`.
fn clusters<T: Real>(k: &CompactSample<T>, link: f64) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    if link > 0.0 {
        let pts = k.points();
        for i in 0..n {
            for j in i + 1..n {
                if cabs(pts[i] - pts[j]).f64() <= link {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match slot[r] {
            Some(g) => groups[g].push(i),
            None => {
                slot[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

struct ClusterDisk<T> {
    center: Complex<T>,
    extent: T,
}

fn cluster_disk<T: Real>(k: &CompactSample<T>, idx: &[usize]) -> ClusterDisk<T> {
    let pts = k.points();
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (pts[idx[0]].re, pts[idx[0]].re, pts[idx[0]].im, pts[idx[0]].im);
    for &i in idx {
        lo_re = lo_re.min(pts[i].re);
        hi_re = hi_re.max(pts[i].re);
        lo_im = lo_im.min(pts[i].im);
        hi_im = hi_im.max(pts[i].im);
    }
    let half = T::of(0.5);
    let center = Complex::new((lo_re + hi_re) * half, (lo_im + hi_im) * half);
    let extent = idx.iter().map(|&i| cabs(pts[i] - center)).reduce(|a, b| a.max(b)).expect("nonempty cluster");
    ClusterDisk { center, extent }
}

/// Merges clusters until their enclosing disks are pairwise disjoint.
fn disjoint_clusters<T: Real>(k: &CompactSample<T>, link: f64) -> Vec<ClusterDisk<T>> {
    let mut groups = clusters(k, link);
    loop {
        let disks: Vec<ClusterDisk<T>> = groups.iter().map(|g| cluster_disk(k, g)).collect();
        let mut merged = None;
        'outer: for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                let gap = cabs(disks[i].center - disks[j].center) - disks[i].extent - disks[j].extent;
                if gap.f64() <= 1e-12 {
                    merged = Some((i, j));
                    break 'outer;
                }
            }
        }
        match merged {
            Some((i, j)) => {
                let g = groups.remove(j);
                groups[i].extend(g);
            }
            None => return disks,
        }
    }
}

/// Circles around the clusters of `k` on which `|q| >= 10 rho`. Each radius is
/// the smallest admissible one found by bisection between a floor and the
/// clearance to the other clusters.
pub fn contour_circles<T: Real>(q: &Polynomial<T>, rho: f64, k: &CompactSample<T>, opts: &ApproxOptions) -> Result<Vec<CircleContour<T>>> {
    let disks = disjoint_clusters(k, opts.cluster_link);
    let threshold = 10.0 * rho.max(RHO_FLOOR);
    let probe_nodes = opts.start_nodes.max(64);
    let min_q = |center: Complex<T>, r: T| -> f64 {
        unit_roots::<T>(probe_nodes)
            .into_iter()
            .map(|u| q.log_abs_at(center + u * r))
            .fold(f64::INFINITY, f64::min)
    };
    let log_threshold = threshold.ln();
    let mut out = Vec::with_capacity(disks.len());
    for (i, d) in disks.iter().enumerate() {
        let clearance = disks
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| (cabs(o.center - d.center) - o.extent - d.extent).f64())
            .fold(f64::INFINITY, f64::min);
        let extra = (0.45 * clearance).min(opts.max_radius);
        let r_hi = d.extent + T::of(extra);
        let mut lo = d.extent + T::of(extra * opts.min_radius_fraction);
        if min_q(d.center, r_hi) < log_threshold {
            return Err(Error::ContourTooClose(format!(
                "cluster {i}: |q| stays below 10 rho = {threshold:.3e} even at radius {:.4e}",
                r_hi.f64()
            )));
        }
        let radius = if min_q(d.center, lo) >= log_threshold {
            lo
        } else {
            let mut hi = r_hi;
            for _ in 0..60 {
                let mid = (lo + hi) * T::of(0.5);
                if min_q(d.center, mid) >= log_threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if (hi - lo).f64() <= 1e-12 * hi.f64() {
                    break;
                }
            }
            hi
        };
        out.push(CircleContour::new(d.center, radius * T::of(opts.radius_multiplier), probe_nodes)?);
    }
    if opts.radius_multiplier != 1.0 {
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if (cabs(out[i].center - out[j].center) - out[i].radius - out[j].radius).f64() <= 0.0 {
                    return Err(Error::ContourTooClose(format!("scaled circles {i} and {j} overlap")));
                }
            }
        }
    }
    Ok(out)
}

/// Raw trapezoid sums `sum_nodes f q^k b_j (zeta - c)` over a set of node indices.
fn node_sums<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    q: &Polynomial<T>,
    circle: &CircleContour<T>,
    units: &[Complex<T>],
    nodes: &[usize],
    big_n: usize,
) -> Result<(Vec<Complex<T>>, Vec<f64>)> {
    let m = q.degree();
    const CHUNK: usize = 32;
    let partials: Vec<Result<(Vec<Complex<T>>, Vec<f64>)>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Complex::zero(); big_n * m];
            let mut mag = vec![0.0f64; big_n * m];
            for &j in chunk {
                let dz = units[j] * circle.radius;
                let zeta = circle.center + dz;
                let fv = eval_checked(f, zeta, j)? * dz;
                let qv = q.eval_factored(zeta);
                let b = q.divided_difference(zeta);
                let mut fq = fv;
                for k in 0..big_n {
                    for (jj, &bj) in b.iter().enumerate() {
                        let t = fq * bj;
                        acc[k * m + jj] += t;
                        mag[k * m + jj] = mag[k * m + jj].max(cabs(t).f64());
                    }
                    fq *= qv;
                }
            }
            Ok((acc, mag))
        })
        .collect();
    let mut acc = vec![Complex::zero(); big_n * m];
    let mut mag = vec![0.0f64; big_n * m];
    for p in partials {
        let (a, g) = p?;
        for i in 0..acc.len() {
            acc[i] += a[i];
            mag[i] = mag[i].max(g[i]);
        }
    }
    Ok((acc, mag))
}

/// Integrals `(1 / 2 pi i) \oint f q^k b_j d zeta` over one circle, with node
/// doubling until every entry settles.
fn circle_integrals<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    q: &Polynomial<T>,
    circle: &CircleContour<T>,
    big_n: usize,
    opts: &ApproxOptions,
) -> Result<(Vec<Complex<T>>, CircleContour<T>)> {
    let tol = opts.node_tolerance.unwrap_or(1e3 * T::EPS);
    let mut n = opts.start_nodes.max(16);
    n += n % 2;
    let units = unit_roots::<T>(n);
    let all: Vec<usize> = (0..n).collect();
    let (mut raw, mut mag) = node_sums(f, q, circle, &units, &all, big_n)?;
    let mut value: Vec<Complex<T>> = raw.iter().map(|&s| s / T::of_usize(n)).collect();
    while 2 * n <= opts.max_nodes {
        let n2 = 2 * n;
        let units2 = unit_roots::<T>(n2);
        let odd: Vec<usize> = (1..n2).step_by(2).collect();
        let (raw_odd, mag_odd) = node_sums(f, q, circle, &units2, &odd, big_n)?;
        for i in 0..raw.len() {
            raw[i] += raw_odd[i];
            mag[i] = mag[i].max(mag_odd[i]);
        }
        let next: Vec<Complex<T>> = raw.iter().map(|&s| s / T::of_usize(n2)).collect();
        let settled = next
            .iter()
            .zip(&value)
            .zip(&mag)
            .all(|((a, b), &scale)| cabs(*a - *b).f64() <= tol * scale + f64::MIN_POSITIVE);
        n = n2;
        value = next;
        if settled {
            break;
        }
    }
    Ok((value, circle.with_nodes(n)?))
}

/// Builds `f_N` from the first `m` Leja points of `sys`. `f` must vanish at
/// infinity; see [`approximate`] for the version that splits off the analytic
/// part first.
pub fn build_approximant<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    sys: &FeketeSystem<T>,
    m: usize,
    big_n: usize,
    opts: &ApproxOptions,
) -> Result<RationalApproximant<T>> {
    if m == 0 || big_n == 0 {
        return Err(Error::InvalidInput("m and N must be positive".into()));
    }
    if m > sys.points.len() {
        return Err(Error::InsufficientSample { needed: m, available: sys.points.len() });
    }
    let q = sys.q(m);
    let rho = rho_of(&q, &sys.base_set, opts.n_scale);
    let degenerate = rho.value < RHO_FLOOR;
    let circles = contour_circles(&q, rho.value, &sys.base_set, opts)?;

    let mut total = vec![Complex::zero(); big_n * m];
    let mut used = Vec::with_capacity(circles.len());
    let mut contour_q_max: f64 = 0.0;
    for c in &circles {
        let (vals, c_used) = circle_integrals(f, &q, c, big_n, opts)?;
        for (t, v) in total.iter_mut().zip(vals) {
            *t += v;
        }
        for z in c_used.nodes() {
            contour_q_max = contour_q_max.max(q.log_abs_at(z).exp());
        }
        used.push(c_used);
    }
    let coeff_polys: Vec<Polynomial<T>> = (0..big_n).map(|k| Polynomial::from_coeffs(total[k * m..(k + 1) * m].to_vec())).collect();

    check_divergence(&coeff_polys, contour_q_max)?;

    Ok(RationalApproximant {
        q_m: q,
        m,
        big_n,
        rho_m: rho,
        n_scale: opts.n_scale,
        coeff_polys,
        contour: used,
        degree: m * big_n,
        analytic: Polynomial::zero(),
        analytic_center: Complex::zero(),
        degenerate,
        contour_q_max,
        selection: sys.selection.clone(),
    })
}

/// Rejects coefficient sequences whose size, measured against the contour
/// scale of `q`, grows over the last three degrees.
fn check_divergence<T: Real>(coeffs: &[Polynomial<T>], q_scale: f64) -> Result<()> {
    let n = coeffs.len();
    if n < 4 || q_scale <= 0.0 {
        return Ok(());
    }
    let log_t: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.max_coeff().ln() - k as f64 * q_scale.ln())
        .collect();
    let peak = log_t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = peak + (1e2 * T::EPS).ln();
    let last = &log_t[n - 3..];
    let growing = last.windows(2).all(|w| w[1] > w[0] + 1.5f64.ln()) && last[0] > log_t[n - 4] + 1.5f64.ln();
    if growing && last[2] > floor {
        return Err(Error::SeriesDiverging { degree: n - 1 });
    }
    Ok(())
}

/// Circle enclosing the sample and every contour, used to split off the part
/// of `f` analytic at infinity.
pub fn enclosing_circle<T: Real>(k: &CompactSample<T>, opts: &ApproxOptions) -> Result<CircleContour<T>> {
    let pts = k.points();
    let n = T::of_usize(pts.len());
    let centroid = pts.iter().fold(Complex::zero(), |a: Complex<T>, &p| a + p) / n;
    let extent = k.radius_about(centroid).f64();
    let r = 2.0 * extent + 1.5 * opts.max_radius + 0.5;
    CircleContour::new(centroid, T::of(r), 256)
}

/// Splits `f` at infinity, approximates the principal remainder, and carries
/// the analytic polynomial in the approximant.
pub fn approximate<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    sys: &FeketeSystem<T>,
    m: usize,
    big_n: usize,
    opts: &ApproxOptions,
    laurent: &LaurentOptions,
) -> Result<RationalApproximant<T>> {
    let circle = enclosing_circle(&sys.base_set, opts)?;
    let split = split_at_infinity(f, &circle, laurent)?;
    let analytic = split.analytic_part.clone();
    let center = split.center;
    let principal = |z: Complex<T>| f.eval(z) - analytic.eval(z - center);
    let mut approx = build_approximant(&principal, sys, m, big_n, opts)?;
    approx.analytic = analytic;
    approx.analytic_center = center;
    Ok(approx)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    pub m: usize,
    pub big_n: usize,
    pub degree: usize,
    pub sup_error: f64,
    pub normalized_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport<T> {
    pub entries: Vec<ConvergenceEntry>,
    pub target_set: CompactSample<T>,
    /// Distance from the target to the singular sample.
    pub target_distance: f64,
}

/// One approximant per schedule item, measured on `target`. Items sharing
/// `m` reuse one coefficient computation at the largest `N`.
pub fn convergence_scan<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    sys: &FeketeSystem<T>,
    schedule: &[(usize, usize)],
    target: &CompactSample<T>,
    opts: &ApproxOptions,
) -> Result<ConvergenceReport<T>> {
    let degrees: Vec<usize> = schedule.iter().map(|&(m, n)| m * n).collect();
    if degrees.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("schedule degrees must be strictly increasing".into()));
    }
    let target_distance = target.points().iter().map(|&z| sys.base_set.distance(z).f64()).fold(f64::INFINITY, f64::min);
    let mut cache: Vec<(usize, RationalApproximant<T>)> = Vec::new();
    let mut entries = Vec::with_capacity(schedule.len());
    for (index, &(m, big_n)) in schedule.iter().enumerate() {
        let tag = |e: Error| Error::Schedule { index, source: Box::new(e) };
        let full = match cache.iter().find(|(mm, _)| *mm == m) {
            Some((_, a)) => a.clone(),
            None => {
                let max_n = schedule.iter().filter(|s| s.0 == m).map(|s| s.1).max().expect("present");
                let a = build_approximant(f, sys, m, max_n, opts).map_err(tag)?;
                cache.push((m, a.clone()));
                a
            }
        };
        let approx = full.truncated(big_n);
        let err = |z: Complex<T>| f.eval(z) - approx.eval(z);
        let sup = sup_norm(&err, target).map_err(tag)?.f64();
        let normalized = if sup == 0.0 { 0.0 } else { (sup.ln() / approx.degree as f64).exp() };
        entries.push(ConvergenceEntry { m, big_n, degree: approx.degree, sup_error: sup, normalized_error: normalized });
    }
    Ok(ConvergenceReport { entries, target_set: target.clone(), target_distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fekete::leja_points;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn circle_sample(center: C, r: f64, n: usize) -> CompactSample<f64> {
        CompactSample::from_f64(&(0..n).map(|j| center + C::from_polar(r, j as f64 * std::f64::consts::TAU / n as f64)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn rho_examples() {
        let a = c(0.3, 0.2);
        let q1 = Polynomial::from_roots(&[a]);
        assert_eq!(rho_of(&q1, &CompactSample::from_f64(&[a]).unwrap(), 5).value, 0.0);
        let q = Polynomial::from_roots(&[c(0.0, 0.0)]);
        let r = rho_of(&q, &CompactSample::<f64>::from_reals(&[0.1]).unwrap(), 2);
        assert!((r.value - 0.4).abs() < 1e-15);
        let q2 = Polynomial::from_roots(&[c(0.1, 0.0), c(-0.1, 0.0)]);
        let r = rho_of(&q2, &CompactSample::<f64>::from_reals(&[0.1, -0.1, 0.0]).unwrap(), 3);
        assert!((r.value - 0.81).abs() < 1e-13);
    }

    #[test]
    fn single_pole_is_exact() {
        let a = c(0.2, -0.1);
        let k = CompactSample::from_f64(&[a]).unwrap();
        let sys = leja_points(&k, 1).unwrap();
        let f = move |z: C| (z - a).inv();
        let ap = build_approximant(&f, &sys, 1, 1, &ApproxOptions::default()).unwrap();
        assert!(ap.degenerate);
        assert_eq!(ap.coeff_polys[0].degree(), 0);
        assert!((ap.coeff_polys[0].coeff(0) - c(1.0, 0.0)).norm() < 1e-14);
        for j in 0..30 {
            let z = a + C::from_polar(0.1 + 0.2 * j as f64, j as f64);
            assert!((ap.eval(z) - f(z)).norm() < 1e-12 * f(z).norm());
        }
    }

    #[test]
    fn zero_function_gives_zero_coefficients() {
        let k = CompactSample::<f64>::from_reals(&[0.1, 0.4, 0.9]).unwrap();
        let sys = leja_points(&k, 3).unwrap();
        let ap = build_approximant(&|_z: C| c(0.0, 0.0), &sys, 3, 4, &ApproxOptions::default()).unwrap();
        assert!(ap.coeff_polys.iter().all(|p| p.max_coeff() < 1e-12));
    }

    #[test]
    fn five_term_series() {
        let terms: Vec<(f64, f64)> = (1..=5).map(|n| (1.0 / n as f64, (-((n * n) as f64)).exp() / (n * n) as f64)).collect();
        let f = |z: C| terms.iter().fold(c(0.0, 0.0), |acc, &(a, cn)| acc + cn / (z - a));
        let k = CompactSample::<f64>::from_reals(&terms.iter().map(|t| t.0).collect::<Vec<_>>()).unwrap();
        let sys = leja_points(&k, 5).unwrap();
        let ap = build_approximant(&f, &sys, 5, 4, &ApproxOptions::default()).unwrap();
        let l = circle_sample(c(0.7, 0.0), 0.1, 200);
        let err = sup_norm(&|z: C| f(z) - ap.eval(z), &l).unwrap();
        assert!(err < 1e-6, "err {err}");
        for p in ap.poles() {
            assert!(k.points().contains(p));
        }
        assert!(ap.coeff_polys.iter().all(|p| p.degree() <= 4));
    }

    #[test]
    fn analytic_part_is_carried() {
        let a = c(0.25, 0.0);
        let f = move |z: C| z * z - 2.0 + 3.0 / (z - a);
        let k = CompactSample::from_f64(&[a]).unwrap();
        let sys = leja_points(&k, 1).unwrap();
        let ap = approximate(&f, &sys, 1, 1, &ApproxOptions::default(), &LaurentOptions { k_max: 16, ..Default::default() }).unwrap();
        for j in 0..20 {
            let z = C::from_polar(0.8 + 0.1 * j as f64, j as f64);
            assert!((ap.eval(z) - f(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn numerator_matches_cleared_form() {
        let pts = [c(0.1, 0.0), c(0.5, 0.1), c(-0.3, 0.2)];
        let f = |z: C| pts.iter().enumerate().fold(c(0.0, 0.0), |acc, (i, &p)| acc + (i as f64 + 1.0) / (z - p));
        let k = CompactSample::from_f64(&pts).unwrap();
        let sys = leja_points(&k, 3).unwrap();
        let ap = build_approximant(&f, &sys, 3, 2, &ApproxOptions::default()).unwrap();
        for z in [c(0.9, 0.9), c(0.12, 0.01), c(2.0, -1.0)] {
            let w = c(0.3, -0.7);
            let q = ap.q_m.eval_factored(z);
            let direct = ((w - ap.eval(z)) * q.powi(2)).norm().ln();
            assert!((ap.log_abs_numerator(z, w) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn too_close_contour_is_reported() {
        let k = CompactSample::<f64>::segment(c(0.2, 0.0), c(0.6, 0.0), 41).unwrap();
        let sys = leja_points(&k, 2).unwrap();
        let f = |z: C| (z - 0.3).inv();
        // every sample point gets its own tiny circle where |q| < 10 rho
        let e = build_approximant(&f, &sys, 2, 2, &ApproxOptions::default()).unwrap_err();
        assert!(matches!(e, Error::ContourTooClose(_)));
    }

    #[test]
    fn schedule_must_increase() {
        let k = CompactSample::<f64>::from_reals(&[0.1]).unwrap();
        let sys = leja_points(&k, 1).unwrap();
        let e = convergence_scan(&|z: C| (z - 0.1).inv(), &sys, &[(1, 2), (1, 1)], &k, &ApproxOptions::default());
        assert!(matches!(e, Err(Error::InvalidInput(_))));
    }
}
