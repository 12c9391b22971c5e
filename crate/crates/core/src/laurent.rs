//! Laurent splitting on circles, sequential Mittag-Leffler peeling over a
//! disk cover, and circles that avoid a finite sample.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unit_roots, CircleContour, CompactSample, Disk, DiskUnion};
use crate::poly::Polynomial;
use crate::quadrature::{eval_checked, ComplexFn};
use crate::scalar::{cabs, Real};

/// Number of candidate radii scanned by [`find_clean_radius`].
pub const CLEAN_RADIUS_CANDIDATES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CleanRadius<T> {
    pub radius: T,
    /// Distance from the sample to the circle.
    pub margin: T,
}

/// Picks a radius in `(r_lo, r_hi)` whose circle about `center` keeps the
/// sample as far away as possible. Candidates are also kept away from the
/// interval ends, so a point at the center does not drag the choice to `r_hi`.
pub fn find_clean_radius<T: Real>(a: &CompactSample<T>, center: Complex<T>, r_lo: T, r_hi: T) -> Result<CleanRadius<T>> {
    if !(r_lo < r_hi) || r_lo < T::zero() {
        return Err(Error::InvalidInput(format!("need 0 <= r_lo < r_hi, got ({r_lo}, {r_hi})")));
    }
    let mut moduli: Vec<T> = a.points().iter().map(|p| cabs(*p - center)).collect();
    moduli.sort_by(|x, y| x.partial_cmp(y).expect("finite moduli"));
    let step = (r_hi - r_lo) / T::of_usize(CLEAN_RADIUS_CANDIDATES);
    let mut best: Option<(T, T, T)> = None;
    for i in 0..CLEAN_RADIUS_CANDIDATES {
        let r = r_lo + step * (T::of_usize(i) + T::of(0.5));
        let margin = nearest_gap(&moduli, r);
        let score = margin.min(r - r_lo).min(r_hi - r);
        if best.is_none_or(|(s, _, _)| score > s) {
            best = Some((score, r, margin));
        }
    }
    let (_, radius, margin) = best.expect("at least one candidate");
    if margin.f64() < 1e-12 {
        return Err(Error::NoCleanRadius { best_margin: margin.f64(), threshold: 1e-12 });
    }
    Ok(CleanRadius { radius, margin })
}

fn nearest_gap<T: Real>(sorted: &[T], r: T) -> T {
    let idx = sorted.partition_point(|&m| m < r);
    let mut gap: Option<T> = None;
    for j in [idx.wrapping_sub(1), idx] {
        if let Some(&m) = sorted.get(j) {
            let g = (m - r).abs();
            gap = Some(gap.map_or(g, |x| x.min(g)));
        }
    }
    gap.expect("nonempty sample")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentOptions {
    pub k_max: usize,
    /// Bound on the truncation residual `max(|a_kmax| r^kmax, |a_-kmax| r^-kmax)`.
    pub tolerance: f64,
    /// Agreement required between coefficient sets at successive node counts.
    pub node_tolerance: f64,
    pub max_nodes: usize,
}

impl Default for LaurentOptions {
    fn default() -> Self {
        LaurentOptions { k_max: 32, tolerance: 1e-8, node_tolerance: 1e-10, max_nodes: 1 << 16 }
    }
}

/// `f = analytic + principal` on a circle, both in powers of `z - center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentSplit<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub analytic_part: Polynomial<T>,
    /// `a_{-1}, a_{-2}, ...`
    pub principal_part: Vec<Complex<T>>,
    pub annulus_inner: f64,
    pub annulus_outer: f64,
    pub truncation_residual: f64,
    pub nodes: usize,
}

impl<T: Real> LaurentSplit<T> {
    pub fn analytic(&self, z: Complex<T>) -> Complex<T> {
        self.analytic_part.eval(z - self.center)
    }

    /// Horner evaluation in `1 / (z - center)`; zero at infinity.
    pub fn principal(&self, z: Complex<T>) -> Complex<T> {
        eval_principal(&self.principal_part, z - self.center)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.analytic(z) + self.principal(z)
    }

    pub fn principal_l1(&self) -> f64 {
        self.principal_part.iter().map(|&c| cabs(c).f64()).sum()
    }
}

fn eval_principal<T: Real>(coeffs: &[Complex<T>], dz: Complex<T>) -> Complex<T> {
    if coeffs.is_empty() {
        return Complex::zero();
    }
    let u = dz.inv();
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| (acc + c) * u)
}

/// Coefficients `a_k` for `-k_max <= k <= k_max` from samples at the
/// `n`-th roots of unity scaled by `radius`.
fn coefficients_from_samples<T: Real>(values: &[Complex<T>], units: &[Complex<T>], radius: T, k_max: usize) -> Vec<Complex<T>> {
    let n = values.len();
    let n_t = T::of_usize(n);
    let mut out = Vec::with_capacity(2 * k_max + 1);
    for k in -(k_max as i64)..=(k_max as i64) {
        let mut acc = Complex::zero();
        for (j, &g) in values.iter().enumerate() {
            let idx = ((j as i64 * k).rem_euclid(n as i64)) as usize;
            acc += g * units[idx].conj();
        }
        out.push(acc / n_t * radius.powi(-(k as i32)));
    }
    out
}

/// Laurent coefficients of `f` on `circle`, doubling the node count until the
/// scaled coefficients settle.
pub fn laurent_split<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, circle: &CircleContour<T>, opts: &LaurentOptions) -> Result<LaurentSplit<T>> {
    if opts.k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let k_max = opts.k_max;
    let mut n = circle.node_count.max(2 * k_max + 2);
    n += n % 2;
    let (c, r) = (circle.center, circle.radius);
    let mut units = unit_roots::<T>(n);
    let mut values: Vec<Complex<T>> = units
        .iter()
        .enumerate()
        .map(|(j, u)| eval_checked(f, c + *u * r, j))
        .collect::<Result<_>>()?;
    let mut coeffs = coefficients_from_samples(&values, &units, r, k_max);
    let scaled = |cs: &[Complex<T>]| -> Vec<f64> {
        cs.iter()
            .enumerate()
            .map(|(i, &a)| cabs(a).f64() * r.f64().powi(i as i32 - k_max as i32))
            .collect()
    };
    loop {
        if 2 * n > opts.max_nodes {
            break;
        }
        let n2 = 2 * n;
        let units2 = unit_roots::<T>(n2);
        let mut values2 = Vec::with_capacity(n2);
        for j in 0..n2 {
            if j % 2 == 0 {
                values2.push(values[j / 2]);
            } else {
                values2.push(eval_checked(f, c + units2[j] * r, j)?);
            }
        }
        let coeffs2 = coefficients_from_samples(&values2, &units2, r, k_max);
        let size = scaled(&coeffs2).into_iter().fold(1.0, f64::max);
        let change = coeffs
            .iter()
            .zip(&coeffs2)
            .enumerate()
            .map(|(i, (&a, &b))| cabs(a - b).f64() * r.f64().powi(i as i32 - k_max as i32))
            .fold(0.0, f64::max);
        n = n2;
        units = units2;
        values = values2;
        coeffs = coeffs2;
        if change <= opts.node_tolerance * size {
            break;
        }
    }
    let _ = units;
    let scaled_now = scaled(&coeffs);
    let sup_f = values.iter().map(|&v| cabs(v).f64()).fold(0.0, f64::max);
    let noise = (T::EPS * 1e3 * sup_f).max(f64::MIN_POSITIVE);

    let analytic: Vec<Complex<T>> = coeffs[k_max..].to_vec();
    let principal: Vec<Complex<T>> = (1..=k_max).map(|k| coeffs[k_max - k]).collect();
    let rf = r.f64();

    // radii of convergence from the decay between the last significant
    // coefficient and the one at half its index
    let decay = |coef: &dyn Fn(usize) -> f64, scaled_at: &dyn Fn(usize) -> f64| -> Option<f64> {
        let hi = (1..=k_max).rev().find(|&k| scaled_at(k) > noise)?;
        let lo = (hi / 2).max(1);
        if hi == lo || coef(lo) == 0.0 {
            return None;
        }
        Some((coef(hi) / coef(lo)).powf(1.0 / (hi - lo) as f64))
    };
    let inner = decay(&|k| cabs(principal[k - 1]).f64(), &|k| scaled_now[k_max - k]).unwrap_or(0.0);
    let outer_inv = decay(&|k| cabs(analytic[k]).f64(), &|k| scaled_now[k_max + k]).unwrap_or(0.0);
    let annulus_inner = inner.clamp(rf * 1e-6, rf * (1.0 - 1e-9));
    let annulus_outer = if outer_inv > 0.0 { (1.0 / outer_inv).max(rf * (1.0 + 1e-9)) } else { rf * 1e6 };

    let residual = scaled_now[0].max(scaled_now[2 * k_max]);
    if residual > opts.tolerance {
        return Err(Error::Truncation { residual, tolerance: opts.tolerance });
    }
    Ok(LaurentSplit {
        center: c,
        radius: r,
        analytic_part: Polynomial::from_coeffs(analytic),
        principal_part: principal,
        annulus_inner,
        annulus_outer,
        truncation_residual: residual,
        nodes: n,
    })
}

/// Splits off the part of `f` analytic at infinity using a circle that
/// encloses every singularity. Analytic coefficients at the noise level are
/// dropped so the polynomial does not amplify round-off far out.
pub fn split_at_infinity<T: Real, F: ComplexFn<T> + ?Sized>(f: &F, circle: &CircleContour<T>, opts: &LaurentOptions) -> Result<LaurentSplit<T>> {
    let mut s = laurent_split(f, circle, &LaurentOptions { tolerance: f64::INFINITY, ..*opts })?;
    let r = circle.radius.f64();
    let sup: f64 = s
        .analytic_part
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| cabs(a).f64() * r.powi(k as i32))
        .chain(s.principal_part.iter().enumerate().map(|(k, &a)| cabs(a).f64() * r.powi(-(k as i32) - 1)))
        .fold(0.0, f64::max);
    let floor = T::EPS * 1e4 * sup.max(f64::MIN_POSITIVE);
    let kept: Vec<Complex<T>> = s
        .analytic_part
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| if cabs(a).f64() * r.powi(k as i32) <= floor { Complex::zero() } else { a })
        .collect();
    s.analytic_part = Polynomial::from_coeffs(kept);
    if s.truncation_residual > opts.tolerance {
        return Err(Error::Truncation { residual: s.truncation_residual, tolerance: opts.tolerance });
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentPart<T> {
    pub disk: Disk<T>,
    /// Indices into the sample of the points assigned to this disk.
    pub sample_indices: Vec<usize>,
    /// Principal part `g_j` about the disk center.
    pub split: LaurentSplit<T>,
    /// Largest distance from the center to an assigned point.
    pub hull_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MittagLefflerOptions<T> {
    pub laurent: LaurentOptions,
    /// Circle on which the remainder `f - sum g_j` is expanded; defaults to a
    /// circle of 1.5 times the cover extent.
    pub test_circle: Option<CircleContour<T>>,
    pub boundary_margin: f64,
}

impl<T: Real> Default for MittagLefflerOptions<T> {
    fn default() -> Self {
        MittagLefflerOptions { laurent: LaurentOptions { k_max: 64, ..Default::default() }, test_circle: None, boundary_margin: 1e-10 }
    }
}

/// `f = analytic + sum_j g_j` with one principal part per cover disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MittagLefflerSplit<T> {
    pub components: Vec<ComponentPart<T>>,
    pub test_circle: CircleContour<T>,
    /// Taylor expansion of the remainder about the test circle center; valid
    /// inside the test disk.
    pub analytic_taylor: Polynomial<T>,
    /// `max |f - sum g_j - analytic_taylor|` over the test circle nodes.
    pub residual: f64,
}

impl<T: Real> MittagLefflerSplit<T> {
    pub fn principal_sum(&self, z: Complex<T>) -> Complex<T> {
        self.components.iter().fold(Complex::zero(), |acc, c| acc + c.split.principal(z))
    }

    /// Exact analytic part `f(z) - sum g_j(z)`, defined off the sample.
    pub fn analytic_value<F: ComplexFn<T> + ?Sized>(&self, f: &F, z: Complex<T>) -> Complex<T> {
        f.eval(z) - self.principal_sum(z)
    }

    /// Polynomial surrogate of the analytic part, valid in the test disk.
    pub fn analytic_approx(&self, z: Complex<T>) -> Complex<T> {
        self.analytic_taylor.eval(z - self.test_circle.center)
    }

    /// Disk on which [`Self::analytic_approx`] is certified.
    pub fn analytic_domain(&self) -> Disk<T> {
        Disk { center: self.test_circle.center, radius: self.test_circle.radius }
    }
}

/// Peels principal parts one disk at a time: `g_j` is the principal part of
/// `f - g_1 - ... - g_{j-1}` on the boundary of disk `j`, which owns the
/// sample points it contains that no earlier disk claimed.
pub fn mittag_leffler<T: Real, F: ComplexFn<T> + ?Sized>(
    f: &F,
    cover: &DiskUnion<T>,
    sample: &CompactSample<T>,
    opts: &MittagLefflerOptions<T>,
) -> Result<MittagLefflerSplit<T>> {
    if cover.is_empty() {
        return Err(Error::Cover("cover has no disks".into()));
    }
    let mut owner: Vec<Option<usize>> = vec![None; sample.len()];
    for (j, d) in cover.disks.iter().enumerate() {
        for (i, &p) in sample.points().iter().enumerate() {
            let gap = d.boundary_distance(p).f64();
            if gap <= opts.boundary_margin {
                return Err(Error::Cover(format!("sample point {i} lies within {gap:e} of the boundary of disk {j}")));
            }
            if owner[i].is_none() && d.contains(p) {
                owner[i] = Some(j);
            }
        }
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(Error::Cover(format!("sample point {i} is not covered")));
    }

    let mut components: Vec<ComponentPart<T>> = Vec::with_capacity(cover.len());
    for (j, d) in cover.disks.iter().enumerate() {
        let indices: Vec<usize> = (0..sample.len()).filter(|&i| owner[i] == Some(j)).collect();
        let hull_radius = indices.iter().map(|&i| cabs(sample.points()[i] - d.center).f64()).fold(0.0, f64::max);
        let circle = CircleContour::new(d.center, d.radius, CircleContour::<T>::DEFAULT_NODES)?;
        // earlier principal parts must converge on this boundary
        for node in circle.nodes() {
            for prev in &components {
                let dist = cabs(node - prev.disk.center).f64();
                if prev.disk.contains(node) && dist <= prev.hull_radius * 1.05 {
                    return Err(Error::Cover(format!(
                        "boundary of disk {j} enters the singular hull of an earlier disk (distance {dist:.3e})"
                    )));
                }
            }
        }
        let remainder = |z: Complex<T>| f.eval(z) - components.iter().fold(Complex::zero(), |acc, c| acc + c.split.principal(z));
        let mut split = laurent_split(&remainder, &circle, &opts.laurent)?;
        split.analytic_part = Polynomial::zero();
        components.push(ComponentPart { disk: *d, sample_indices: indices, split, hull_radius });
    }

    let test_circle = match opts.test_circle {
        Some(c) => c,
        None => {
            let n = T::of_usize(cover.len());
            let centroid = cover.disks.iter().fold(Complex::zero(), |acc: Complex<T>, d| acc + d.center) / n;
            let extent = cover.disks.iter().map(|d| cabs(d.center - centroid) + d.radius).reduce(|a, b| a.max(b)).expect("nonempty");
            CircleContour::new(centroid, extent * T::of(1.5), CircleContour::<T>::DEFAULT_NODES)?
        }
    };
    let partial = MittagLefflerSplit { components, test_circle, analytic_taylor: Polynomial::zero(), residual: 0.0 };
    let rem = |z: Complex<T>| f.eval(z) - partial.principal_sum(z);
    let outer = laurent_split(&rem, &test_circle, &LaurentOptions { tolerance: f64::INFINITY, ..opts.laurent })?;
    let mut out = partial.clone();
    out.analytic_taylor = outer.analytic_part.clone();
    let mut residual: f64 = 0.0;
    for (j, z) in test_circle.nodes().into_iter().enumerate() {
        let v = eval_checked(&rem, z, j)? - out.analytic_approx(z);
        residual = residual.max(cabs(v).f64());
    }
    out.residual = residual;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::Double;
    use crate::scalar::cplx;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn circle(cx: f64, r: f64) -> CircleContour<f64> {
        CircleContour::new(c(cx, 0.0), r, 256).unwrap()
    }

    #[test]
    fn clean_radius_examples() {
        let a = CompactSample::<f64>::from_reals(&[0.0, 0.5]).unwrap();
        let r = find_clean_radius(&a, c(0.0, 0.0), 0.1, 0.45).unwrap();
        assert!(r.radius > 0.1 && r.radius < 0.45);
        assert!(r.margin >= 0.05);

        let a = CompactSample::<f64>::from_reals(&[0.0]).unwrap();
        let r = find_clean_radius(&a, c(0.0, 0.0), 0.5, 1.0).unwrap();
        let step = 0.5 / CLEAN_RADIUS_CANDIDATES as f64;
        assert!((r.radius - 0.75).abs() <= step);
        assert!((r.margin - r.radius).abs() < 1e-15);

        let pts: Vec<f64> = (1..=100).map(|n| 1.0 / n as f64).collect();
        let a = CompactSample::<f64>::from_reals(&pts).unwrap();
        let r = find_clean_radius(&a, c(0.0, 0.0), 0.015, 0.95).unwrap();
        let n = (1.0 / r.radius).floor();
        assert!(r.radius > 1.0 / (n + 1.0) && r.radius < 1.0 / n);
        assert!(r.margin > 0.0);
    }

    #[test]
    fn clean_radius_failure() {
        let pts: Vec<f64> = (0..=2000).map(|i| 0.5 + 0.5 * i as f64 / 2000.0).collect();
        let a = CompactSample::<f64>::from_reals(&pts).unwrap();
        // every candidate lies within 1.3e-4 of a point but none within 1e-12
        assert!(find_clean_radius(&a, c(0.0, 0.0), 0.6, 0.9).is_ok());
        let a = CompactSample::<f64>::from_reals(&[0.75]).unwrap();
        assert!(find_clean_radius(&a, c(0.0, 0.0), 0.75, 0.75).is_err());
    }

    #[test]
    fn reciprocal_is_already_principal() {
        let s = laurent_split(&|z: C| z.inv(), &circle(0.0, 1.0), &LaurentOptions { k_max: 8, ..Default::default() }).unwrap();
        assert!(s.analytic_part.max_coeff() < 1e-14);
        assert!((s.principal_part[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(s.principal_part[1..].iter().all(|a| a.norm() < 1e-14));
    }

    #[test]
    fn geometric_principal_coefficients() {
        let f = |z: C| z * z + 3.0 / (z - 0.2);
        let s = laurent_split(&f, &circle(0.0, 0.6), &LaurentOptions::default()).unwrap();
        assert!((s.analytic_part.coeff(2) - c(1.0, 0.0)).norm() < 1e-12);
        for k in 1..=20 {
            let expect = 3.0 * 0.2f64.powi(k as i32 - 1);
            assert!((s.principal_part[k - 1] - c(expect, 0.0)).norm() < 1e-12, "k={k}");
        }
        assert!((s.annulus_inner - 0.2).abs() < 0.02, "inner {}", s.annulus_inner);
    }

    #[test]
    fn entire_function_has_no_principal_part() {
        let s = laurent_split(&|z: C| z.exp(), &circle(0.0, 1.0), &LaurentOptions::default()).unwrap();
        assert!(s.principal_part.iter().all(|a| a.norm() < 1e-12));
        assert!(s.annulus_outer > 1.0);
    }

    #[test]
    fn truncation_error_is_raised() {
        let f = |z: C| 3.0 / (z - 0.5);
        let e = laurent_split(&f, &circle(0.0, 0.6), &LaurentOptions { k_max: 4, ..Default::default() }).unwrap_err();
        assert!(matches!(e, Error::Truncation { .. }));
    }

    #[test]
    fn singular_node_is_reported() {
        let f = |z: C| (z - 1.0).inv();
        let e = laurent_split(&f, &circle(0.0, 1.0), &LaurentOptions::default()).unwrap_err();
        assert!(matches!(e, Error::NodeEvaluation { .. }));
    }

    #[test]
    fn principal_decay_bound() {
        let f = |z: C| 1.0 / (z - 0.1) - 2.0 / (z + c(0.0, 0.2)) + z;
        let s = laurent_split(&f, &circle(0.0, 0.5), &LaurentOptions::default()).unwrap();
        let l1 = s.principal_l1();
        for j in 0..50 {
            let z = Complex::from_polar(2.0 * s.annulus_outer.min(10.0) * (1.0 + j as f64 * 0.1), j as f64);
            assert!(s.principal(z).norm() <= 2.0 * l1 / z.norm());
        }
    }

    #[test]
    fn two_disk_partial_fractions() {
        let f = |z: C| (z - 0.3).inv() + (z + 0.3).inv();
        let cover = DiskUnion::new(vec![Disk::new(c(0.3, 0.0), 0.2).unwrap(), Disk::new(c(-0.3, 0.0), 0.2).unwrap()]);
        let k = CompactSample::<f64>::from_reals(&[0.3, -0.3]).unwrap();
        let ml = mittag_leffler(&f, &cover, &k, &MittagLefflerOptions::default()).unwrap();
        for (comp, pole) in ml.components.iter().zip([0.3, -0.3]) {
            for j in 0..20 {
                let z = Complex::from_polar(0.5 + 0.1 * j as f64, j as f64);
                assert!((comp.split.principal(z) - (z - pole).inv()).norm() < 1e-10);
            }
        }
        assert!(ml.residual < 1e-10);
    }

    #[test]
    fn entire_function_has_zero_parts() {
        let f = |z: C| (z * 2.0).sin() + 1.0;
        let cover = DiskUnion::new(vec![Disk::new(c(0.0, 0.0), 0.4).unwrap(), Disk::new(c(1.0, 0.5), 0.3).unwrap()]);
        let k = CompactSample::<f64>::from_f64(&[c(0.1, 0.0), c(1.0, 0.5)]).unwrap();
        let ml = mittag_leffler(&f, &cover, &k, &MittagLefflerOptions::default()).unwrap();
        for comp in &ml.components {
            assert!(comp.split.principal_l1() < 1e-10);
        }
    }

    #[test]
    fn cover_errors() {
        let f = |z: C| (z - 0.3).inv();
        let k = CompactSample::<f64>::from_reals(&[0.3]).unwrap();
        let touching = DiskUnion::new(vec![Disk::new(c(0.1, 0.0), 0.2).unwrap()]);
        assert!(matches!(mittag_leffler(&f, &touching, &k, &MittagLefflerOptions::default()), Err(Error::Cover(_))));
        let missing = DiskUnion::new(vec![Disk::new(c(-1.0, 0.0), 0.2).unwrap()]);
        assert!(matches!(mittag_leffler(&f, &missing, &k, &MittagLefflerOptions::default()), Err(Error::Cover(_))));
    }

    #[test]
    fn truncated_pole_series_single_disk() {
        let terms: Vec<(f64, f64)> = (1..=5).map(|n| (1.0 / n as f64, (-(n * n) as f64).exp() / (n * n) as f64)).collect();
        let f = |z: C| terms.iter().fold(c(0.0, 0.0), |acc, &(a, cn)| acc + cn / (z - a));
        let cover = DiskUnion::new(vec![Disk::new(c(0.55, 0.0), 0.6).unwrap()]);
        let k = CompactSample::<f64>::from_reals(&terms.iter().map(|t| t.0).collect::<Vec<_>>()).unwrap();
        let opts = MittagLefflerOptions { test_circle: Some(CircleContour::new(c(0.0, 0.0), 1.5, 256).unwrap()), ..Default::default() };
        let ml = mittag_leffler(&f, &cover, &k, &opts).unwrap();
        assert!(ml.residual < 1e-8, "residual {}", ml.residual);
        for j in 0..40 {
            let z = Complex::from_polar(1.5, j as f64 * 0.157);
            assert!((ml.principal_sum(z) - f(z)).norm() < 1e-8);
        }
    }

    #[test]
    fn one_disk_cover_matches_recentered_split() {
        let f = |z: C| 2.0 / (z - c(0.1, 0.1)) + 1.0 / ((z + 0.05) * (z + 0.05)) + z * z;
        let disk = Disk::new(c(0.02, 0.03), 0.5).unwrap();
        let k = CompactSample::<f64>::from_f64(&[c(0.1, 0.1), c(-0.05, 0.0)]).unwrap();
        let ml = mittag_leffler(&f, &DiskUnion::new(vec![disk]), &k, &MittagLefflerOptions::default()).unwrap();
        let direct = laurent_split(&f, &CircleContour::new(disk.center, disk.radius, 256).unwrap(), &MittagLefflerOptions::<f64>::default().laurent)
            .unwrap();
        for (a, b) in ml.components[0].split.principal_part.iter().zip(&direct.principal_part) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn double_double_split() {
        let f = |z: Complex<Double>| (z - cplx::<Double>(0.2, 0.0)).inv() * Double::from_f64(3.0);
        let circ = CircleContour::new(cplx::<Double>(0.0, 0.0), Double::from_f64(0.6), 256).unwrap();
        let s = laurent_split(&f, &circ, &LaurentOptions { k_max: 80, tolerance: 1e-20, node_tolerance: 1e-28, max_nodes: 1 << 12 }).unwrap();
        let expect = Double::from_f64(0.2).powi(4) * Double::from_f64(3.0);
        let a5 = s.principal_part[4] - Complex::new(expect, Double::ZERO);
        assert!(cabs(a5).as_f64() < 1e-28);
    }
}
