//! Disks, circles and finite samples of compact sets.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cis, is_finite_c, Real};

/// Default duplicate tolerance for [`CompactSample`].
pub const SAMPLE_TOLERANCE: f64 = 1e-14;

/// Open disk `|z - center| < radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk<T> {
    pub center: Complex<T>,
    pub radius: T,
}

impl<T: Real> Disk<T> {
    pub fn new(center: Complex<T>, radius: T) -> Result<Self> {
        if !is_finite_c(center) || !radius.is_finite() || radius <= T::zero() {
            return Err(Error::InvalidInput(format!("disk needs finite center and positive radius, got r = {radius}")));
        }
        Ok(Disk { center, radius })
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        cabs(z - self.center) < self.radius
    }

    /// Signed distance from `z` to the disk: negative inside.
    pub fn signed_distance(&self, z: Complex<T>) -> T {
        cabs(z - self.center) - self.radius
    }

    /// Distance from `z` to the boundary circle.
    pub fn boundary_distance(&self, z: Complex<T>) -> T {
        self.signed_distance(z).abs()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiskUnion<T> {
    pub disks: Vec<Disk<T>>,
}

impl<T: Real> DiskUnion<T> {
    pub fn new(disks: Vec<Disk<T>>) -> Self {
        DiskUnion { disks }
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        self.disks.iter().any(|d| d.contains(z))
    }

    /// Minimum signed distance to the disks; `None` for an empty union.
    pub fn signed_distance(&self, z: Complex<T>) -> Option<T> {
        self.disks.iter().map(|d| d.signed_distance(z)).reduce(|a, b| a.min(b))
    }
}

/// Circle carrying the periodic trapezoid rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleContour<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub node_count: usize,
}

impl<T: Real> CircleContour<T> {
    pub const DEFAULT_NODES: usize = 256;

    pub fn new(center: Complex<T>, radius: T, node_count: usize) -> Result<Self> {
        if node_count < 16 || node_count % 2 != 0 {
            return Err(Error::InvalidInput(format!("contour node count must be even and at least 16, got {node_count}")));
        }
        if !is_finite_c(center) || !radius.is_finite() || radius <= T::zero() {
            return Err(Error::InvalidInput(format!("contour radius must be positive, got {radius}")));
        }
        Ok(CircleContour { center, radius, node_count })
    }

    /// `e^{2 pi i j / N}` for `j = 0..N`.
    pub fn unit_nodes(&self) -> Vec<Complex<T>> {
        unit_roots(self.node_count)
    }

    pub fn nodes(&self) -> Vec<Complex<T>> {
        self.unit_nodes().into_iter().map(|u| self.center + u * self.radius).collect()
    }

    pub fn with_nodes(&self, node_count: usize) -> Result<Self> {
        Self::new(self.center, self.radius, node_count)
    }

    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.center, radius, self.node_count)
    }
}

/// The `n` roots of unity in counter-clockwise order, computed from the first
/// octant so that symmetric nodes are exact mirrors.
pub fn unit_roots<T: Real>(n: usize) -> Vec<Complex<T>> {
    let two_pi = T::pi() * T::of(2.0);
    let n_t = T::of_usize(n);
    (0..n)
        .map(|j| {
            if 4 * j == n {
                Complex::new(T::zero(), T::one())
            } else if 2 * j == n {
                Complex::new(-T::one(), T::zero())
            } else if 4 * j == 3 * n {
                Complex::new(T::zero(), -T::one())
            } else {
                cis(two_pi * T::of_usize(j) / n_t)
            }
        })
        .collect()
}

/// Finite sample of a compact set with the duplicate tolerance it was built
/// with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSample<T> {
    points: Vec<Complex<T>>,
    labels: Option<Vec<i64>>,
    tolerance: f64,
}

impl<T: Real> CompactSample<T> {
    pub fn new(points: Vec<Complex<T>>) -> Result<Self> {
        Self::with_tolerance(points, None, SAMPLE_TOLERANCE)
    }

    pub fn with_labels(points: Vec<Complex<T>>, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::InvalidInput("one label per sample point is required".into()));
        }
        Self::with_tolerance(points, Some(labels), SAMPLE_TOLERANCE)
    }

    pub fn with_tolerance(points: Vec<Complex<T>>, labels: Option<Vec<i64>>, tolerance: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("compact sample must be nonempty".into()));
        }
        if let Some(bad) = points.iter().position(|p| !is_finite_c(*p)) {
            return Err(Error::InvalidInput(format!("sample point {bad} is not finite")));
        }
        if let Some((i, j)) = find_duplicate(&points, tolerance) {
            return Err(Error::InvalidInput(format!("sample points {i} and {j} coincide within {tolerance:e}")));
        }
        Ok(CompactSample { points, labels, tolerance })
    }

    /// Builds from `f64` points, converting to `T`.
    pub fn from_f64(points: &[Complex<f64>]) -> Result<Self> {
        Self::new(points.iter().map(|p| crate::scalar::lift(*p)).collect())
    }

    /// Real points `re[i] + 0i`.
    pub fn from_reals(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| Complex::new(T::of(x), T::zero())).collect())
    }

    /// `n` equally spaced points of the segment `[a, b]`, endpoints included.
    pub fn segment(a: Complex<f64>, b: Complex<f64>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("segment sample needs at least two points".into()));
        }
        let pts: Vec<Complex<f64>> = (0..n).map(|i| a + (b - a) * (i as f64 / (n - 1) as f64)).collect();
        Self::from_f64(&pts)
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean distance from `z` to the nearest sample point.
    pub fn distance(&self, z: Complex<T>) -> T {
        self.points.iter().map(|p| cabs(z - *p)).reduce(|a, b| a.min(b)).expect("nonempty sample")
    }

    /// Largest modulus `|p - center|` over the sample.
    pub fn radius_about(&self, center: Complex<T>) -> T {
        self.points.iter().map(|p| cabs(*p - center)).reduce(|a, b| a.max(b)).expect("nonempty sample")
    }

    /// Adds points, keeping the tolerance; fails on new duplicates.
    pub fn extended(&self, extra: &[Complex<T>]) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(extra);
        Self::with_tolerance(pts, None, self.tolerance)
    }
}

fn find_duplicate<T: Real>(points: &[Complex<T>], tol: f64) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].re.partial_cmp(&points[b].re).expect("finite"));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if (points[j].re - points[i].re).f64() > tol {
                break;
            }
            if cabs(points[j] - points[i]).f64() <= tol {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}
