use pphull::fekete::{capacity_estimate, leja_points};
use pphull::geometry::CompactSample;
use pphull::Complex64;

fn segment(n: usize) -> CompactSample<f64> {
    CompactSample::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), n).unwrap()
}

// cap([-1, 1]) = 1/2: the transfinite diameter of a segment is a quarter of its length
const SEGMENT_CAPACITY: f64 = 0.5;

#[test]
fn segment_diagnostic_near_capacity() {
    let s = leja_points(&segment(1000), 40).unwrap();
    let d40 = s.d(40).unwrap();
    println!("d_40 = {d40}");
    assert!((d40 - SEGMENT_CAPACITY).abs() <= 0.15 * SEGMENT_CAPACITY);
}

#[test]
fn segment_capacity_extrapolation() {
    let s = leja_points(&segment(1000), 200).unwrap();
    let est = capacity_estimate(&s);
    println!("estimate = {:?}", est);
    assert!((est.value - SEGMENT_CAPACITY).abs() <= 0.15 * SEGMENT_CAPACITY);
    assert!(!est.degenerate);
}
