use pphull::fekete::leja_points;
use pphull::geometry::CompactSample;
use pphull::ratapprox::{build_approximant, convergence_scan, ApproxOptions};
use pphull::Complex64 as C;

fn two_pole(z: C) -> C {
    1.0 / (z - 0.3) + 2.0 / (z - 0.5)
}

fn two_pole_setup() -> (pphull::fekete::FeketeSystem<f64>, ApproxOptions, CompactSample<f64>) {
    let k = CompactSample::<f64>::segment(C::new(0.2, 0.0), C::new(0.6, 0.0), 41).unwrap();
    let sys = leja_points(&k, 2).unwrap();
    let opts = ApproxOptions { cluster_link: 0.02, ..Default::default() };
    let l: Vec<C> = (0..200).map(|j| C::new(0.4, 0.0) + C::from_polar(1.5, j as f64 * std::f64::consts::TAU / 200.0)).collect();
    (sys, opts, CompactSample::from_f64(&l).unwrap())
}

#[test]
fn two_pole_reaches_tolerance_by_degree_twelve() {
    let (sys, opts, target) = two_pole_setup();
    let schedule: Vec<(usize, usize)> = (1..=6).map(|n| (2, n)).collect();
    let report = convergence_scan(&two_pole, &sys, &schedule, &target, &opts).unwrap();
    let last = report.entries.last().unwrap();
    assert_eq!(last.degree, 12);
    assert!(last.sup_error < 1e-8, "{:?}", report.entries);
    for w in report.entries[1..].windows(2) {
        assert!(w[1].normalized_error <= w[0].normalized_error, "{:?}", report.entries);
    }
}

#[test]
fn coefficients_do_not_depend_on_contour() {
    let (sys, opts, _) = two_pole_setup();
    let a = build_approximant(&two_pole, &sys, 2, 6, &opts).unwrap();
    let b = build_approximant(&two_pole, &sys, 2, 6, &ApproxOptions { radius_multiplier: 2.0, ..opts }).unwrap();
    assert!((b.contour[0].radius - 2.0 * a.contour[0].radius).abs() < 1e-12);
    for (pa, pb) in a.coeff_polys.iter().zip(&b.coeff_polys) {
        for i in 0..2 {
            assert!((pa.coeff(i) - pb.coeff(i)).norm() < 1e-9);
        }
    }
}

#[test]
fn poles_lie_in_the_sample() {
    let (sys, opts, _) = two_pole_setup();
    let a = build_approximant(&two_pole, &sys, 2, 3, &opts).unwrap();
    for p in a.poles() {
        assert!(sys.base_set.points().contains(p));
    }
}

#[test]
fn single_pole_scan_is_exact() {
    let a = C::new(0.1, 0.2);
    let k = CompactSample::from_f64(&[a]).unwrap();
    let sys = leja_points(&k, 1).unwrap();
    let target = CompactSample::from_f64(&(0..50).map(|j| a + C::from_polar(0.7, j as f64 * 0.13)).collect::<Vec<_>>()).unwrap();
    let f = move |z: C| 1.0 / (z - a);
    let r = convergence_scan(&f, &sys, &[(1, 1)], &target, &ApproxOptions::default()).unwrap();
    assert!(r.entries[0].sup_error < 1e-9);
}
