//! Fiber classification over singular points, the two summability
//! conditions for pole series and the explicit `v_N` bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Disk;
use crate::model::{FunctionModel, SeqSpec};
use crate::potential::{sublevel_cover, wiener_test, CoverOptions, Verdict, WienerOptions, WienerReport, DEFAULT_DEPTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionVerdict {
    Holds,
    Fails,
    Inconclusive,
}

pub const MIN_TRUNCATION: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesConditionReport {
    pub truncation: usize,
    /// `log gamma_N`, `N = 1 ..= truncation + 1`.
    pub log_gamma: Vec<f64>,
    /// `gamma_N` itself; entries may underflow to zero.
    pub gamma: Vec<f64>,
    /// `sum_{n <= N} log|a_n| / log gamma_{N+1}`, NaN where `gamma_{N+1} >= 1`.
    #[serde(with = "crate::serde_ext::extended_f64_vec")]
    pub ratio_sequence: Vec<f64>,
    /// Minimum of the ratio sequence over the second half of the truncation.
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub tail_min: f64,
    /// Partial sums of `log|a_n| / log gamma_n`.
    pub sum_52: Vec<f64>,
    pub verdict_51: ConditionVerdict,
    pub verdict_52: ConditionVerdict,
    /// "ratio" when read off the ratio sequence, "implied" when it follows
    /// from a convergent `sum_52` by dominated convergence.
    pub verdict_51_source: String,
    /// Indices whose `gamma_n >= 1` or `|a_n| >= 1` make a logarithm nonnegative;
    /// their summands are set to zero.
    pub sign_adjusted: Vec<usize>,
    /// Decay exponent `p` of a fit `t_n ~ n^{-p}` over the second half of the summands.
    pub fitted_exponent: f64,
    pub ratio_threshold: f64,
    pub sum_tolerance: f64,
}

fn fit_exponent(terms: &[f64]) -> f64 {
    let n = terms.len();
    let pts: Vec<(f64, f64)> = (n / 2..n).filter(|&i| terms[i] > 0.0).map(|i| (((i + 1) as f64).ln(), terms[i].ln())).collect();
    if pts.len() < 4 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    -sxy / sxx
}

/// Checks `lim inf_N sum_{n<=N} log|a_n| / log gamma_{N+1} = 0` and
/// `sum_n log|a_n| / log gamma_n < inf` on the stored truncation.
pub fn series_conditions(f: &FunctionModel) -> Result<SeriesConditionReport> {
    let FunctionModel::PoleSeries { centers, .. } = f else {
        return Err(Error::UnsupportedFamily(f.name().into()));
    };
    f.validate()?;
    let len = f.series_len().expect("series");
    let log_gamma = f.log_gammas()?;
    let mut sign_adjusted = Vec::new();
    let mut ratio_sequence = Vec::with_capacity(len);
    let mut sum_52 = Vec::with_capacity(len);
    let mut terms = Vec::with_capacity(len);
    let (mut log_prod, mut sum) = (0.0, 0.0);
    for n in 1..=len {
        let la = centers.log_abs(n);
        log_prod += la;
        let lg_next = log_gamma[n];
        let ratio = if lg_next < 0.0 { log_prod / lg_next } else { f64::NAN };
        ratio_sequence.push(ratio);
        let lg = log_gamma[n - 1];
        let term = if lg < 0.0 && la <= 0.0 {
            la / lg
        } else {
            sign_adjusted.push(n);
            0.0
        };
        sum += term;
        terms.push(term);
        sum_52.push(sum);
    }
    let ratio_threshold = 1e-3;
    let sum_tolerance = 1e-6;
    let fitted_exponent = fit_exponent(&terms);
    let tail_min = ratio_sequence[len / 2..].iter().copied().filter(|r| r.is_finite()).fold(f64::INFINITY, f64::min);
    let (verdict_51, verdict_52) = if len < MIN_TRUNCATION {
        (ConditionVerdict::Inconclusive, ConditionVerdict::Inconclusive)
    } else {
        let v51 = if tail_min < ratio_threshold {
            ConditionVerdict::Holds
        } else {
            let quarter = &ratio_sequence[len - len / 4..];
            let rising = quarter.windows(2).all(|w| !(w[1] < w[0]));
            if rising { ConditionVerdict::Fails } else { ConditionVerdict::Inconclusive }
        };
        let last = *terms.last().expect("nonempty");
        let v52 = if fitted_exponent > 1.0 && last < sum_tolerance {
            ConditionVerdict::Holds
        } else if fitted_exponent <= 1.0 {
            ConditionVerdict::Fails
        } else {
            ConditionVerdict::Inconclusive
        };
        (v51, v52)
    };
    // sum_{n<=N} log|a_n| / log gamma_{N+1} = sum t_n log gamma_n / log gamma_{N+1},
    // each weight in [0, 1] and tending to 0, so a convergent sum_52 forces the ratio to 0.
    let (verdict_51, verdict_52, verdict_51_source) = match (verdict_51, verdict_52) {
        (ConditionVerdict::Inconclusive, ConditionVerdict::Holds) => (ConditionVerdict::Holds, verdict_52, "implied"),
        (ConditionVerdict::Fails, ConditionVerdict::Holds) => (ConditionVerdict::Inconclusive, ConditionVerdict::Inconclusive, "ratio"),
        (v51, v52) => (v51, v52, "ratio"),
    };
    Ok(SeriesConditionReport {
        truncation: len,
        gamma: log_gamma.iter().map(|l| l.exp()).collect(),
        log_gamma,
        ratio_sequence,
        tail_min,
        sum_52,
        verdict_51,
        verdict_52,
        verdict_51_source: verdict_51_source.into(),
        sign_adjusted,
        fitted_exponent,
        ratio_threshold,
        sum_tolerance,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginValue {
    pub value: Complex64,
    pub error_bound: f64,
}

/// `f(0) = -sum c_n / a_n` over the stored terms, with the certified tail.
pub fn f_at_origin(f: &FunctionModel) -> Result<OriginValue> {
    let FunctionModel::PoleSeries { centers, coeffs, .. } = f else {
        return Err(Error::UnsupportedFamily(f.name().into()));
    };
    f.validate()?;
    let len = f.series_len().expect("series");
    let value: Complex64 = (1..=len)
        .rev()
        .filter(|&n| coeffs.log_abs(n) > f64::NEG_INFINITY)
        .map(|n| -coeffs.value::<f64>(n) / centers.value::<f64>(n))
        .sum();
    let error_bound = f.log_tail(len + 1, 1)?.exp();
    Ok(OriginValue { value, error_bound })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VnEntry {
    pub n: usize,
    pub m_n: f64,
    pub k_n: f64,
    pub h_n: f64,
    pub v_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VnReport {
    pub threshold: f64,
    pub disc: Disk<f64>,
    pub probe: Complex64,
    pub entries: Vec<VnEntry>,
    /// "decreasing", "increasing" or "mixed".
    pub trend: String,
}

/// `v_N(0, w) = (M_N - h_N(0, w)) / (M_N - K_N)` for each `N` in `n_list`.
///
/// `K_N` bounds `h_N(z, f(z))` on the disc, using `|z - a_n| <= |z0| + r0 + |a_n|`.
pub fn vn_upper_bound(f: &FunctionModel, big_r: f64, disc: &Disk<f64>, probe: Complex64, n_list: &[usize]) -> Result<VnReport> {
    let FunctionModel::PoleSeries { centers, coeffs, .. } = f else {
        return Err(Error::UnsupportedFamily(f.name().into()));
    };
    f.validate()?;
    if !(probe.norm() < big_r) {
        return Err(Error::InvalidInput(format!("probe must satisfy |w| < {big_r}")));
    }
    let origin = f_at_origin(f)?;
    if (probe - origin.value).norm() < 1e-12 {
        return Err(Error::ProbeEqualsValue);
    }
    let len = f.series_len().expect("series");
    let clear = 2.0 * disc.radius;
    let limit = centers.limit_point().into_iter();
    let stored = (1..=len).filter(|&n| coeffs.log_abs(n) > f64::NEG_INFINITY).map(|n| centers.value::<f64>(n));
    if limit.chain(stored).any(|a| (a - disc.center).norm() <= clear) {
        return Err(Error::InvalidInput("the doubled disc meets the singular set".into()));
    }
    let log_gamma = f.log_gammas()?;
    let reach = disc.center.norm() + disc.radius;
    let mut entries = Vec::with_capacity(n_list.len());
    for &big_n in n_list {
        if big_n == 0 || big_n > len {
            return Err(Error::InvalidInput(format!("N = {big_n} outside 1..={len}")));
        }
        let nf = big_n as f64;
        let abs_a: Vec<f64> = (1..=big_n).map(|n| centers.log_abs(n).exp()).collect();
        let c_sum: f64 = (1..=big_n).map(|n| coeffs.log_abs(n).exp()).sum();
        let m_n = (big_r + c_sum / big_r).ln() / nf + abs_a.iter().map(|a| (big_r + a).ln()).sum::<f64>() / nf;
        let k_n = (log_gamma[big_n] - disc.radius.ln() + abs_a.iter().map(|a| (reach + a).ln()).sum::<f64>()) / nf;
        let f_n: Complex64 = (1..=big_n).rev().map(|n| -coeffs.value::<f64>(n) / centers.value::<f64>(n)).sum();
        let h_n = ((probe - f_n).norm().ln() + abs_a.iter().map(|a| a.ln()).sum::<f64>()) / nf;
        let v_n = (m_n - h_n) / (m_n - k_n);
        entries.push(VnEntry { n: big_n, m_n, k_n, h_n, v_n });
    }
    let trend = if entries.windows(2).all(|w| w[1].v_n < w[0].v_n) {
        "decreasing"
    } else if entries.windows(2).all(|w| w[1].v_n > w[0].v_n) {
        "increasing"
    } else {
        "mixed"
    };
    Ok(VnReport { threshold: big_r, disc: *disc, probe, entries, trend: trend.into() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    FiberEmpty,
    HullPoint {
        /// Known only for pole series at the origin.
        w0: Option<Complex64>,
        w0_error: Option<f64>,
        radius_bound: f64,
    },
    Unknown {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberEvidence {
    pub threshold: f64,
    pub certificate: Option<f64>,
    pub verdict: Option<Verdict>,
    /// Verdict of the same cover at three quarters of the depth.
    pub shallow_verdict: Option<Verdict>,
    pub report: Option<WienerReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberClassification {
    pub point: Complex64,
    pub classification: Classification,
    pub tested_grid: Vec<f64>,
    pub evidence: Vec<FiberEvidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullVerdict {
    pub per_singular_point: Vec<FiberClassification>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub depth: usize,
    /// Radius of the disk around the point the cover is restricted to.
    pub cover_radius: f64,
    pub cover: CoverOptions,
    pub wiener: WienerOptions,
    /// Keep the full Wiener reports in the evidence.
    pub keep_reports: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { depth: DEFAULT_DEPTH, cover_radius: 1.0, cover: CoverOptions::default(), wiener: WienerOptions::default(), keep_reports: true }
    }
}

fn evidence_for(f: &FunctionModel, z0: Complex64, big_r: f64, opts: &ClassifyOptions) -> FiberEvidence {
    let fail = |e: Error| FiberEvidence { threshold: big_r, certificate: None, verdict: None, shallow_verdict: None, report: None, error: Some(e.to_string()) };
    let cover = match sublevel_cover(f, big_r, z0, opts.cover_radius, &opts.cover) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let shallow_depth = (3 * opts.depth / 4).max(opts.wiener.slope_window.max(opts.wiener.thin_window));
    let full = wiener_test(&cover.cover, z0, opts.depth, &opts.wiener);
    let shallow = wiener_test(&cover.cover, z0, shallow_depth, &opts.wiener);
    match (full, shallow) {
        (Ok(r), Ok(s)) => FiberEvidence {
            threshold: big_r,
            certificate: Some(cover.certificate),
            verdict: Some(r.verdict),
            shallow_verdict: Some(s.verdict),
            report: opts.keep_reports.then_some(r),
            error: None,
        },
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

/// Classifies the fiber over `z0` from Wiener tests of `{|f| >= R}` for each `R` in the grid.
pub fn classify_fiber(f: &FunctionModel, z0: Complex64, r_grid: &[f64], opts: &ClassifyOptions) -> Result<FiberClassification> {
    if r_grid.len() < 3 || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("r_grid needs at least three increasing values".into()));
    }
    let evidence: Vec<FiberEvidence> = r_grid.iter().map(|&r| evidence_for(f, z0, r, opts)).collect();
    let unknown = |reason: &str| Classification::Unknown { reason: reason.into() };
    let conflict = evidence.iter().any(|e| {
        matches!((e.verdict, e.shallow_verdict), (Some(Verdict::Thin), Some(Verdict::NonThin)) | (Some(Verdict::NonThin), Some(Verdict::Thin)))
    });
    let first_thin = evidence.iter().position(|e| e.verdict == Some(Verdict::Thin));
    let classification = if conflict {
        unknown("Wiener verdicts disagree between depths")
    } else if evidence.iter().all(|e| e.verdict == Some(Verdict::NonThin)) {
        Classification::FiberEmpty
    } else if let Some(i) = first_thin {
        if evidence[i + 1..].iter().any(|e| e.verdict == Some(Verdict::NonThin)) {
            unknown("thin at a lower threshold than a non-thin one")
        } else {
            let radius_bound = r_grid[i];
            let origin = match f {
                FunctionModel::PoleSeries { .. } if z0.norm() == 0.0 => Some(f_at_origin(f)?),
                _ => None,
            };
            match origin {
                Some(o) if o.value.norm() > radius_bound + o.error_bound => unknown("f(0) exceeds the thin threshold"),
                _ => Classification::HullPoint { w0: origin.map(|o| o.value), w0_error: origin.map(|o| o.error_bound), radius_bound },
            }
        }
    } else {
        unknown("no threshold gave a decisive verdict")
    };
    Ok(FiberClassification { point: z0, classification, tested_grid: r_grid.to_vec(), evidence })
}

/// Classifies every point, sorted by real then imaginary part.
pub fn classify_points(f: &FunctionModel, points: &[Complex64], r_grid: &[f64], opts: &ClassifyOptions) -> Result<HullVerdict> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let per_singular_point = pts.iter().map(|&p| classify_fiber(f, p, r_grid, opts)).collect::<Result<_>>()?;
    Ok(HullVerdict { per_singular_point })
}

/// `a_n = 1/n`, `c_n = 2^{-n}`: the summability condition fails.
pub fn geometric_poles(n_max: usize) -> FunctionModel {
    FunctionModel::PoleSeries { centers: SeqSpec::Reciprocal, coeffs: SeqSpec::Geometric { ratio: 0.5 }, n_max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    type C = Complex64;

    fn gaussian_origin_oracle() -> f64 {
        -(1..=30).map(|n| (-((n * n) as f64)).exp() / n as f64).sum::<f64>()
    }

    #[test]
    fn origin_value_of_the_gaussian_series() {
        let o = f_at_origin(&FunctionModel::gaussian_poles(40)).unwrap();
        assert!((o.value.re - gaussian_origin_oracle()).abs() < 1e-15);
        assert!((o.value.re + 0.3770783).abs() < 1e-6);
        assert!(o.error_bound < 1e-300);
        let six = f_at_origin(&FunctionModel::gaussian_poles(6)).unwrap();
        assert!(six.error_bound < 1e-17);
        let single = FunctionModel::PoleSeries {
            centers: SeqSpec::Explicit { values: vec![C::new(1.0, 0.0)] },
            coeffs: SeqSpec::Explicit { values: vec![C::new(1.0, 0.0)] },
            n_max: 1,
        };
        assert_eq!(f_at_origin(&single).unwrap().value, C::new(-1.0, 0.0));
        let zero = FunctionModel::PoleSeries { centers: SeqSpec::Reciprocal, coeffs: SeqSpec::Explicit { values: vec![C::new(0.0, 0.0); 3] }, n_max: 3 };
        assert_eq!(f_at_origin(&zero).unwrap().value, C::new(0.0, 0.0));
    }

    #[test]
    fn sampled_sequences_are_uncertifiable() {
        let f = FunctionModel::PoleSeries { centers: SeqSpec::Reciprocal, coeffs: SeqSpec::Sampled { values: vec![C::new(0.1, 0.0); 30] }, n_max: 30 };
        assert_eq!(f_at_origin(&f), Err(Error::TailUncertifiable));
        assert_eq!(series_conditions(&f), Err(Error::TailUncertifiable));
    }

    #[test]
    fn gaussian_series_conditions_hold() {
        let r = series_conditions(&FunctionModel::gaussian_poles(20_000)).unwrap();
        assert_eq!(r.verdict_52, ConditionVerdict::Holds);
        assert_eq!(r.verdict_51, ConditionVerdict::Holds);
        assert_eq!(r.verdict_51_source, "ratio");
        let c = |k: usize| (-((k * k) as f64)).exp() / (k * k) as f64;
        let oracle: f64 = (2..=20_000usize).map(|n| {
            let log_gamma = if n <= 20 { (n..n + 8).map(c).sum::<f64>().ln() } else { -((n * n) as f64) - 2.0 * (n as f64).ln() };
            -(n as f64).ln() / log_gamma
        }).sum();
        assert!((r.sum_52.last().unwrap() - oracle).abs() < 1e-9 * oracle);
        assert!(r.log_gamma.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn geometric_coefficients_fail() {
        let r = series_conditions(&geometric_poles(20_000)).unwrap();
        assert_eq!(r.verdict_52, ConditionVerdict::Fails);
        assert_eq!(r.verdict_51, ConditionVerdict::Fails);
        assert_eq!(r.sign_adjusted, vec![1]);
        let s = &r.sum_52;
        assert!(s[19_999] - s[9_999] > 1.0);
    }

    #[test]
    fn short_truncation_is_inconclusive() {
        let r = series_conditions(&FunctionModel::gaussian_poles(5)).unwrap();
        assert_eq!(r.verdict_51, ConditionVerdict::Inconclusive);
        assert_eq!(r.verdict_52, ConditionVerdict::Inconclusive);
    }

    #[test]
    fn vn_sequence_for_the_gaussian_series() {
        let f = FunctionModel::gaussian_poles(40);
        let disc = Disk::new(C::new(-0.5, 0.0), 0.2).unwrap();
        let w = C::new(gaussian_origin_oracle() + 1.0, 0.0);
        let r = vn_upper_bound(&f, 1.0, &disc, w, &[5, 10, 20]).unwrap();
        assert_eq!(r.trend, "decreasing");
        for e in &r.entries {
            assert!(e.v_n > 0.0 && e.v_n <= 1.0 + 1e-9);
        }
        assert!(matches!(vn_upper_bound(&f, 1.0, &disc, C::new(gaussian_origin_oracle(), 0.0), &[5]), Err(Error::ProbeEqualsValue)));
        let bad = Disk::new(C::new(-0.2, 0.0), 0.15).unwrap();
        assert!(vn_upper_bound(&f, 1.0, &bad, w, &[5]).is_err());
    }

    #[test]
    fn exp_fiber_is_empty() {
        let c = classify_fiber(&FunctionModel::ExpReciprocal, C::new(0.0, 0.0), &[E, E * E, 10f64.exp()], &ClassifyOptions::default()).unwrap();
        assert_eq!(c.classification, Classification::FiberEmpty, "{:?}", c.evidence.iter().map(|e| (e.verdict, &e.error)).collect::<Vec<_>>());
        for e in &c.evidence {
            let rep = e.report.as_ref().unwrap();
            assert!(rep.fitted_slope > 0.0);
            assert!(*rep.partial_sums_lower.last().unwrap() > 0.5 * rep.depth as f64 * rep.slope);
        }
    }

    #[test]
    fn gaussian_fiber_is_a_hull_point() {
        let c = classify_fiber(&FunctionModel::gaussian_poles(40), C::new(0.0, 0.0), &[1.0, 2.0, 4.0], &ClassifyOptions::default()).unwrap();
        match c.classification {
            Classification::HullPoint { w0: Some(w0), radius_bound, .. } => {
                assert!((w0.re - gaussian_origin_oracle()).abs() < 1e-12);
                assert!(w0.norm() <= radius_bound);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sin_fibers_are_empty() {
        let opts = ClassifyOptions { depth: 20, keep_reports: false, ..Default::default() };
        let v = classify_points(&FunctionModel::RecipSinPi, &[C::new(0.2, 0.0), C::new(0.0, 0.0)], &[4.0, 8.0, 16.0], &opts).unwrap();
        for p in &v.per_singular_point {
            assert_eq!(p.classification, Classification::FiberEmpty, "{:?}", p.point);
        }
    }

    #[test]
    fn grid_must_have_three_values() {
        assert!(classify_fiber(&FunctionModel::ExpReciprocal, C::new(0.0, 0.0), &[2.0, 3.0], &ClassifyOptions::default()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn vn_stays_in_the_unit_interval(wr in -0.9f64..0.9, wi in -0.9f64..0.9, n in 1usize..=30) {
            let f = FunctionModel::gaussian_poles(40);
            let disc = Disk::new(C::new(-0.5, 0.0), 0.2).unwrap();
            let w = C::new(wr, wi);
            prop_assume!(w.norm() < 1.0 && (w.re - gaussian_origin_oracle()).hypot(w.im) > 1e-6);
            let r = vn_upper_bound(&f, 1.0, &disc, w, &[n]).unwrap();
            prop_assert!(r.entries[0].v_n >= 0.0 && r.entries[0].v_n <= 1.0 + 1e-9);
        }

        #[test]
        fn condition_52_implies_51(decay in 0.5f64..3.0, n_max in 20usize..3000) {
            let f = FunctionModel::PoleSeries { centers: SeqSpec::Reciprocal, coeffs: SeqSpec::Geometric { ratio: (-decay).exp() }, n_max };
            let r = series_conditions(&f).unwrap();
            if r.verdict_52 == ConditionVerdict::Holds {
                prop_assert_eq!(r.verdict_51, ConditionVerdict::Holds);
            }
            let g = series_conditions(&FunctionModel::gaussian_poles(n_max)).unwrap();
            if g.verdict_52 == ConditionVerdict::Holds {
                prop_assert_eq!(g.verdict_51, ConditionVerdict::Holds);
            }
        }
    }
}
