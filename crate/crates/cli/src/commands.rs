//! One runner per subcommand: typed parameters in, report and traces out.

use std::fmt::Write as _;

use pphull::fekete::{capacity_estimate, leja_points};
use pphull::geometry::{CircleContour, CompactSample, Disk, DiskUnion};
use pphull::hull::{classify_points, f_at_origin, series_conditions, vn_upper_bound, Classification, ClassifyOptions};
use pphull::laurent::{laurent_split, mittag_leffler, split_at_infinity, LaurentOptions, MittagLefflerOptions};
use pphull::model::FunctionModel;
use pphull::potential::{
    harmonic_measure, sublevel_cover, wiener_test, witness_build, CoverOptions, MeasureMethod, MeasureOptions, Target, WienerOptions,
};
use pphull::pshbuild::{certify_schedule, export_field, u_eval, FieldSlice, PshOptions, RectGrid};
use pphull::ratapprox::{convergence_scan, enclosing_circle, ApproxOptions};
use pphull::scalar::{lift, lower};
use pphull::{Complex64, Double, Real as Scalar};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{Common, Cplx, DiskArg, FunctionSpec, Pair, Real, Sched};
use crate::CliError;

/// A CSV trace before the hash and version columns are appended.
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Outcome {
    /// Parameters after defaults, echoed into the report and hashed.
    pub params: Value,
    pub result: Value,
    pub tables: Vec<Table>,
    pub summary: String,
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

/// Finite values as numbers, the rest as the strings used in the CSV traces.
fn ext(x: f64) -> Value {
    if x.is_finite() { json!(x) } else { json!(num(x)) }
}

fn to_json<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn function_of(spec: &Option<FunctionSpec>, command: &str) -> Result<FunctionModel, CliError> {
    spec.as_ref().ok_or_else(|| CliError::Schema(format!("{command} needs a function (--function or [function])")))?.model()
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn circle_points(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|j| center + Complex64::from_polar(radius, std::f64::consts::TAU * (j as f64 + 0.5) / n as f64)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Poles,
    Singular,
    Segment,
    Points,
}

/// Where a compact sample comes from; shared by fekete, approx and psh.
fn build_sample(
    kind: SampleKind,
    model: Option<&FunctionModel>,
    depth: usize,
    segment: (Cplx, Cplx, usize),
    points: &[Cplx],
) -> Result<CompactSample<f64>, CliError> {
    let need = || model.ok_or_else(|| schema("a poles or singular sample needs a function"));
    Ok(match kind {
        SampleKind::Poles => need()?.pole_set(depth)?,
        SampleKind::Singular => need()?.singular_set(depth)?,
        SampleKind::Segment => CompactSample::segment(segment.0 .0, segment.1 .0, segment.2)?,
        SampleKind::Points => {
            if points.is_empty() {
                return Err(schema("sample = \"points\" needs a nonempty `points` list"));
            }
            CompactSample::from_f64(&points.iter().map(|p| p.0).collect::<Vec<_>>())?
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecomposeMode {
    /// Principal and analytic parts on one circle.
    Laurent,
    /// Part analytic at infinity on a circle enclosing the singular set.
    Infinity,
    /// One principal part per cover disk.
    MittagLeffler,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecomposeParams {
    pub function: Option<FunctionSpec>,
    pub mode: DecomposeMode,
    pub center: Cplx,
    pub radius: f64,
    pub k_max: usize,
    pub nodes: usize,
    pub check_points: usize,
    /// Radius of the check circle; defaults to the contour radius.
    pub check_radius: Option<f64>,
    pub disks: Vec<DiskArg>,
    pub depth: usize,
}

impl Default for DecomposeParams {
    fn default() -> Self {
        DecomposeParams {
            function: None,
            mode: DecomposeMode::Laurent,
            center: Cplx(Complex64::new(0.0, 0.0)),
            radius: 1.0,
            k_max: 32,
            nodes: CircleContour::<f64>::DEFAULT_NODES,
            check_points: 200,
            check_radius: None,
            disks: Vec::new(),
            depth: 16,
        }
    }
}

pub fn decompose(p: DecomposeParams, common: &Common) -> Result<Outcome, CliError> {
    let model = function_of(&p.function, "decompose")?;
    let f = model.evaluator::<f64>();
    let eval = |z: Complex64| f.at(z);
    let mut laurent = LaurentOptions { k_max: p.k_max, ..Default::default() };
    if let Some(t) = common.tolerance {
        laurent.tolerance = t;
    }
    let mut coeffs = Table::new("decompose", &["component", "k", "re", "im"]);
    let (result, max_error, check_radius) = match p.mode {
        DecomposeMode::Laurent | DecomposeMode::Infinity => {
            let circle = CircleContour::new(p.center.0, p.radius, p.nodes)?;
            let split = if p.mode == DecomposeMode::Laurent { laurent_split(&eval, &circle, &laurent)? } else { split_at_infinity(&eval, &circle, &laurent)? };
            for (k, a) in split.analytic_part.coeffs().iter().enumerate() {
                coeffs.push(vec!["0".into(), k.to_string(), num(a.re), num(a.im)]);
            }
            for (k, a) in split.principal_part.iter().enumerate() {
                coeffs.push(vec!["0".into(), format!("-{}", k + 1), num(a.re), num(a.im)]);
            }
            let rc = p.check_radius.unwrap_or(p.radius);
            let err = circle_points(p.center.0, rc, p.check_points).into_iter().map(|z| (eval(z) - split.eval(z)).norm()).fold(0.0, f64::max);
            (to_json(&split), err, rc)
        }
        DecomposeMode::MittagLeffler => {
            if p.disks.is_empty() {
                return Err(schema("mittag_leffler mode needs `disks`"));
            }
            let cover = DiskUnion::new(p.disks.iter().map(|d| d.0).collect());
            let sample = model.pole_set(p.depth)?;
            let opts = MittagLefflerOptions { laurent: LaurentOptions { k_max: p.k_max, ..laurent }, ..Default::default() };
            let split = mittag_leffler(&eval, &cover, &sample, &opts)?;
            for (j, c) in split.components.iter().enumerate() {
                for (k, a) in c.split.principal_part.iter().enumerate() {
                    coeffs.push(vec![(j + 1).to_string(), format!("-{}", k + 1), num(a.re), num(a.im)]);
                }
            }
            for (k, a) in split.analytic_taylor.coeffs().iter().enumerate() {
                coeffs.push(vec!["0".into(), k.to_string(), num(a.re), num(a.im)]);
            }
            let rc = p.check_radius.unwrap_or(0.9 * split.test_circle.radius);
            let err = circle_points(split.test_circle.center, rc, p.check_points)
                .into_iter()
                .map(|z| (eval(z) - split.principal_sum(z) - split.analytic_approx(z)).norm())
                .fold(0.0, f64::max);
            (to_json(&split), err, rc)
        }
    };
    let summary = format!("decompose: max reconstruction error {max_error:e} on {} points of radius {check_radius}", p.check_points);
    Ok(Outcome {
        params: to_json(&p),
        result: json!({ "split": result, "check": { "points": p.check_points, "radius": check_radius, "max_error": max_error } }),
        tables: vec![coeffs],
        summary,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeketeParams {
    pub function: Option<FunctionSpec>,
    pub sample: SampleKind,
    pub depth: usize,
    pub segment_start: Cplx,
    pub segment_end: Cplx,
    pub segment_points: usize,
    pub points: Vec<Cplx>,
    pub m: usize,
}

impl Default for FeketeParams {
    fn default() -> Self {
        FeketeParams {
            function: None,
            sample: SampleKind::Segment,
            depth: 16,
            segment_start: Cplx(Complex64::new(-1.0, 0.0)),
            segment_end: Cplx(Complex64::new(1.0, 0.0)),
            segment_points: 401,
            points: Vec::new(),
            m: 32,
        }
    }
}

pub fn fekete(p: FeketeParams, _common: &Common) -> Result<Outcome, CliError> {
    let model = p.function.as_ref().map(|f| f.model()).transpose()?;
    let k = build_sample(p.sample, model.as_ref(), p.depth, (p.segment_start, p.segment_end, p.segment_points), &p.points)?;
    let sys = leja_points(&k, p.m)?;
    let cap = capacity_estimate(&sys);
    let mut trace = Table::new("fekete", &["m", "d", "log_d"]);
    for d in &sys.diagnostics {
        trace.push(vec![d.m.to_string(), num(d.d), num(d.log_d)]);
    }
    let summary = format!("fekete: {} Leja points, capacity estimate {:.6} (monotone: {})", sys.points.len(), cap.value, cap.monotone);
    Ok(Outcome {
        params: to_json(&p),
        result: json!({ "sample_size": k.len(), "system": to_json(&sys), "capacity": to_json(&cap) }),
        tables: vec![trace],
        summary,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproxParams {
    pub function: Option<FunctionSpec>,
    pub sample: SampleKind,
    pub depth: usize,
    pub segment_start: Cplx,
    pub segment_end: Cplx,
    pub segment_points: usize,
    pub points: Vec<Cplx>,
    /// Leja points computed; defaults to the largest `m` in the schedule.
    pub m: Option<usize>,
    /// `m:N` items with strictly increasing `m N`; defaults to `m:1 ..= m:6`.
    pub schedule: Vec<Sched>,
    /// Error circle; defaults to a circle around the sample.
    pub target_center: Option<Cplx>,
    pub target_radius: Option<f64>,
    pub target_points: usize,
    pub cluster_link: f64,
    pub max_radius: f64,
    pub radius_multiplier: f64,
    pub n_scale: usize,
}

impl Default for ApproxParams {
    fn default() -> Self {
        let a = ApproxOptions::default();
        ApproxParams {
            function: None,
            sample: SampleKind::Poles,
            depth: 16,
            segment_start: Cplx(Complex64::new(-1.0, 0.0)),
            segment_end: Cplx(Complex64::new(1.0, 0.0)),
            segment_points: 41,
            points: Vec::new(),
            m: None,
            schedule: Vec::new(),
            target_center: None,
            target_radius: None,
            target_points: 200,
            cluster_link: a.cluster_link,
            max_radius: a.max_radius,
            radius_multiplier: a.radius_multiplier,
            n_scale: a.n_scale,
        }
    }
}

pub fn approx(mut p: ApproxParams, common: &Common) -> Result<Outcome, CliError> {
    let model = function_of(&p.function, "approx")?;
    let k = build_sample(p.sample, Some(&model), p.depth, (p.segment_start, p.segment_end, p.segment_points), &p.points)?;
    if p.schedule.is_empty() {
        let m = p.m.unwrap_or(k.len().min(8));
        p.schedule = (1..=6).map(|n| Sched(m, n)).collect();
    }
    let m_max = p.schedule.iter().map(|s| s.0).max().expect("nonempty");
    let m = p.m.unwrap_or(m_max).max(m_max);
    p.m = Some(m);
    let center = p.target_center.map_or_else(|| k.points().iter().sum::<Complex64>() / k.len() as f64, |c| c.0);
    let radius = p.target_radius.unwrap_or_else(|| (2.0 * k.radius_about(center)).max(1.0));
    p.target_center = Some(Cplx(center));
    p.target_radius = Some(radius);
    let sys = leja_points(&k, m)?;
    let opts = ApproxOptions {
        cluster_link: p.cluster_link,
        max_radius: p.max_radius,
        radius_multiplier: p.radius_multiplier,
        n_scale: p.n_scale,
        ..Default::default()
    };
    let mut laurent = LaurentOptions::default();
    if let Some(t) = common.tolerance {
        laurent.tolerance = t;
    }
    let f = model.evaluator::<f64>();
    // the part analytic at infinity is exact and is taken out first
    let outer = enclosing_circle(&sys.base_set, &opts)?;
    let split = split_at_infinity(&|z: Complex64| f.at(z), &outer, &laurent)?;
    let principal = |z: Complex64| f.at(z) - split.analytic(z);
    let target = CompactSample::from_f64(&circle_points(center, radius, p.target_points))?;
    let schedule: Vec<(usize, usize)> = p.schedule.iter().map(|s| (s.0, s.1)).collect();
    let report = convergence_scan(&principal, &sys, &schedule, &target, &opts)?;
    let mut trace = Table::new("approx", &["m", "big_n", "degree", "sup_error", "normalized_error"]);
    for e in &report.entries {
        trace.push(vec![e.m.to_string(), e.big_n.to_string(), e.degree.to_string(), num(e.sup_error), num(e.normalized_error)]);
    }
    let last = report.entries.last().expect("nonempty schedule");
    let summary = format!("approx: degree {} reaches sup error {:e} on the target circle", last.degree, last.sup_error);
    Ok(Outcome {
        params: to_json(&p),
        result: json!({
            "entries": to_json(&report.entries),
            "target_distance": report.target_distance,
            "analytic_part": to_json(&split.analytic_part),
            "analytic_center": to_json(&split.center),
            "leja_points": to_json(&sys.points),
        }),
        tables: vec![trace],
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F64,
    Double,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PshParams {
    pub function: Option<FunctionSpec>,
    pub precision: Precision,
    pub nu_max: usize,
    pub density: usize,
    pub max_big_n: usize,
    pub m: Option<usize>,
    pub sample: SampleKind,
    pub depth: usize,
    pub cluster_link: f64,
    /// `u` is reported at `(z, f(z))` and `(z, f(z) + probe_offset)`.
    pub probes: Vec<Cplx>,
    pub probe_offset: Cplx,
    /// When set, a fixed-`z` slice of the field is written as a second CSV.
    pub slice_z: Option<Cplx>,
    pub slice_extent: f64,
    pub slice_points: usize,
}

impl Default for PshParams {
    fn default() -> Self {
        let d = PshOptions::default();
        PshParams {
            function: None,
            precision: Precision::Double,
            nu_max: 4,
            density: d.density,
            max_big_n: d.max_big_n,
            m: None,
            sample: SampleKind::Poles,
            depth: 16,
            cluster_link: 0.0,
            probes: vec![Cplx(Complex64::new(0.7, 0.0))],
            probe_offset: Cplx(Complex64::new(2.0, 0.0)),
            slice_z: None,
            slice_extent: 2.0,
            slice_points: 21,
        }
    }
}

fn psh_typed<T: Scalar>(p: &PshParams, model: &FunctionModel, common: &Common) -> Result<Outcome, CliError> {
    let k0 = build_sample(p.sample, Some(model), p.depth, (Cplx(Complex64::default()), Cplx(Complex64::default()), 0), &[])?;
    let k = CompactSample::<T>::new(k0.points().iter().map(|&z| lift(z)).collect())?;
    let mut opts = PshOptions {
        density: p.density,
        max_big_n: p.max_big_n,
        m: p.m,
        approx: ApproxOptions { cluster_link: p.cluster_link, ..Default::default() },
        ..Default::default()
    };
    if let Some(t) = common.tolerance {
        opts.laurent.tolerance = t;
    }
    let field = certify_schedule(model, &k, p.nu_max, &opts)?;
    let mut trace = Table::new("psh", &["nu", "big_n", "degree", "h_bound_graph", "h_bound_box", "h_bound_offgraph", "gap"]);
    let levels: Vec<Value> = field
        .levels
        .iter()
        .map(|l| {
            trace.push(vec![
                l.nu.to_string(),
                l.big_n.to_string(),
                l.degree.to_string(),
                num(l.h_bound_graph),
                num(l.h_bound_box),
                num(l.h_bound_offgraph),
                num(l.gap),
            ]);
            json!({
                "nu": l.nu,
                "big_n": l.big_n,
                "degree": l.degree,
                "h_bound_graph": ext(l.h_bound_graph),
                "h_bound_box": l.h_bound_box,
                "h_bound_offgraph": l.h_bound_offgraph,
                "gap": l.gap,
                "poles": to_json(&l.approximant.poles().iter().map(|&z| lower(z)).collect::<Vec<_>>()),
            })
        })
        .collect();
    let f = model.evaluator::<T>();
    let offset: pphull::Complex<T> = lift(p.probe_offset.0);
    let probes: Vec<Value> = p
        .probes
        .iter()
        .map(|z| {
            let zt: pphull::Complex<T> = lift(z.0);
            let fz = f.at(zt);
            let on = u_eval(&field, zt, fz);
            let off = u_eval(&field, zt, fz + offset);
            json!({ "z": to_json(&z.0), "f_z": to_json(&lower(fz)), "u_on_graph": ext(on), "u_off_graph": ext(off), "difference": ext(off - on) })
        })
        .collect();
    let mut tables = vec![trace];
    if let Some(z) = p.slice_z {
        let fz = lower(f.at(lift(z.0)));
        let e = p.slice_extent;
        let grid = RectGrid { re: [fz.re - e, fz.re + e], im: [fz.im - e, fz.im + e], n_re: p.slice_points, n_im: p.slice_points };
        let rows = export_field(&field, &FieldSlice::FixedZ { z: z.0, w: grid });
        let mut slice = Table::new("psh_field", &["z_re", "z_im", "w_re", "w_im", "u"]);
        for r in rows {
            slice.push(vec![num(r.z.re), num(r.z.im), num(r.w.re), num(r.w.im), num(r.u)]);
        }
        tables.push(slice);
    }
    let summary = format!(
        "psh: certified nu = {:?} (graph bounds strictly decreasing: {})",
        field.levels.iter().map(|l| l.nu).collect::<Vec<_>>(),
        field.monotone
    );
    Ok(Outcome {
        params: to_json(p),
        result: json!({
            "levels": levels,
            "monotone": field.monotone,
            "floor_value": field.floor_value,
            "evans_atoms": field.evans_weights.len(),
            "probes": probes,
        }),
        tables,
        summary,
    })
}

pub fn psh(p: PshParams, common: &Common) -> Result<Outcome, CliError> {
    let model = function_of(&p.function, "psh")?;
    match p.precision {
        Precision::F64 => psh_typed::<f64>(&p, &model, common),
        Precision::Double => psh_typed::<Double>(&p, &model, common),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThinParams {
    pub function: Option<FunctionSpec>,
    pub threshold: Real,
    pub point: Cplx,
    pub depth: usize,
    pub cover_radius: f64,
    pub max_index: usize,
    pub slope: f64,
    /// Also build the explicit thinness witness from the cover disks.
    pub witness: bool,
}

impl Default for ThinParams {
    fn default() -> Self {
        ThinParams {
            function: None,
            threshold: Real(std::f64::consts::E),
            point: Cplx(Complex64::new(0.0, 0.0)),
            depth: pphull::potential::DEFAULT_DEPTH,
            cover_radius: 1.0,
            max_index: CoverOptions::default().max_index,
            slope: WienerOptions::default().slope,
            witness: false,
        }
    }
}

fn wiener_options(common: &Common, slope: f64) -> WienerOptions {
    let mut w = WienerOptions { slope, ..Default::default() };
    if let Some(t) = common.tolerance {
        w.thin_tolerance = t;
    }
    w
}

pub fn thin(p: ThinParams, common: &Common) -> Result<Outcome, CliError> {
    let model = function_of(&p.function, "thin")?;
    let cover = sublevel_cover(&model, p.threshold.0, p.point.0, p.cover_radius, &CoverOptions { max_index: p.max_index })?;
    let report = wiener_test(&cover.cover, p.point.0, p.depth, &wiener_options(common, p.slope))?;
    let witness = if p.witness {
        let centers: Vec<Complex64> = cover.cover.disks.iter().map(|d| d.center).collect();
        let log_radii: Vec<f64> = cover.cover.disks.iter().map(|d| d.log_radius).collect();
        Some(witness_build(&centers, &log_radii)?)
    } else {
        None
    };
    let mut trace = Table::new("thin", &["index", "inner", "outer", "capacity_lower", "capacity_upper", "disks", "partial_sum_lower", "partial_sum_upper"]);
    for (i, a) in report.annuli.iter().enumerate() {
        trace.push(vec![
            a.index.to_string(),
            num(a.inner),
            num(a.outer),
            num(a.capacity_lower),
            num(a.capacity_upper),
            a.disks.to_string(),
            num(report.partial_sums_lower[i]),
            num(report.partial_sums_upper[i]),
        ]);
    }
    let summary = format!("thin: {} at {} for threshold {} (depth {})", to_json(&report.verdict).as_str().unwrap_or("?"), p.point.0, p.threshold.0, p.depth);
    Ok(Outcome {
        params: to_json(&p),
        result: json!({
            "cover": {
                "family": cover.family,
                "threshold": cover.threshold,
                "certificate": cover.certificate,
                "scale": cover.scale,
                "resolved_radius": cover.resolved_radius,
                "enumerated_disks": cover.cover.disks.len(),
                "tail": to_json(&cover.cover.tail),
            },
            "report": to_json(&report),
            "witness": to_json(&witness),
        }),
        tables: vec![trace],
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Wos,
    Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HmeasureParams {
    /// `r,R`: domain `D(0, R)`, target the circle `|z| = r`.
    pub annulus: Option<Pair>,
    pub at: Cplx,
    pub walks: usize,
    pub method: Method,
    /// Absorption distance; `--tolerance` is used when unset.
    pub epsilon: Option<f64>,
    pub max_steps: usize,
    pub domain: Option<DiskArg>,
    /// Target as a circle, absorbing from both sides.
    pub target_circle: Option<DiskArg>,
    /// Target as closed disks.
    pub target_disks: Vec<DiskArg>,
    pub obstacles: Vec<DiskArg>,
    /// Adds the sublevel cover of this function at `obstacle_threshold`.
    pub function: Option<FunctionSpec>,
    pub obstacle_threshold: Option<Real>,
    pub grid_radial: usize,
    pub grid_angular: usize,
}

impl Default for HmeasureParams {
    fn default() -> Self {
        let m = MeasureOptions::default();
        HmeasureParams {
            annulus: None,
            at: Cplx(Complex64::new(0.5, 0.0)),
            walks: 100_000,
            method: Method::Wos,
            epsilon: None,
            max_steps: m.max_steps,
            domain: None,
            target_circle: None,
            target_disks: Vec::new(),
            obstacles: Vec::new(),
            function: None,
            obstacle_threshold: None,
            grid_radial: m.grid_radial,
            grid_angular: m.grid_angular,
        }
    }
}

pub fn hmeasure(p: HmeasureParams, common: &Common) -> Result<Outcome, CliError> {
    let origin = Complex64::new(0.0, 0.0);
    let (domain, target) = match (p.annulus, p.domain) {
        (Some(Pair(r, big_r)), None) => {
            if !(0.0 < r && r < big_r) {
                return Err(schema("annulus needs 0 < r < R"));
            }
            (Disk::new(origin, big_r)?, Target::Circle { center: origin, radius: r })
        }
        (None, Some(d)) => {
            let target = match (p.target_circle, p.target_disks.is_empty()) {
                (Some(c), true) => Target::Circle { center: c.0.center, radius: c.0.radius },
                (None, false) => Target::Disks { union: DiskUnion::new(p.target_disks.iter().map(|d| d.0).collect()) },
                _ => return Err(schema("give exactly one of target_circle and target_disks")),
            };
            (d.0, target)
        }
        _ => return Err(schema("give exactly one of annulus and domain")),
    };
    let mut obstacles: Vec<Disk<f64>> = p.obstacles.iter().map(|d| d.0).collect();
    let mut cover_disks = 0;
    if let Some(spec) = &p.function {
        let threshold = p.obstacle_threshold.ok_or_else(|| schema("a function obstacle needs obstacle_threshold"))?;
        let cover = sublevel_cover(&spec.model()?, threshold.0, domain.center, domain.radius, &CoverOptions::default())?;
        let union = cover.cover.to_union();
        cover_disks = union.len();
        obstacles.extend(union.disks);
    }
    let opts = MeasureOptions {
        method: match p.method {
            Method::Wos => MeasureMethod::Wos,
            Method::Grid => MeasureMethod::Grid,
        },
        epsilon: p.epsilon.or(common.tolerance),
        max_steps: p.max_steps,
        grid_radial: p.grid_radial,
        grid_angular: p.grid_angular,
        ..Default::default()
    };
    let est = harmonic_measure(p.at.0, &target, &domain, &DiskUnion::new(obstacles), p.walks, common.seed, &opts)?;
    let mut row = Table::new("hmeasure", &["z_re", "z_im", "value", "std_error", "walks", "seed", "method", "truncated_walks"]);
    row.push(vec![
        num(p.at.0.re),
        num(p.at.0.im),
        num(est.value),
        num(est.std_error),
        est.walks.to_string(),
        est.seed.to_string(),
        format!("{:?}", p.method).to_lowercase(),
        est.truncated_walks.to_string(),
    ]);
    let summary = format!("hmeasure: omega = {:.6} +- {:.6} at {}", est.value, est.std_error, p.at.0);
    Ok(Outcome {
        params: to_json(&p),
        result: json!({ "estimate": to_json(&est), "domain": to_json(&domain), "target": to_json(&target), "cover_obstacles": cover_disks }),
        tables: vec![row],
        summary,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HullParams {
    pub function: Option<FunctionSpec>,
    pub points: Vec<Cplx>,
    pub r_grid: Vec<Real>,
    pub depth: usize,
    pub cover_radius: f64,
    pub max_index: usize,
    pub slope: f64,
    /// Keep the full Wiener reports in the evidence.
    pub keep_reports: bool,
    /// Report the summability conditions of a pole series.
    pub series: bool,
    /// When set, the `v_N` bound is computed at this threshold.
    pub vn_threshold: Option<Real>,
    pub vn_disc: DiskArg,
    /// Defaults to `f(0) + 1`.
    pub vn_probe: Option<Cplx>,
    pub vn_n: Vec<usize>,
}

impl Default for HullParams {
    fn default() -> Self {
        HullParams {
            function: None,
            points: vec![Cplx(Complex64::new(0.0, 0.0))],
            r_grid: [1.0f64, 2.0, 10.0].iter().map(|k| Real(k.exp())).collect(),
            depth: pphull::potential::DEFAULT_DEPTH,
            cover_radius: 1.0,
            max_index: CoverOptions::default().max_index,
            slope: WienerOptions::default().slope,
            keep_reports: false,
            series: false,
            vn_threshold: None,
            vn_disc: DiskArg(Disk { center: Complex64::new(-0.5, 0.0), radius: 0.2 }),
            vn_probe: None,
            vn_n: vec![5, 10, 20],
        }
    }
}

fn label(c: &Classification) -> &'static str {
    match c {
        Classification::FiberEmpty => "FIBER_EMPTY",
        Classification::HullPoint { .. } => "HULL_POINT",
        Classification::Unknown { .. } => "UNKNOWN",
    }
}

pub fn hull(mut p: HullParams, common: &Common) -> Result<Outcome, CliError> {
    let model = function_of(&p.function, "hull")?;
    if p.points.is_empty() {
        return Err(schema("hull needs at least one point"));
    }
    let opts = ClassifyOptions {
        depth: p.depth,
        cover_radius: p.cover_radius,
        cover: CoverOptions { max_index: p.max_index },
        wiener: wiener_options(common, p.slope),
        keep_reports: p.keep_reports,
    };
    let points: Vec<Complex64> = p.points.iter().map(|c| c.0).collect();
    let grid: Vec<f64> = p.r_grid.iter().map(|r| r.0).collect();
    let verdict = classify_points(&model, &points, &grid, &opts)?;
    let series = if p.series { Some(series_conditions(&model)?) } else { None };
    let vn = match p.vn_threshold {
        Some(r) => {
            let probe = match p.vn_probe {
                Some(w) => w.0,
                None => f_at_origin(&model)?.value + 1.0,
            };
            p.vn_probe = Some(Cplx(probe));
            Some(vn_upper_bound(&model, r.0, &p.vn_disc.0, probe, &p.vn_n)?)
        }
        None => None,
    };
    let mut trace = Table::new("hull", &["z_re", "z_im", "threshold", "verdict", "shallow_verdict", "classification"]);
    let mut summary = String::from("point                 classification  verdicts by threshold\n");
    for fc in &verdict.per_singular_point {
        let name = label(&fc.classification);
        let mut cells = Vec::new();
        for e in &fc.evidence {
            let v = |x: Option<pphull::potential::Verdict>| x.map_or("ERROR".to_string(), |v| to_json(&v).as_str().unwrap_or("?").to_string());
            trace.push(vec![num(fc.point.re), num(fc.point.im), num(e.threshold), v(e.verdict), v(e.shallow_verdict), name.into()]);
            cells.push(format!("R={:.4}:{}", e.threshold, v(e.verdict)));
        }
        let _ = writeln!(summary, "{:<21} {:<15} {}", format!("{}", fc.point), name, cells.join(" "));
        if let Classification::HullPoint { w0: Some(w0), .. } = &fc.classification {
            let _ = writeln!(summary, "{:<21} w0 = {w0}", "");
        }
    }
    Ok(Outcome {
        params: to_json(&p),
        result: json!({ "verdict": to_json(&verdict), "series_conditions": to_json(&series), "vn": to_json(&vn) }),
        tables: vec![trace],
        summary,
    })
}
