//! Validator suites over a cell-centred parameter grid.

use crate::config::{RunConfig, Validator};
use crate::report::{num, nums, Obj, SCHEMA};
use polarmap_core::gallery::registry::{self, Example};
use polarmap_core::hypersurface::{
    geodesic_locus_scan, refinement_orders, ruling_check, sample, structure_residuals,
    trace_nullity_geodesic, FdScheme, Hypersurface3, LocusLabel,
};
use polarmap_core::polar::Regularity;
use polarmap_core::{GeomError, PolarMap, Tolerances};
use rayon::prelude::*;
use serde_json::Value;

/// Polar-map points with `|det| <= REGULAR_MARGIN` are treated as
/// near-singular and left out of the curvature and metric checks.
pub const REGULAR_MARGIN: f64 = 1e-3;

const STRUCTURE_POINTS: usize = 6;
const RULING_POINTS: usize = 4;
const RULING_LENGTH: f64 = 0.5;
const RULING_STEP: f64 = 0.02;
const SINGULAR_REFINE: usize = 8;
const REFINEMENT_STEPS: [f64; 3] = [4e-3, 2e-3, 1e-3];

/// One bounded quantity: passes when its largest value is below `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max: f64,
    pub median: f64,
    pub bound: f64,
    pub samples: usize,
}

impl Check {
    fn new(name: &'static str, mut values: Vec<f64>, bound: f64) -> Self {
        let samples = values.len();
        values.sort_by(f64::total_cmp);
        let max = if values.iter().any(|v| v.is_nan()) {
            f64::NAN
        } else {
            values.last().copied().unwrap_or(0.0)
        };
        let median = match samples {
            0 => 0.0,
            n if n % 2 == 1 => values[n / 2],
            n => 0.5 * (values[n / 2 - 1] + values[n / 2]),
        };
        Check {
            name,
            max,
            median,
            bound,
            samples,
        }
    }

    pub fn pass(&self) -> bool {
        self.max < self.bound
    }

    fn to_json(&self) -> Value {
        Obj::new()
            .set("name", self.name)
            .float("max", self.max)
            .float("median", self.median)
            .float("bound", self.bound)
            .set("samples", self.samples)
            .set("pass", self.pass())
            .build()
    }
}

#[derive(Clone, Debug)]
pub struct ValidatorReport {
    pub validator: Validator,
    pub identity: &'static str,
    pub evaluated: usize,
    pub skipped: usize,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl ValidatorReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn to_json(&self) -> Value {
        Obj::new()
            .set("validator", self.validator.name())
            .set("identity", self.identity)
            .set("evaluated", self.evaluated)
            .set("skipped", self.skipped)
            .set("pass", self.pass())
            .set(
                "checks",
                Value::Array(self.checks.iter().map(Check::to_json).collect()),
            )
            .set("details", self.details.clone())
            .build()
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub example: String,
    pub space: &'static str,
    pub construction: &'static str,
    pub params: Value,
    pub grid: (usize, usize),
    pub tol: Option<f64>,
    pub validators: Vec<ValidatorReport>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.validators.iter().all(ValidatorReport::pass)
    }

    pub fn get(&self, v: Validator) -> Option<&ValidatorReport> {
        self.validators.iter().find(|r| r.validator == v)
    }

    pub fn to_json(&self) -> Value {
        Obj::new()
            .set("schema", SCHEMA)
            .set("example", self.example.as_str())
            .set("space", self.space)
            .set("construction", self.construction)
            .set("params", crate::report::normalise(&self.params))
            .set("grid", vec![self.grid.0, self.grid.1])
            .set(
                "tolerance_override",
                self.tol.map(num).unwrap_or(Value::Null),
            )
            .set("pass", self.pass())
            .set(
                "validators",
                Value::Array(
                    self.validators
                        .iter()
                        .map(ValidatorReport::to_json)
                        .collect(),
                ),
            )
            .build()
    }
}

/// Cell centres of an `n × n × m` grid inside the example's domain.
pub fn grid_points(h: &dyn Hypersurface3<f64>, nz: usize, nt: usize) -> Vec<[f64; 3]> {
    let d = h.domain();
    let c =
        |a: usize, i: usize, n: usize| d[a][0] + (i as f64 + 0.5) * (d[a][1] - d[a][0]) / n as f64;
    let mut out = Vec::with_capacity(nz * nz * nt);
    for i in 0..nz {
        for j in 0..nz {
            for k in 0..nt {
                let p = [c(0, i, nz), c(1, j, nz), c(2, k, nt)];
                if h.contains(p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Whether `p` is far enough from the singular set of a polar map.
pub fn is_regular(ex: &Example, p: [f64; 3]) -> bool {
    match ex.polar() {
        Some(m) => m
            .operator([p[0], p[1]], p[2])
            .map(|o| o.det.abs() > REGULAR_MARGIN)
            .unwrap_or(false),
        None => ex.jet(p).is_ok(),
    }
}

fn quadric_residual(ex: &Example, x: &polarmap_core::Vec5) -> f64 {
    let space = ex.ambient();
    let mut r = 0.0;
    if space.has_quadric() {
        r = (space.inner(x, x) - space.quadric_constant() as f64).abs();
    }
    if space.has_sheet() {
        r = r.max(-x[0]);
    }
    r
}

struct Bounds {
    tol: Option<f64>,
}

impl Bounds {
    fn get(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn skipped_check(evaluated: usize, skipped: usize, b: &Bounds) -> Check {
    let total = evaluated + skipped;
    let frac = if total == 0 {
        0.0
    } else {
        skipped as f64 / total as f64
    };
    Check::new("skipped_fraction", vec![frac], b.get(0.5))
}

#[derive(Default)]
struct CurvaturePoint {
    mean: f64,
    k2: f64,
    balance: f64,
    gk: f64,
    normal: f64,
    quadric: f64,
    metric: Option<f64>,
    k1_closed: Option<f64>,
}

fn curvature_at(ex: &Example, p: [f64; 3], tol: &Tolerances) -> Option<CurvaturePoint> {
    if !is_regular(ex, p) {
        return None;
    }
    let s = sample(ex, p, tol).ok()?;
    let k = s.curvatures;
    let mut out = CurvaturePoint {
        mean: s.mean.abs(),
        k2: k[1].abs(),
        balance: (k[0] + k[2]).abs(),
        gk: s.gauss_kronecker.abs(),
        normal: s.normal_residual,
        quadric: quadric_residual(ex, &s.position),
        ..Default::default()
    };
    if let Some(m) = ex.polar() {
        let z = [p[0], p[1]];
        out.metric = m.metric_agreement(z, p[2]).ok();
        out.k1_closed = m.closed_form_k1(z, p[2]).ok().map(|c| (c - k[0]).abs() / c);
    }
    Some(out)
}

fn curvature(ex: &Example, pts: &[[f64; 3]], tol: &Tolerances, b: &Bounds) -> ValidatorReport {
    let res: Vec<Option<CurvaturePoint>> =
        pts.par_iter().map(|p| curvature_at(ex, *p, tol)).collect();
    let ok: Vec<&CurvaturePoint> = res.iter().flatten().collect();
    let col = |f: &dyn Fn(&CurvaturePoint) -> Option<f64>| {
        ok.iter().filter_map(|c| f(c)).collect::<Vec<_>>()
    };
    let mut checks = vec![
        Check::new("mean_curvature", col(&|c| Some(c.mean)), b.get(1e-5)),
        Check::new("middle_curvature", col(&|c| Some(c.k2)), b.get(1e-6)),
        Check::new("curvature_balance", col(&|c| Some(c.balance)), b.get(1e-5)),
        Check::new("gauss_kronecker", col(&|c| Some(c.gk)), b.get(1e-12)),
        Check::new("normal_residual", col(&|c| Some(c.normal)), b.get(1e-10)),
        Check::new("quadric_residual", col(&|c| Some(c.quadric)), b.get(1e-10)),
    ];
    if ex.polar().is_some() {
        checks.push(Check::new(
            "metric_agreement",
            col(&|c| c.metric),
            b.get(1e-6),
        ));
        checks.push(Check::new(
            "closed_form_k1",
            col(&|c| c.k1_closed),
            b.get(1e-5),
        ));
    }
    let (evaluated, skipped) = (ok.len(), res.len() - ok.len());
    checks.push(skipped_check(evaluated, skipped, b));
    ValidatorReport {
        validator: Validator::Curvature,
        identity: "principal curvatures (k, 0, -k) with H = 0 and K = 0; metric formula and quadric constraint",
        evaluated,
        skipped,
        checks,
        details: Obj::new().float("regular_margin", REGULAR_MARGIN).build(),
    }
}

/// Up to `n` grid points spread evenly through `pts`.
fn spread(pts: &[[f64; 3]], n: usize) -> Vec<[f64; 3]> {
    if pts.len() <= n {
        return pts.to_vec();
    }
    (0..n)
        .map(|i| pts[(2 * i + 1) * pts.len() / (2 * n)])
        .collect()
}

fn candidates(ex: &Example, pts: &[[f64; 3]], tol: &Tolerances, n: usize) -> Vec<[f64; 3]> {
    let good: Vec<[f64; 3]> = pts
        .par_iter()
        .filter(|p| {
            is_regular(ex, **p)
                && sample(ex, **p, tol)
                    .map(|s| s.s > tol.s_min)
                    .unwrap_or(false)
        })
        .copied()
        .collect();
    spread(&good, n)
}

fn structure(ex: &Example, pts: &[[f64; 3]], tol: &Tolerances, b: &Bounds) -> ValidatorReport {
    let fd = FdScheme::from_tolerances(tol);
    let cand = candidates(ex, pts, tol, STRUCTURE_POINTS * 3);
    let res: Vec<_> = cand
        .par_iter()
        .map(|p| structure_residuals(ex, *p, &fd, true, tol).map(|r| (*p, r)))
        .collect();
    let ok: Vec<_> = res
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .take(STRUCTURE_POINTS)
        .collect();
    let skipped = res.iter().filter(|r| r.is_err()).count();
    let mut conn = Vec::new();
    let mut pde = Vec::new();
    let mut br = Vec::new();
    let mut lap = Vec::new();
    let mut uv = Vec::new();
    for (p, r) in &ok {
        conn.push(r.max_connection());
        pde.push(r.max_pde());
        br.push(r.max_bracket());
        if let Some(l) = r.laplacian {
            lap.push(l[0].abs().max(l[1].abs()));
        }
        uv.push(
            Obj::new()
                .set("p", nums(p))
                .float("u", r.u)
                .float("v", r.v)
                .build(),
        );
    }
    let mut orders = Vec::new();
    let mut deficit = Vec::new();
    if let Some((p, r)) = ok.first() {
        if r.max_pde() > 1e-9 {
            if let Ok((_, o)) = refinement_orders(ex, *p, &REFINEMENT_STEPS, tol) {
                let min = o.iter().copied().fold(f64::INFINITY, f64::min);
                deficit.push((1.0 - min).max(0.0));
                orders = o;
            }
        }
    }
    let mut checks = vec![
        Check::new("connection_forms", conn, b.get(1e-3)),
        Check::new("first_order_system", pde, b.get(1e-3)),
        Check::new("brackets", br, b.get(1e-3)),
        Check::new("harmonicity", lap, b.get(5e-3)),
        Check::new("refinement_order_deficit", deficit, b.get(0.2)),
    ];
    checks.push(skipped_check(ok.len(), skipped, b));
    ValidatorReport {
        validator: Validator::Structure,
        identity: "first-order system for (u, v), connection forms of the principal frame, harmonicity of u and v",
        evaluated: ok.len(),
        skipped,
        checks,
        details: Obj::new()
            .set("points", Value::Array(uv))
            .set("refinement_orders", nums(&orders))
            .set("applicable", !cand.is_empty())
            .set("space_form", ex.space_form())
            .build(),
    }
}

fn ruling(ex: &Example, pts: &[[f64; 3]], tol: &Tolerances, b: &Bounds) -> ValidatorReport {
    let cand = candidates(ex, pts, tol, RULING_POINTS * 2);
    let res: Vec<_> = cand
        .par_iter()
        .map(|p| {
            let c = trace_nullity_geodesic(ex, *p, RULING_LENGTH, RULING_STEP, tol)?;
            if c.arclength.len() < 2 {
                return Err(GeomError::Domain("leaf leaves the domain at once".into()));
            }
            ruling_check(ex, &c, tol).map(|r| (*p, r))
        })
        .collect();
    let ok: Vec<_> = res
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .take(RULING_POINTS)
        .collect();
    let skipped = res.iter().filter(|r| r.is_err()).count();
    let leaves = ok
        .iter()
        .map(|(p, r)| {
            Obj::new()
                .set("start", nums(p))
                .float("length", r.length)
                .set("truncated", r.truncated)
                .build()
        })
        .collect();
    let checks = vec![
        Check::new(
            "normal_variation_per_length",
            ok.iter().map(|(_, r)| r.xi_variation / r.length).collect(),
            b.get(1e-6),
        ),
        Check::new(
            "ruled_representation",
            ok.iter().map(|(_, r)| r.ruled_error).collect(),
            b.get(1e-6),
        ),
        Check::new(
            "geodesic_equation",
            ok.iter().map(|(_, r)| r.geodesic_residual).collect(),
            b.get(1e-3),
        ),
        skipped_check(ok.len(), skipped, b),
    ];
    ValidatorReport {
        validator: Validator::Ruling,
        identity: "nullity leaves are ambient geodesics along which the unit normal is constant",
        evaluated: ok.len(),
        skipped,
        checks,
        details: Obj::new()
            .set("leaves", Value::Array(leaves))
            .float("step", RULING_STEP)
            .set("applicable", !cand.is_empty())
            .build(),
    }
}

fn locus(ex: &Example, grid: (usize, usize), tol: &Tolerances, b: &Bounds) -> ValidatorReport {
    let r = geodesic_locus_scan(ex, [grid.0, grid.0, grid.1], tol);
    let anomalous = r
        .components
        .iter()
        .filter(|c| c.label == LocusLabel::Anomalous)
        .count();
    let comps = r
        .components
        .iter()
        .map(|c| {
            Obj::new()
                .set("cells", c.cells.len())
                .set("centroid", nums(&c.centroid))
                .set("singular_values", nums(&c.singular_values))
                .set("dimension", c.dimension)
                .set(
                    "label",
                    serde_json::to_value(c.label).unwrap_or(Value::Null),
                )
                .build()
        })
        .collect();
    let checks = vec![
        Check::new("anomalous_components", vec![anomalous as f64], b.get(0.5)),
        skipped_check(r.evaluated, r.failed, b),
    ];
    ValidatorReport {
        validator: Validator::Locus,
        identity: "totally geodesic locus: curves over branch points, nothing elsewhere",
        evaluated: r.evaluated,
        skipped: r.failed,
        checks,
        details: Obj::new()
            .float("threshold", r.threshold)
            .float("s_max", r.s_max)
            .float("s_median", r.s_median)
            .set("components", Value::Array(comps))
            .build(),
    }
}

/// Minimiser of `f` on `[a, b]` by golden-section search.
fn golden(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Local minima of `|det|` along the `t`-line through `z`, refined and kept
/// when they reach the singular band.
pub fn singular_times(m: &PolarMap, z: [f64; 2], nt: usize, tol: &Tolerances) -> Vec<(f64, f64)> {
    let [t0, t1] = m.domain()[2];
    let n = nt * SINGULAR_REFINE;
    let h = (t1 - t0) / n as f64;
    let f = |t: f64| {
        m.operator(z, t)
            .map(|o| o.det.abs())
            .unwrap_or(f64::INFINITY)
    };
    let vals: Vec<f64> = (0..=n).map(|i| f(t0 + i as f64 * h)).collect();
    let mut out = Vec::new();
    for i in 0..=n {
        let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
        let right = if i == n { f64::INFINITY } else { vals[i + 1] };
        if vals[i] <= left && vals[i] < right {
            let a = (t0 + (i as f64 - 1.0) * h).max(t0);
            let b = (t0 + (i as f64 + 1.0) * h).min(t1);
            let t = golden(&f, a, b);
            let d = f(t);
            if d <= tol.singular_det {
                out.push((t, d));
            }
        }
    }
    out
}

fn regularity(
    ex: &Example,
    grid: (usize, usize),
    pts: &[[f64; 3]],
    tol: &Tolerances,
    b: &Bounds,
) -> ValidatorReport {
    let Some(m) = ex.polar() else {
        let ok = pts
            .par_iter()
            .filter(|p| sample(ex, **p, tol).is_ok())
            .count();
        let skipped = pts.len() - ok;
        return ValidatorReport {
            validator: Validator::Regularity,
            identity: "immersion on the whole parameter box",
            evaluated: ok,
            skipped,
            checks: vec![skipped_check(ok, skipped, b)],
            details: Obj::new().build(),
        };
    };
    let d = m.domain();
    let nz = grid.0;
    let zs: Vec<[f64; 2]> = (0..nz * nz)
        .map(|k| {
            let c =
                |a: usize, i: usize| d[a][0] + (i as f64 + 0.5) * (d[a][1] - d[a][0]) / nz as f64;
            [c(0, k / nz), c(1, k % nz)]
        })
        .filter(|z| m.contains([z[0], z[1], d[2][0]]))
        .collect();
    let found: Vec<Vec<(f64, f64)>> = zs
        .par_iter()
        .map(|z| singular_times(m, *z, grid.1, tol))
        .collect();
    let mut points = Vec::new();
    let mut dets = Vec::new();
    let mut times: Vec<f64> = Vec::new();
    for (z, f) in zs.iter().zip(&found) {
        for (t, det) in f {
            points.push(nums(&[z[0], z[1], *t]));
            dets.push(*det);
            times.push(*t);
        }
    }
    times.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for t in times {
        if distinct.last().is_none_or(|l| (t - l).abs() > 1e-6) {
            distinct.push(t);
        }
    }
    let ts: Vec<f64> = (0..grid.1)
        .map(|k| d[2][0] + (k as f64 + 0.5) * (d[2][1] - d[2][0]) / grid.1 as f64)
        .collect();
    let mut fibers = Vec::new();
    let mut spreads = Vec::new();
    let mut limits = Vec::new();
    let mut failed = 0;
    for bp in m.base().branch_points() {
        for &t in &ts {
            match m.regularity_test(bp.z, t) {
                Ok(r) => {
                    let (class, limit, spread) = match r {
                        Regularity::BranchLimit { limit, spread } => {
                            ("branch_limit", limit, spread)
                        }
                        Regularity::NoLimit { limit, spread } => ("no_limit", limit, spread),
                        Regularity::Regular { det } => ("regular", det, 0.0),
                        Regularity::Singular { det } => ("singular", det, 0.0),
                    };
                    spreads.push(spread);
                    limits.push(limit.max(0.0));
                    fibers.push(
                        Obj::new()
                            .set("z", nums(&bp.z))
                            .set("order", bp.order)
                            .float("t", t)
                            .set("class", class)
                            .float("limit", limit)
                            .float("spread", spread)
                            .build(),
                    );
                }
                Err(_) => failed += 1,
            }
        }
    }
    let checks = vec![
        Check::new("singular_det", dets, b.get(tol.singular_det)),
        Check::new("branch_spread", spreads, b.get(tol.branch_spread)),
        Check::new(
            "branch_limit_positive_part",
            limits,
            b.get(tol.singular_det),
        ),
        skipped_check(zs.len() + fibers.len(), failed, b),
    ];
    ValidatorReport {
        validator: Validator::Regularity,
        identity: "determinant of the polar operator: singular set, limits over branch points",
        evaluated: zs.len(),
        skipped: failed,
        checks,
        details: Obj::new()
            .set("singular_points", Value::Array(points))
            .set("singular_t", nums(&distinct))
            .set("branch_fibers", Value::Array(fibers))
            .build(),
    }
}

#[derive(Debug)]
pub struct BuildError(pub String);

impl std::fmt::Display for BuildError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BuildError {}

pub fn build(config: &RunConfig) -> Result<Example, BuildError> {
    config.check().map_err(|e| BuildError(e.0))?;
    registry::build(&config.example, &config.params)
        .map_err(|e| BuildError(format!("{}: {e}", config.example)))
}

/// Runs the selected validators.
pub fn run(config: &RunConfig) -> Result<ValidationReport, BuildError> {
    let ex = build(config)?;
    let preset = registry::find(&config.example).expect("checked by build");
    let tol = *ex
        .polar()
        .map(|m| m.tolerances())
        .unwrap_or(&Tolerances::default());
    let b = Bounds { tol: config.tol };
    let pts = grid_points(&ex, config.grid.0, config.grid.1);
    let validators = config
        .validators
        .iter()
        .map(|v| match v {
            Validator::Curvature => curvature(&ex, &pts, &tol, &b),
            Validator::Structure => structure(&ex, &pts, &tol, &b),
            Validator::Ruling => ruling(&ex, &pts, &tol, &b),
            Validator::Locus => locus(&ex, config.grid, &tol, &b),
            Validator::Regularity => regularity(&ex, config.grid, &pts, &tol, &b),
        })
        .collect();
    Ok(ValidationReport {
        example: config.example.clone(),
        space: preset.space,
        construction: preset.construction,
        params: config.params.clone(),
        grid: config.grid,
        tol: config.tol,
        validators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_statistics() {
        let c = Check::new("x", vec![3.0, 1.0, 2.0, 10.0], 5.0);
        assert_eq!(
            (c.max, c.median, c.samples, c.pass()),
            (10.0, 2.5, 4, false)
        );
        let e = Check::new("e", vec![], 1e-3);
        assert!(e.pass());
        assert!(!Check::new("e", vec![], 0.0).pass());
        assert!(!Check::new("n", vec![f64::NAN, 0.0], 1.0).pass());
    }

    #[test]
    fn golden_section_finds_minimum() {
        let t = golden(&|t: f64| t.cos().powi(2), 1.0, 2.0);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn spread_is_even() {
        let pts: Vec<[f64; 3]> = (0..10).map(|i| [i as f64, 0.0, 0.0]).collect();
        assert_eq!(spread(&pts, 2), vec![[2.0, 0.0, 0.0], [7.0, 0.0, 0.0]]);
    }
}
