//! End-to-end acceptance criteria, one line of output per criterion.

use polarmap::config::{RunConfig, Validator};
use polarmap::validate;
use polarmap_core::gallery::bryant::{superminimal_surface, BryantCurve, MeromorphicPair};
use polarmap_core::gallery::registry::{build, Example};
use polarmap_core::gallery::s3::{CliffordTorus, ConformalGaussMap};
use polarmap_core::hypersurface::{
    geodesic_locus_scan, refinement_orders, ruling_check, sample, structure_residuals,
    trace_nullity_geodesic, FdScheme, Hypersurface3, LocusLabel,
};
use polarmap_core::polar::Regularity;
use polarmap_core::poly::{qi, qi_ratio, Poly, RatFn};
use polarmap_core::{BranchedSurface, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn preset(name: &str) -> Example {
    build(name, &Value::Null).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Uniform points of the domain, keeping those at least `margin` away from
/// the singular set of a polar map.
fn random_regular(ex: &Example, n: usize, margin: f64, seed: u64) -> Vec<[f64; 3]> {
    let d = ex.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: [f64; 3] = std::array::from_fn(|a| rng.gen_range(d[a][0]..d[a][1]));
        if !ex.contains(p) {
            continue;
        }
        if let Some(m) = ex.polar() {
            match m.operator([p[0], p[1]], p[2]) {
                Ok(o) if o.det.abs() > margin => {}
                _ => continue,
            }
        }
        out.push(p);
    }
    out
}

fn curvature_pattern() -> Outcome {
    let tol = Tolerances::default();
    let mut lines = Vec::new();
    for name in ["euclidean-clifford", "bryant-z5-z2", "hyperbolic-clifford"] {
        let ex = preset(name);
        let start = Instant::now();
        let pts = random_regular(&ex, 1000, 1e-3, 1);
        let mut worst = [0.0f64; 4];
        for p in &pts {
            let s = sample(&ex, *p, &tol).map_err(|e| format!("{name} at {p:?}: {e}"))?;
            let [k1, k2, k3] = s.curvatures;
            for (w, v) in worst.iter_mut().zip([
                s.mean.abs(),
                k2.abs(),
                (k1 + k3).abs(),
                s.gauss_kronecker.abs(),
            ]) {
                *w = w.max(v);
            }
        }
        let secs = start.elapsed().as_secs_f64();
        ensure!(
            worst[0] < 1e-5 && worst[1] < 1e-6 && worst[2] < 1e-5 && worst[3] < 1e-12,
            "{name}: {worst:?}"
        );
        ensure!(secs < 30.0, "{name}: {secs:.1} s");
        lines.push(format!(
            "{name} max |H| {:.1e} |k2| {:.1e} |k1+k3| {:.1e} |K| {:.1e} in {secs:.2} s",
            worst[0], worst[1], worst[2], worst[3]
        ));
    }
    Ok(lines.join("; "))
}

fn clifford_closed_forms() -> Outcome {
    let ex = preset("spherical-clifford");
    let m = ex.polar().unwrap();
    let tol = Tolerances::default();
    let mut det_err = 0.0f64;
    let mut k1_err = 0.0f64;
    for p in random_regular(&ex, 500, 1e-3, 2) {
        let (z, t) = ([p[0], p[1]], p[2]);
        let expected = -t.cos().powi(2);
        det_err = det_err.max((m.operator(z, t).unwrap().det - expected).abs() / expected.abs());
        let k1 = sample(&ex, p, &tol).unwrap().curvatures[0];
        k1_err = k1_err.max((k1 - 1.0 / t.cos().abs()).abs() * t.cos().abs());
    }
    ensure!(det_err < 1e-6, "det relative error {det_err:e}");
    ensure!(k1_err < 1e-5, "k1 relative error {k1_err:e}");
    let z = [0.4, -1.1];
    for t in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        ensure!(
            matches!(
                m.regularity_test(z, t).unwrap(),
                Regularity::Singular { .. }
            ),
            "not singular at {t}"
        );
        for off in [1e-4, -1e-4, 0.3] {
            ensure!(
                matches!(
                    m.regularity_test(z, t + off).unwrap(),
                    Regularity::Regular { .. }
                ),
                "singular at {t} + {off}"
            );
        }
    }
    let mut c = RunConfig::new("spherical-clifford");
    c.validators = vec![Validator::Regularity];
    let report = validate::run(&c).map_err(|e| e.to_string())?;
    let details = &report.validators[0].details;
    let found: Vec<f64> = details["singular_t"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    ensure!(found.len() == 2, "singular times {found:?}");
    let band = (found[0] - FRAC_PI_2)
        .abs()
        .max((found[1] - 3.0 * FRAC_PI_2).abs());
    ensure!(band < 1e-6, "singular times {found:?}");
    Ok(format!(
        "det rel err {det_err:.1e}, k1 rel err {k1_err:.1e}, singular t {found:?}"
    ))
}

fn bryant_example() -> Outcome {
    let curve = BryantCurve::new(MeromorphicPair::monomials(5, 2)).unwrap();
    let [c1, c2, c3] = curve.components();
    ensure!(
        c1 == &RatFn::poly(Poly::monomial(qi_ratio((-1, 4), (0, 1)), 5)),
        "c1 = {c1:?}"
    );
    ensure!(
        c2 == &RatFn::poly(Poly::monomial(qi(1, 0), 2)),
        "c2 = {c2:?}"
    );
    ensure!(
        c3 == &RatFn::poly(Poly::monomial(qi_ratio((5, 4), (0, 1)), 3)),
        "c3 = {c3:?}"
    );
    let s = superminimal_surface("b", MeromorphicPair::monomials(5, 2), 1.0).unwrap();
    let order = s
        .branch_order_estimate([0.0, 0.0])
        .map_err(|e| e.to_string())?;
    ensure!((order - 1.0).abs() < 0.05, "branch order {order}");
    let ex = preset("bryant-z5-z2");
    let m = ex.polar().unwrap();
    let mut worst = f64::NEG_INFINITY;
    for t in [0.1, 0.9, 2.0, PI, 4.4, 6.0] {
        match m.regularity_test([0.0, 0.0], t).unwrap() {
            r @ Regularity::BranchLimit { limit, .. } if r.is_regular() && limit < 0.0 => {
                worst = worst.max(limit)
            }
            r => return Err(format!("fiber at t = {t}: {r:?}")),
        }
    }
    let locus = geodesic_locus_scan(&ex, [16, 16, 8], &Tolerances::default());
    let fiber = locus
        .components
        .iter()
        .find(|c| c.centroid[0].abs() < 0.1 && c.centroid[1].abs() < 0.1)
        .ok_or("no locus component over z = 0")?;
    ensure!(
        fiber.dimension == 1 && fiber.label == LocusLabel::Consistent,
        "fiber component {fiber:?}"
    );
    ensure!(
        locus
            .components
            .iter()
            .all(|c| c.label == LocusLabel::Consistent),
        "anomalous locus components"
    );
    Ok(format!(
        "coefficients exact, order {order:.4}, largest branch limit {worst:.3e}, fiber of {} cells, dimension 1",
        fiber.cells.len()
    ))
}

fn structure_equations() -> Outcome {
    let tol = Tolerances::default();
    let fd = FdScheme::from_tolerances(&tol);
    let cyl = preset("cylinder-catenoid");
    let mut flat = 0.0f64;
    for p in random_regular(&cyl, 20, 0.0, 3) {
        let r = structure_residuals(&cyl, p, &fd, false, &tol).map_err(|e| e.to_string())?;
        flat = flat
            .max(r.u.abs())
            .max(r.v.abs())
            .max(r.max_pde())
            .max(r.max_connection());
    }
    ensure!(flat < 1e-8, "cylinder residual {flat:e}");
    let mut parts = vec![format!("cylinder {flat:.1e}")];
    for name in ["spherical-clifford", "hyperbolic-cylinder-helicoid"] {
        let ex = preset(name);
        let (mut pde, mut lap, mut min_order, mut used) = (0.0f64, 0.0f64, f64::INFINITY, 0);
        for p in random_regular(&ex, 12, 1e-2, 4) {
            let Ok(r) = structure_residuals(&ex, p, &fd, true, &tol) else {
                continue;
            };
            used += 1;
            pde = pde.max(r.max_pde());
            let [du, dv] = r.laplacian.unwrap();
            lap = lap.max(du.abs()).max(dv.abs());
            if used <= 3 {
                let (_, o) = refinement_orders(&ex, p, &[4e-3, 2e-3, 1e-3], &tol)
                    .map_err(|e| e.to_string())?;
                min_order = o.into_iter().fold(min_order, f64::min);
            }
        }
        ensure!(used >= 6, "{name}: only {used} points evaluated");
        ensure!(
            pde < 1e-3 && lap < 5e-3 && min_order >= 1.0,
            "{name}: pde {pde:e}, laplacian {lap:e}, order {min_order}"
        );
        parts.push(format!(
            "{name} pde {pde:.1e} lap {lap:.1e} order {min_order:.2}"
        ));
    }
    Ok(parts.join("; "))
}

fn nullity_ruling() -> Outcome {
    let tol = Tolerances::default();
    let mut parts = Vec::new();
    for name in [
        "cylinder-catenoid",
        "euclidean-clifford",
        "spherical-clifford",
        "bryant-z5-z2",
        "hyperbolic-clifford",
        "hyperbolic-cylinder-helicoid",
    ] {
        let ex = preset(name);
        let (mut var, mut ruled, mut traced) = (0.0f64, 0.0f64, 0);
        for p in random_regular(&ex, 6, 1e-2, 5) {
            let Ok(c) = trace_nullity_geodesic(&ex, p, 0.5, 0.02, &tol) else {
                continue;
            };
            if c.arclength.len() < 3 {
                continue;
            }
            let r = ruling_check(&ex, &c, &tol).map_err(|e| e.to_string())?;
            traced += 1;
            var = var.max(r.xi_variation / r.length);
            ruled = ruled.max(r.ruled_error);
        }
        ensure!(traced >= 3, "{name}: {traced} leaves traced");
        ensure!(
            var < 1e-6 && ruled < 1e-6,
            "{name}: variation {var:e}, ruled {ruled:e}"
        );
        parts.push(format!(
            "{name} (c = {}) {var:.0e}/{ruled:.0e}",
            ex.space_form()
        ));
    }
    Ok(parts.join("; "))
}

fn metric_agreement() -> Outcome {
    let mut parts = Vec::new();
    for name in [
        "euclidean-clifford",
        "euclidean-legendre",
        "spherical-clifford",
        "bryant-z5-z2",
        "bryant",
        "hyperbolic-clifford",
    ] {
        let ex = preset(name);
        let m = ex.polar().unwrap();
        let mut worst = 0.0f64;
        for p in validate::grid_points(&ex, 16, 8) {
            if !validate::is_regular(&ex, p) {
                continue;
            }
            worst = worst.max(
                m.metric_agreement([p[0], p[1]], p[2])
                    .map_err(|e| e.to_string())?,
            );
        }
        ensure!(worst < 1e-6, "{name}: {worst:e}");
        parts.push(format!("{name} {worst:.1e}"));
    }
    Ok(parts.join("; "))
}

fn quadrics() -> Outcome {
    let mut parts = Vec::new();
    for name in [
        "spherical-clifford",
        "bryant-z5-z2",
        "hyperbolic-clifford",
        "hyperbolic-cylinder-catenoid",
        "hyperbolic-cylinder-helicoid",
    ] {
        let ex = preset(name);
        let space = ex.ambient();
        let c = space.quadric_constant() as f64;
        let mut worst = 0.0f64;
        for p in random_regular(&ex, 1000, 0.0, 6) {
            let x = ex.position(p).map_err(|e| e.to_string())?;
            ensure!(!space.has_sheet() || x[0] > 0.0, "{name}: x1 = {}", x[0]);
            worst = worst.max((space.inner(&x, &x) - c).abs());
        }
        ensure!(worst < 1e-10, "{name}: {worst:e}");
        parts.push(format!("{name} {worst:.1e}"));
    }
    let g = BranchedSurface::exact(
        "conformal-gauss",
        ConformalGaussMap::new(CliffordTorus).unwrap(),
    )
    .unwrap();
    let space = g.ambient();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)];
        worst = worst.max(g.jet(z).unwrap().quadric_residual(&space));
    }
    ensure!(
        space.signature() == 1 && space.quadric_constant() == 1 && worst < 1e-10,
        "de Sitter: {worst:e}"
    );
    parts.push(format!("conformal Gauss map {worst:.1e}"));
    Ok(parts.join("; "))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("polarmap-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for name in [
        "bryant-z5-z2",
        "hyperbolic-cylinder-helicoid",
        "euclidean-clifford",
    ] {
        let mut outputs = Vec::new();
        for (k, threads) in ["1", "4"].into_iter().enumerate() {
            let out = dir.join(format!("{name}-{k}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_polarmap"))
                .args(["validate", "--example", name, "--all", "--out"])
                .arg(&out)
                .env("POLARMAP_THREADS", threads)
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(status.code() == Some(0), "{name}: exit {status}");
            outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure!(outputs[0] == outputs[1], "{name}: reports differ");
        parts.push(format!("{name} {} bytes", outputs[0].len()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("curvature pattern", curvature_pattern),
        ("clifford closed forms", clifford_closed_forms),
        ("bryant example", bryant_example),
        ("structure equations", structure_equations),
        ("nullity ruling", nullity_ruling),
        ("metric agreement", metric_agreement),
        ("quadric constraints", quadrics),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
