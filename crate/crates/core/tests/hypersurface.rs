use polarmap_core::gallery::registry::{build, Example};
use polarmap_core::hypersurface::{
    geodesic_locus_scan, refinement_orders, ruling_check, sample, structure_residuals,
    trace_nullity_geodesic, FdScheme, Hypersurface3, LocusLabel,
};
use polarmap_core::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn preset(name: &str) -> Example {
    build(name, &Value::Null).unwrap()
}

fn random_points(ex: &Example, n: usize, seed: u64) -> Vec<[f64; 3]> {
    let d = ex.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let p: [f64; 3] = std::array::from_fn(|a| rng.gen_range(d[a][0] * 0.9..d[a][1] * 0.9));
        let ok = ex.contains(p)
            && ex.polar().map_or(true, |m| {
                m.operator([p[0], p[1]], p[2]).unwrap().det.abs() > 1e-2
            });
        if ok {
            out.push(p);
        }
    }
    out
}

#[test]
fn cylinder_structure_functions_vanish() {
    let tol = Tolerances::default();
    let fd = FdScheme::from_tolerances(&tol);
    for name in ["cylinder-catenoid", "cylinder-enneper", "cylinder-helicoid"] {
        let ex = preset(name);
        for p in random_points(&ex, 5, 1) {
            let r = structure_residuals(&ex, p, &fd, false, &tol).unwrap();
            assert!(
                r.u.abs() < 1e-8 && r.v.abs() < 1e-8,
                "{name}: u {} v {}",
                r.u,
                r.v
            );
            assert!(r.max_pde() < 1e-8, "{name}: {:?}", r.pde);
            assert!(r.max_connection() < 1e-8, "{name}: {:?}", r.connection);
        }
    }
}

#[test]
fn curved_space_forms_satisfy_the_first_order_system() {
    let tol = Tolerances::default();
    let fd = FdScheme::from_tolerances(&tol);
    for name in [
        "spherical-clifford",
        "bryant-z5-z2",
        "hyperbolic-cylinder-helicoid",
        "hyperbolic-clifford",
    ] {
        let ex = preset(name);
        let mut done = 0;
        for p in random_points(&ex, 8, 2) {
            let Ok(r) = structure_residuals(&ex, p, &fd, true, &tol) else {
                continue;
            };
            done += 1;
            assert!(r.max_pde() < 1e-3, "{name}: {:?}", r.pde);
            assert!(r.max_connection() < 1e-3, "{name}");
            assert!(r.max_bracket() < 1e-3, "{name}");
            let [du, dv] = r.laplacian.unwrap();
            assert!(du.abs() < 5e-3 && dv.abs() < 5e-3, "{name}: {du} {dv}");
        }
        assert!(done >= 4, "{name}: only {done} points evaluated");
    }
}

#[test]
fn first_order_system_converges_under_refinement() {
    let tol = Tolerances::default();
    for name in ["spherical-clifford", "hyperbolic-cylinder-helicoid"] {
        let ex = preset(name);
        let p = random_points(&ex, 1, 3)[0];
        let (res, orders) = refinement_orders(&ex, p, &[4e-3, 2e-3, 1e-3], &tol).unwrap();
        assert!(res[2] < res[0], "{name}: {res:?}");
        assert!(orders.iter().all(|o| *o >= 1.0), "{name}: {orders:?}");
    }
}

#[test]
fn nullity_leaves_are_ruling_geodesics() {
    let tol = Tolerances::default();
    for name in [
        "cylinder-catenoid",
        "euclidean-legendre",
        "spherical-clifford",
        "bryant-z5-z2",
        "hyperbolic-clifford",
        "hyperbolic-cylinder-enneper",
    ] {
        let ex = preset(name);
        let mut traced = 0;
        for p in random_points(&ex, 4, 4) {
            if sample(&ex, p, &tol).unwrap().s <= tol.s_min {
                continue;
            }
            let c = trace_nullity_geodesic(&ex, p, 0.4, 0.02, &tol).unwrap();
            if c.arclength.len() < 3 {
                continue;
            }
            traced += 1;
            let r = ruling_check(&ex, &c, &tol).unwrap();
            assert!(
                r.xi_variation < 1e-6 * r.length,
                "{name}: {}",
                r.xi_variation
            );
            assert!(r.ruled_error < 1e-6, "{name}: {}", r.ruled_error);
            assert!(
                r.geodesic_residual < 1e-5,
                "{name}: {}",
                r.geodesic_residual
            );
        }
        assert!(traced > 0, "{name}");
    }
}

#[test]
fn euclidean_polar_over_the_equator_is_a_cylinder() {
    let ex = preset("euclidean-legendre");
    let m = ex.polar().unwrap();
    let tol = Tolerances::default();
    for p in random_points(&ex, 10, 5) {
        let z = [p[0], p[1]];
        let a = m.sample(z, p[2]).unwrap();
        let b = m.sample(z, -p[2]).unwrap();
        for k in 0..3 {
            assert!((a.curvatures[k] - b.curvatures[k]).abs() < 1e-8);
        }
        let shift = m.position(z, p[2]).unwrap() - m.position(z, -p[2]).unwrap();
        assert!(shift[0].abs() + shift[1].abs() + shift[2].abs() < 1e-12);
        assert!((shift[3].abs() - 2.0 * p[2].abs()).abs() < 1e-12);
        assert!(sample(&ex, p, &tol).unwrap().curvatures[1].abs() < 1e-8);
    }
}

#[test]
fn locus_of_enneper_cylinder_is_empty() {
    let r = geodesic_locus_scan(
        &preset("cylinder-enneper"),
        [12, 12, 4],
        &Tolerances::default(),
    );
    assert!(r.components.is_empty(), "{:?}", r.components.len());
}

#[test]
fn locus_of_bryant_polar_map_is_the_branch_fiber() {
    let r = geodesic_locus_scan(&preset("bryant-z5-z2"), [16, 16, 8], &Tolerances::default());
    assert_eq!(r.components.len(), 1);
    let c = &r.components[0];
    assert_eq!((c.dimension, c.label), (1, LocusLabel::Consistent));
    assert!(c.centroid[0].abs() < 1e-12 && c.centroid[1].abs() < 1e-12);
}

#[test]
fn plane_cylinder_is_totally_geodesic() {
    let ex = preset("cylinder-plane");
    let tol = Tolerances::default();
    for p in random_points(&ex, 20, 6) {
        assert!(sample(&ex, p, &tol).unwrap().s < 1e-20);
    }
}

#[test]
fn hyperbolic_cylinders_stay_on_the_upper_sheet() {
    for name in [
        "hyperbolic-cylinder-catenoid",
        "hyperbolic-cylinder-enneper",
        "hyperbolic-cylinder-helicoid",
    ] {
        let ex = build(name, &json!({"t_range": [-2.0, 2.0]})).unwrap();
        let space = ex.ambient();
        for p in random_points(&ex, 200, 7) {
            let x = ex.position(p).unwrap();
            assert!(
                (space.inner(&x, &x) + 1.0).abs() < 1e-10 && x[0] > 0.0,
                "{name}"
            );
        }
    }
}

#[test]
fn leaf_csv_has_one_row_per_sample() {
    let ex = preset("spherical-clifford");
    let tol = Tolerances::default();
    let c = trace_nullity_geodesic(&ex, [0.3, -0.2, 0.4], 0.5, 0.05, &tol).unwrap();
    let csv = c.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), c.arclength.len() + 1);
    assert!(lines.iter().all(|l| l.split(',').count() == 14));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(last[0], *c.arclength.last().unwrap());
}
