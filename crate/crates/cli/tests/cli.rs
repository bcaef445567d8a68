use polarmap::mesh::parse_ply;
use std::path::Path;
use std::process::{Command, Output};

fn polarmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn list_and_filter() {
    let all = String::from_utf8(polarmap(&["list"]).stdout).unwrap();
    let names: Vec<&str> = all
        .lines()
        .filter(|l| !l.starts_with(' '))
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    for p in polarmap_core::gallery::registry::presets() {
        assert!(names.contains(&p.name), "{}", p.name);
    }
    let hyp = String::from_utf8(polarmap(&["list", "hyperbolic"]).stdout).unwrap();
    let heads: Vec<&str> = hyp.lines().filter(|l| !l.starts_with(' ')).collect();
    assert!(
        !heads.is_empty() && heads.iter().all(|l| l.contains("[hyperbolic,")),
        "{hyp}"
    );
    let none = polarmap(&["list", "no-such-preset"]);
    assert_eq!(code(&none), 0);
    assert!(none.stdout.is_empty());
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = polarmap(&[
        "validate",
        "--example",
        "cylinder-catenoid",
        "--grid",
        "8,4",
    ]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["validators"].as_array().unwrap().len(), 5);

    let strict = polarmap(&[
        "validate",
        "--example",
        "cylinder-catenoid",
        "--grid",
        "8,4",
        "--tol",
        "0",
    ]);
    assert_eq!(code(&strict), 1);

    assert_eq!(
        code(&polarmap(&["validate", "--example", "no-such-preset"])),
        2
    );
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "cylinder-catenoid",
            "--grid",
            "2,4"
        ])),
        2
    );
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "cylinder-catenoid",
            "--validators",
            "curvature,bogus"
        ])),
        2
    );
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "cylinder-catenoid",
            "--tol",
            "-1"
        ])),
        2
    );

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "bryant",
            "--params",
            path(&bad)
        ])),
        2
    );
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"pitch": 2}"#).unwrap();
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "bryant",
            "--params",
            path(&unknown)
        ])),
        2
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&polarmap(&[
            "validate",
            "--example",
            "bryant",
            "--params",
            path(&missing)
        ])),
        2
    );

    let unwritable = dir.path().join("no-dir").join("r.json");
    let io = polarmap(&[
        "validate",
        "--example",
        "cylinder-catenoid",
        "--grid",
        "8,4",
        "--out",
        path(&unwritable),
    ]);
    assert_eq!(code(&io), 3);

    let threads = Command::new(env!("CARGO_BIN_EXE_polarmap"))
        .args(["list"])
        .env("POLARMAP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 2);
}

#[test]
fn selected_validators_and_params() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    std::fs::write(
        &params,
        r#"{"phi": {"num": [0, 0, 0, 1]}, "psi": {"num": [0, 1]}, "radius": 0.8}"#,
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = polarmap(&[
        "validate",
        "--example",
        "bryant",
        "--params",
        path(&params),
        "--validators",
        "regularity,curvature",
        "--grid",
        "8,4",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let names: Vec<&str> = r["validators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["validator"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["curvature", "regularity"]);
    assert_eq!(r["params"]["radius"].as_f64(), Some(0.8));
}

#[test]
fn cylinder_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.ply");
    let o = polarmap(&[
        "mesh",
        "--example",
        "cylinder-catenoid",
        "--grid",
        "32,8",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let t = parse_ply(&text).unwrap();
    assert!(!t.rows.is_empty() && t.rows.len() <= 32 * 32 * 8);
    let col = |n: &str| t.column(n).unwrap();
    let (t_col, x3, k1, det) = (col("t"), col("x3"), col("k1"), col("det"));
    for r in &t.rows {
        assert_eq!(r[x3], r[t_col]);
        assert!(r[k1] > 0.0 && r[det] < 0.0);
        let xi: Vec<f64> = (0..4).map(|i| r[col(&format!("xi{i}"))]).collect();
        assert!((xi.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(xi[3], 0.0);
    }
}

#[test]
fn normals_are_orthogonal_to_mesh_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.ply");
    let o = polarmap(&[
        "mesh",
        "--example",
        "spherical-clifford",
        "--grid",
        "24,64",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0);
    let t = parse_ply(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let x: Vec<usize> = (0..5)
        .map(|i| t.column(&format!("x{i}")).unwrap())
        .collect();
    let xi: Vec<usize> = (0..5)
        .map(|i| t.column(&format!("xi{i}")).unwrap())
        .collect();
    let (u, v) = (t.column("u").unwrap(), t.column("v").unwrap());
    let mut pairs = 0;
    for w in t.rows.windows(2) {
        if w[0][u] != w[1][u] || w[0][v] != w[1][v] {
            continue;
        }
        let d: Vec<f64> = x.iter().map(|&c| w[1][c] - w[0][c]).collect();
        let len = d.iter().map(|a| a * a).sum::<f64>().sqrt();
        let n: Vec<f64> = xi.iter().map(|&c| 0.5 * (w[0][c] + w[1][c])).collect();
        let dot: f64 = d.iter().zip(&n).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 0.05 * len * len + 1e-12, "{dot} {len}");
        let on_sphere: f64 = x.iter().map(|&c| w[0][c] * w[0][c]).sum();
        assert!((on_sphere - 1.0).abs() < 1e-12);
        pairs += 1;
    }
    assert!(pairs > 1000, "{pairs}");
}

#[test]
fn stereographic_mesh_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ply");
    let b = dir.path().join("b.ply");
    for out in [&a, &b] {
        let o = polarmap(&[
            "mesh",
            "--example",
            "bryant-z5-z2",
            "--grid",
            "12,6",
            "--stereo",
            "--out",
            path(out),
        ]);
        assert_eq!(code(&o), 0);
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let t = parse_ply(std::str::from_utf8(&text).unwrap()).unwrap();
    assert!(t.column("x3").is_some() && t.column("x4").is_none());
    assert!(t.rows.iter().flatten().all(|v| v.is_finite()));
}
