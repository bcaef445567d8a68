//! Ascii PLY export of a hypersurface sampled on the parameter grid.

use crate::validate::{grid_points, REGULAR_MARGIN};
use polarmap_core::gallery::registry::Example;
use polarmap_core::hypersurface::{sample, Hypersurface3};
use polarmap_core::Tolerances;
use rayon::prelude::*;
use std::io::{self, Write};

/// Vertices closer than this to the projection pole are dropped.
pub const POLE_MASK: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub param: [f64; 3],
    pub coords: Vec<f64>,
    pub xi: Vec<f64>,
    pub k1: f64,
    pub s: f64,
    /// Polar-operator determinant, or `k1 k3` for cylinders.
    pub det: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub name: String,
    pub dimension: usize,
    pub vertices: Vec<Vertex>,
    pub masked: usize,
}

/// Samples every grid point, masking near-singular points, failures and
/// (with `stereo`) points near the pole `-e5`.
pub fn build_mesh(ex: &Example, grid: (usize, usize), stereo: bool) -> Mesh {
    let tol = *ex
        .polar()
        .map(|m| m.tolerances())
        .unwrap_or(&Tolerances::default());
    let space = ex.ambient();
    let stereo =
        stereo && space.quadric_constant() == 1 && space.dimension() == 5 && space.signature() == 0;
    let pts = grid_points(ex, grid.0, grid.1);
    let dimension = if stereo { 4 } else { space.dimension() };
    let verts: Vec<Option<Vertex>> = pts
        .par_iter()
        .map(|&p| {
            let det = match ex.polar() {
                Some(m) => {
                    let d = m.operator([p[0], p[1]], p[2]).ok()?.det;
                    if d.abs() <= REGULAR_MARGIN {
                        return None;
                    }
                    Some(d)
                }
                None => None,
            };
            let s = sample(ex, p, &tol).ok()?;
            let x = s.position;
            let coords = if stereo {
                let w = 1.0 + x[4];
                if w < POLE_MASK {
                    return None;
                }
                (0..4).map(|i| x[i] / w).collect()
            } else {
                (0..dimension).map(|i| x[i]).collect()
            };
            Some(Vertex {
                param: p,
                coords,
                xi: (0..space.dimension()).map(|i| s.xi[i]).collect(),
                k1: s.curvatures[0],
                s: s.s,
                det: det.unwrap_or(s.curvatures[0] * s.curvatures[2]),
            })
        })
        .collect();
    let masked = verts.iter().filter(|v| v.is_none()).count();
    Mesh {
        name: ex.name().to_string(),
        dimension,
        vertices: verts.into_iter().flatten().collect(),
        masked,
    }
}

const PARAMS: [&str; 3] = ["u", "v", "t"];

pub fn write_ply(mesh: &Mesh, w: &mut impl Write) -> io::Result<()> {
    let xi_dim = mesh.vertices.first().map_or(0, |v| v.xi.len());
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment polarmap {}", mesh.name)?;
    writeln!(w, "comment masked {}", mesh.masked)?;
    writeln!(w, "element vertex {}", mesh.vertices.len())?;
    for p in PARAMS {
        writeln!(w, "property double {p}")?;
    }
    for i in 0..mesh.dimension {
        writeln!(w, "property double x{i}")?;
    }
    for i in 0..xi_dim {
        writeln!(w, "property double xi{i}")?;
    }
    for p in ["k1", "s", "det"] {
        writeln!(w, "property double {p}")?;
    }
    writeln!(w, "end_header")?;
    for v in &mesh.vertices {
        let row: Vec<String> = v
            .param
            .iter()
            .chain(&v.coords)
            .chain(&v.xi)
            .chain([&v.k1, &v.s, &v.det])
            .map(|x| format!("{x:.16e}"))
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Vertex table of an ascii PLY file.
#[derive(Clone, Debug, PartialEq)]
pub struct PlyTable {
    pub properties: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlyTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.properties.iter().position(|p| p == name)
    }
}

pub fn parse_ply(text: &str) -> Result<PlyTable, String> {
    let mut lines = text.lines();
    if lines.next() != Some("ply") || lines.next() != Some("format ascii 1.0") {
        return Err("not an ascii 1.0 PLY file".into());
    }
    let mut count = None;
    let mut properties = Vec::new();
    for line in lines.by_ref() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["end_header"] => break,
            ["comment", ..] => {}
            ["element", "vertex", n] => {
                count = Some(n.parse::<usize>().map_err(|e| e.to_string())?)
            }
            ["element", other, _] => return Err(format!("unexpected element {other}")),
            ["property", "double", name] => properties.push(name.to_string()),
            _ => return Err(format!("bad header line {line:?}")),
        }
    }
    let count = count.ok_or("missing vertex element")?;
    let rows = lines
        .take(count)
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() != count || rows.iter().any(|r| r.len() != properties.len()) {
        return Err("vertex table does not match the header".into());
    }
    Ok(PlyTable { properties, rows })
}
