//! Named presets with JSON parameters.

use super::bryant::{superminimal_surface, MeromorphicPair};
use super::hyperbolic::{ChartSurface, HyperbolicCylinder, ModelChart};
use super::s3::{CliffordTorus, ConformalGaussMap, GaussMap, InS4, TotallyGeodesicSphere};
use super::weierstrass::{Cylinder, WeierstrassData};
use crate::error::{GeomError, Result};
use crate::geom::{AmbientSpace, Vec5};
use crate::hypersurface::{HyperJet, Hypersurface3};
use crate::polar::{PolarMap, SupportFunction};
use crate::poly::{Poly, Qi, RatFn, Q};
use crate::surface::BranchedSurface;
use serde::Serialize;
use serde_json::{Map, Value};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: &'static str,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Preset {
    pub name: &'static str,
    /// `euclidean`, `spherical` or `hyperbolic`.
    pub space: &'static str,
    /// `polar` or `cylinder`.
    pub construction: &'static str,
    /// The identity the preset exercises.
    pub identity: &'static str,
    pub params: &'static [ParamSpec],
}

const T_RANGE: ParamSpec = ParamSpec {
    name: "t_range",
    kind: "[f64; 2]",
    default: "construction default",
};

const PRESETS: &[Preset] = &[
    Preset {
        name: "cylinder-catenoid",
        space: "euclidean",
        construction: "cylinder",
        identity: "product over the catenoid: k2 = 0 along the t-lines, H = K = 0",
        params: &[T_RANGE],
    },
    Preset {
        name: "cylinder-helicoid",
        space: "euclidean",
        construction: "cylinder",
        identity: "product over the helicoid",
        params: &[T_RANGE],
    },
    Preset {
        name: "cylinder-enneper",
        space: "euclidean",
        construction: "cylinder",
        identity: "product over Enneper's surface, which has no planar points",
        params: &[T_RANGE],
    },
    Preset {
        name: "cylinder-plane",
        space: "euclidean",
        construction: "cylinder",
        identity: "totally geodesic hyperplane",
        params: &[T_RANGE],
    },
    Preset {
        name: "cylinder-weierstrass",
        space: "euclidean",
        construction: "cylinder",
        identity: "product over the minimal surface with polynomial Weierstrass data (f, g)",
        params: &[
            ParamSpec { name: "f", kind: "[[re, im], ...] ascending", default: "[[1, 0]]" },
            ParamSpec { name: "g", kind: "[[re, im], ...] ascending", default: "[[0, 0], [1, 0]]" },
            T_RANGE,
        ],
    },
    Preset {
        name: "euclidean-clifford",
        space: "euclidean",
        construction: "polar",
        identity: "support <g, alpha> over the Gauss map of the Clifford torus: det P = -(sigma - t)^2",
        params: &[ParamSpec { name: "alpha", kind: "[f64; 4]", default: "[1, 0, 0, 0]" }, T_RANGE],
    },
    Preset {
        name: "euclidean-legendre",
        space: "euclidean",
        construction: "polar",
        identity: "Legendre support over a great sphere: the cylinder over a catenoid",
        params: &[T_RANGE],
    },
    Preset {
        name: "spherical-clifford",
        space: "spherical",
        construction: "polar",
        identity: "unbranched Clifford datum: det A_w = -cos^2 t, k1 = 1/|cos t|, singular at t = pi/2 + n pi",
        params: &[T_RANGE],
    },
    Preset {
        name: "bryant-z5-z2",
        space: "spherical",
        construction: "polar",
        identity: "superminimal surface from (z^5, z^2), branch point of order 1 at z = 0",
        params: &[T_RANGE],
    },
    Preset {
        name: "bryant",
        space: "spherical",
        construction: "polar",
        identity: "superminimal surface from a rational pair (phi, psi)",
        params: &[
            ParamSpec { name: "phi", kind: "{num, den}: coefficients as int, \"p/q\" or [re, im]", default: "z^5" },
            ParamSpec { name: "psi", kind: "{num, den}: coefficients as int, \"p/q\" or [re, im]", default: "z^2" },
            ParamSpec { name: "radius", kind: "f64", default: "1" },
            T_RANGE,
        ],
    },
    Preset {
        name: "hyperbolic-clifford",
        space: "hyperbolic",
        construction: "polar",
        identity: "timelike normal bundle of the conformal Gauss map of the Clifford torus",
        params: &[T_RANGE],
    },
    Preset {
        name: "hyperbolic-cylinder-catenoid",
        space: "hyperbolic",
        construction: "cylinder",
        identity: "catenoid in the flat chart of a horosphere: F = cosh t h + sinh t eta",
        params: &[T_RANGE],
    },
    Preset {
        name: "hyperbolic-cylinder-enneper",
        space: "hyperbolic",
        construction: "cylinder",
        identity: "Enneper's surface in the flat chart of a horosphere",
        params: &[T_RANGE],
    },
    Preset {
        name: "hyperbolic-cylinder-helicoid",
        space: "hyperbolic",
        construction: "cylinder",
        identity: "helicoid of an equidistant hypersurface",
        params: &[
            ParamSpec { name: "distance", kind: "f64", default: "0.4" },
            ParamSpec { name: "pitch", kind: "f64", default: "0.7" },
            T_RANGE,
        ],
    },
];

pub fn presets() -> &'static [Preset] {
    PRESETS
}

/// Presets whose name or space contains `filter` (case-insensitive).
pub fn list(filter: Option<&str>) -> Vec<&'static Preset> {
    let f = filter.map(str::to_lowercase).unwrap_or_default();
    PRESETS
        .iter()
        .filter(|p| p.name.contains(&f) || p.space.contains(&f))
        .collect()
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// A built preset.
#[derive(Clone, Debug)]
pub enum Example {
    Polar(PolarMap<f64>),
    Cylinder(Cylinder<f64>),
    HyperbolicCylinder(HyperbolicCylinder<f64>),
}

impl Example {
    pub fn polar(&self) -> Option<&PolarMap<f64>> {
        match self {
            Example::Polar(p) => Some(p),
            _ => None,
        }
    }

    fn set_domain(self, domain: [[f64; 2]; 3]) -> Result<Self> {
        Ok(match self {
            Example::Polar(p) => Example::Polar(p.with_domain(domain)?),
            Example::Cylinder(c) => Example::Cylinder(c.with_domain(domain)?),
            Example::HyperbolicCylinder(c) => Example::HyperbolicCylinder(c.with_domain(domain)?),
        })
    }

    fn inner(&self) -> &dyn Hypersurface3<f64> {
        match self {
            Example::Polar(p) => p,
            Example::Cylinder(c) => c,
            Example::HyperbolicCylinder(c) => c,
        }
    }
}

impl Hypersurface3<f64> for Example {
    fn name(&self) -> &str {
        self.inner().name()
    }
    fn ambient(&self) -> AmbientSpace {
        self.inner().ambient()
    }
    fn domain(&self) -> [[f64; 2]; 3] {
        self.inner().domain()
    }
    fn jet(&self, p: [f64; 3]) -> Result<HyperJet<f64>> {
        self.inner().jet(p)
    }
    fn contains(&self, p: [f64; 3]) -> bool {
        self.inner().contains(p)
    }
}

struct Params<'a> {
    map: Map<String, Value>,
    preset: &'a Preset,
}

impl Params<'_> {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(key, "a finite number")),
        }
    }

    fn floats(&mut self, key: &str, n: usize) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.take(key) else {
            return Ok(None);
        };
        let out: Option<Vec<f64>> = v
            .as_array()
            .and_then(|a| a.iter().map(Value::as_f64).collect());
        match out {
            Some(o) if o.len() == n && o.iter().all(|x| x.is_finite()) => Ok(Some(o)),
            _ => Err(bad(key, &format!("an array of {n} finite numbers"))),
        }
    }

    fn complex_list(&mut self, key: &str, default: Vec<[f64; 2]>) -> Result<Vec<[f64; 2]>> {
        let Some(v) = self.take(key) else {
            return Ok(default);
        };
        let arr = v
            .as_array()
            .ok_or_else(|| bad(key, "an array of [re, im] pairs"))?;
        arr.iter()
            .map(|c| {
                let pair = c
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| bad(key, "[re, im] pairs"))?;
                match (pair[0].as_f64(), pair[1].as_f64()) {
                    (Some(a), Some(b)) if a.is_finite() && b.is_finite() => Ok([a, b]),
                    _ => Err(bad(key, "finite [re, im] pairs")),
                }
            })
            .collect()
    }

    fn ratfn(&mut self, key: &str, default: RatFn) -> Result<RatFn> {
        let Some(v) = self.take(key) else {
            return Ok(default);
        };
        let obj = v
            .as_object()
            .ok_or_else(|| bad(key, "an object {num, den}"))?;
        if let Some(k) = obj.keys().find(|k| *k != "num" && *k != "den") {
            return Err(bad(key, &format!("only num and den, not {k}")));
        }
        let poly = |field: &str, required: bool| -> Result<Poly> {
            match obj.get(field) {
                None if !required => Ok(Poly::one()),
                None => Err(bad(key, &format!("a {field} field"))),
                Some(p) => {
                    let arr = p.as_array().ok_or_else(|| bad(key, "coefficient arrays"))?;
                    Ok(Poly::new(
                        arr.iter()
                            .map(|c| gaussian(c).ok_or_else(|| bad(key, "exact coefficients")))
                            .collect::<Result<_>>()?,
                    ))
                }
            }
        };
        RatFn::new(poly("num", true)?, poly("den", false)?)
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(GeomError::Construction(format!(
                "unknown parameter {k} for {}",
                self.preset.name
            ))),
            None => Ok(()),
        }
    }
}

fn bad(key: &str, what: &str) -> GeomError {
    GeomError::Construction(format!("parameter {key} must be {what}"))
}

fn rational(v: &Value) -> Option<Q> {
    if let Some(i) = v.as_i64() {
        return Some(Q::from_integer(i));
    }
    let s = v.as_str()?.trim();
    let q: Q = s.parse().ok()?;
    Some(q)
}

fn gaussian(v: &Value) -> Option<Qi> {
    match v.as_array() {
        Some(p) if p.len() == 2 => Some(Qi::new(rational(&p[0])?, rational(&p[1])?)),
        Some(_) => None,
        None => Some(Qi::new(rational(v)?, Q::from_integer(0))),
    }
}

fn clifford_box(t: [f64; 2]) -> [[f64; 2]; 3] {
    [[-PI, PI], [-PI, PI], t]
}

/// Builds a preset from a JSON object of parameters (`null` for defaults).
pub fn build(name: &str, params: &Value) -> Result<Example> {
    let preset =
        find(name).ok_or_else(|| GeomError::Construction(format!("unknown example {name}")))?;
    let map = match params {
        Value::Null => Map::new(),
        Value::Object(m) => m.clone(),
        _ => {
            return Err(GeomError::Construction(
                "parameters must be a JSON object".into(),
            ))
        }
    };
    let mut p = Params { map, preset };
    let t_range = p.floats("t_range", 2)?.map(|v| [v[0], v[1]]);
    let cyl = |data: WeierstrassData| -> Result<Example> {
        Ok(Example::Cylinder(Cylinder::new(name, data)?))
    };
    let hcyl = |chart: ModelChart, s: ChartSurface| -> Result<Example> {
        Ok(Example::HyperbolicCylinder(HyperbolicCylinder::new(
            name, chart, s,
        )?))
    };
    let ex = match name {
        "cylinder-catenoid" => cyl(WeierstrassData::Catenoid)?,
        "cylinder-helicoid" => cyl(WeierstrassData::Helicoid)?,
        "cylinder-enneper" => cyl(WeierstrassData::Enneper)?,
        "cylinder-plane" => cyl(WeierstrassData::Plane)?,
        "cylinder-weierstrass" => {
            let f = p.complex_list("f", vec![[1.0, 0.0]])?;
            let g = p.complex_list("g", vec![[0.0, 0.0], [1.0, 0.0]])?;
            cyl(WeierstrassData::Polynomial { f, g })?
        }
        "euclidean-clifford" => {
            let a = p.floats("alpha", 4)?.unwrap_or(vec![1.0, 0.0, 0.0, 0.0]);
            let base = BranchedSurface::exact("clifford-gauss-map", GaussMap::new(CliffordTorus)?)?
                .with_radius(100.0)?;
            let alpha = Vec5([a[0], a[1], a[2], a[3], 0.0]);
            let m = PolarMap::build_euclidean(name, base, SupportFunction::Linear { alpha })?;
            Example::Polar(m.with_domain(clifford_box([-1.0, 1.0]))?)
        }
        "euclidean-legendre" => {
            let base =
                BranchedSurface::exact("great-sphere", TotallyGeodesicSphere)?.with_radius(0.9)?;
            let axis = Vec5([1.0, 0.0, 0.0, 0.0, 0.0]);
            Example::Polar(PolarMap::build_euclidean(
                name,
                base,
                SupportFunction::Legendre { axis },
            )?)
        }
        "spherical-clifford" => {
            let base = BranchedSurface::exact(
                "clifford-in-s4",
                InS4::new(GaussMap::new(CliffordTorus)?)?,
            )?
            .with_radius(100.0)?;
            Example::Polar(
                PolarMap::build_spherical(name, base)?
                    .with_domain(clifford_box([0.0, 2.0 * PI]))?,
            )
        }
        "bryant-z5-z2" => {
            let base = superminimal_surface("superminimal", MeromorphicPair::monomials(5, 2), 1.0)?;
            Example::Polar(PolarMap::build_spherical(name, base)?)
        }
        "bryant" => {
            let m = |n| RatFn::poly(Poly::monomial(crate::poly::qi(1, 0), n));
            let phi = p.ratfn("phi", m(5))?;
            let psi = p.ratfn("psi", m(2))?;
            let radius = p.f64_or("radius", 1.0)?;
            if !(radius > 0.0) {
                return Err(bad("radius", "positive"));
            }
            let base =
                superminimal_surface("superminimal", MeromorphicPair::new(phi, psi), radius)?;
            Example::Polar(PolarMap::build_spherical(name, base)?)
        }
        "hyperbolic-clifford" => {
            let base = BranchedSurface::exact(
                "clifford-conformal-gauss-map",
                ConformalGaussMap::new(CliffordTorus)?,
            )?
            .with_radius(100.0)?;
            Example::Polar(
                PolarMap::build_hyperbolic(name, base)?.with_domain(clifford_box([-1.0, 1.0]))?,
            )
        }
        "hyperbolic-cylinder-catenoid" => hcyl(
            ModelChart::Horosphere,
            ChartSurface::Euclidean(WeierstrassData::Catenoid),
        )?,
        "hyperbolic-cylinder-enneper" => hcyl(
            ModelChart::Horosphere,
            ChartSurface::Euclidean(WeierstrassData::Enneper),
        )?,
        "hyperbolic-cylinder-helicoid" => {
            let distance = p.f64_or("distance", 0.4)?;
            let pitch = p.f64_or("pitch", 0.7)?;
            hcyl(
                ModelChart::Equidistant { distance },
                ChartSurface::Helicoid { pitch },
            )?
        }
        _ => unreachable!("every preset has a builder"),
    };
    p.finish()?;
    match t_range {
        Some(t) => {
            let mut d = ex.domain();
            d[2] = t;
            ex.set_domain(d)
        }
        None => Ok(ex),
    }
}
