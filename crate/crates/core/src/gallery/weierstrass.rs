//! Minimal surfaces in `R^3` in isothermal coordinates and the cylinders
//! `(X(z), t)` over them in `R^4`.

use crate::complex::Cx;
use crate::error::{GeomError, Result};
use crate::geom::Jet2Point;
use crate::geom::{AmbientSpace, Vec5};
use crate::hypersurface::{HyperJet, Hypersurface3};
use crate::scalar::{Dual, Jet, Real, Scalar};
use crate::surface::{dual_parts, SurfaceFn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::marker::PhantomData;

/// A minimal surface `X: B -> R^3`, either a named chart or
/// `X = Re ∫_0^z (f(1 - g²)/2, i f(1 + g²)/2, f g) dz` for polynomial `f`, `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeierstrassData {
    /// `(cosh x cos y, cosh x sin y, x)`.
    Catenoid,
    /// `(sinh x cos y, sinh x sin y, y)`.
    Helicoid,
    /// `(x - x³/3 + x y², -y + y³/3 - x² y, x² - y²)`.
    Enneper,
    /// `(x, y, 0)`.
    Plane,
    /// Coefficients `[re, im]` in increasing degree.
    Polynomial { f: Vec<[f64; 2]>, g: Vec<[f64; 2]> },
}

impl WeierstrassData {
    pub fn name(&self) -> &'static str {
        match self {
            WeierstrassData::Catenoid => "catenoid",
            WeierstrassData::Helicoid => "helicoid",
            WeierstrassData::Enneper => "enneper",
            WeierstrassData::Plane => "plane",
            WeierstrassData::Polynomial { .. } => "polynomial",
        }
    }

    /// A chart box on which the parametrization is an immersion.
    pub fn default_box(&self) -> [[f64; 2]; 2] {
        let pi = std::f64::consts::PI;
        match self {
            WeierstrassData::Catenoid | WeierstrassData::Helicoid => [[-1.5, 1.5], [-pi, pi]],
            _ => [[-1.0, 1.0], [-1.0, 1.0]],
        }
    }
}

type Coeffs = Vec<Complex64>;

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Complex64], b: &[Complex64], sb: Complex64) -> Coeffs {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sb * y;
    }
    out
}

fn integrate(a: &[Complex64]) -> Vec<[f64; 2]> {
    let mut out = vec![[0.0, 0.0]];
    for (k, c) in a.iter().enumerate() {
        let v = c / (k as f64 + 1.0);
        out.push([v.re, v.im]);
    }
    out
}

fn horner<S: Scalar>(c: &[[f64; 2]], z: Cx<S>) -> Cx<S> {
    c.iter()
        .rev()
        .fold(Cx::zero(), |acc, a| acc * z + Cx::lift(a[0], a[1]))
}

/// The surface `X` of a [`WeierstrassData`], as a surface of `R^4` with
/// `x4 = 0`.
#[derive(Clone, Debug)]
pub struct MinimalSurfaceR3 {
    data: WeierstrassData,
    /// Primitives of the three Weierstrass components.
    primitives: Option<[Vec<[f64; 2]>; 3]>,
}

impl MinimalSurfaceR3 {
    pub fn new(data: WeierstrassData) -> Result<Self> {
        let primitives = match &data {
            WeierstrassData::Polynomial { f, g } => {
                let cf: Coeffs = f.iter().map(|c| Complex64::new(c[0], c[1])).collect();
                let cg: Coeffs = g.iter().map(|c| Complex64::new(c[0], c[1])).collect();
                if cf.iter().all(|c| c.norm() == 0.0) {
                    return Err(GeomError::Degenerate("f is identically zero".into()));
                }
                let g2 = poly_mul(&cg, &cg);
                let one = [Complex64::new(1.0, 0.0)];
                let half = Complex64::new(0.5, 0.0);
                let p1: Coeffs = poly_mul(&cf, &poly_add(&one, &g2, -Complex64::new(1.0, 0.0)))
                    .iter()
                    .map(|c| c * half)
                    .collect();
                let p2: Coeffs = poly_mul(&cf, &poly_add(&one, &g2, Complex64::new(1.0, 0.0)))
                    .iter()
                    .map(|c| c * Complex64::new(0.0, 0.5))
                    .collect();
                let p3 = poly_mul(&cf, &cg);
                Some([integrate(&p1), integrate(&p2), integrate(&p3)])
            }
            _ => None,
        };
        Ok(MinimalSurfaceR3 { data, primitives })
    }

    pub fn data(&self) -> &WeierstrassData {
        &self.data
    }

    /// `X(x, y)` in `R^3`.
    pub fn point<S: Scalar>(&self, x: S, y: S) -> [S; 3] {
        let three = S::cst(3.0);
        match &self.data {
            WeierstrassData::Catenoid => [x.cosh() * y.cos(), x.cosh() * y.sin(), x],
            WeierstrassData::Helicoid => [x.sinh() * y.cos(), x.sinh() * y.sin(), y],
            WeierstrassData::Enneper => [
                x - x * x * x / three + x * y * y,
                -y + y * y * y / three - x * x * y,
                x * x - y * y,
            ],
            WeierstrassData::Plane => [x, y, S::zero()],
            WeierstrassData::Polynomial { .. } => {
                let z = Cx::new(x, y);
                let p = self
                    .primitives
                    .as_ref()
                    .expect("primitives are built with the data");
                [
                    horner(&p[0], z).re,
                    horner(&p[1], z).re,
                    horner(&p[2], z).re,
                ]
            }
        }
    }
}

impl<T: Real> SurfaceFn<T> for MinimalSurfaceR3 {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::euclidean4()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let [a, b, c] = self.point(x, y);
        Ok(Vec5::from4([a, b, c, S::zero()]))
    }
    fn seed_field<S: Scalar<Base = T>>(&self, x: S, y: S) -> Option<Result<Vec<Vec5<S>>>> {
        let v = match self.eval(Dual::var(x, 0), Dual::var(y, 1)) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let (gx, gy) = (v.map_to(|c| c.d[0]), v.map_to(|c| c.d[1]));
        let mut e4 = Vec5::zero();
        e4[3] = S::one();
        Some(Ok(vec![normal_r3(&gx, &gy), e4]))
    }
}

/// `(a × b)/|a × b|` on the first three components.
pub fn normal_r3<S: Scalar>(a: &Vec5<S>, b: &Vec5<S>) -> Vec5<S> {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    Vec5::from4([c[0] / n, c[1] / n, c[2] / n, S::zero()])
}

/// `f(z, t) = (X(z), t)` with `ξ = (n(z), 0)`.
#[derive(Clone, Debug)]
pub struct Cylinder<T> {
    name: String,
    surface: MinimalSurfaceR3,
    domain: [[T; 2]; 3],
    _t: PhantomData<fn() -> T>,
}

impl<T: Real> Cylinder<T> {
    pub fn new(name: impl Into<String>, data: WeierstrassData) -> Result<Self> {
        let b = data.default_box();
        let domain = [
            [T::cst(b[0][0]), T::cst(b[0][1])],
            [T::cst(b[1][0]), T::cst(b[1][1])],
            [-T::one(), T::one()],
        ];
        Ok(Cylinder {
            name: name.into(),
            surface: MinimalSurfaceR3::new(data)?,
            domain,
            _t: PhantomData,
        })
    }

    pub fn with_domain(mut self, domain: [[T; 2]; 3]) -> Result<Self> {
        if domain.iter().any(|d| !(d[0] < d[1])) {
            return Err(GeomError::Construction("empty parameter box".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn surface(&self) -> &MinimalSurfaceR3 {
        &self.surface
    }

    /// Jet of `X` at `z`.
    pub fn surface_jet(&self, z: [T; 2]) -> Result<Jet2Point<T>> {
        let v = SurfaceFn::<T>::eval(&self.surface, Jet::var(z[0], 0), Jet::var(z[1], 1))?;
        Ok(Jet2Point::from_jets(&v))
    }
}

impl<T: Real> Hypersurface3<T> for Cylinder<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::euclidean4()
    }
    fn domain(&self) -> [[T; 2]; 3] {
        self.domain
    }
    fn jet(&self, p: [T; 3]) -> Result<HyperJet<T>> {
        let jet = self.surface_jet([p[0], p[1]])?;
        let [_, xx, xy] = dual_parts(&jet);
        let n = normal_r3(&xx, &xy);
        if !n[0].v.is_finite() || !n[2].v.is_finite() {
            return Err(GeomError::Regularity("X is not an immersion here".into()));
        }
        let mut position = jet.value;
        position[3] = p[2];
        let mut e4 = Vec5::zero();
        e4[3] = T::one();
        Ok(HyperJet {
            position,
            df: [jet.d1[0], jet.d1[1], e4],
            xi: n.map_to(|c| c.v),
            dxi: [n.map_to(|c| c.d[0]), n.map_to(|c| c.d[1]), Vec5::zero()],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::sample;
    use crate::surface::BranchedSurface;
    use crate::Tolerances;

    fn all() -> Vec<WeierstrassData> {
        vec![
            WeierstrassData::Catenoid,
            WeierstrassData::Helicoid,
            WeierstrassData::Enneper,
            WeierstrassData::Plane,
            WeierstrassData::Polynomial {
                f: vec![[1.0, 0.0]],
                g: vec![[0.0, 0.0], [0.5, 0.25], [0.0, 0.3]],
            },
        ]
    }

    #[test]
    fn presets_are_conformal_and_minimal() {
        for d in all() {
            let s =
                BranchedSurface::<f64>::exact(d.name(), MinimalSurfaceR3::new(d.clone()).unwrap())
                    .unwrap()
                    .with_radius(100.0)
                    .unwrap();
            for z in [[0.3, 0.2], [-0.5, 0.7], [0.8, -0.1]] {
                let (e, res) = s.conformal_factor(z).unwrap();
                assert!(
                    e > 0.0 && res < 1e-12 * e.max(1.0),
                    "{} {e} {res}",
                    d.name()
                );
                assert!(s.minimality_residual(z).unwrap() < 1e-12, "{}", d.name());
            }
        }
    }

    #[test]
    fn weierstrass_enneper_matches_chart() {
        let w = MinimalSurfaceR3::new(WeierstrassData::Polynomial {
            f: vec![[2.0, 0.0]],
            g: vec![[0.0, 0.0], [1.0, 0.0]],
        })
        .unwrap();
        let e = MinimalSurfaceR3::new(WeierstrassData::Enneper).unwrap();
        let (a, b) = (w.point(0.4f64, -0.3), e.point(0.4f64, -0.3));
        assert!(
            (a[0] - b[0]).abs() < 1e-15
                && (a[1] - b[1]).abs() < 1e-15
                && (a[2] - b[2]).abs() < 1e-15
        );
    }

    #[test]
    fn zero_f_rejected() {
        let d = WeierstrassData::Polynomial {
            f: vec![[0.0, 0.0]],
            g: vec![[1.0, 0.0]],
        };
        assert!(matches!(
            MinimalSurfaceR3::new(d),
            Err(GeomError::Degenerate(_))
        ));
    }

    #[test]
    fn cylinder_over_catenoid_curvatures() {
        let c = Cylinder::<f64>::new("cyl", WeierstrassData::Catenoid).unwrap();
        for p in [[0.2, 0.4, 0.0], [-0.9, 2.0, 0.7]] {
            let s = sample(&c, p, &Tolerances::default()).unwrap();
            let k = 1.0 / p[0].cosh().powi(2);
            assert!((s.curvatures[0] - k).abs() < 1e-12 && s.curvatures[1].abs() < 1e-12);
            assert!((s.curvatures[2] + k).abs() < 1e-12 && s.mean.abs() < 1e-12);
            assert!(s.directions[1][2].abs() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn plane_cylinder_is_totally_geodesic() {
        let c = Cylinder::<f64>::new("p", WeierstrassData::Plane).unwrap();
        let s = sample(&c, [0.1, -0.3, 0.5], &Tolerances::default()).unwrap();
        assert_eq!(s.curvatures, [0.0; 3]);
    }

    #[test]
    fn data_round_trips_through_json() {
        for d in all() {
            let s = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<WeierstrassData>(&s).unwrap(), d);
        }
    }
}
