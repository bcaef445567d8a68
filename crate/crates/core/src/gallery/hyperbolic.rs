//! Hyperbolic cylinders `F(z, t) = cosh t h(z) + sinh t η(z)` over minimal
//! surfaces `h` of an umbilical hypersurface `Q^3 ⊂ H^4` with unit normal `η`.

use super::weierstrass::{normal_r3, MinimalSurfaceR3, WeierstrassData};
use crate::error::{GeomError, Result};
use crate::geom::{cross4, AmbientSpace, Vec5};
use crate::hypersurface::{HyperJet, Hypersurface3};
use crate::scalar::{Dual, Real, Scalar};
use serde::{Deserialize, Serialize};
use std::marker::PhantomData;

/// An umbilical hypersurface of `H^4` with an isometric chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChart {
    /// `<x, e1 + e2>_1 = -1`, charted by `u ∈ R^3` as
    /// `(1 + |u|²/2, |u|²/2, u)`; normal `η = x - (e1 + e2)`.
    Horosphere,
    /// `x5 = sinh r`, charted by `y ∈ H^3 ⊂ R^4_1` as `(cosh r y, sinh r)`;
    /// normal `η = (sinh r y, cosh r)`.
    Equidistant { distance: f64 },
}

impl ModelChart {
    /// The defining covector and its level.
    pub fn level_set(&self) -> (Vec5<f64>, f64) {
        match self {
            ModelChart::Horosphere => (Vec5([1.0, 1.0, 0.0, 0.0, 0.0]), -1.0),
            ModelChart::Equidistant { distance } => {
                (Vec5([0.0, 0.0, 0.0, 0.0, 1.0]), distance.sinh())
            }
        }
    }

    /// `(x, η)` for a model point `m`: `u` in the first three slots for the
    /// horosphere, `y` in the first four for an equidistant chart.
    pub fn embed<S: Scalar>(&self, m: &Vec5<S>) -> (Vec5<S>, Vec5<S>) {
        match self {
            ModelChart::Horosphere => {
                let q = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) * S::cst(0.5);
                let x = Vec5([S::one() + q, q, m[0], m[1], m[2]]);
                let eta = Vec5([q, q - S::one(), m[0], m[1], m[2]]);
                (x, eta)
            }
            ModelChart::Equidistant { distance } => {
                let (c, s) = (S::cst(distance.cosh()), S::cst(distance.sinh()));
                let x = Vec5([m[0] * c, m[1] * c, m[2] * c, m[3] * c, s]);
                let eta = Vec5([m[0] * s, m[1] * s, m[2] * s, m[3] * s, c]);
                (x, eta)
            }
        }
    }

    /// Pushforward of a model unit vector `n` at `m`, normalised.
    pub fn push<S: Scalar>(&self, m: &Vec5<S>, n: &Vec5<S>) -> Vec5<S> {
        match self {
            ModelChart::Horosphere => {
                let d = m[0] * n[0] + m[1] * n[1] + m[2] * n[2];
                Vec5([d, d, n[0], n[1], n[2]])
            }
            ModelChart::Equidistant { .. } => Vec5([n[0], n[1], n[2], n[3], S::zero()]),
        }
    }
}

/// A minimal surface of the chart's model space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartSurface {
    /// Through the flat horosphere chart.
    Euclidean(WeierstrassData),
    /// `(cosh u, 0, sinh u cos v, sinh u sin v)`, totally geodesic in `H^3`.
    Plane,
    /// `(cosh u cosh av, cosh u sinh av, sinh u cos v, sinh u sin v)`.
    Helicoid { pitch: f64 },
}

#[derive(Clone, Debug)]
enum Profile {
    Euclidean(MinimalSurfaceR3),
    Hyperbolic { pitch: f64 },
}

impl Profile {
    fn model<S: Scalar>(&self, u: S, v: S) -> Vec5<S> {
        match self {
            Profile::Euclidean(s) => {
                let [a, b, c] = s.point(u, v);
                Vec5([a, b, c, S::zero(), S::zero()])
            }
            Profile::Hyperbolic { pitch } => {
                let av = v * S::cst(*pitch);
                Vec5([
                    u.cosh() * av.cosh(),
                    u.cosh() * av.sinh(),
                    u.sinh() * v.cos(),
                    u.sinh() * v.sin(),
                    S::zero(),
                ])
            }
        }
    }

    /// Model point and model unit normal.
    fn with_normal<S: Scalar>(&self, u: S, v: S) -> (Vec5<S>, Vec5<S>) {
        let d = self.model(Dual::var(u, 0), Dual::var(v, 1));
        let (m, mu, mv) = (
            d.map_to(|c| c.v),
            d.map_to(|c| c.d[0]),
            d.map_to(|c| c.d[1]),
        );
        let n = match self {
            Profile::Euclidean(_) => normal_r3(&mu, &mv),
            Profile::Hyperbolic { .. } => {
                let mut c = cross4(&m, &mu, &mv);
                c[0] = -c[0];
                let norm = AmbientSpace::hyperbolic4().inner(&c, &c).sqrt();
                c.scale(norm.recip())
            }
        };
        (m, n)
    }
}

/// `F = cosh t h + sinh t η` with `ξ = N`, the unit normal of `h` in `Q`.
#[derive(Clone, Debug)]
pub struct HyperbolicCylinder<T> {
    name: String,
    chart: ModelChart,
    surface: ChartSurface,
    profile: Profile,
    domain: [[T; 2]; 3],
    _t: PhantomData<fn() -> T>,
}

impl<T: Real> HyperbolicCylinder<T> {
    pub fn new(name: impl Into<String>, chart: ModelChart, surface: ChartSurface) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let (profile, b) = match (&chart, &surface) {
            (ModelChart::Horosphere, ChartSurface::Euclidean(d)) => (
                Profile::Euclidean(MinimalSurfaceR3::new(d.clone())?),
                d.default_box(),
            ),
            (
                ModelChart::Equidistant { distance },
                ChartSurface::Plane | ChartSurface::Helicoid { .. },
            ) => {
                if !distance.is_finite() || distance.abs() > 20.0 {
                    return Err(GeomError::Construction(format!(
                        "equidistant distance {distance}"
                    )));
                }
                let pitch = match surface {
                    ChartSurface::Helicoid { pitch } => pitch,
                    _ => 0.0,
                };
                if !pitch.is_finite() {
                    return Err(GeomError::Construction("non-finite helicoid pitch".into()));
                }
                (Profile::Hyperbolic { pitch }, [[-1.0, 1.0], [-pi, pi]])
            }
            _ => {
                return Err(GeomError::Construction(format!(
                    "{surface:?} does not live in the {chart:?} chart"
                )));
            }
        };
        let domain = [
            [T::cst(b[0][0]), T::cst(b[0][1])],
            [T::cst(b[1][0]), T::cst(b[1][1])],
            [-T::one(), T::one()],
        ];
        let cyl = HyperbolicCylinder {
            name: name.into(),
            chart,
            surface,
            profile,
            domain,
            _t: PhantomData,
        };
        let (x, _) = cyl.chart.embed(&cyl.profile.model(T::zero(), T::zero()));
        if !(x[0] > T::zero()) {
            return Err(GeomError::Construction(
                "chart lands on the lower sheet".into(),
            ));
        }
        Ok(cyl)
    }

    pub fn with_domain(mut self, domain: [[T; 2]; 3]) -> Result<Self> {
        if domain.iter().any(|d| !(d[0] < d[1])) {
            return Err(GeomError::Construction("empty parameter box".into()));
        }
        if domain[2][0] < -T::cst(300.0) || domain[2][1] > T::cst(300.0) {
            return Err(GeomError::Construction("t-range overflows cosh".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn chart(&self) -> ModelChart {
        self.chart
    }
    pub fn surface(&self) -> &ChartSurface {
        &self.surface
    }

    /// `(h, η, N)` at `z`.
    pub fn profile<S: Scalar<Base = T>>(&self, x: S, y: S) -> (Vec5<S>, Vec5<S>, Vec5<S>) {
        let (m, n) = self.profile.with_normal(x, y);
        let (h, eta) = self.chart.embed(&m);
        (h, eta, self.chart.push(&m, &n))
    }
}

impl<T: Real> Hypersurface3<T> for HyperbolicCylinder<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::hyperbolic4()
    }
    fn domain(&self) -> [[T; 2]; 3] {
        self.domain
    }
    fn jet(&self, p: [T; 3]) -> Result<HyperJet<T>> {
        let (h, eta, n) = self.profile(Dual::var(p[0], 0), Dual::var(p[1], 1));
        if !n[1].v.is_finite() || !n[2].v.is_finite() {
            return Err(GeomError::Regularity(
                "profile is not an immersion here".into(),
            ));
        }
        let (c, s) = (p[2].cosh(), p[2].sinh());
        let f = h.scale(Dual::constant(c)) + eta.scale(Dual::constant(s));
        let (h0, e0) = (h.map_to(|v| v.v), eta.map_to(|v| v.v));
        Ok(HyperJet {
            position: f.map_to(|v| v.v),
            df: [
                f.map_to(|v| v.d[0]),
                f.map_to(|v| v.d[1]),
                h0.scale(s) + e0.scale(c),
            ],
            xi: n.map_to(|v| v.v),
            dxi: [n.map_to(|v| v.d[0]), n.map_to(|v| v.d[1]), Vec5::zero()],
        })
    }
}
