//! Polar maps over branched minimal surfaces.
//!
//! * Euclidean: `g: B -> S^3` with a support function `γ`,
//!   `Ψ(z, t) = γ g + dg(∇γ) + t η`.
//! * Spherical: `g: B -> S^4`, `Ψ(z, t) = cos t η3 + sin t η4`.
//! * Hyperbolic: `g: B -> S^4_1` spacelike, `Ψ(z, t) = cosh t η3 + sinh t η4`
//!   with `η3` timelike.
//!
//! In every case `ξ(z, t) = g(z)` is a unit normal of `Ψ`. Derivatives of `Ψ`
//! are exact: the frame and the support function are carried through
//! first-order dual numbers built from the exact jets of `g`.

use crate::config::Tolerances;
use crate::error::{GeomError, Result};
use crate::geom::{AmbientSpace, Jet2Point, Vec5};
use crate::hypersurface::{self, HyperJet, Hypersurface3, HypersurfaceSample};
use crate::linalg::{Mat2, Mat3};
use crate::scalar::{Dual, Jet, Real, Scalar};
use crate::surface::{
    annulus_samples, dual_parts, first_form, BranchPoint, BranchedSurface, FrameSample,
};

/// Support function of a Euclidean polar map, as a function of the point
/// `g(z)` of `S^3`.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportFunction<T> {
    /// `γ = <g, α>`.
    Linear { alpha: Vec5<T> },
    /// `γ = Q1(<g, axis>)` with `Q1(s) = (s/2) ln((1+s)/(1-s)) - 1`, the
    /// Legendre function of the second kind; only solves the Helmholtz
    /// equation on totally geodesic spheres through `±axis`.
    Legendre { axis: Vec5<T> },
}

impl<T: Real> SupportFunction<T> {
    pub fn eval<S: Scalar<Base = T>>(&self, g: &Vec5<S>) -> Result<S> {
        match self {
            SupportFunction::Linear { alpha } => Ok(g.dot(&Vec5::lift(alpha))),
            SupportFunction::Legendre { axis } => {
                let s = g.dot(&Vec5::lift(axis));
                if !(s.base().abs() < T::one()) {
                    return Err(GeomError::Domain(
                        "Legendre support function at its poles".into(),
                    ));
                }
                let one = S::one();
                Ok(s * S::cst(0.5) * ((one + s) / (one - s)).ln() - one)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SupportFunction::Linear { .. } => "linear",
            SupportFunction::Legendre { .. } => "legendre",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PolarKind {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl PolarKind {
    pub fn ambient(&self) -> AmbientSpace {
        match self {
            PolarKind::Euclidean => AmbientSpace::euclidean4(),
            PolarKind::Spherical => AmbientSpace::sphere4(),
            PolarKind::Hyperbolic => AmbientSpace::hyperbolic4(),
        }
    }
    fn base_space(&self) -> AmbientSpace {
        match self {
            PolarKind::Euclidean => AmbientSpace::sphere3(),
            PolarKind::Spherical => AmbientSpace::sphere4(),
            PolarKind::Hyperbolic => AmbientSpace::de_sitter4(),
        }
    }
}

/// `∇γ`, the Hessian operator `G^{-1} ∇²γ` and `Δγ` with respect to the
/// metric of `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HessianSample<T> {
    pub gamma: T,
    pub gradient: [T; 2],
    pub hessian: Mat2<T>,
    pub laplacian: T,
}

/// The operator `P` (Euclidean) or `A_w` (spherical, hyperbolic) at `(z, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarOperatorSample<T> {
    pub z: [T; 2],
    pub t: T,
    /// Mixed tensor in the coordinate frame `(∂x, ∂y)`.
    pub operator: Mat2<T>,
    pub det: T,
    /// `|z - z0|^{2m} det` for the nearest declared branch point, or `det`.
    pub scaled_det: T,
    /// `ω(∂x), ω(∂y)`; `ω34` in the spherical and hyperbolic cases.
    pub omega: [T; 2],
    /// First fundamental form of `g`.
    pub base_metric: Mat2<T>,
}

impl<T: Real> PolarOperatorSample<T> {
    /// The operator in a `g`-orthonormal frame, which is symmetric.
    pub fn orthonormal(&self) -> Mat2<T> {
        let s = self.base_metric.0[0][0].sqrt();
        let t = self.base_metric.0[1][1].sqrt();
        let m = self.operator.0;
        Mat2([[m[0][0], m[0][1] * t / s], [m[1][0] * s / t, m[1][1]]])
    }
    /// `‖P² + det P · I‖`, which vanishes when `P` is trace-free.
    pub fn square_residual(&self) -> T {
        (self.operator * self.operator + Mat2::identity().scale(self.det)).max_abs()
    }
}

/// Outcome of [`PolarMap::regularity_test`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regularity<T> {
    Regular {
        det: T,
    },
    Singular {
        det: T,
    },
    /// Over a declared branch point: the common limit of `|z|^{2m} det`.
    BranchLimit {
        limit: T,
        spread: T,
    },
    /// The ray limits disagree or are not negative.
    NoLimit {
        limit: T,
        spread: T,
    },
}

impl<T> Regularity<T> {
    pub fn is_regular(&self) -> bool {
        matches!(
            self,
            Regularity::Regular { .. } | Regularity::BranchLimit { .. }
        )
    }
}

/// Values and exact first derivatives of `Ψ` and `ξ` together with the
/// operator data at one point.
#[derive(Clone, Debug)]
pub struct PolarPoint<T> {
    pub position: Vec5<T>,
    /// `[Ψ_x, Ψ_y, Ψ_t]`.
    pub dpsi: [Vec5<T>; 3],
    pub xi: Vec5<T>,
    pub dxi: [Vec5<T>; 3],
    pub operator: PolarOperatorSample<T>,
}

/// A polar map over a parameter box `B × [t0, t1]`.
#[derive(Clone, Debug)]
pub struct PolarMap<T: Real> {
    name: String,
    kind: PolarKind,
    base: BranchedSurface<T>,
    support: Option<SupportFunction<T>>,
    domain: [[T; 2]; 3],
    tol: Tolerances,
}

const PROBE_GRID: usize = 5;

impl<T: Real> PolarMap<T> {
    fn check_base(kind: PolarKind, base: &BranchedSurface<T>) -> Result<()> {
        if base.ambient() != kind.base_space() {
            return Err(GeomError::Construction(format!(
                "{kind:?} polar map needs a surface in {:?}, got {:?}",
                kind.base_space(),
                base.ambient()
            )));
        }
        Ok(())
    }

    fn default_domain(base: &BranchedSurface<T>, t: [T; 2]) -> [[T; 2]; 3] {
        let r = base.radius();
        let s = T::cst(std::f64::consts::FRAC_1_SQRT_2) * r;
        [[-s, s], [-s, s], t]
    }

    fn new(
        name: String,
        kind: PolarKind,
        base: BranchedSurface<T>,
        support: Option<SupportFunction<T>>,
        t: [T; 2],
    ) -> Self {
        let tol = *base.tolerances();
        let domain = Self::default_domain(&base, t);
        PolarMap {
            name,
            kind,
            base,
            support,
            domain,
            tol,
        }
    }

    /// `Ψ = γ g + dg(∇γ) + t η`. The Helmholtz equation `Δγ + 2γ = 0` is
    /// checked on a probe grid.
    pub fn build_euclidean(
        name: impl Into<String>,
        base: BranchedSurface<T>,
        support: SupportFunction<T>,
    ) -> Result<Self> {
        Self::check_base(PolarKind::Euclidean, &base)?;
        let map = Self::new(
            name.into(),
            PolarKind::Euclidean,
            base,
            Some(support),
            [-T::one(), T::one()],
        );
        let mut worst = T::zero();
        for z in map.probe_points() {
            if let Ok(h) = map.hessian_gamma(z) {
                let r = (h.laplacian + h.gamma + h.gamma).abs() / T::one().max(h.gamma.abs());
                worst = worst.max(r);
            }
        }
        if !(worst <= T::cst(map.tol.exact)) {
            return Err(GeomError::InvalidSupportFunction(
                worst.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(map)
    }

    /// `Ψ = cos t η3 + sin t η4`, `t ∈ [0, 2π]`.
    pub fn build_spherical(name: impl Into<String>, base: BranchedSurface<T>) -> Result<Self> {
        Self::check_base(PolarKind::Spherical, &base)?;
        let map = Self::new(
            name.into(),
            PolarKind::Spherical,
            base,
            None,
            [T::zero(), T::TAU()],
        );
        map.probe_frame()?;
        Ok(map)
    }

    /// `Ψ = cosh t η3 + sinh t η4`; requires `η3` timelike.
    pub fn build_hyperbolic(name: impl Into<String>, base: BranchedSurface<T>) -> Result<Self> {
        Self::check_base(PolarKind::Hyperbolic, &base)?;
        let map = Self::new(
            name.into(),
            PolarKind::Hyperbolic,
            base,
            None,
            [-T::one(), T::one()],
        );
        let space = map.base.ambient();
        for z in map.probe_points() {
            let Ok(f) = map.base.frame(z) else { continue };
            if !(space.inner(&f.normals[0], &f.normals[0]) < T::zero()) {
                return Err(GeomError::Frame(
                    "first normal of the base surface is not timelike".into(),
                ));
            }
        }
        Ok(map)
    }

    fn probe_frame(&self) -> Result<()> {
        let mut last = None;
        for z in self.probe_points() {
            match self.base.frame(z) {
                Ok(_) => return Ok(()),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| GeomError::Construction("empty probe grid".into())))
    }

    fn probe_points(&self) -> Vec<[T; 2]> {
        let mut out = Vec::new();
        let n = T::from_usize(PROBE_GRID).unwrap();
        for i in 0..PROBE_GRID {
            for j in 0..PROBE_GRID {
                let f = |a: usize, d: [T; 2]| {
                    d[0] + (d[1] - d[0]) * (T::from_usize(a).unwrap() + T::cst(0.5)) / n
                };
                let z = [f(i, self.domain[0]), f(j, self.domain[1])];
                if z[0].hypot(z[1]) < self.base.radius() {
                    out.push(z);
                }
            }
        }
        out
    }

    /// Replaces the parameter box `[[x0, x1], [y0, y1], [t0, t1]]`.
    pub fn with_domain(mut self, domain: [[T; 2]; 3]) -> Result<Self> {
        if domain.iter().any(|d| !(d[0] < d[1])) {
            return Err(GeomError::Construction("empty parameter box".into()));
        }
        if self.kind == PolarKind::Hyperbolic {
            let span = T::cst(300.0);
            if domain[2][0] < -span || domain[2][1] > span {
                return Err(GeomError::Construction("t-range overflows cosh".into()));
            }
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn kind(&self) -> PolarKind {
        self.kind
    }
    pub fn base(&self) -> &BranchedSurface<T> {
        &self.base
    }
    pub fn support(&self) -> Option<&SupportFunction<T>> {
        self.support.as_ref()
    }
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn gamma_jet(&self, jet: &Jet2Point<T>) -> Result<Jet<T>> {
        let s = self
            .support
            .as_ref()
            .ok_or_else(|| GeomError::Construction("no support function".into()))?;
        s.eval(&jet.to_jets())
    }

    /// `∇γ`, `∇²γ` and `Δγ` with Christoffel symbols from the jet of `g`.
    pub fn hessian_gamma(&self, z: [T; 2]) -> Result<HessianSample<T>> {
        let jet = self.base.jet(z)?;
        self.hessian_at(z, &jet)
    }

    fn hessian_at(&self, z: [T; 2], jet: &Jet2Point<T>) -> Result<HessianSample<T>> {
        let space = self.base.ambient();
        let g = first_form(&space, jet);
        let gi = self.metric_inverse(z, &g)?;
        let gam = self.gamma_jet(jet)?;
        let dg = [gam.d[0], gam.d[1]];
        let mut cov = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let gij = jet.second(i, j);
                let chr = [space.inner(&gij, &jet.d1[0]), space.inner(&gij, &jet.d1[1])];
                let mut c = gam.h[i + j];
                for k in 0..2 {
                    for l in 0..2 {
                        c = c - gi.0[k][l] * chr[l] * dg[k];
                    }
                }
                cov[i][j] = c;
            }
        }
        let hessian = gi * Mat2(cov);
        Ok(HessianSample {
            gamma: gam.v,
            gradient: gi.apply(dg),
            hessian,
            laplacian: hessian.trace(),
        })
    }

    fn metric_inverse(&self, z: [T; 2], g: &Mat2<T>) -> Result<Mat2<T>> {
        let det = g.det();
        match g.inverse() {
            Some(inv) if det > T::cst(1e-48) => Ok(inv),
            _ => Err(GeomError::SingularMetric {
                x: z[0].to_f64().unwrap_or(f64::NAN),
                y: z[1].to_f64().unwrap_or(f64::NAN),
                factor: g.0[0][0].to_f64().unwrap_or(f64::NAN),
            }),
        }
    }

    fn branch_scale(&self, z: [T; 2]) -> T {
        let nearest = self.base.branch_points().iter().min_by(|a, b| {
            let da = (a.z[0] - z[0]).hypot(a.z[1] - z[1]);
            let db = (b.z[0] - z[0]).hypot(b.z[1] - z[1]);
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        });
        match nearest {
            Some(b) => (b.z[0] - z[0])
                .hypot(b.z[1] - z[1])
                .powi(2 * b.order as i32),
            None => T::one(),
        }
    }

    /// Position, exact derivatives and operator data at `(z, t)`.
    pub fn point(&self, z: [T; 2], t: T) -> Result<PolarPoint<T>> {
        let frame = self.base.frame(z)?;
        let jet = frame.jet;
        let space = self.base.ambient();
        let g = first_form(&space, &jet);
        let gi = self.metric_inverse(z, &g)?;
        let [gd, gxd, gyd] = dual_parts(&jet);
        let normals = dual_normals(&frame);
        let tc = Dual::constant(t);
        let (psi, dt, operator, omega) = match self.kind {
            PolarKind::Euclidean => {
                let h = self.hessian_at(z, &jet)?;
                let gam = self.gamma_jet(&jet)?;
                let gamma = Dual { v: gam.v, d: gam.d };
                let dgam = [
                    Dual {
                        v: gam.d[0],
                        d: [gam.h[0], gam.h[1]],
                    },
                    Dual {
                        v: gam.d[1],
                        d: [gam.h[1], gam.h[2]],
                    },
                ];
                let (exx, exy, eyy) = (
                    space.inner(&gxd, &gxd),
                    space.inner(&gxd, &gyd),
                    space.inner(&gyd, &gyd),
                );
                let det = exx * eyy - exy * exy;
                let grad = [
                    (eyy * dgam[0] - exy * dgam[1]) / det,
                    (exx * dgam[1] - exy * dgam[0]) / det,
                ];
                let eta = normals[0];
                let psi = gd.scale(gamma) + gxd.scale(grad[0]) + gyd.scale(grad[1]) + eta.scale(tc);
                let a = gi * crate::surface::second_form(&space, &jet, &frame.normals[0]);
                let p = h.hessian + Mat2::identity().scale(h.gamma) - a.scale(t);
                let agrad = a.apply(h.gradient);
                let omega = g.apply(agrad);
                (psi, frame.normals[0], p, omega)
            }
            PolarKind::Spherical | PolarKind::Hyperbolic => {
                let (c, s) = match self.kind {
                    PolarKind::Spherical => (t.cos(), t.sin()),
                    _ => (t.cosh(), t.sinh()),
                };
                let (e3, e4) = (normals[0], normals[1]);
                let psi = e3.scale(Dual::constant(c)) + e4.scale(Dual::constant(s));
                let (n3, n4) = (frame.normals[0], frame.normals[1]);
                let dt = match self.kind {
                    PolarKind::Spherical => n3.scale(-s) + n4.scale(c),
                    _ => n3.scale(s) + n4.scale(c),
                };
                let w = n3.scale(c) + n4.scale(s);
                let a = gi * crate::surface::second_form(&space, &jet, &w);
                let omega = [0, 1].map(|i| space.inner(&frame.dnormals[0][i], &n4));
                (psi, dt, a, omega)
            }
        };
        let det = operator.det();
        let sample = PolarOperatorSample {
            z,
            t,
            operator,
            det,
            scaled_det: self.branch_scale(z) * det,
            omega,
            base_metric: g,
        };
        Ok(PolarPoint {
            position: psi.map_to(|c| c.v),
            dpsi: [psi.map_to(|c| c.d[0]), psi.map_to(|c| c.d[1]), dt],
            xi: jet.value,
            dxi: [jet.d1[0], jet.d1[1], Vec5::zero()],
            operator: sample,
        })
    }

    pub fn position(&self, z: [T; 2], t: T) -> Result<Vec5<T>> {
        Ok(self.point(z, t)?.position)
    }

    /// `P` or `A_w` at `(z, t)`.
    pub fn operator(&self, z: [T; 2], t: T) -> Result<PolarOperatorSample<T>> {
        Ok(self.point(z, t)?.operator)
    }

    fn det_at(&self, z: [T; 2], t: T) -> Result<T> {
        Ok(self.operator(z, t)?.det)
    }

    /// Regular/singular classification; over a declared branch point the
    /// limit of `|z - z0|^{2m} det` is fitted along 8 rays.
    pub fn regularity_test(&self, z: [T; 2], t: T) -> Result<Regularity<T>> {
        if let Some(b) = self.base.branch_point_near(z, T::cst(1e-9)) {
            return self.branch_limit(b, t);
        }
        let det = self.det_at(z, t)?;
        Ok(if det.abs() <= T::cst(self.tol.singular_det) {
            Regularity::Singular { det }
        } else {
            Regularity::Regular { det }
        })
    }

    fn branch_limit(&self, b: BranchPoint<T>, t: T) -> Result<Regularity<T>> {
        let samples = annulus_samples(T::cst(self.tol.branch_r_min), T::cst(self.tol.branch_r_max));
        let mut rays: Vec<Vec<(T, T)>> = vec![Vec::new(); 8];
        for (k, (r, th)) in samples.into_iter().enumerate() {
            let z = [b.z[0] + r * th.cos(), b.z[1] + r * th.sin()];
            let v = r.powi(2 * b.order as i32) * self.det_at(z, t)?;
            rays[k % 8].push((r, v));
        }
        let limits: Vec<T> = rays.iter().map(|pts| linear_intercept(pts)).collect();
        let n = T::from_usize(limits.len()).unwrap();
        let limit = limits.iter().fold(T::zero(), |a, l| a + *l) / n;
        let (lo, hi) = limits
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(a, b), l| {
                (a.min(*l), b.max(*l))
            });
        let spread = (hi - lo) / limit.abs();
        Ok(
            if limit < -T::cst(self.tol.singular_det) && spread < T::cst(self.tol.branch_spread) {
                Regularity::BranchLimit { limit, spread }
            } else {
                Regularity::NoLimit { limit, spread }
            },
        )
    }

    /// `-det · G + ω ⊗ ω` on `(∂x, ∂y)`, `ω` off-diagonal, `1` on `∂t`.
    pub fn formula_metric(&self, z: [T; 2], t: T) -> Result<Mat3<T>> {
        Ok(formula_metric(&self.operator(z, t)?))
    }

    /// Gram matrix of `dΨ`.
    pub fn gram_metric(&self, z: [T; 2], t: T) -> Result<Mat3<T>> {
        let p = self.point(z, t)?;
        let space = self.kind.ambient();
        Ok(Mat3::from_fn(|i, j| space.inner(&p.dpsi[i], &p.dpsi[j])))
    }

    /// `‖formula - Gram‖ / ‖Gram‖` (Frobenius).
    pub fn metric_agreement(&self, z: [T; 2], t: T) -> Result<T> {
        let p = self.point(z, t)?;
        let space = self.kind.ambient();
        let gram = Mat3::from_fn(|i, j| space.inner(&p.dpsi[i], &p.dpsi[j]));
        let f = formula_metric(&p.operator);
        Ok((f - gram).frobenius_sq().sqrt() / gram.frobenius_sq().sqrt())
    }

    /// Curvature data of `Ψ` with respect to `ξ = g`.
    pub fn sample(&self, z: [T; 2], t: T) -> Result<HypersurfaceSample<T>> {
        hypersurface::sample(self, [z[0], z[1], t], &self.tol)
    }

    /// Principal curvatures `k1 >= k2 >= k3` of the shape operator of `Ψ`.
    pub fn principal_curvatures(&self, z: [T; 2], t: T) -> Result<[T; 3]> {
        if let Regularity::Singular { det } = self.regularity_test(z, t)? {
            return Err(GeomError::SingularPoint(format!("det {det:e}")));
        }
        Ok(self.sample(z, t)?.curvatures)
    }

    /// `1/√(-det)`, the closed-form largest principal curvature.
    pub fn closed_form_k1(&self, z: [T; 2], t: T) -> Result<T> {
        let det = self.det_at(z, t)?;
        if !(det < T::zero()) {
            return Err(GeomError::SingularPoint(format!(
                "det {det:e} is not negative"
            )));
        }
        Ok((-det).sqrt().recip())
    }

    /// `|<Ψ,Ψ> - c|`, plus `max(0, -x1)` on the hyperbolic sheet.
    pub fn quadric_residual(&self, z: [T; 2], t: T) -> Result<T> {
        let p = self.position(z, t)?;
        let space = self.kind.ambient();
        let c = T::from_i8(space.quadric_constant()).unwrap();
        let mut r = if space.has_quadric() {
            (space.inner(&p, &p) - c).abs()
        } else {
            T::zero()
        };
        if space.has_sheet() {
            r = r.max(-p[0]);
        }
        Ok(r)
    }
}

fn formula_metric<T: Real>(s: &PolarOperatorSample<T>) -> Mat3<T> {
    let g = s.base_metric.0;
    let w = s.omega;
    Mat3::from_fn(|i, j| match (i, j) {
        (2, 2) => T::one(),
        (2, k) | (k, 2) => w[k],
        (a, b) => -s.det * g[a][b] + w[a] * w[b],
    })
}

fn linear_intercept<T: Real>(pts: &[(T, T)]) -> T {
    let n = T::from_usize(pts.len()).unwrap();
    let (sx, sy) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), (x, y)| (a + *x, b + *y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((T::zero(), T::zero()), |(a, b), (x, y)| {
        (a + (*x - mx) * (*y - my), b + (*x - mx) * (*x - mx))
    });
    my - sxy / sxx * mx
}

fn dual_normals<T: Real>(f: &FrameSample<T>) -> Vec<Vec5<Dual<T>>> {
    f.normals
        .iter()
        .zip(&f.dnormals)
        .map(|(n, d)| {
            Vec5(std::array::from_fn(|i| Dual {
                v: n[i],
                d: [d[0][i], d[1][i]],
            }))
        })
        .collect()
}

impl<T: Real> Hypersurface3<T> for PolarMap<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn ambient(&self) -> AmbientSpace {
        self.kind.ambient()
    }
    fn domain(&self) -> [[T; 2]; 3] {
        self.domain
    }
    fn contains(&self, p: [T; 3]) -> bool {
        let d = self.domain;
        (0..3).all(|i| p[i] >= d[i][0] && p[i] <= d[i][1]) && p[0].hypot(p[1]) < self.base.radius()
    }
    fn jet(&self, p: [T; 3]) -> Result<HyperJet<T>> {
        let q = self.point([p[0], p[1]], p[2])?;
        Ok(HyperJet {
            position: q.position,
            df: q.dpsi,
            xi: q.xi,
            dxi: q.dxi,
        })
    }
}
