//! Surfaces in `S^3` and the maps derived from them: the Gauss map, the
//! conformal Gauss map into de Sitter space and the lift into `S^4`.

use crate::error::{GeomError, Result};
pub use crate::geom::{cross4, unit_normal_s3};
use crate::geom::{AmbientSpace, Jet2Point, Vec5};
use crate::scalar::{Dual, Jet, Real, Scalar};
use crate::surface::{conformal_parts, SurfaceFn};
use std::marker::PhantomData;

/// Clifford torus `(cos x, sin x, cos y, sin y)/√2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CliffordTorus;

impl<T: Real> SurfaceFn<T> for CliffordTorus {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::sphere3()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let r = S::cst(std::f64::consts::FRAC_1_SQRT_2);
        Ok(Vec5::from4([
            x.cos() * r,
            x.sin() * r,
            y.cos() * r,
            y.sin() * r,
        ]))
    }
}

/// Great 2-sphere `x4 = 0` of `S^3` by inverse stereographic projection.
#[derive(Clone, Copy, Debug, Default)]
pub struct TotallyGeodesicSphere;

impl<T: Real> SurfaceFn<T> for TotallyGeodesicSphere {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::sphere3()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let r2 = x * x + y * y;
        let inv = (S::one() + r2).recip();
        let two = S::cst(2.0);
        Ok(Vec5::from4([
            two * x * inv,
            two * y * inv,
            (S::one() - r2) * inv,
            S::zero(),
        ]))
    }
}

fn first_order<T: Real, S: Scalar<Base = T>, F: SurfaceFn<T>>(
    f: &F,
    x: S,
    y: S,
) -> Result<[Vec5<S>; 3]> {
    let v = f.eval(Dual::var(x, 0), Dual::var(y, 1))?;
    Ok([
        v.map_to(|c| c.v),
        v.map_to(|c| c.d[0]),
        v.map_to(|c| c.d[1]),
    ])
}

fn jet_of<T: Real, F: SurfaceFn<T>>(f: &F, z: [T; 2]) -> Result<Jet2Point<T>> {
    Ok(Jet2Point::from_jets(
        &f.eval(Jet::var(z[0], 0), Jet::var(z[1], 1))?,
    ))
}

const PROBES: [[f64; 2]; 4] = [[0.31, 0.17], [-0.42, 0.23], [0.05, -0.61], [0.57, 0.44]];

fn require_sphere3(space: AmbientSpace) -> Result<()> {
    if space != AmbientSpace::sphere3() {
        return Err(GeomError::Construction(
            "input surface must lie in S^3".into(),
        ));
    }
    Ok(())
}

/// Ratio of the Gauss-map conformal factor to the surface's, which is
/// `-det A` for a minimal surface, largest over the probe points.
fn probe_factor<T: Real, F: SurfaceFn<T>>(f: &F) -> Result<T> {
    let mut best = T::zero();
    for p in PROBES {
        let z = [T::cst(p[0]), T::cst(p[1])];
        let (e, _) = conformal_parts(&f.ambient(), &jet_of(f, z)?);
        let gm = GaussMap {
            inner: f,
            _scalar: PhantomData,
        };
        let (eg, _) = conformal_parts(&gm.ambient(), &jet_of(&gm, z)?);
        if e > T::zero() {
            best = best.max(eg / e);
        }
    }
    Ok(best)
}

/// Unit normal of a surface in `S^3` translated to the origin.
#[derive(Clone, Copy, Debug)]
pub struct GaussMap<T, F> {
    inner: F,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: Real, F: SurfaceFn<T>> GaussMap<T, F> {
    /// Rejects surfaces outside `S^3` and totally geodesic ones, whose
    /// Gauss map is constant.
    pub fn new(inner: F) -> Result<Self> {
        require_sphere3(inner.ambient())?;
        if !(probe_factor(&inner)? > T::cst(1e-12)) {
            return Err(GeomError::Degenerate(
                "totally geodesic surface has a constant Gauss map".into(),
            ));
        }
        Ok(GaussMap {
            inner,
            _scalar: PhantomData,
        })
    }
    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<T: Real, F: SurfaceFn<T>> SurfaceFn<T> for GaussMap<T, F> {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::sphere3()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let [g, gx, gy] = first_order(&self.inner, x, y)?;
        Ok(unit_normal_s3(&g, &gx, &gy))
    }
}

/// `(0, η)` in de Sitter space for a minimal surface `h` of `S^3` with unit
/// normal `η`. Its normal frame is `(e1, (0, h))`.
#[derive(Clone, Copy, Debug)]
pub struct ConformalGaussMap<T, F> {
    inner: F,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: Real, F: SurfaceFn<T>> ConformalGaussMap<T, F> {
    /// Rejects non-minimal input and totally umbilical input, where the
    /// induced metric factor `1 - K` vanishes.
    pub fn new(inner: F) -> Result<Self> {
        require_sphere3(inner.ambient())?;
        for p in PROBES {
            let z = [T::cst(p[0]), T::cst(p[1])];
            let j = jet_of(&inner, z)?;
            let n = unit_normal_s3(&j.value, &j.d1[0], &j.d1[1]);
            let (e, _) = conformal_parts(&inner.ambient(), &j);
            let h = (j.d2[0] + j.d2[2]).dot(&n) / (e + e);
            if !(h.abs() < T::cst(1e-8)) {
                return Err(GeomError::Construction(format!(
                    "conformal Gauss map needs a minimal surface (mean curvature {h:e})"
                )));
            }
        }
        if !(probe_factor(&inner)? > T::cst(1e-12)) {
            return Err(GeomError::Degenerate(
                "totally umbilical surface: induced metric vanishes".into(),
            ));
        }
        Ok(ConformalGaussMap {
            inner,
            _scalar: PhantomData,
        })
    }
    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<T: Real, F: SurfaceFn<T>> SurfaceFn<T> for ConformalGaussMap<T, F> {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::de_sitter4()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let [g, gx, gy] = first_order(&self.inner, x, y)?;
        let n = unit_normal_s3(&g, &gx, &gy);
        Ok(Vec5([S::zero(), n[0], n[1], n[2], n[3]]))
    }
    fn seed_field<S: Scalar<Base = T>>(&self, x: S, y: S) -> Option<Result<Vec<Vec5<S>>>> {
        Some(self.inner.eval(x, y).map(|h| {
            let mut e1 = Vec5::zero();
            e1[0] = S::one();
            vec![e1, Vec5([S::zero(), h[0], h[1], h[2], h[3]])]
        }))
    }
}

/// A surface of `S^3` viewed in the equator `x5 = 0` of `S^4`, framed by
/// its `S^3` unit normal followed by `e5`.
#[derive(Clone, Copy, Debug)]
pub struct InS4<T, F> {
    inner: F,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: Real, F: SurfaceFn<T>> InS4<T, F> {
    pub fn new(inner: F) -> Result<Self> {
        require_sphere3(inner.ambient())?;
        Ok(InS4 {
            inner,
            _scalar: PhantomData,
        })
    }
    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<T: Real, F: SurfaceFn<T>> SurfaceFn<T> for InS4<T, F> {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::sphere4()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        self.inner.eval(x, y)
    }
    fn seed_field<S: Scalar<Base = T>>(&self, x: S, y: S) -> Option<Result<Vec<Vec5<S>>>> {
        Some(first_order(&self.inner, x, y).map(|[g, gx, gy]| {
            let mut e5 = Vec5::zero();
            e5[4] = S::one();
            vec![unit_normal_s3(&g, &gx, &gy), e5]
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::BranchedSurface;
    use crate::Mat2;

    fn clifford_normal(x: f64, y: f64) -> Vec5<f64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Vec5::from4([x.cos() * r, x.sin() * r, -y.cos() * r, -y.sin() * r])
    }

    #[test]
    fn clifford_shape_operator() {
        let s = BranchedSurface::exact("clifford", CliffordTorus).unwrap();
        let z = [0.4, -1.1];
        let a = s.shape_operator(z, &clifford_normal(z[0], z[1])).unwrap();
        let e = crate::linalg::eigen2_sym(&a, 1e-10).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12 && (e.values[1] + 1.0).abs() < 1e-12);
        assert!((a.det() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn clifford_gauss_map_metric_and_weingarten() {
        let gm = GaussMap::<f64, _>::new(CliffordTorus).unwrap();
        let g = BranchedSurface::exact("gauss", gm).unwrap();
        let c = BranchedSurface::exact("clifford", CliffordTorus).unwrap();
        for z in [[0.3, 0.2], [-0.7, 0.9], [1.3, -0.4]] {
            let jg = g.jet(z).unwrap();
            let n = clifford_normal(z[0], z[1]);
            assert!((jg.value - n).max_abs() < 1e-14 || (jg.value + n).max_abs() < 1e-14);
            let a = c.shape_operator(z, &jg.value).unwrap();
            let gg = g.first_form(&jg);
            let gc = c.first_form(&c.jet(z).unwrap());
            assert!((gg - gc.scale(-a.det())).max_abs() < 1e-12);
            // dξ = -dG∘A with ξ the Gauss map: the Gauss map's shape operator
            // with respect to G inverts A.
            let gpos = c.value(z).unwrap();
            let ag = g.shape_operator(z, &gpos).unwrap();
            let prod = ag * a;
            assert!(
                (prod - Mat2::identity()).max_abs() < 1e-10
                    || (prod + Mat2::identity()).max_abs() < 1e-10
            );
        }
    }

    #[test]
    fn totally_geodesic_input_rejected() {
        assert!(matches!(
            GaussMap::<f64, _>::new(TotallyGeodesicSphere),
            Err(GeomError::Degenerate(_))
        ));
        assert!(matches!(
            ConformalGaussMap::<f64, _>::new(TotallyGeodesicSphere),
            Err(GeomError::Degenerate(_))
        ));
    }

    #[test]
    fn conformal_gauss_map_of_clifford() {
        let cg = BranchedSurface::exact(
            "cgm",
            ConformalGaussMap::<f64, _>::new(CliffordTorus).unwrap(),
        )
        .unwrap();
        let h = BranchedSurface::exact("clifford", CliffordTorus).unwrap();
        for z in [[0.1, 0.2], [2.0, -1.0]] {
            let j = cg.jet(z).unwrap();
            let space = AmbientSpace::de_sitter4();
            assert!((space.inner(&j.value, &j.value) - 1.0).abs() < 1e-14);
            let (e, res) = conformal_parts(&space, &j);
            let (eh, _) = h.conformal_factor(z).unwrap();
            assert!((e / eh - 1.0).abs() < 1e-12 && res < 1e-14);
            assert!(cg.frame_gram_residual(z).unwrap() < 1e-12);
            assert!(cg.minimality_residual(z).unwrap() < 1e-12);
            let f = cg.frame(z).unwrap();
            assert!(space.inner(&f.normals[0], &f.normals[0]) < 0.0);
        }
    }

    #[test]
    fn lifted_frame_is_normal_then_e5() {
        let s = BranchedSurface::exact(
            "lift",
            InS4::new(GaussMap::<f64, _>::new(CliffordTorus).unwrap()).unwrap(),
        )
        .unwrap();
        let z = [std::f64::consts::FRAC_PI_2, 0.3];
        let f = s.frame(z).unwrap();
        assert!(s.frame_gram_residual(z).unwrap() < 1e-12);
        assert_eq!(f.normals[1].0, [0.0, 0.0, 0.0, 0.0, 1.0]);
        let c = CliffordTorus.eval(z[0], z[1]).unwrap();
        assert!((f.normals[0].dot(&c).abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn totally_geodesic_sphere_is_flat_in_s3() {
        let s = BranchedSurface::exact("equator", TotallyGeodesicSphere).unwrap();
        let z = [0.2, -0.5];
        let (_, res) = s.conformal_factor(z).unwrap();
        assert!(res < 1e-14);
        let f = s.frame(z).unwrap();
        assert!(s.shape_operator(z, &f.normals[0]).unwrap().max_abs() < 1e-14);
        assert!(s.minimality_residual(z).unwrap() < 1e-14);
    }
}
