//! Superminimal surfaces in `S^4` from a pair of meromorphic functions.
//!
//! The pair `(φ, ψ)` defines the horizontal holomorphic curve
//! `[1 : φ - ψh : ψ : h]`, `h = φ'/(2ψ')`, in `CP^3`, which the twistor
//! projection sends to a branched superminimal surface. Coefficients are
//! kept exact over `Q(i)`; branch points are the common zeros of the
//! derivatives of the affine components.

use crate::complex::Cx;
use crate::error::{GeomError, Result};
use crate::geom::{AmbientSpace, Vec5};
use crate::poly::{Poly, RatFn};
use crate::quaternion::penrose;
use crate::scalar::{Real, Scalar};
use crate::surface::{BranchPoint, BranchedSurface, SurfaceFn};
use num_complex::Complex64;
use num_traits::ToPrimitive;

#[derive(Clone, Debug, PartialEq)]
pub struct MeromorphicPair {
    pub phi: RatFn,
    pub psi: RatFn,
}

impl MeromorphicPair {
    pub fn new(phi: RatFn, psi: RatFn) -> Self {
        MeromorphicPair { phi, psi }
    }

    /// `(z^a, z^b)`.
    pub fn monomials(a: usize, b: usize) -> Self {
        let m = |n| RatFn::poly(Poly::monomial(crate::poly::qi(1, 0), n));
        MeromorphicPair {
            phi: m(a),
            psi: m(b),
        }
    }

    /// Zeros of the denominators of `φ` and `ψ`.
    pub fn poles(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for r in [&self.phi, &self.psi] {
            for (f, _) in r.den().squarefree() {
                out.extend(f.roots());
            }
        }
        out
    }
}

/// The horizontal curve as exact affine components `(c1, c2, c3)` of
/// `[1 : c1 : c2 : c3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BryantCurve {
    pair: MeromorphicPair,
    components: [RatFn; 3],
}

impl BryantCurve {
    /// Fails when `ψ` is constant.
    pub fn new(pair: MeromorphicPair) -> Result<Self> {
        let dpsi = pair.psi.derivative();
        if dpsi.is_zero() {
            return Err(GeomError::Degenerate(
                "ψ is constant, so dφ/dψ is undefined".into(),
            ));
        }
        let h = pair
            .phi
            .derivative()
            .div(&dpsi.scale(crate::poly::qi(2, 0)))?;
        let c1 = pair.phi.sub(&pair.psi.mul(&h));
        let components = [c1, pair.psi.clone(), h];
        Ok(BryantCurve { pair, components })
    }

    pub fn pair(&self) -> &MeromorphicPair {
        &self.pair
    }

    pub fn components(&self) -> &[RatFn; 3] {
        &self.components
    }

    /// `c1' + c2 c3' - c3 c2'`, identically zero for a horizontal curve.
    pub fn horizontality(&self) -> RatFn {
        let [c1, c2, c3] = &self.components;
        c1.derivative()
            .add(&c2.mul(&c3.derivative()))
            .sub(&c3.mul(&c2.derivative()))
    }

    /// `|c1' + c2 c3' - c3 c2'|` evaluated in floating point at `z`,
    /// relative to the size of the terms.
    pub fn horizontality_at(&self, z: Complex64) -> Result<f64> {
        let v = |r: &RatFn| -> Result<Complex64> {
            let d = r.den().eval_c64(z);
            if d.norm() == 0.0 {
                return Err(GeomError::Domain("evaluation at a pole".into()));
            }
            Ok(r.num().eval_c64(z) / d)
        };
        let [c1, c2, c3] = &self.components;
        let (d1, d2, d3) = (
            v(&c1.derivative())?,
            v(&c2.derivative())?,
            v(&c3.derivative())?,
        );
        let (a2, a3) = (v(c2)?, v(c3)?);
        let terms = [d1, a2 * d3, a3 * d2];
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        Ok((d1 + a2 * d3 - a3 * d2).norm() / scale)
    }

    /// Zeros of `(c1', c2', c3')` with their orders: the monic gcd of the
    /// numerators is factored squarefree and each factor solved numerically.
    pub fn branch_points(&self) -> Vec<(Complex64, u32)> {
        let mut g = Poly::zero();
        for c in &self.components {
            g = Poly::gcd(&g, c.derivative().num());
        }
        let mut out = Vec::new();
        for (f, m) in g.squarefree() {
            for r in f.roots() {
                out.push((r, m as u32));
            }
        }
        out.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()));
        out
    }
}

/// Floating-point copy of a rational function for fast evaluation.
#[derive(Clone, Debug)]
struct FloatRatFn {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

impl FloatRatFn {
    fn new(r: &RatFn) -> Self {
        let conv = |p: &Poly| {
            p.coeffs()
                .iter()
                .map(|c| {
                    [
                        c.re.to_f64().unwrap_or(f64::NAN),
                        c.im.to_f64().unwrap_or(f64::NAN),
                    ]
                })
                .collect()
        };
        FloatRatFn {
            num: conv(r.num()),
            den: conv(r.den()),
        }
    }

    fn horner<S: Scalar>(c: &[[f64; 2]], z: Cx<S>) -> Cx<S> {
        c.iter()
            .rev()
            .fold(Cx::zero(), |acc, a| acc * z + Cx::lift(a[0], a[1]))
    }

    fn eval<S: Scalar>(&self, z: Cx<S>) -> Result<Cx<S>> {
        let d = Self::horner(&self.den, z);
        if !(d.norm_sq().base() > <S::Base as num_traits::Zero>::zero()) {
            return Err(GeomError::Domain("evaluation at a pole".into()));
        }
        Ok(Self::horner(&self.num, z) / d)
    }
}

/// Twistor projection of a [`BryantCurve`], a surface in `S^4`.
#[derive(Clone, Debug)]
pub struct SuperminimalSurface {
    curve: BryantCurve,
    fast: [FloatRatFn; 3],
}

impl SuperminimalSurface {
    pub fn new(curve: BryantCurve) -> Self {
        let fast = [0, 1, 2].map(|i| FloatRatFn::new(&curve.components[i]));
        SuperminimalSurface { curve, fast }
    }
    pub fn curve(&self) -> &BryantCurve {
        &self.curve
    }
}

impl<T: Real> SurfaceFn<T> for SuperminimalSurface {
    fn ambient(&self) -> AmbientSpace {
        AmbientSpace::sphere4()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        let z = Cx::new(x, y);
        let [c1, c2, c3] = [0, 1, 2].map(|i| self.fast[i].eval(z));
        let (c1, c2, c3) = (c1?, c2?, c3?);
        Ok(penrose(&[
            S::one(),
            S::zero(),
            c1.re,
            c1.im,
            c2.re,
            c2.im,
            c3.re,
            c3.im,
        ]))
    }
}

/// Branched surface over the disc `|z| < radius` with its branch points
/// declared from the exact factorisation.
pub fn superminimal_surface(
    name: &str,
    pair: MeromorphicPair,
    radius: f64,
) -> Result<BranchedSurface<f64>> {
    let curve = BryantCurve::new(pair)?;
    if let Some(p) = curve.pair().poles().into_iter().find(|p| p.norm() < radius) {
        return Err(GeomError::Domain(format!("pole at {p} inside the chart")));
    }
    let branch: Vec<BranchPoint<f64>> = curve
        .branch_points()
        .into_iter()
        .filter(|(z, _)| z.norm() < radius)
        .map(|(z, m)| BranchPoint {
            z: [z.re, z.im],
            order: m,
        })
        .collect();
    Ok(
        BranchedSurface::exact(name, SuperminimalSurface::new(curve))?
            .with_radius(radius)?
            .with_branch_points(branch),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qi, qi_ratio};

    #[test]
    fn printed_coefficients_are_exact() {
        let c = BryantCurve::new(MeromorphicPair::monomials(5, 2)).unwrap();
        let [c1, c2, c3] = c.components();
        assert_eq!(
            c1,
            &RatFn::poly(Poly::monomial(qi_ratio((-1, 4), (0, 1)), 5))
        );
        assert_eq!(c2, &RatFn::poly(Poly::monomial(qi(1, 0), 2)));
        assert_eq!(
            c3,
            &RatFn::poly(Poly::monomial(qi_ratio((5, 4), (0, 1)), 3))
        );
        assert!(c.horizontality().is_zero());
        assert_eq!(c.branch_points(), vec![(Complex64::new(0.0, 0.0), 1)]);
    }

    #[test]
    fn constant_psi_rejected() {
        let pair = MeromorphicPair::new(
            RatFn::poly(Poly::monomial(qi(1, 0), 3)),
            RatFn::poly(Poly::constant(qi(2, 0))),
        );
        assert!(matches!(
            BryantCurve::new(pair),
            Err(GeomError::Degenerate(_))
        ));
    }

    #[test]
    fn rational_pair_with_pole_outside_chart() {
        let den = Poly::new(vec![qi(-2, 0), qi(1, 0)]);
        let phi = RatFn::new(Poly::monomial(qi(1, 0), 3), den).unwrap();
        let pair = MeromorphicPair::new(phi, RatFn::poly(Poly::monomial(qi(1, 0), 1)));
        let c = BryantCurve::new(pair.clone()).unwrap();
        assert!(c.horizontality().is_zero());
        assert!(superminimal_surface("r", pair.clone(), 1.0).is_ok());
        assert!(matches!(
            superminimal_surface("r", pair, 3.0),
            Err(GeomError::Domain(_))
        ));
    }

    #[test]
    fn projected_surface_is_conformal_and_minimal() {
        let s = superminimal_surface("b", MeromorphicPair::monomials(5, 2), 1.0).unwrap();
        for z in [[0.5, 0.0], [0.2, -0.4], [-0.3, 0.35]] {
            let (e, res) = s.conformal_factor(z).unwrap();
            assert!(e > 0.0 && res < 1e-12 * e.max(1.0), "{e} {res}");
            assert!(s.minimality_residual(z).unwrap() < 1e-10);
            assert!(s.circularity_residual(z).unwrap() < 1e-8);
            assert!(s.frame_gram_residual(z).unwrap() < 1e-10);
        }
        assert_eq!(s.conformal_factor([0.0, 0.0]).unwrap().0, 0.0);
        assert!((s.branch_order_estimate([0.0, 0.0]).unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn unbranched_pair() {
        let s = superminimal_surface("u", MeromorphicPair::monomials(2, 1), 1.0).unwrap();
        assert!(s.branch_points().is_empty());
        assert!(s.conformal_factor([0.0, 0.0]).unwrap().0 > 0.0);
    }
}
