//! Ambient spaces, vectors and second-order jets.
//!
//! Every ambient vector is stored with five components. Four-dimensional
//! spaces use the first four and keep the fifth at zero, so that `S^3 ⊂ R^4`
//! is literally the equator `x5 = 0` of `S^4 ⊂ R^5`.

use crate::error::{GeomError, Result};
use crate::scalar::{Jet, Real, Scalar};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

/// Which model the ambient space is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpace {
    dimension: usize,
    signature: u8,
    quadric: i8,
}

impl AmbientSpace {
    /// `dimension ∈ {4, 5}`, `signature ∈ {0, 1}` (1 only in dimension 5),
    /// `quadric ∈ {-1, 0, 1}` with 0 meaning no quadric constraint.
    pub fn new(dimension: usize, signature: u8, quadric: i8) -> Result<Self> {
        if !(dimension == 4 || dimension == 5) {
            return Err(GeomError::Construction(format!(
                "unsupported dimension {dimension}"
            )));
        }
        if signature > 1 || (signature == 1 && dimension != 5) {
            return Err(GeomError::Construction(format!(
                "index {signature} is not allowed in dimension {dimension}"
            )));
        }
        if !(-1..=1).contains(&quadric) {
            return Err(GeomError::Construction(format!(
                "quadric constant {quadric}"
            )));
        }
        Ok(AmbientSpace {
            dimension,
            signature,
            quadric,
        })
    }

    /// Euclidean `R^4`.
    pub const fn euclidean4() -> Self {
        AmbientSpace {
            dimension: 4,
            signature: 0,
            quadric: 0,
        }
    }
    /// Unit sphere `S^3 ⊂ R^4`.
    pub const fn sphere3() -> Self {
        AmbientSpace {
            dimension: 4,
            signature: 0,
            quadric: 1,
        }
    }
    /// Unit sphere `S^4 ⊂ R^5`.
    pub const fn sphere4() -> Self {
        AmbientSpace {
            dimension: 5,
            signature: 0,
            quadric: 1,
        }
    }
    /// Hyperbolic space `H^4`: the upper sheet `x1 > 0` of `<x,x>_1 = -1` in `R^5_1`.
    pub const fn hyperbolic4() -> Self {
        AmbientSpace {
            dimension: 5,
            signature: 1,
            quadric: -1,
        }
    }
    /// De Sitter space `S^4_1`: `<x,x>_1 = 1` in `R^5_1`.
    pub const fn de_sitter4() -> Self {
        AmbientSpace {
            dimension: 5,
            signature: 1,
            quadric: 1,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
    pub fn signature(&self) -> u8 {
        self.signature
    }
    /// `<x,x>_s` on the quadric, or 0 when there is none.
    pub fn quadric_constant(&self) -> i8 {
        self.quadric
    }
    pub fn has_quadric(&self) -> bool {
        self.quadric != 0
    }
    /// Only `H^4` carries the sheet condition `x1 > 0`.
    pub fn has_sheet(&self) -> bool {
        self.signature == 1 && self.quadric == -1
    }

    /// `(-1)^s v1 w1 + Σ_{i≥2} vi wi`.
    #[inline]
    pub fn inner<S: Scalar>(&self, v: &Vec5<S>, w: &Vec5<S>) -> S {
        let mut acc = v[1] * w[1] + v[2] * w[2] + v[3] * w[3] + v[4] * w[4];
        let first = v[0] * w[0];
        if self.signature == 1 {
            acc = acc - first;
        } else {
            acc = acc + first;
        }
        acc
    }

    pub fn norm_sq<S: Scalar>(&self, v: &Vec5<S>) -> S {
        self.inner(v, v)
    }

    /// Inner product of raw coordinate slices with a dimension check.
    pub fn inner_slice<T: Real>(&self, v: &[T], w: &[T]) -> Result<T> {
        for len in [v.len(), w.len()] {
            if len != self.dimension {
                return Err(GeomError::DimensionMismatch {
                    expected: self.dimension,
                    got: len,
                });
            }
        }
        let mut acc = T::zero();
        for (i, (a, b)) in v.iter().zip(w).enumerate() {
            if i == 0 && self.signature == 1 {
                acc = acc - *a * *b;
            } else {
                acc = acc + *a * *b;
            }
        }
        Ok(acc)
    }

    /// Embeds raw coordinates, rejecting the wrong length.
    pub fn vector<T: Real>(&self, coords: &[T]) -> Result<Vec5<T>> {
        if coords.len() != self.dimension {
            return Err(GeomError::DimensionMismatch {
                expected: self.dimension,
                got: coords.len(),
            });
        }
        let mut v = Vec5::zero();
        for (i, c) in coords.iter().enumerate() {
            v[i] = *c;
        }
        Ok(v)
    }

    /// Standard basis vector `e_{i+1}` of this space.
    pub fn basis<S: Scalar>(&self, i: usize) -> Vec5<S> {
        assert!(i < self.dimension);
        let mut v = Vec5::zero();
        v[i] = S::one();
        v
    }
}

/// `n_i = det[e_i; a; b; c]` in `R^4`.
pub fn cross4<S: Scalar>(a: &Vec5<S>, b: &Vec5<S>, c: &Vec5<S>) -> Vec5<S> {
    let m = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    Vec5::from4([m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2)])
}

/// Unit normal of a surface in `S^3` from `(g, g_x, g_y)`.
pub fn unit_normal_s3<S: Scalar>(g: &Vec5<S>, gx: &Vec5<S>, gy: &Vec5<S>) -> Vec5<S> {
    let n = cross4(g, gx, gy);
    n.scale(n.dot(&n).sqrt().recip())
}

/// Five-component ambient vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec5<S>(pub [S; 5]);

impl<S: Scalar> Vec5<S> {
    pub fn zero() -> Self {
        Vec5([S::zero(); 5])
    }
    pub fn new(c: [S; 5]) -> Self {
        Vec5(c)
    }
    pub fn from4(c: [S; 4]) -> Self {
        Vec5([c[0], c[1], c[2], c[3], S::zero()])
    }
    pub fn lift(v: &Vec5<S::Base>) -> Self {
        v.map_to(S::lift)
    }
    pub fn map_to<R: Copy>(&self, f: impl Fn(S) -> R) -> Vec5<R> {
        Vec5([
            f(self.0[0]),
            f(self.0[1]),
            f(self.0[2]),
            f(self.0[3]),
            f(self.0[4]),
        ])
    }
    pub fn scale(&self, s: S) -> Self {
        self.map_to(|c| c * s)
    }
    /// Euclidean dot product of the coordinates, regardless of signature.
    pub fn dot(&self, o: &Self) -> S {
        self.0
            .iter()
            .zip(&o.0)
            .fold(S::zero(), |acc, (a, b)| acc + *a * *b)
    }
    pub fn base(&self) -> Vec5<S::Base> {
        self.map_to(|c| c.base())
    }
}

impl<T: Real> Vec5<T> {
    pub fn norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc + *c * *c).sqrt()
    }
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc.max(c.abs()))
    }
}

impl<S> Index<usize> for Vec5<S> {
    type Output = S;
    #[inline]
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vec5<S> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Add for Vec5<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Vec5(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl<S: Scalar> AddAssign for Vec5<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> Sub for Vec5<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Vec5(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl<S: Scalar> Neg for Vec5<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_to(|c| -c)
    }
}

impl<S: Scalar> Mul<S> for Vec5<S> {
    type Output = Self;
    #[inline]
    fn mul(self, s: S) -> Self {
        self.scale(s)
    }
}

/// Value, first and second partial derivatives of a map of the disc at one
/// parameter point. `d2` holds `[xx, xy, yy]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2Point<T> {
    pub value: Vec5<T>,
    pub d1: [Vec5<T>; 2],
    pub d2: [Vec5<T>; 3],
}

impl<T: Real> Jet2Point<T> {
    pub fn from_jets(v: &Vec5<Jet<T>>) -> Self {
        Jet2Point {
            value: v.map_to(|c| c.v),
            d1: [v.map_to(|c| c.d[0]), v.map_to(|c| c.d[1])],
            d2: [
                v.map_to(|c| c.h[0]),
                v.map_to(|c| c.h[1]),
                v.map_to(|c| c.h[2]),
            ],
        }
    }

    pub fn to_jets(&self) -> Vec5<Jet<T>> {
        Vec5(std::array::from_fn(|i| Jet {
            v: self.value[i],
            d: [self.d1[0][i], self.d1[1][i]],
            h: [self.d2[0][i], self.d2[1][i], self.d2[2][i]],
        }))
    }

    /// Second derivative `∂_i ∂_j` for `i, j ∈ {0, 1}`.
    pub fn second(&self, i: usize, j: usize) -> Vec5<T> {
        self.d2[i + j]
    }

    /// Worst violation of `<g,g> = c` and `<g, ∂_i g> = 0`.
    pub fn quadric_residual(&self, space: &AmbientSpace) -> T {
        if !space.has_quadric() {
            return T::zero();
        }
        let c = T::from_i8(space.quadric_constant()).unwrap();
        let mut r = (space.inner(&self.value, &self.value) - c).abs();
        for d in &self.d1 {
            r = r.max(space.inner(&self.value, d).abs());
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn index_one_form_values() {
        let s = AmbientSpace::de_sitter4();
        let e1: Vec5<f64> = s.basis(0);
        let e2: Vec5<f64> = s.basis(1);
        assert_eq!(s.inner(&e1, &e1), -1.0);
        assert_eq!(s.inner(&e2, &e2), 1.0);
        let v = Vec5([1.0, 1.0, 0.0, 0.0, 0.0]);
        let w = Vec5([1.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.inner(&v, &w), 1.0);
    }

    #[test]
    fn slice_inner_checks_dimension() {
        let s = AmbientSpace::euclidean4();
        assert!(matches!(
            s.inner_slice(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            Err(GeomError::DimensionMismatch {
                expected: 4,
                got: 3
            })
        ));
        assert_eq!(
            s.inner_slice(&[1.0, 2.0, 0.0, 1.0], &[3.0, 1.0, 5.0, 1.0])
                .unwrap(),
            6.0
        );
    }

    #[test]
    fn invalid_spaces_rejected() {
        assert!(AmbientSpace::new(4, 1, 0).is_err());
        assert!(AmbientSpace::new(3, 0, 0).is_err());
        assert!(AmbientSpace::new(5, 0, 2).is_err());
        assert_eq!(
            AmbientSpace::new(5, 1, -1).unwrap(),
            AmbientSpace::hyperbolic4()
        );
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(
            a in prop::array::uniform5(-10.0f64..10.0),
            b in prop::array::uniform5(-10.0f64..10.0),
            c in prop::array::uniform5(-10.0f64..10.0),
            k in -5.0f64..5.0,
            s in 0u8..2,
        ) {
            let space = AmbientSpace::new(5, s, 0).unwrap();
            let (a, b, c) = (Vec5(a), Vec5(b), Vec5(c));
            let ab = space.inner(&a, &b);
            prop_assert!((ab - space.inner(&b, &a)).abs() < 1e-12);
            let lhs = space.inner(&(a * k + c), &b);
            let rhs = k * ab + space.inner(&c, &b);
            prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
