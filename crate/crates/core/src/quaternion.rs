//! Quaternions and the twistor projection `CP^3 -> HP^1 = S^4`.
//!
//! `C^4` is identified with `H^2` by `(z1, z2, z3, z4) -> (z1 + z2 j, z3 + z4 j)`.
//! Quaternionic lines are left lines `{(λ q1, λ q2)}` and the point
//! `[q1 : q2]` is sent to `(2 q̄1 q2, |q1|^2 - |q2|^2) / (|q1|^2 + |q2|^2)`,
//! which in the chart `q = q1^{-1} q2` is the inverse stereographic
//! projection `(2q, 1 - |q|^2) / (1 + |q|^2)`.

use crate::error::{GeomError, Result};
use crate::geom::Vec5;
use crate::scalar::{Real, Scalar};
use std::ops::{Add, Mul, Neg, Sub};

/// `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<S> {
    pub w: S,
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Quaternion<S> {
    pub fn new(w: S, x: S, y: S, z: S) -> Self {
        Quaternion { w, x, y, z }
    }

    /// `a + b j` for complex `a = (a_re, a_im)`, `b = (b_re, b_im)`.
    pub fn from_complex_pair(a: [S; 2], b: [S; 2]) -> Self {
        Quaternion {
            w: a[0],
            x: a[1],
            y: b[0],
            z: b[1],
        }
    }

    pub fn conj(&self) -> Self {
        Quaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn norm_sq(&self) -> S {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn scale(&self, s: S) -> Self {
        Quaternion {
            w: self.w * s,
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    pub fn inverse(&self) -> Self {
        self.conj().scale(self.norm_sq().recip())
    }

    pub fn components(&self) -> [S; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl<T: Real> Quaternion<T> {
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }
}

impl<S: Scalar> Add for Quaternion<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion {
            w: self.w + o.w,
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl<S: Scalar> Sub for Quaternion<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion {
            w: self.w - o.w,
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl<S: Scalar> Mul for Quaternion<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Quaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
    }
}

/// Twistor projection of `[z1 : z2 : z3 : z4]`, given as
/// `[re z1, im z1, ..., re z4, im z4]`, onto the unit sphere of `R^5`.
///
/// Works for any [`Scalar`], so jets of a holomorphic curve push forward
/// to jets of the projected surface. The caller is responsible for `p != 0`;
/// see [`penrose_project`] for the checked version.
pub fn penrose<S: Scalar>(p: &[S; 8]) -> Vec5<S> {
    let q1 = Quaternion::from_complex_pair([p[0], p[1]], [p[2], p[3]]);
    let q2 = Quaternion::from_complex_pair([p[4], p[5]], [p[6], p[7]]);
    let (n1, n2) = (q1.norm_sq(), q2.norm_sq());
    let inv = (n1 + n2).recip();
    let c = q1.conj() * q2;
    let two = S::cst(2.0);
    Vec5([
        two * c.w * inv,
        two * c.x * inv,
        two * c.y * inv,
        two * c.z * inv,
        (n1 - n2) * inv,
    ])
}

/// Checked twistor projection of complex homogeneous coordinates.
pub fn penrose_project<T: Real>(z: &[[T; 2]; 4]) -> Result<Vec5<T>> {
    let p: [T; 8] = std::array::from_fn(|i| z[i / 2][i % 2]);
    let n = p.iter().fold(T::zero(), |a, c| a + *c * *c);
    if !(n > T::zero()) || !n.is_finite() {
        return Err(GeomError::Domain(
            "twistor projection of the zero vector".into(),
        ));
    }
    Ok(penrose(&p))
}
