//! Scalar types.
//!
//! [`Real`] is the floating-point base (`f32` or `f64`). [`Scalar`] is what
//! closed-form maps are written against: it is implemented by the base types
//! and by the forward-mode types [`Dual`] (value + gradient in two variables)
//! and [`Jet`] (value + gradient + Hessian in two variables). Nesting them,
//! e.g. `Dual<Jet<f64>>`, yields third-order information where a construction
//! needs derivatives of derivatives (Gauss maps, normal frames).

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Floating-point base type.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn cst(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field element supporting the elementary functions used by the gallery.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Base: Real;

    fn lift(b: Self::Base) -> Self;
    /// The value part, with all derivative information dropped.
    fn base(&self) -> Self::Base;

    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;

    fn cst(x: f64) -> Self {
        Self::lift(<Self::Base as Real>::cst(x))
    }
    fn zero() -> Self {
        Self::lift(<Self::Base as num_traits::Zero>::zero())
    }
    fn one() -> Self {
        Self::lift(<Self::Base as num_traits::One>::one())
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn scale(self, b: Self::Base) -> Self {
        self * Self::lift(b)
    }
    fn square(self) -> Self {
        self * self
    }
}

impl<T: Real> Scalar for T {
    type Base = T;
    #[inline]
    fn lift(b: T) -> Self {
        b
    }
    #[inline]
    fn base(&self) -> T {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        Float::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        Float::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        Float::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        Float::ln(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        Float::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        Float::cosh(self)
    }
}

/// First-order forward-mode number in two variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    pub v: S,
    pub d: [S; 2],
}

impl<S: Scalar> Dual<S> {
    pub fn constant(v: S) -> Self {
        Dual {
            v,
            d: [S::zero(), S::zero()],
        }
    }

    /// The independent variable with index `i` (0 or 1) at value `v`.
    pub fn var(v: S, i: usize) -> Self {
        let mut d = [S::zero(), S::zero()];
        d[i] = S::one();
        Dual { v, d }
    }

    #[inline]
    fn chain(self, f0: S, f1: S) -> Self {
        Dual {
            v: f0,
            d: [f1 * self.d[0], f1 * self.d[1]],
        }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Dual {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
        }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Dual {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1]],
        }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Dual {
            v: self.v * o.v,
            d: [
                self.v * o.d[0] + self.d[0] * o.v,
                self.v * o.d[1] + self.d[1] * o.v,
            ],
        }
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = o.v.recip();
        self * o.chain(inv, -(inv * inv))
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual {
            v: -self.v,
            d: [-self.d[0], -self.d[1]],
        }
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    type Base = S::Base;
    fn lift(b: S::Base) -> Self {
        Dual::constant(S::lift(b))
    }
    fn base(&self) -> S::Base {
        self.v.base()
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, (r + r).recip())
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), self.v.recip())
    }
    fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh())
    }
    fn cosh(self) -> Self {
        self.chain(self.v.cosh(), self.v.sinh())
    }
}

/// Second-order forward-mode number in two variables. The Hessian is stored
/// as `[xx, xy, yy]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<S> {
    pub v: S,
    pub d: [S; 2],
    pub h: [S; 3],
}

impl<S: Scalar> Jet<S> {
    pub fn constant(v: S) -> Self {
        let z = S::zero();
        Jet {
            v,
            d: [z, z],
            h: [z, z, z],
        }
    }

    pub fn var(v: S, i: usize) -> Self {
        let mut j = Jet::constant(v);
        j.d[i] = S::one();
        j
    }

    #[inline]
    fn chain(self, f0: S, f1: S, f2: S) -> Self {
        let [dx, dy] = self.d;
        let [hxx, hxy, hyy] = self.h;
        Jet {
            v: f0,
            d: [f1 * dx, f1 * dy],
            h: [
                f1 * hxx + f2 * dx * dx,
                f1 * hxy + f2 * dx * dy,
                f1 * hyy + f2 * dy * dy,
            ],
        }
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Jet {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
            h: [self.h[0] + o.h[0], self.h[1] + o.h[1], self.h[2] + o.h[2]],
        }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Jet {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1]],
            h: [self.h[0] - o.h[0], self.h[1] - o.h[1], self.h[2] - o.h[2]],
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Jet {
            v: a.v * b.v,
            d: [a.v * b.d[0] + a.d[0] * b.v, a.v * b.d[1] + a.d[1] * b.v],
            h: [
                a.v * b.h[0] + a.h[0] * b.v + a.d[0] * b.d[0] + a.d[0] * b.d[0],
                a.v * b.h[1] + a.h[1] * b.v + a.d[0] * b.d[1] + a.d[1] * b.d[0],
                a.v * b.h[2] + a.h[2] * b.v + a.d[1] * b.d[1] + a.d[1] * b.d[1],
            ],
        }
    }
}

impl<S: Scalar> Div for Jet<S> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = o.v.recip();
        let inv2 = inv * inv;
        self * o.chain(inv, -inv2, (inv2 + inv2) * inv)
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Jet {
            v: -self.v,
            d: [-self.d[0], -self.d[1]],
            h: [-self.h[0], -self.h[1], -self.h[2]],
        }
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    type Base = S::Base;
    fn lift(b: S::Base) -> Self {
        Jet::constant(S::lift(b))
    }
    fn base(&self) -> S::Base {
        self.v.base()
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let f1 = (r + r).recip();
        // f'' = -1 / (4 r^3)
        let f2 = -(f1 * f1 * f1) * S::cst(2.0);
        self.chain(r, f1, f2)
    }
    fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let inv = self.v.recip();
        self.chain(self.v.ln(), inv, -(inv * inv))
    }
    fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }
    fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }
}
