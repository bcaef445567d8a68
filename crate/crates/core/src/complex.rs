//! Complex numbers over any [`Scalar`], so holomorphic maps can be evaluated
//! on jets.

use crate::scalar::Scalar;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Cx<S> {
    pub fn new(re: S, im: S) -> Self {
        Cx { re, im }
    }
    pub fn real(re: S) -> Self {
        Cx { re, im: S::zero() }
    }
    pub fn zero() -> Self {
        Cx::real(S::zero())
    }
    pub fn one() -> Self {
        Cx::real(S::one())
    }
    pub fn lift(re: f64, im: f64) -> Self {
        Cx {
            re: S::cst(re),
            im: S::cst(im),
        }
    }
    pub fn conj(self) -> Self {
        Cx {
            re: self.re,
            im: -self.im,
        }
    }
    pub fn norm_sq(self) -> S {
        self.re * self.re + self.im * self.im
    }
    pub fn scale(self, s: S) -> Self {
        Cx {
            re: self.re * s,
            im: self.im * s,
        }
    }
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Cx::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
    pub fn exp(self) -> Self {
        let r = self.re.exp();
        Cx {
            re: r * self.im.cos(),
            im: r * self.im.sin(),
        }
    }
    pub fn sinh(self) -> Self {
        Cx {
            re: self.re.sinh() * self.im.cos(),
            im: self.re.cosh() * self.im.sin(),
        }
    }
    pub fn cosh(self) -> Self {
        Cx {
            re: self.re.cosh() * self.im.cos(),
            im: self.re.sinh() * self.im.sin(),
        }
    }
}

impl<S: Scalar> Add for Cx<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cx {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl<S: Scalar> Sub for Cx<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cx {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl<S: Scalar> Neg for Cx<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Cx {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<S: Scalar> Mul for Cx<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Cx {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl<S: Scalar> Div for Cx<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.norm_sq().recip();
        (self * o.conj()).scale(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Jet;

    #[test]
    fn holomorphic_jets_satisfy_cauchy_riemann() {
        let z = Cx::new(Jet::var(0.3f64, 0), Jet::var(-0.4f64, 1));
        let w = (z.powi(3) + z.sinh()) / (z + Cx::lift(2.0, 1.0));
        assert!((w.re.d[0] - w.im.d[1]).abs() < 1e-13);
        assert!((w.re.d[1] + w.im.d[0]).abs() < 1e-13);
        assert!((w.re.h[0] + w.re.h[2]).abs() < 1e-12);
    }

    #[test]
    fn exp_of_i_pi() {
        let w = Cx::new(0.0f64, std::f64::consts::PI).exp();
        assert!((w.re + 1.0).abs() < 1e-15 && w.im.abs() < 1e-15);
        let c = Cx::new(0.7f64, 0.2);
        let lhs = c.cosh() * c.cosh() - c.sinh() * c.sinh();
        assert!((lhs.re - 1.0).abs() < 1e-14 && lhs.im.abs() < 1e-14);
    }
}
