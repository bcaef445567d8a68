//! Exact polynomials and rational functions over `Q(i)`.

use crate::complex::Cx;
use crate::error::{GeomError, Result};
use crate::scalar::Scalar;
use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = Rational64;
/// Gaussian rational.
pub type Qi = Complex<Q>;

pub fn qi(re: i64, im: i64) -> Qi {
    Complex::new(Q::from_integer(re), Q::from_integer(im))
}

pub fn qi_ratio(re: (i64, i64), im: (i64, i64)) -> Qi {
    Complex::new(Q::new(re.0, re.1), Q::new(im.0, im.1))
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn qi_to_c64(c: &Qi) -> Complex64 {
    Complex64::new(to_f64(&c.re), to_f64(&c.im))
}

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Qi>);

impl Poly {
    pub fn new(mut coeffs: Vec<Qi>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn constant(c: Qi) -> Self {
        Poly::new(vec![c])
    }
    pub fn one() -> Self {
        Poly::constant(Qi::one())
    }
    /// `c z^n`.
    pub fn monomial(c: Qi, n: usize) -> Self {
        let mut v = vec![Qi::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }
    pub fn coeffs(&self) -> &[Qi] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn leading(&self) -> Qi {
        self.0.last().copied().unwrap_or_else(Qi::zero)
    }
    pub fn scale(&self, c: Qi) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(Qi::one() / self.leading())
    }
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(k as i64))
                .collect(),
        )
    }

    /// Euclidean division `self = q d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d
            .degree()
            .ok_or_else(|| GeomError::Domain("polynomial division by zero".into()))?;
        let mut r = self.0.clone();
        let lead = d.leading();
        let mut q = vec![Qi::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r[r.len() - 1] / lead;
            q[k] = c;
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] = r[k + i] - c * dc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree factorisation `p = c Π f_i^i`, returned as `(f_i, i)`
    /// with non-constant monic `f_i`.
    pub fn squarefree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic();
        let b = a.derivative();
        let c = Poly::gcd(&a, &b);
        let mut w = a.divrem(&c).expect("gcd nonzero").0;
        let mut y = b.divrem(&c).expect("gcd nonzero").0;
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let d = Poly::gcd(&w, &z);
            if d.degree().unwrap_or(0) > 0 {
                out.push((d.clone(), i));
            }
            w = w.divrem(&d).expect("gcd nonzero").0;
            y = z.divrem(&d).expect("gcd nonzero").0;
            z = &y - &w.derivative();
            i += 1;
        }
        out
    }

    /// Roots of a squarefree polynomial by Durand–Kerner iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(n) if n > 0 => n,
            _ => return Vec::new(),
        };
        let m = self.monic();
        let c: Vec<Complex64> = m.0.iter().map(qi_to_c64).collect();
        if n == 1 {
            return vec![-c[0]];
        }
        let eval = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, a| acc * z + a);
        let seed = Complex64::new(0.4, 0.9);
        let mut r: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
        for _ in 0..1000 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut den = Complex64::one();
                for j in 0..n {
                    if i != j {
                        den *= r[i] - r[j];
                    }
                }
                let step = eval(r[i]) / den;
                r[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 {
                break;
            }
        }
        r
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, a| acc * z + qi_to_c64(a))
    }

    /// Horner evaluation over any scalar.
    pub fn eval<S: Scalar>(&self, z: Cx<S>) -> Cx<S> {
        self.0.iter().rev().fold(Cx::zero(), |acc, a| {
            acc * z + Cx::lift(to_f64(&a.re), to_f64(&a.im))
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or_else(Qi::zero)
                        + o.0.get(i).copied().unwrap_or_else(Qi::zero)
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Qi::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j] + a * b;
            }
        }
        Poly::new(v)
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_qi(c: &Qi) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_q(&c.re),
        (true, false) => format!("{}i", fmt_q(&c.im)),
        (false, false) => format!("({} + {}i)", fmt_q(&c.re), fmt_q(&c.im)),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_qi(c),
                1 => format!("{}*z", fmt_qi(c)),
                _ => format!("{}*z^{}", fmt_qi(c), k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(GeomError::Domain(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RatFn {
                num,
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let num = num.divrem(&g)?.0;
        let den = den.divrem(&g)?.0;
        let lead = den.leading();
        Ok(RatFn {
            num: num.scale(Qi::one() / lead),
            den: den.monic(),
        })
    }
    pub fn poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }
    pub fn scale(&self, c: Qi) -> Self {
        RatFn::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFn::new(n, &self.den * &self.den).expect("nonzero denominator")
    }
    pub fn add(&self, o: &RatFn) -> Self {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFn::new(n, &self.den * &o.den).expect("nonzero denominator")
    }
    pub fn sub(&self, o: &RatFn) -> Self {
        let n = &(&self.num * &o.den) - &(&o.num * &self.den);
        RatFn::new(n, &self.den * &o.den).expect("nonzero denominator")
    }
    pub fn mul(&self, o: &RatFn) -> Self {
        RatFn::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
    pub fn div(&self, o: &RatFn) -> Result<Self> {
        if o.is_zero() {
            return Err(GeomError::Domain("division by the zero function".into()));
        }
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    /// Value at `z`; a pole is a domain error.
    pub fn eval<S: Scalar>(&self, z: Cx<S>) -> Result<Cx<S>> {
        let d = self.den.eval(z);
        let dn = d.norm_sq().base();
        if !(dn > <S::Base as Zero>::zero()) {
            return Err(GeomError::Domain("evaluation at a pole".into()));
        }
        Ok(self.num.eval(z) / d)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
