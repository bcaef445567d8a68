//! 2×2 and 3×3 matrices and their symmetric eigendecompositions.

use crate::error::{GeomError, Result};
use crate::scalar::Real;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Real> Mat2<T> {
    pub fn zero() -> Self {
        Mat2([[T::zero(); 2]; 2])
    }
    pub fn identity() -> Self {
        Mat2::diag(T::one(), T::one())
    }
    pub fn diag(a: T, b: T) -> Self {
        Mat2([[a, T::zero()], [T::zero(), b]])
    }
    pub fn symmetric(a: T, b: T, d: T) -> Self {
        Mat2([[a, b], [b, d]])
    }
    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1]
    }
    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }
    pub fn scale(&self, s: T) -> Self {
        Mat2(self.0.map(|r| r.map(|c| c * s)))
    }
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]))
    }
    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }
    pub fn frobenius(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, c| a + *c * *c)
            .sqrt()
    }
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, c| a.max(c.abs()))
    }
    pub fn asymmetry(&self) -> T {
        (self.0[0][1] - self.0[1][0]).abs()
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + o.0[i][j])
        }))
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - o.0[i][j])
        }))
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j])
        }))
    }
}

impl<T: Real> Mat3<T> {
    pub fn zero() -> Self {
        Mat3([[T::zero(); 3]; 3])
    }
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = T::one();
        }
        m
    }
    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }
    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }
    pub fn transpose(&self) -> Self {
        Mat3::from_fn(|i, j| self.0[j][i])
    }
    pub fn symmetrized(&self) -> Self {
        let half = T::cst(0.5);
        Mat3::from_fn(|i, j| (self.0[i][j] + self.0[j][i]) * half)
    }
    pub fn frobenius_sq(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |a, c| a + *c * *c)
    }
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |a, c| a.max(c.abs()))
    }
    pub fn asymmetry(&self) -> T {
        let mut r = T::zero();
        for i in 0..3 {
            for j in 0..i {
                r = r.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        r
    }
    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        std::array::from_fn(|i| (0..3).fold(T::zero(), |a, k| a + self.0[i][k] * v[k]))
    }
    pub fn column(&self, j: usize) -> [T; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    /// Lower-triangular `L` with `L Lᵀ = self`, for symmetric positive
    /// definite input.
    pub fn cholesky(&self) -> Option<Self> {
        let a = &self.0;
        let mut l = Self::zero();
        for i in 0..3 {
            for j in 0..=i {
                let mut s = a[i][j];
                for k in 0..j {
                    s = s - l.0[i][k] * l.0[j][k];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return None;
                    }
                    l.0[i][i] = s.sqrt();
                } else {
                    l.0[i][j] = s / l.0[j][j];
                }
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Self {
        let l = &self.0;
        let mut inv = Self::zero();
        for j in 0..3 {
            inv.0[j][j] = T::one() / l[j][j];
            for i in j + 1..3 {
                let mut s = T::zero();
                for k in j..i {
                    s = s + l[i][k] * inv.0[k][j];
                }
                inv.0[i][j] = -s / l[i][i];
            }
        }
        inv
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let adj = Mat3([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ]);
        Some(Mat3::from_fn(|i, j| adj.0[i][j] / d))
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Mat3::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Mat3::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat3::from_fn(|i, j| (0..3).fold(T::zero(), |a, k| a + self.0[i][k] * o.0[k][j]))
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEigen<T, const N: usize> {
    pub values: [T; N],
    pub vectors: [[T; N]; N],
}

fn check_symmetric<T: Real>(asym: T, scale: T, tol: T) -> Result<()> {
    if asym > tol * scale.max(T::one()) {
        return Err(GeomError::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Symmetric 2×2 eigendecomposition in closed form.
pub fn eigen2_sym<T: Real>(m: &Mat2<T>, sym_tol: T) -> Result<SymEigen<T, 2>> {
    check_symmetric(m.asymmetry(), m.max_abs(), sym_tol)?;
    let half = T::cst(0.5);
    let (a, d) = (m.0[0][0], m.0[1][1]);
    let b = (m.0[0][1] + m.0[1][0]) * half;
    let mean = (a + d) * half;
    let r = ((a - d) * half).hypot(b);
    let theta = if r == T::zero() {
        T::zero()
    } else {
        half * (b + b).atan2(a - d)
    };
    let (s, c) = theta.sin_cos();
    Ok(SymEigen {
        values: [mean + r, mean - r],
        vectors: [[c, s], [-s, c]],
    })
}

/// Symmetric 3×3 eigendecomposition by cyclic Jacobi rotations.
pub fn eigen3_sym<T: Real>(m: &Mat3<T>, sym_tol: T) -> Result<SymEigen<T, 3>> {
    check_symmetric(m.asymmetry(), m.max_abs(), sym_tol)?;
    let mut a = m.symmetrized().0;
    let mut v = Mat3::<T>::identity().0;
    let scale = m.max_abs();
    for _sweep in 0..64 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off <= T::epsilon() * T::epsilon() * scale || off == T::zero() {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == T::zero() {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (a[p][q] + a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for k in 0..3 {
                let (vkp, vkq) = (v[k][p], v[k][q]);
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        a[j][j]
            .partial_cmp(&a[i][i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(SymEigen {
        values: order.map(|i| a[i][i]),
        vectors: order.map(|i| [v[0][i], v[1][i], v[2][i]]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigen2_diagonal_and_swap() {
        let e = eigen2_sym(&Mat2::<f64>::diag(3.0, 1.0), 1e-12).unwrap();
        assert_eq!(e.values, [3.0, 1.0]);
        assert_eq!(e.vectors[0], [1.0, 0.0]);
        let e = eigen2_sym(&Mat2::<f64>::symmetric(0.0, 1.0, 0.0), 1e-12).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[0][0] - r).abs() < 1e-15 && (e.vectors[0][1] - r).abs() < 1e-15);
        assert!((e.vectors[1][0] + r).abs() < 1e-15 && (e.vectors[1][1] - r).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = Mat2([[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(
            eigen2_sym(&m, 1e-8),
            Err(GeomError::NotSymmetric(_))
        ));
        let m3 = Mat3([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(eigen3_sym(&m3, 1e-8).is_err());
    }

    fn reconstruct3(e: &SymEigen<f64, 3>) -> Mat3<f64> {
        Mat3::from_fn(|i, j| {
            (0..3)
                .map(|k| e.vectors[k][i] * e.values[k] * e.vectors[k][j])
                .sum()
        })
    }

    #[test]
    fn random_symmetric_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut m = Mat3::zero();
            for i in 0..3 {
                for j in 0..=i {
                    let x: f64 = rng.gen_range(-5.0..5.0);
                    m.0[i][j] = x;
                    m.0[j][i] = x;
                }
            }
            let e = eigen3_sym(&m, 1e-12).unwrap();
            assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
            let r = reconstruct3(&e);
            assert!((r - m).max_abs() < 1e-10 * m.max_abs().max(1.0));
            for k in 0..3 {
                let mv = m.apply(e.vectors[k]);
                for i in 0..3 {
                    assert!(
                        (mv[i] - e.values[k] * e.vectors[k][i]).abs()
                            < 1e-10 * m.max_abs().max(1.0)
                    );
                }
            }
            let a = rng.gen_range(-5.0..5.0);
            let b = rng.gen_range(-5.0..5.0);
            let d = rng.gen_range(-5.0..5.0);
            let m2: Mat2<f64> = Mat2::symmetric(a, b, d);
            let e2 = eigen2_sym(&m2, 1e-12).unwrap();
            let r2 = Mat2(std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..2)
                        .map(|k| e2.vectors[k][i] * e2.values[k] * e2.vectors[k][j])
                        .sum()
                })
            }));
            assert!((r2 - m2).max_abs() < 1e-10 * m2.max_abs().max(1.0));
        }
    }

    #[test]
    fn cholesky_and_inverse() {
        let m = Mat3([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]);
        let l = m.cholesky().unwrap();
        assert!((l * l.transpose() - m).max_abs() < 1e-14);
        assert!((l.lower_inverse() * l - Mat3::identity()).max_abs() < 1e-14);
        assert!((m.inverse().unwrap() * m - Mat3::identity()).max_abs() < 1e-14);
        assert!(Mat3([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
            .cholesky()
            .is_none());
    }
}
