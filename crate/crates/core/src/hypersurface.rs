//! Analysis of an immersed 3-manifold `f: M^3 -> Q^4_c`.
//!
//! Given position, first derivatives and the unit normal with its first
//! derivatives, this module extracts the shape operator from the
//! Weingarten relation `dξ = -df∘A`, the principal frame, the structure
//! functions `u = ω12(e3)`, `v = ω12(e1)` with their first-order system,
//! the nullity leaves and the totally geodesic locus.

use crate::config::Tolerances;
use crate::error::{GeomError, Result};
use crate::geom::{AmbientSpace, Vec5};
use crate::linalg::{eigen3_sym, Mat3};
use crate::scalar::Real;
use rayon::prelude::*;
use std::collections::VecDeque;

/// Position, differential, unit normal and its differential at a point of
/// the parameter domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperJet<T> {
    pub position: Vec5<T>,
    pub df: [Vec5<T>; 3],
    pub xi: Vec5<T>,
    pub dxi: [Vec5<T>; 3],
}

/// An immersed 3-manifold in a space form, parametrised over a box.
pub trait Hypersurface3<T: Real>: Send + Sync {
    fn name(&self) -> &str;
    fn ambient(&self) -> AmbientSpace;
    /// `[[lo, hi]; 3]`.
    fn domain(&self) -> [[T; 2]; 3];
    fn jet(&self, p: [T; 3]) -> Result<HyperJet<T>>;

    /// Whether `p` is an admissible parameter (defaults to the box).
    fn contains(&self, p: [T; 3]) -> bool {
        let d = self.domain();
        (0..3).all(|i| p[i] >= d[i][0] && p[i] <= d[i][1])
    }
    fn position(&self, p: [T; 3]) -> Result<Vec5<T>> {
        Ok(self.jet(p)?.position)
    }
    /// Curvature `c` of the space form.
    fn space_form(&self) -> i8 {
        self.ambient().quadric_constant()
    }
}

type PointFn<T> = dyn Fn([T; 3]) -> Result<(Vec5<T>, Vec5<T>)> + Send + Sync;

/// Value-only hypersurface `p -> (f(p), ξ(p))` differentiated by
/// Richardson-extrapolated central differences.
pub struct FdHypersurface<T: Real> {
    name: String,
    ambient: AmbientSpace,
    domain: [[T; 2]; 3],
    f: Box<PointFn<T>>,
    step: T,
}

impl<T: Real> FdHypersurface<T> {
    pub fn new(
        name: impl Into<String>,
        ambient: AmbientSpace,
        domain: [[T; 2]; 3],
        step: T,
        f: impl Fn([T; 3]) -> Result<(Vec5<T>, Vec5<T>)> + Send + Sync + 'static,
    ) -> Self {
        FdHypersurface {
            name: name.into(),
            ambient,
            domain,
            f: Box::new(f),
            step,
        }
    }
}

impl<T: Real> Hypersurface3<T> for FdHypersurface<T> {
    fn name(&self) -> &str {
        &self.name
    }
    fn ambient(&self) -> AmbientSpace {
        self.ambient
    }
    fn domain(&self) -> [[T; 2]; 3] {
        self.domain
    }
    fn jet(&self, p: [T; 3]) -> Result<HyperJet<T>> {
        let (position, xi) = (self.f)(p)?;
        let mut df = [Vec5::zero(); 3];
        let mut dxi = [Vec5::zero(); 3];
        for k in 0..3 {
            let d = |h: T| -> Result<(Vec5<T>, Vec5<T>)> {
                let (mut a, mut b) = (p, p);
                a[k] = a[k] + h;
                b[k] = b[k] - h;
                let (fa, xa) = (self.f)(a)?;
                let (fb, xb) = (self.f)(b)?;
                let s = (h + h).recip();
                Ok(((fa - fb).scale(s), (xa - xb).scale(s)))
            };
            let (c0, c1) = d(self.step)?;
            let (f0, f1) = d(self.step * T::cst(0.5))?;
            let r = |c: Vec5<T>, f: Vec5<T>| (f.scale(T::cst(4.0)) - c).scale(T::cst(1.0 / 3.0));
            df[k] = r(c0, f0);
            dxi[k] = r(c1, f1);
        }
        Ok(HyperJet {
            position,
            df,
            xi,
            dxi,
        })
    }
}

/// Curvature data at one point.
#[derive(Clone, Debug)]
pub struct HypersurfaceSample<T> {
    pub p: [T; 3],
    pub position: Vec5<T>,
    pub xi: Vec5<T>,
    /// Shape operator in an orthonormal frame, symmetrised.
    pub shape: Mat3<T>,
    /// Asymmetry of the orthonormal-frame operator before symmetrisation.
    pub asymmetry: T,
    /// `k1 >= k2 >= k3`.
    pub curvatures: [T; 3],
    pub mean: T,
    pub s: T,
    pub gauss_kronecker: T,
    /// Metric-orthonormal principal directions in parameter space.
    pub directions: [[T; 3]; 3],
    /// `df(e_i)` in the ambient space.
    pub frame: [Vec5<T>; 3],
    /// Index of the principal curvature of least magnitude.
    pub nullity: usize,
    /// Largest `|<ξ, df_i>|` and `|<ξ,ξ> - 1|`.
    pub normal_residual: T,
    /// Filled in by [`structure_residuals`].
    pub connection: Option<[[[T; 3]; 3]; 3]>,
}

impl<T: Real> HypersurfaceSample<T> {
    pub fn nullity_direction(&self) -> [T; 3] {
        self.directions[self.nullity]
    }
    /// `H`, `S` and `K` recomputed from the eigenvalues.
    pub fn symmetric_functions(&self) -> (T, T, T) {
        let [a, b, c] = self.curvatures;
        ((a + b + c) / T::cst(3.0), a * a + b * b + c * c, a * b * c)
    }
}

/// Shape operator, principal curvatures and frame at `p`.
pub fn sample<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    p: [T; 3],
    tol: &Tolerances,
) -> Result<HypersurfaceSample<T>> {
    let j = h.jet(p)?;
    sample_from_jet(&h.ambient(), p, &j, tol)
}

pub fn sample_from_jet<T: Real>(
    space: &AmbientSpace,
    p: [T; 3],
    j: &HyperJet<T>,
    tol: &Tolerances,
) -> Result<HypersurfaceSample<T>> {
    let m = Mat3::from_fn(|a, b| space.inner(&j.df[a], &j.df[b]));
    let b = Mat3::from_fn(|a, c| space.inner(&j.df[a], &j.dxi[c]));
    let l = m
        .cholesky()
        .ok_or_else(|| GeomError::Regularity("induced metric is not positive definite".into()))?;
    let diag: Vec<T> = (0..3).map(|i| l.0[i][i]).collect();
    let (dmin, dmax) = diag.iter().fold((T::infinity(), T::zero()), |(a, b), d| {
        (a.min(*d), b.max(*d))
    });
    if !(dmin > dmax * T::cst(1e-7)) {
        return Err(GeomError::Regularity(format!(
            "metric condition {:e}",
            (dmax / dmin).to_f64().unwrap_or(f64::INFINITY)
        )));
    }
    let li = l.lower_inverse();
    let a_hat = Mat3::from_fn(|_, _| T::zero()) - li * b * li.transpose();
    let asymmetry = a_hat.asymmetry();
    let shape = a_hat.symmetrized();
    let eig = eigen3_sym(&shape, T::cst(tol.symmetry))?;
    let lit = li.transpose();
    let directions = eig.vectors.map(|q| lit.apply(q));
    let frame = directions.map(|e| j.df[0].scale(e[0]) + j.df[1].scale(e[1]) + j.df[2].scale(e[2]));
    let curvatures = eig.values;
    let nullity = (0..3)
        .min_by(|&a, &b| {
            curvatures[a]
                .abs()
                .partial_cmp(&curvatures[b].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(1);
    let mut normal_residual = (space.inner(&j.xi, &j.xi) - T::one()).abs();
    for d in &j.df {
        normal_residual = normal_residual.max(space.inner(&j.xi, d).abs());
    }
    Ok(HypersurfaceSample {
        p,
        position: j.position,
        xi: j.xi,
        shape,
        asymmetry,
        curvatures,
        mean: shape.trace() / T::cst(3.0),
        s: shape.frobenius_sq(),
        gauss_kronecker: shape.det(),
        directions,
        frame,
        nullity,
        normal_residual,
        connection: None,
    })
}

/// Finite-difference controls for the structure computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdScheme<T> {
    /// Step for derivatives of the frame.
    pub inner: T,
    /// Step for derivatives of `u`, `v` and `log λ`.
    pub outer: T,
    /// Step for the second derivatives in the Laplacian.
    pub laplacian: T,
    /// One level of Richardson extrapolation on every difference.
    pub richardson: bool,
}

impl<T: Real> FdScheme<T> {
    pub fn from_tolerances(tol: &Tolerances) -> Self {
        FdScheme {
            inner: T::cst(tol.fd_step),
            outer: T::cst(tol.fd_step),
            laplacian: T::cst(tol.fd_outer_step),
            richardson: true,
        }
    }
    /// Same step everywhere, plain central differences.
    pub fn plain(h: T) -> Self {
        FdScheme {
            inner: h,
            outer: h,
            laplacian: h,
            richardson: false,
        }
    }
}

/// Principal frame with signs aligned to a reference frame.
#[derive(Clone, Copy, Debug)]
struct Principal<T> {
    dirs: [[T; 3]; 3],
    frame: [Vec5<T>; 3],
    lambda: T,
}

struct FrameField<'a, T: Real, H: ?Sized> {
    h: &'a H,
    tol: &'a Tolerances,
    space: AmbientSpace,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Real, H: Hypersurface3<T> + ?Sized> FrameField<'_, T, H> {
    fn principal(&self, p: [T; 3], reference: Option<&[Vec5<T>; 3]>) -> Result<Principal<T>> {
        if !self.h.contains(p) {
            return Err(GeomError::Domain(
                "stencil leaves the parameter domain".into(),
            ));
        }
        let s = sample(self.h, p, self.tol)?;
        if !(s.s > T::cst(self.tol.s_min)) {
            return Err(GeomError::Conditioning(format!(
                "totally geodesic point (S = {:e})",
                s.s
            )));
        }
        let gap = (s.curvatures[0] - s.curvatures[1]).min(s.curvatures[1] - s.curvatures[2]);
        if !(gap > T::cst(self.tol.eigen_gap)) {
            return Err(GeomError::Conditioning(format!("eigenvalue gap {gap:e}")));
        }
        let mut dirs = s.directions;
        let mut frame = s.frame;
        if let Some(r) = reference {
            for i in 0..3 {
                let c = self.space.inner(&frame[i], &r[i]);
                if !(c.abs() > T::cst(self.tol.frame_continuity)) {
                    return Err(GeomError::FrameContinuity);
                }
                if c < T::zero() {
                    dirs[i] = dirs[i].map(|x| -x);
                    frame[i] = -frame[i];
                }
            }
        }
        Ok(Principal {
            dirs,
            frame,
            lambda: s.curvatures[0],
        })
    }

    /// Central difference of `f` along the straight parameter line
    /// `p + s d`, optionally Richardson-extrapolated.
    fn diff<V, F>(&self, p: [T; 3], d: [T; 3], h: T, richardson: bool, f: F) -> Result<V>
    where
        V: Copy + std::ops::Sub<Output = V> + std::ops::Add<Output = V>,
        F: Fn([T; 3]) -> Result<V>,
        V: Scale<T>,
    {
        let at = |s: T| f([p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2]]);
        let cd = |h: T| -> Result<V> { Ok((at(h)? - at(-h)?).scale_by((h + h).recip())) };
        let c = cd(h)?;
        if !richardson {
            return Ok(c);
        }
        let fine = cd(h * T::cst(0.5))?;
        Ok(fine.scale_by(T::cst(4.0 / 3.0)) - c.scale_by(T::cst(1.0 / 3.0)))
    }

    /// `ω_ij(e_k)` table, `e_k(log λ)` and the parameter-space derivatives
    /// `D_{e_k} e_j` at `p`, frame aligned to `reference`.
    fn connection(
        &self,
        p: [T; 3],
        reference: &[Vec5<T>; 3],
        fd: &FdScheme<T>,
    ) -> Result<Connection<T>> {
        let c = self.principal(p, Some(reference))?;
        let mut table = [[[T::zero(); 3]; 3]; 3];
        let mut dlog = [T::zero(); 3];
        let mut dirs_d = [[[T::zero(); 3]; 3]; 3];
        for k in 0..3 {
            let dk = c.dirs[k];
            let de: FrameDiff<T> = self.diff(p, dk, fd.inner, fd.richardson, |q| {
                let pq = self.principal(q, Some(&c.frame))?;
                Ok(FrameDiff {
                    frame: pq.frame,
                    dirs: pq.dirs,
                    log_lambda: pq.lambda.ln(),
                })
            })?;
            for i in 0..3 {
                for jj in 0..3 {
                    table[i][jj][k] = self.space.inner(&de.frame[i], &c.frame[jj]);
                }
                dirs_d[k][i] = de.dirs[i];
            }
            dlog[k] = de.log_lambda;
        }
        Ok(Connection {
            principal: c,
            table,
            dlog,
            dirs_d,
        })
    }
}

trait Scale<T> {
    fn scale_by(self, s: T) -> Self;
}

impl<T: Real> Scale<T> for T {
    fn scale_by(self, s: T) -> Self {
        self * s
    }
}

#[derive(Clone, Copy)]
struct Pair<T>([T; 2]);

impl<T: Real> Scale<T> for Pair<T> {
    fn scale_by(self, s: T) -> Self {
        Pair(self.0.map(|x| x * s))
    }
}

impl<T: Real> std::ops::Sub for Pair<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Pair([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl<T: Real> std::ops::Add for Pair<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Pair([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

#[derive(Clone, Copy)]
struct FrameDiff<T> {
    frame: [Vec5<T>; 3],
    dirs: [[T; 3]; 3],
    log_lambda: T,
}

impl<T: Real> std::ops::Sub for FrameDiff<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        FrameDiff {
            frame: std::array::from_fn(|i| self.frame[i] - o.frame[i]),
            dirs: std::array::from_fn(|i| std::array::from_fn(|j| self.dirs[i][j] - o.dirs[i][j])),
            log_lambda: self.log_lambda - o.log_lambda,
        }
    }
}

impl<T: Real> std::ops::Add for FrameDiff<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FrameDiff {
            frame: std::array::from_fn(|i| self.frame[i] + o.frame[i]),
            dirs: std::array::from_fn(|i| std::array::from_fn(|j| self.dirs[i][j] + o.dirs[i][j])),
            log_lambda: self.log_lambda + o.log_lambda,
        }
    }
}

impl<T: Real> Scale<T> for FrameDiff<T> {
    fn scale_by(self, s: T) -> Self {
        FrameDiff {
            frame: self.frame.map(|v| v.scale(s)),
            dirs: self.dirs.map(|d| d.map(|x| x * s)),
            log_lambda: self.log_lambda * s,
        }
    }
}

struct Connection<T> {
    principal: Principal<T>,
    /// `table[i][j][k] = ω_ij(e_k)`.
    table: [[[T; 3]; 3]; 3],
    /// `e_k(log λ)`.
    dlog: [T; 3],
    /// `dirs_d[k][j] = D_{e_k} e_j` in parameter space.
    dirs_d: [[[T; 3]; 3]; 3],
}

impl<T: Real> Connection<T> {
    fn u(&self) -> T {
        self.table[0][1][2]
    }
    fn v(&self) -> T {
        self.table[0][1][0]
    }
}

/// Residuals of the connection-form identities, the first-order system for
/// `(u, v)`, the bracket relations and the harmonicity of `u`, `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureResiduals<T> {
    pub u: T,
    pub v: T,
    pub lambda: T,
    /// `table[i][j][k] = ω_ij(e_k)`.
    pub table: [[[T; 3]; 3]; 3],
    /// Nine connection-form identities, row by row in `e1, e2, e3`.
    pub connection: [T; 9],
    /// `e2(v) - (v² - u² + c)`, `e2(u) - 2uv`, `e1(u) - e3(v)`, `e3(u) + e1(v)`.
    pub pde: [T; 4],
    /// `[e1,e2]`, `[e2,e3]`, `[e1,e3]` against their frame expressions.
    pub brackets: [T; 3],
    /// `Δu`, `Δv` when requested.
    pub laplacian: Option<[T; 2]>,
}

impl<T: Real> StructureResiduals<T> {
    pub fn max_connection(&self) -> T {
        self.connection
            .iter()
            .fold(T::zero(), |m, r| m.max(r.abs()))
    }
    pub fn max_pde(&self) -> T {
        self.pde.iter().fold(T::zero(), |m, r| m.max(r.abs()))
    }
    pub fn max_bracket(&self) -> T {
        self.brackets.iter().fold(T::zero(), |m, r| m.max(r.abs()))
    }
}

/// Structure residuals at `p`. `laplacian` additionally evaluates `Δu`,
/// `Δv` along integral curves of the principal directions.
pub fn structure_residuals<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    p: [T; 3],
    fd: &FdScheme<T>,
    laplacian: bool,
    tol: &Tolerances,
) -> Result<StructureResiduals<T>> {
    let field = FrameField {
        h,
        tol,
        space: h.ambient(),
        _scalar: std::marker::PhantomData,
    };
    let base = field.principal(p, None)?;
    let reference = base.frame;
    let conn = field.connection(p, &reference, fd)?;
    let (u, v) = (conn.u(), conn.v());
    let w = &conn.table;
    let half = T::cst(0.5);
    let dl = conn.dlog;
    let connection = [
        w[0][1][0] - v,
        w[0][2][0] - half * dl[2],
        w[1][2][0] - u,
        w[0][1][1],
        w[0][2][1] - half * u,
        w[1][2][1],
        w[0][1][2] - u,
        w[0][2][2] + half * dl[0],
        w[1][2][2] + v,
    ];

    let uv_at = |q: [T; 3]| -> Result<[T; 2]> {
        let c = field.connection(q, &reference, fd)?;
        Ok([c.u(), c.v()])
    };
    let mut duv = [[T::zero(); 2]; 3];
    for k in 0..3 {
        duv[k] = field
            .diff(p, conn.principal.dirs[k], fd.outer, fd.richardson, |q| {
                uv_at(q).map(Pair)
            })?
            .0;
    }
    let c = T::from_i8(h.space_form()).unwrap();
    let pde = [
        duv[1][1] - (v * v - u * u + c),
        duv[1][0] - (u + u) * v,
        duv[0][0] - duv[2][1],
        duv[2][0] + duv[0][1],
    ];

    let space = h.ambient();
    let j = h.jet(p)?;
    let frame_coeffs = |beta: [T; 3]| -> [T; 3] {
        let v = j.df[0].scale(beta[0]) + j.df[1].scale(beta[1]) + j.df[2].scale(beta[2]);
        std::array::from_fn(|k| space.inner(&v, &conn.principal.frame[k]))
    };
    let bracket = |a: usize, b: usize| -> [T; 3] {
        let beta: [T; 3] = std::array::from_fn(|i| conn.dirs_d[a][b][i] - conn.dirs_d[b][a][i]);
        frame_coeffs(beta)
    };
    let two = T::cst(2.0);
    let expected = [
        (bracket(0, 1), [-v, T::zero(), half * u]),
        (bracket(1, 2), [half * u, T::zero(), v]),
        (bracket(0, 2), [-half * dl[2], -two * u, half * dl[0]]),
    ];
    let brackets =
        expected.map(|(got, want)| (0..3).fold(T::zero(), |m, i| m.max((got[i] - want[i]).abs())));

    let laplacian = if laplacian {
        let coarse = FdScheme {
            inner: fd.laplacian,
            ..*fd
        };
        let uv_coarse = |q: [T; 3]| -> Result<[T; 2]> {
            let c = field.connection(q, &reference, &coarse)?;
            Ok([c.u(), c.v()])
        };
        Some(frame_laplacian(
            &field, p, &conn, &reference, fd, &uv_coarse, duv,
        )?)
    } else {
        None
    };

    Ok(StructureResiduals {
        u,
        v,
        lambda: conn.principal.lambda,
        table: conn.table,
        connection,
        pde,
        brackets,
        laplacian,
    })
}

/// `Δφ = Σ_k e_k(e_k φ) - (∇_{e_k} e_k) φ` for `φ = (u, v)`, with the
/// second derivatives taken along integral curves of `e_k`. `uv_at` uses
/// the Laplacian step for the frame derivatives as well.
fn frame_laplacian<T: Real, H: Hypersurface3<T> + ?Sized>(
    field: &FrameField<'_, T, H>,
    p: [T; 3],
    conn: &Connection<T>,
    reference: &[Vec5<T>; 3],
    fd: &FdScheme<T>,
    uv_at: &dyn Fn([T; 3]) -> Result<[T; 2]>,
    duv: [[T; 2]; 3],
) -> Result<[T; 2]> {
    let centre = uv_at(p)?;
    let mut lap = [T::zero(); 2];
    for k in 0..3 {
        let flow = |s: T| -> Result<[T; 3]> {
            let e =
                |q: [T; 3]| -> Result<[T; 3]> { Ok(field.principal(q, Some(reference))?.dirs[k]) };
            rk4_step(p, s, &e)
        };
        let second = |s: T| -> Result<[T; 2]> {
            let a = uv_at(flow(s)?)?;
            let b = uv_at(flow(-s)?)?;
            let inv = (s * s).recip();
            Ok([
                (a[0] + b[0] - centre[0] - centre[0]) * inv,
                (a[1] + b[1] - centre[1] - centre[1]) * inv,
            ])
        };
        let mut d2 = second(fd.laplacian)?;
        if fd.richardson {
            let fine = second(fd.laplacian * T::cst(0.5))?;
            d2 = [0, 1].map(|i| (fine[i] * T::cst(4.0) - d2[i]) / T::cst(3.0));
        }
        for i in 0..2 {
            let mut cov = T::zero();
            for jj in 0..3 {
                cov = cov + conn.table[k][jj][k] * duv[jj][i];
            }
            lap[i] = lap[i] + d2[i] - cov;
        }
    }
    Ok(lap)
}

fn rk4_step<T: Real>(p: [T; 3], s: T, e: &dyn Fn([T; 3]) -> Result<[T; 3]>) -> Result<[T; 3]> {
    let add = |a: [T; 3], b: [T; 3], c: T| [a[0] + b[0] * c, a[1] + b[1] * c, a[2] + b[2] * c];
    let half = s * T::cst(0.5);
    let k1 = e(p)?;
    let k2 = e(add(p, k1, half))?;
    let k3 = e(add(p, k2, half))?;
    let k4 = e(add(p, k3, s))?;
    let six = s / T::cst(6.0);
    Ok(std::array::from_fn(|i| {
        p[i] + six * (k1[i] + (k2[i] + k3[i]) * T::cst(2.0) + k4[i])
    }))
}

/// Largest `(5.2)`-type residual of [`structure_residuals`] at a sequence
/// of plain central-difference steps, and the observed orders
/// `log2(r(h) / r(h/2))` between consecutive steps.
pub fn refinement_orders<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    p: [T; 3],
    steps: &[T],
    tol: &Tolerances,
) -> Result<(Vec<T>, Vec<T>)> {
    let mut res = Vec::with_capacity(steps.len());
    for &s in steps {
        let r = structure_residuals(h, p, &FdScheme::plain(s), false, tol)?;
        res.push(r.max_pde());
    }
    let orders = res
        .windows(2)
        .zip(steps.windows(2))
        .map(|(r, s)| (r[0] / r[1]).ln() / (s[0] / s[1]).ln())
        .collect();
    Ok((res, orders))
}

/// Samples along a nullity leaf.
#[derive(Clone, Debug)]
pub struct NullityCurve<T> {
    pub params: Vec<[T; 3]>,
    pub arclength: Vec<T>,
    pub positions: Vec<Vec5<T>>,
    pub normals: Vec<Vec5<T>>,
    /// Unit tangent `df(e2)` at the start.
    pub initial_tangent: Vec5<T>,
    /// The leaf left the parameter domain before reaching the requested length.
    pub truncated: bool,
}

impl<T: Real> NullityCurve<T> {
    /// One row per sample: arclength, parameters, position and normal.
    pub fn to_csv(&self) -> String {
        let f = |x: T| format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN));
        let mut out = String::from("s,p0,p1,p2,x0,x1,x2,x3,x4,xi0,xi1,xi2,xi3,xi4\n");
        for k in 0..self.arclength.len() {
            let row: Vec<String> = std::iter::once(self.arclength[k])
                .chain(self.params[k])
                .chain(self.positions[k].0)
                .chain(self.normals[k].0)
                .map(f)
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Integrates the unit nullity field from `p0` over arclength `length` with
/// fourth-order Runge–Kutta steps, keeping the orientation continuous.
pub fn trace_nullity_geodesic<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    p0: [T; 3],
    length: T,
    step: T,
    tol: &Tolerances,
) -> Result<NullityCurve<T>> {
    let s0 = sample(h, p0, tol)?;
    if !(s0.s > T::cst(tol.s_min)) {
        return Err(GeomError::Conditioning(
            "nullity leaf through a totally geodesic point".into(),
        ));
    }
    let space = h.ambient();
    let tangent0 = s0.frame[s0.nullity];
    let mut prev = tangent0;
    let mut p = p0;
    let mut curve = NullityCurve {
        params: vec![p0],
        arclength: vec![T::zero()],
        positions: vec![s0.position],
        normals: vec![s0.xi],
        initial_tangent: tangent0,
        truncated: false,
    };
    let n = (length / step).ceil().to_usize().unwrap_or(0);
    let field = |q: [T; 3], prev: &Vec5<T>| -> Result<([T; 3], Vec5<T>)> {
        if !h.contains(q) {
            return Err(GeomError::Domain("left the domain".into()));
        }
        let s = sample(h, q, tol)?;
        let (mut d, mut e) = (s.directions[s.nullity], s.frame[s.nullity]);
        if space.inner(&e, prev) < T::zero() {
            d = d.map(|x| -x);
            e = -e;
        }
        Ok((d, e))
    };
    let mut s_acc = T::zero();
    for _ in 0..n {
        let hstep = step.min(length - s_acc);
        if hstep <= T::zero() {
            break;
        }
        let next = (|| -> Result<([T; 3], Vec5<T>)> {
            let add =
                |a: [T; 3], b: [T; 3], c: T| [a[0] + b[0] * c, a[1] + b[1] * c, a[2] + b[2] * c];
            let half = hstep * T::cst(0.5);
            let (k1, e1) = field(p, &prev)?;
            let (k2, _) = field(add(p, k1, half), &e1)?;
            let (k3, _) = field(add(p, k2, half), &e1)?;
            let (k4, _) = field(add(p, k3, hstep), &e1)?;
            let six = hstep / T::cst(6.0);
            let q = std::array::from_fn(|i| {
                p[i] + six * (k1[i] + (k2[i] + k3[i]) * T::cst(2.0) + k4[i])
            });
            let (_, e) = field(q, &e1)?;
            Ok((q, e))
        })();
        match next {
            Ok((q, e)) => {
                let j = h.jet(q)?;
                p = q;
                prev = e;
                s_acc = s_acc + hstep;
                curve.params.push(q);
                curve.arclength.push(s_acc);
                curve.positions.push(j.position);
                curve.normals.push(j.xi);
            }
            Err(GeomError::Domain(_)) => {
                curve.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

/// Diagnostics of a traced leaf.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RulingReport<T> {
    pub length: T,
    /// `max |ξ(s) - ξ(0)|`.
    pub xi_variation: T,
    /// Distance to `cos s f0 + sin s T0`, `f0 + s T0` or
    /// `cosh s f0 + sinh s T0` for `c = 1, 0, -1`.
    pub ruled_error: T,
    /// `max |(f∘γ)'' + c f|` along the leaf.
    pub geodesic_residual: T,
    pub truncated: bool,
}

/// Compares a traced leaf with the geodesic of the space form through its
/// starting point.
pub fn ruling_check<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    curve: &NullityCurve<T>,
    tol: &Tolerances,
) -> Result<RulingReport<T>> {
    let c = h.space_form();
    let f0 = curve.positions[0];
    let t0 = curve.initial_tangent;
    let mut xi_var = T::zero();
    let mut ruled = T::zero();
    for (k, s) in curve.arclength.iter().enumerate() {
        xi_var = xi_var.max((curve.normals[k] - curve.normals[0]).norm());
        let model = match c {
            1 => f0.scale(s.cos()) + t0.scale(s.sin()),
            -1 => f0.scale(s.cosh()) + t0.scale(s.sinh()),
            _ => f0 + t0.scale(*s),
        };
        ruled = ruled.max((curve.positions[k] - model).norm());
    }
    let space = h.ambient();
    let cc = T::from_i8(c).unwrap();
    let mut geo = T::zero();
    let delta = T::cst(tol.fd_outer_step);
    for (k, p) in curve.params.iter().enumerate() {
        let s0 = sample(h, *p, tol)?;
        let e0 = s0.frame[s0.nullity];
        let dir = |q: [T; 3]| -> Result<[T; 3]> {
            let s = sample(h, q, tol)?;
            let d = s.directions[s.nullity];
            Ok(if space.inner(&s.frame[s.nullity], &e0) < T::zero() {
                d.map(|x| -x)
            } else {
                d
            })
        };
        let second = |d: T| -> Result<Vec5<T>> {
            let a = h.position(rk4_step(*p, d, &dir)?)?;
            let b = h.position(rk4_step(*p, -d, &dir)?)?;
            Ok((a + b - curve.positions[k].scale(T::cst(2.0))).scale((d * d).recip()))
        };
        let r = match (second(delta), second(delta * T::cst(0.5))) {
            (Ok(c0), Ok(c1)) => (c1.scale(T::cst(4.0)) - c0).scale(T::cst(1.0 / 3.0)),
            _ => continue,
        };
        geo = geo.max((r + curve.positions[k].scale(cc)).norm());
    }
    Ok(RulingReport {
        length: *curve.arclength.last().unwrap_or(&T::zero()),
        xi_variation: xi_var,
        ruled_error: ruled,
        geodesic_residual: geo,
        truncated: curve.truncated,
    })
}

/// Verdict on a component of the totally geodesic locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LocusLabel {
    #[serde(rename = "CONSISTENT")]
    Consistent,
    #[serde(rename = "ANOMALOUS")]
    Anomalous,
}

#[derive(Clone, Debug)]
pub struct LocusComponent<T> {
    pub cells: Vec<[usize; 3]>,
    pub centroid: [T; 3],
    /// Singular values of the centred point cloud, descending.
    pub singular_values: [T; 3],
    pub dimension: usize,
    pub label: LocusLabel,
}

#[derive(Clone, Debug)]
pub struct LocusReport<T> {
    pub threshold: T,
    pub s_max: T,
    pub s_median: T,
    pub evaluated: usize,
    pub failed: usize,
    pub points: Vec<[T; 3]>,
    pub components: Vec<LocusComponent<T>>,
}

impl<T: Real> LocusReport<T> {
    pub fn anomalous_fraction(&self) -> T {
        if self.components.is_empty() {
            return T::zero();
        }
        let bad = self
            .components
            .iter()
            .filter(|c| c.label == LocusLabel::Anomalous)
            .count();
        T::from_usize(bad).unwrap() / T::from_usize(self.components.len()).unwrap()
    }
}

/// Cell-centred scan of the parameter box for points with
/// `S < locus_eps · median S`, grouped into 6-connected components whose
/// dimension is estimated from the singular values of their point clouds.
pub fn geodesic_locus_scan<T: Real, H: Hypersurface3<T> + ?Sized>(
    h: &H,
    grid: [usize; 3],
    tol: &Tolerances,
) -> LocusReport<T> {
    let dom = h.domain();
    let centre = |idx: [usize; 3]| -> [T; 3] {
        std::array::from_fn(|a| {
            let w = (dom[a][1] - dom[a][0]) / T::from_usize(grid[a]).unwrap();
            dom[a][0] + (T::from_usize(idx[a]).unwrap() + T::cst(0.5)) * w
        })
    };
    let total = grid[0] * grid[1] * grid[2];
    let unflat = |n: usize| {
        [
            n / (grid[1] * grid[2]),
            (n / grid[2]) % grid[1],
            n % grid[2],
        ]
    };
    let values: Vec<Option<T>> = (0..total)
        .into_par_iter()
        .map(|n| {
            let p = centre(unflat(n));
            if !h.contains(p) {
                return None;
            }
            sample(h, p, tol).ok().map(|s| s.s)
        })
        .collect();
    let inside = (0..total)
        .filter(|&n| h.contains(centre(unflat(n))))
        .count();
    let evaluated = values.iter().flatten().count();
    let s_max = values.iter().flatten().fold(T::zero(), |m, s| m.max(*s));
    let mut sorted: Vec<T> = values.iter().flatten().copied().collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let s_median = if sorted.is_empty() {
        T::zero()
    } else {
        sorted[sorted.len() / 2]
    };
    let threshold = s_median * T::cst(tol.locus_eps);
    let flagged: Vec<bool> = values
        .iter()
        .map(|v| v.is_some_and(|s| s < threshold))
        .collect();
    let mut seen = vec![false; total];
    let mut components = Vec::new();
    let mut points = Vec::new();
    for start in 0..total {
        if !flagged[start] || seen[start] {
            continue;
        }
        let mut cells = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(n) = queue.pop_front() {
            let idx = unflat(n);
            cells.push(idx);
            for a in 0..3 {
                for delta in [-1i64, 1] {
                    let m = idx[a] as i64 + delta;
                    if m < 0 || m >= grid[a] as i64 {
                        continue;
                    }
                    let mut nb = idx;
                    nb[a] = m as usize;
                    let f = (nb[0] * grid[1] + nb[1]) * grid[2] + nb[2];
                    if flagged[f] && !seen[f] {
                        seen[f] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
        cells.sort();
        let pts: Vec<[T; 3]> = cells.iter().map(|c| centre(*c)).collect();
        points.extend_from_slice(&pts);
        components.push(pca_component(
            cells,
            &pts,
            T::cst(tol.pca_ratio),
            T::cst(tol.symmetry),
        ));
    }
    LocusReport {
        threshold,
        s_max,
        s_median,
        evaluated,
        failed: inside - evaluated,
        points,
        components,
    }
}

fn pca_component<T: Real>(
    cells: Vec<[usize; 3]>,
    pts: &[[T; 3]],
    ratio: T,
    sym: T,
) -> LocusComponent<T> {
    let n = T::from_usize(pts.len()).unwrap();
    let centroid: [T; 3] = std::array::from_fn(|a| pts.iter().fold(T::zero(), |s, p| s + p[a]) / n);
    let cov = Mat3::from_fn(|a, b| {
        pts.iter().fold(T::zero(), |s, p| {
            s + (p[a] - centroid[a]) * (p[b] - centroid[b])
        }) / n
    });
    let sv = eigen3_sym(&cov, sym)
        .map(|e| e.values.map(|x| x.max(T::zero()).sqrt()))
        .unwrap_or([T::zero(); 3]);
    let dimension = if sv[0] <= T::zero() {
        0
    } else {
        sv.iter().filter(|s| **s * ratio >= sv[0]).count()
    };
    let label = if dimension == 1 {
        LocusLabel::Consistent
    } else {
        LocusLabel::Anomalous
    };
    LocusComponent {
        cells,
        centroid,
        singular_values: sv,
        dimension,
        label,
    }
}
