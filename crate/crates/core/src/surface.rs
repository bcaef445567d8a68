//! Branched surfaces given in isothermal coordinates on a disc.
//!
//! A surface is a map `g: B -> N` into a quadric (or flat space) of `R^4`,
//! `R^5` or `R^5_1`, evaluated through second-order jets. Closed-form maps
//! implement [`SurfaceFn`] once, generically over the scalar, and receive
//! exact jets; value-only maps fall back to Richardson-extrapolated central
//! differences.

use crate::config::Tolerances;
use crate::error::{GeomError, Result};
use crate::geom::{unit_normal_s3, AmbientSpace, Jet2Point, Vec5};
use crate::linalg::Mat2;
use crate::scalar::{Dual, Jet, Real, Scalar};
use num_traits::{Float, ToPrimitive};
use std::fmt::Write as _;
use std::sync::Arc;

/// A closed-form surface, written once for every scalar type.
pub trait SurfaceFn<T: Real>: Send + Sync {
    fn ambient(&self) -> AmbientSpace;
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>>;

    /// Pointwise normal-frame seeds for surfaces that carry a natural
    /// normal frame; `None` falls back to constant seeds.
    fn seed_field<S: Scalar<Base = T>>(&self, _x: S, _y: S) -> Option<Result<Vec<Vec5<S>>>> {
        None
    }
}

impl<T: Real, F: SurfaceFn<T>> SurfaceFn<T> for &F {
    fn ambient(&self) -> AmbientSpace {
        (**self).ambient()
    }
    fn eval<S: Scalar<Base = T>>(&self, x: S, y: S) -> Result<Vec5<S>> {
        (**self).eval(x, y)
    }
    fn seed_field<S: Scalar<Base = T>>(&self, x: S, y: S) -> Option<Result<Vec<Vec5<S>>>> {
        (**self).seed_field(x, y)
    }
}

/// Anything that produces second-order jets.
pub trait JetSource<T: Real>: Send + Sync {
    fn jet(&self, z: [T; 2]) -> Result<Jet2Point<T>>;
    fn value(&self, z: [T; 2]) -> Result<Vec5<T>>;
    fn seed_field(&self, _z: [T; 2]) -> Option<Result<Vec<Vec5<Dual<T>>>>> {
        None
    }
}

struct Exact<F>(F);

impl<T: Real, F: SurfaceFn<T>> JetSource<T> for Exact<F> {
    fn jet(&self, z: [T; 2]) -> Result<Jet2Point<T>> {
        let v = self.0.eval(Jet::var(z[0], 0), Jet::var(z[1], 1))?;
        Ok(Jet2Point::from_jets(&v))
    }
    fn value(&self, z: [T; 2]) -> Result<Vec5<T>> {
        self.0.eval(z[0], z[1])
    }
    fn seed_field(&self, z: [T; 2]) -> Option<Result<Vec<Vec5<Dual<T>>>>> {
        self.0.seed_field(Dual::var(z[0], 0), Dual::var(z[1], 1))
    }
}

type ValueFn<T> = dyn Fn([T; 2]) -> Result<Vec5<T>> + Send + Sync;

struct FiniteDifference<T: Real> {
    f: Arc<ValueFn<T>>,
    h1: T,
    h2: T,
}

impl<T: Real> FiniteDifference<T> {
    fn at(&self, z: [T; 2], dx: T, dy: T) -> Result<Vec5<T>> {
        (self.f)([z[0] + dx, z[1] + dy])
    }

    fn first(&self, z: [T; 2], i: usize, h: T) -> Result<Vec5<T>> {
        let (dx, dy) = if i == 0 {
            (h, T::zero())
        } else {
            (T::zero(), h)
        };
        let d = self.at(z, dx, dy)? - self.at(z, -dx, -dy)?;
        Ok(d.scale((h + h).recip()))
    }

    fn second(&self, z: [T; 2], i: usize, j: usize, h: T, f0: &Vec5<T>) -> Result<Vec5<T>> {
        let z0 = T::zero();
        if i == j {
            let (dx, dy) = if i == 0 { (h, z0) } else { (z0, h) };
            let d = self.at(z, dx, dy)? + self.at(z, -dx, -dy)? - f0.scale(T::cst(2.0));
            Ok(d.scale((h * h).recip()))
        } else {
            let d =
                self.at(z, h, h)? - self.at(z, h, -h)? - self.at(z, -h, h)? + self.at(z, -h, -h)?;
            Ok(d.scale((T::cst(4.0) * h * h).recip()))
        }
    }
}

fn richardson<T: Real>(coarse: Vec5<T>, fine: Vec5<T>) -> Vec5<T> {
    (fine.scale(T::cst(4.0)) - coarse).scale(T::cst(1.0 / 3.0))
}

impl<T: Real> JetSource<T> for FiniteDifference<T> {
    fn jet(&self, z: [T; 2]) -> Result<Jet2Point<T>> {
        let half = T::cst(0.5);
        let value = (self.f)(z)?;
        let d1 = [0, 1].map(|i| -> Result<Vec5<T>> {
            Ok(richardson(
                self.first(z, i, self.h1)?,
                self.first(z, i, self.h1 * half)?,
            ))
        });
        let [d1x, d1y] = d1;
        let pairs = [(0, 0), (0, 1), (1, 1)];
        let mut d2 = [Vec5::zero(); 3];
        for (k, (i, j)) in pairs.into_iter().enumerate() {
            d2[k] = richardson(
                self.second(z, i, j, self.h2, &value)?,
                self.second(z, i, j, self.h2 * half, &value)?,
            );
        }
        Ok(Jet2Point {
            value,
            d1: [d1x?, d1y?],
            d2,
        })
    }
    fn value(&self, z: [T; 2]) -> Result<Vec5<T>> {
        (self.f)(z)
    }
}

/// A declared branch point and its order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint<T> {
    pub z: [T; 2],
    pub order: u32,
}

/// Orthonormal normal frame with its exact first derivatives.
#[derive(Clone, Debug)]
pub struct FrameSample<T: Real> {
    pub jet: Jet2Point<T>,
    pub normals: Vec<Vec5<T>>,
    /// `[∂_x η_k, ∂_y η_k]` for each normal.
    pub dnormals: Vec<[Vec5<T>; 2]>,
}

/// Value, first and second derivatives repackaged as first-order duals of
/// `(g, g_x, g_y)`.
pub fn dual_parts<T: Real>(j: &Jet2Point<T>) -> [Vec5<Dual<T>>; 3] {
    let mk = |v: &Vec5<T>, dx: &Vec5<T>, dy: &Vec5<T>| {
        Vec5(std::array::from_fn(|i| Dual {
            v: v[i],
            d: [dx[i], dy[i]],
        }))
    };
    [
        mk(&j.value, &j.d1[0], &j.d1[1]),
        mk(&j.d1[0], &j.d2[0], &j.d2[1]),
        mk(&j.d1[1], &j.d2[1], &j.d2[2]),
    ]
}

/// Number of unit normals of a surface in `space` (inside its quadric).
pub fn normal_count(space: &AmbientSpace) -> usize {
    space.dimension() - 2 - usize::from(space.has_quadric())
}

/// Gram–Schmidt of `seeds` against `(g, g_x, g_y)` in the ambient signature.
///
/// A timelike normal is made future pointing (`x1 > 0`). Fails when a seed
/// has a projection below `seed_tol` or the tangent plane degenerates.
pub fn normal_frame<S: Scalar>(
    space: &AmbientSpace,
    g: &Vec5<S>,
    gx: &Vec5<S>,
    gy: &Vec5<S>,
    seeds: &[Vec5<S::Base>],
    seed_tol: S::Base,
) -> Result<Vec<Vec5<S>>> {
    let lifted: Vec<Vec5<S>> = seeds.iter().map(Vec5::lift).collect();
    normal_frame_from(space, g, gx, gy, &lifted, seed_tol)
}

/// [`normal_frame`] with seeds that may vary with the point.
pub fn normal_frame_from<S: Scalar>(
    space: &AmbientSpace,
    g: &Vec5<S>,
    gx: &Vec5<S>,
    gy: &Vec5<S>,
    seeds: &[Vec5<S>],
    seed_tol: S::Base,
) -> Result<Vec<Vec5<S>>> {
    let zero = <S::Base as num_traits::Zero>::zero();
    let mut basis: Vec<(Vec5<S>, S)> = Vec::with_capacity(5);
    let push_tangent = |v: Vec5<S>, basis: &mut Vec<(Vec5<S>, S)>| -> Result<()> {
        let mut p = v;
        for (u, n) in basis.iter() {
            p = p - u.scale(space.inner(&p, u) / *n);
        }
        let n = space.inner(&p, &p);
        if !(n.base().abs() > <S::Base as Real>::cst(1e-24)) {
            return Err(GeomError::SingularMetric {
                x: f64::NAN,
                y: f64::NAN,
                factor: n.base().to_f64().unwrap_or(f64::NAN),
            });
        }
        basis.push((p, n));
        Ok(())
    };
    if space.has_quadric() {
        push_tangent(*g, &mut basis)?;
    }
    push_tangent(*gx, &mut basis)?;
    push_tangent(*gy, &mut basis)?;
    let mut out = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let mut p = *seed;
        for (u, n) in basis.iter() {
            p = p - u.scale(space.inner(&p, u) / *n);
        }
        let n = space.inner(&p, &p);
        let nb = n.base();
        if !(nb.abs() > seed_tol) {
            return Err(GeomError::Frame(format!(
                "seed projection {:e} below threshold",
                nb.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let timelike = nb < zero;
        let len = if timelike { (-n).sqrt() } else { n.sqrt() };
        let mut e = p.scale(len.recip());
        if timelike && e[0].base() < zero {
            e = -e;
        }
        let unit = if timelike { -S::one() } else { S::one() };
        basis.push((e, unit));
        out.push(e);
    }
    Ok(out)
}

/// Picks, for each normal slot, the standard basis vector with the largest
/// projection onto the normal space at one point. A timelike slot comes
/// first when the ambient space is Lorentzian.
pub fn choose_seeds<T: Real>(space: &AmbientSpace, jet: &Jet2Point<T>) -> Result<Vec<Vec5<T>>> {
    let k = normal_count(space);
    let mut seeds: Vec<Vec5<T>> = Vec::new();
    if space.signature() == 1 {
        seeds.push(space.basis(0));
    }
    while seeds.len() < k {
        let mut best: Option<(T, Vec5<T>)> = None;
        for i in 0..space.dimension() {
            let cand: Vec5<T> = space.basis(i);
            if seeds.contains(&cand) {
                continue;
            }
            let score = projection_norm(space, jet, &seeds, &cand)?;
            if best.map_or(true, |(b, _)| score > b) {
                best = Some((score, cand));
            }
        }
        let (_, c) = best.ok_or_else(|| GeomError::Frame("no seed available".into()))?;
        seeds.push(c);
    }
    Ok(seeds)
}

fn projection_norm<T: Real>(
    space: &AmbientSpace,
    jet: &Jet2Point<T>,
    seeds: &[Vec5<T>],
    cand: &Vec5<T>,
) -> Result<T> {
    let mut basis: Vec<(Vec5<T>, T)> = Vec::new();
    let mut vecs = Vec::new();
    if space.has_quadric() {
        vecs.push(jet.value);
    }
    vecs.push(jet.d1[0]);
    vecs.push(jet.d1[1]);
    vecs.extend_from_slice(seeds);
    for v in vecs.iter().chain(std::iter::once(cand)) {
        let mut p = *v;
        for (u, n) in &basis {
            p = p - u.scale(space.inner(&p, u) / *n);
        }
        let n = space.inner(&p, &p);
        if std::ptr::eq(v, cand) {
            return Ok(n.abs());
        }
        if !(n.abs() > T::cst(1e-24)) {
            return Err(GeomError::SingularMetric {
                x: f64::NAN,
                y: f64::NAN,
                factor: 0.0,
            });
        }
        basis.push((p, n));
    }
    unreachable!("candidate is the last element")
}

/// A branched surface: an ambient space, a jet evaluator on the disc
/// `|z| < radius`, declared branch points and the normal-frame seeds.
#[derive(Clone)]
pub struct BranchedSurface<T: Real> {
    name: String,
    ambient: AmbientSpace,
    source: Arc<dyn JetSource<T>>,
    branch_points: Vec<BranchPoint<T>>,
    seeds: Vec<Vec5<T>>,
    explicit_seeds: bool,
    radius: T,
    tol: Tolerances,
}

impl<T: Real> std::fmt::Debug for BranchedSurface<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BranchedSurface")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("branch_points", &self.branch_points)
            .finish()
    }
}

/// Point at which automatic frame seeds are chosen, as a fraction of the radius.
const SEED_POINT: [f64; 2] = [0.31, 0.17];

impl<T: Real> BranchedSurface<T> {
    /// Surface with exact jets from a closed form.
    pub fn exact<F: SurfaceFn<T> + 'static>(name: impl Into<String>, f: F) -> Result<Self> {
        let ambient = f.ambient();
        Self::from_source(name.into(), ambient, Arc::new(Exact(f)))
    }

    /// Surface from a value-only map, differentiated numerically.
    pub fn from_values(
        name: impl Into<String>,
        ambient: AmbientSpace,
        f: impl Fn([T; 2]) -> Result<Vec5<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        let src = FiniteDifference {
            f: Arc::new(f),
            h1: T::cst(1e-5),
            h2: T::cst(1e-3),
        };
        Self::from_source(name.into(), ambient, Arc::new(src))
    }

    fn from_source(
        name: String,
        ambient: AmbientSpace,
        source: Arc<dyn JetSource<T>>,
    ) -> Result<Self> {
        let mut s = BranchedSurface {
            name,
            ambient,
            source,
            branch_points: Vec::new(),
            seeds: Vec::new(),
            explicit_seeds: false,
            radius: T::one(),
            tol: Tolerances::default(),
        };
        s.reseed()?;
        Ok(s)
    }

    fn reseed(&mut self) -> Result<()> {
        let z = [
            T::cst(SEED_POINT[0]) * self.radius,
            T::cst(SEED_POINT[1]) * self.radius,
        ];
        let jet = self.source.jet(z)?;
        self.seeds = choose_seeds(&self.ambient, &jet)?;
        Ok(())
    }

    pub fn with_branch_points(mut self, b: Vec<BranchPoint<T>>) -> Self {
        self.branch_points = b;
        self
    }

    /// Replaces the automatically chosen frame seeds.
    pub fn with_seeds(mut self, seeds: Vec<Vec5<T>>) -> Result<Self> {
        if seeds.len() != normal_count(&self.ambient) {
            return Err(GeomError::Frame(format!(
                "expected {} seeds, got {}",
                normal_count(&self.ambient),
                seeds.len()
            )));
        }
        self.seeds = seeds;
        self.explicit_seeds = true;
        Ok(self)
    }

    pub fn with_radius(mut self, r: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(GeomError::Construction(
                "disc radius must be positive".into(),
            ));
        }
        self.radius = r;
        Ok(self)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }
    pub fn radius(&self) -> T {
        self.radius
    }
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }
    pub fn branch_points(&self) -> &[BranchPoint<T>] {
        &self.branch_points
    }
    pub fn seeds(&self) -> &[Vec5<T>] {
        &self.seeds
    }

    pub fn jet(&self, z: [T; 2]) -> Result<Jet2Point<T>> {
        self.source.jet(z)
    }
    pub fn value(&self, z: [T; 2]) -> Result<Vec5<T>> {
        self.source.value(z)
    }

    /// Declared branch point within `eps` of `z`, if any.
    pub fn branch_point_near(&self, z: [T; 2], eps: T) -> Option<BranchPoint<T>> {
        self.branch_points
            .iter()
            .copied()
            .find(|b| (b.z[0] - z[0]).hypot(b.z[1] - z[1]) <= eps)
    }

    fn metric_floor(&self) -> T {
        T::cst(1e-24)
    }

    fn singular(&self, z: [T; 2], e: T) -> GeomError {
        GeomError::SingularMetric {
            x: z[0].to_f64().unwrap_or(f64::NAN),
            y: z[1].to_f64().unwrap_or(f64::NAN),
            factor: e.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Normal frame and its derivatives at a regular point.
    pub fn frame(&self, z: [T; 2]) -> Result<FrameSample<T>> {
        let jet = self.jet(z)?;
        self.frame_from_jet(z, jet)
    }

    pub fn frame_from_jet(&self, z: [T; 2], jet: Jet2Point<T>) -> Result<FrameSample<T>> {
        let e = self.ambient.inner(&jet.d1[0], &jet.d1[0]);
        if !(e > self.metric_floor()) {
            return Err(self.singular(z, e));
        }
        let [g, gx, gy] = dual_parts(&jet);
        let seed_tol = T::cst(self.tol.frame_seed);
        let mut field = if self.explicit_seeds {
            None
        } else {
            self.source.seed_field(z)
        };
        if field.is_none() && !self.explicit_seeds && self.ambient == AmbientSpace::sphere3() {
            field = Some(Ok(vec![unit_normal_s3(&g, &gx, &gy)]));
        }
        let duals = match field {
            Some(seeds) => normal_frame_from(&self.ambient, &g, &gx, &gy, &seeds?, seed_tol),
            None => normal_frame(&self.ambient, &g, &gx, &gy, &self.seeds, seed_tol),
        }
        .map_err(|err| match err {
            GeomError::SingularMetric { .. } => self.singular(z, e),
            other => other,
        })?;
        let normals = duals.iter().map(|v| v.map_to(|c| c.v)).collect();
        let dnormals = duals
            .iter()
            .map(|v| [v.map_to(|c| c.d[0]), v.map_to(|c| c.d[1])])
            .collect();
        Ok(FrameSample {
            jet,
            normals,
            dnormals,
        })
    }

    /// Checks that the frame at the four stencil neighbours at distance `h`
    /// has not flipped relative to the centre.
    pub fn check_frame_continuity(&self, z: [T; 2], h: T) -> Result<()> {
        let c = self.frame(z)?;
        let lim = T::cst(self.tol.frame_continuity);
        for (dx, dy) in [
            (h, T::zero()),
            (-h, T::zero()),
            (T::zero(), h),
            (T::zero(), -h),
        ] {
            let f = self.frame([z[0] + dx, z[1] + dy])?;
            for (a, b) in c.normals.iter().zip(&f.normals) {
                let s = self.ambient.inner(a, b) * self.ambient.inner(a, a);
                if !(s > lim) {
                    return Err(GeomError::FrameContinuity);
                }
            }
        }
        Ok(())
    }

    /// Conformal factor `E = <g_x, g_x>` and the conformality residual
    /// `max(|<g_x,g_x> - <g_y,g_y>|, |<g_x,g_y>|)`.
    pub fn conformal_factor(&self, z: [T; 2]) -> Result<(T, T)> {
        let j = self.jet(z)?;
        Ok(conformal_parts(&self.ambient, &j))
    }

    /// First fundamental form.
    pub fn first_form(&self, jet: &Jet2Point<T>) -> Mat2<T> {
        first_form(&self.ambient, jet)
    }

    /// Shape operator `A_w = G^{-1} II_w`, `(II_w)_ij = <∂_i ∂_j g, w>`.
    pub fn shape_operator(&self, z: [T; 2], w: &Vec5<T>) -> Result<Mat2<T>> {
        let j = self.jet(z)?;
        self.shape_operator_at(z, &j, w)
    }

    pub fn shape_operator_at(&self, z: [T; 2], j: &Jet2Point<T>, w: &Vec5<T>) -> Result<Mat2<T>> {
        let g = first_form(&self.ambient, j);
        let inv = match g.inverse() {
            Some(inv) if g.det() > self.metric_floor() * self.metric_floor() => inv,
            _ => return Err(self.singular(z, g.0[0][0])),
        };
        Ok(inv * second_form(&self.ambient, j, w))
    }

    /// `ω34(X) = <dη3(X), η4>`.
    pub fn connection_form_34(&self, z: [T; 2], x: [T; 2]) -> Result<T> {
        let f = self.frame(z)?;
        if f.normals.len() < 2 {
            return Err(GeomError::Frame("surface has a single normal".into()));
        }
        self.check_frame_continuity(z, T::cst(self.tol.fd_step))?;
        Ok(connection_34(&self.ambient, &f, x))
    }

    /// Length of the normal part of `g_xx + g_yy`.
    pub fn minimality_residual(&self, z: [T; 2]) -> Result<T> {
        let f = self.frame(z)?;
        let lap = f.jet.d2[0] + f.jet.d2[2];
        Ok(f.normals
            .iter()
            .fold(T::zero(), |a, n| a + self.ambient.inner(&lap, n).powi(2))
            .sqrt())
    }

    /// Relative failure of the curvature ellipse to be a circle:
    /// with `a`, `b` the normal parts of `(g_xx - g_yy)/2` and `g_xy`,
    /// `max(||a|^2 - |b|^2|, 2|<a,b>|) / (|a|^2 + |b|^2)`; zero at points
    /// where the ellipse is a point.
    pub fn circularity_residual(&self, z: [T; 2]) -> Result<T> {
        let f = self.frame(z)?;
        let half = T::cst(0.5);
        let a_full = (f.jet.d2[0] - f.jet.d2[2]).scale(half);
        let b_full = f.jet.d2[1];
        let comps = |v: &Vec5<T>| -> Vec<T> {
            f.normals
                .iter()
                .map(|n| self.ambient.inner(v, n) * self.ambient.inner(n, n))
                .collect()
        };
        let metric: Vec<T> = f.normals.iter().map(|n| self.ambient.inner(n, n)).collect();
        let (a, b) = (comps(&a_full), comps(&b_full));
        let dot = |u: &[T], v: &[T]| {
            u.iter()
                .zip(v)
                .zip(&metric)
                .fold(T::zero(), |s, ((x, y), m)| s + *x * *y * *m)
        };
        let (aa, bb, ab) = (dot(&a, &a), dot(&b, &b), dot(&a, &b));
        let scale = aa.abs() + bb.abs();
        if scale
            <= T::epsilon()
                * f.jet
                    .d2
                    .iter()
                    .fold(T::zero(), |m, v| m.max(v.max_abs()))
                    .powi(2)
        {
            return Ok(T::zero());
        }
        Ok((aa - bb).abs().max((ab + ab).abs()) / scale)
    }

    /// Worst deviation of the Gram matrix of `(g, g_x/√E, g_y/√E, η...)`
    /// from the signature diagonal.
    pub fn frame_gram_residual(&self, z: [T; 2]) -> Result<T> {
        let f = self.frame(z)?;
        let (e, _) = conformal_parts(&self.ambient, &f.jet);
        let s = e.sqrt().recip();
        let mut vs = Vec::new();
        if self.ambient.has_quadric() {
            vs.push(f.jet.value);
        }
        vs.push(f.jet.d1[0].scale(s));
        vs.push(f.jet.d1[1].scale(s));
        vs.extend(f.normals.iter().copied());
        let mut worst = T::zero();
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let target = if i == j {
                    self.ambient.inner(a, a).signum()
                } else {
                    T::zero()
                };
                worst = worst.max((self.ambient.inner(a, b) - target).abs());
            }
        }
        if self.ambient.has_quadric() {
            let c = T::from_i8(self.ambient.quadric_constant()).unwrap();
            worst = worst.max((self.ambient.inner(&f.jet.value, &f.jet.value) - c).abs());
        }
        Ok(worst)
    }

    /// Half the slope of `log E` against `log |z - z0|` over 8 rays and
    /// 12 geometric radii in the configured annulus.
    pub fn branch_order_estimate(&self, z0: [T; 2]) -> Result<T> {
        let (r0, r1) = (T::cst(self.tol.branch_r_min), T::cst(self.tol.branch_r_max));
        let (mut sx, mut sy, mut sxx, mut sxy, mut n) =
            (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
        let mut nonzero = false;
        for (r, th) in annulus_samples(r0, r1) {
            let z = [z0[0] + r * th.cos(), z0[1] + r * th.sin()];
            let (e, _) = self.conformal_factor(z)?;
            if !(e > T::zero()) {
                continue;
            }
            nonzero = true;
            let (lx, ly) = (r.ln(), e.ln());
            sx = sx + lx;
            sy = sy + ly;
            sxx = sxx + lx * lx;
            sxy = sxy + lx * ly;
            n = n + T::one();
        }
        if !nonzero {
            return Err(GeomError::Degenerate(
                "conformal factor vanishes on the sampling annulus".into(),
            ));
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        Ok(slope * T::cst(0.5))
    }

    /// Grid scan for zeros of `E` followed by local refinement; a diagnostic
    /// only, declared branch points remain authoritative.
    pub fn detect_branch_points(&self, n: usize) -> Vec<BranchPoint<T>> {
        let r = self.radius;
        let step = (r + r) / T::from_usize(n).unwrap();
        let half = T::cst(0.5);
        let mut grid = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let z = [
                    -r + (T::from_usize(i).unwrap() + half) * step,
                    -r + (T::from_usize(j).unwrap() + half) * step,
                ];
                if z[0].hypot(z[1]) < r {
                    grid[i * n + j] = self.conformal_factor(z).ok().map(|(e, _)| (z, e));
                }
            }
        }
        let emax = grid.iter().flatten().fold(T::zero(), |m, (_, e)| m.max(*e));
        let mut found: Vec<BranchPoint<T>> = Vec::new();
        for i in 1..n.saturating_sub(1) {
            for j in 1..n - 1 {
                let Some((z, e)) = grid[i * n + j] else {
                    continue;
                };
                let is_min = [(0, 1), (2, 1), (1, 0), (1, 2)].iter().all(|&(a, b)| {
                    grid[(i + a - 1) * n + (j + b - 1)].is_none_or(|(_, e2)| e <= e2)
                });
                if !is_min || e > emax * T::cst(1e-2) {
                    continue;
                }
                let zb = self.refine_zero(z, step);
                let Ok((eb, _)) = self.conformal_factor(zb) else {
                    continue;
                };
                if eb > emax * T::cst(1e-16) {
                    continue;
                }
                if found
                    .iter()
                    .any(|b| (b.z[0] - zb[0]).hypot(b.z[1] - zb[1]) < step)
                {
                    continue;
                }
                let order = self
                    .branch_order_estimate(zb)
                    .map(|m| m.round())
                    .unwrap_or(T::zero());
                if order >= T::one() {
                    found.push(BranchPoint {
                        z: zb,
                        order: order.to_u32().unwrap_or(0),
                    });
                }
            }
        }
        found
    }

    fn refine_zero(&self, mut z: [T; 2], mut step: T) -> [T; 2] {
        let f = |z: [T; 2]| {
            self.conformal_factor(z)
                .map(|(e, _)| e)
                .unwrap_or(T::infinity())
        };
        let mut best = f(z);
        let floor = T::epsilon() * T::cst(1e-2);
        while step > floor {
            let mut moved = false;
            for (dx, dy) in [
                (step, T::zero()),
                (-step, T::zero()),
                (T::zero(), step),
                (T::zero(), -step),
            ] {
                let c = [z[0] + dx, z[1] + dy];
                let v = f(c);
                if v < best {
                    best = v;
                    z = c;
                    moved = true;
                }
            }
            if !moved {
                step = step * T::cst(0.5);
            }
            if best == T::zero() {
                break;
            }
        }
        z
    }

    /// CSV sample on an `n × n` cell-centred grid of the disc:
    /// `x, y, x1..x_d, E, conformality, quadric, minimality`.
    pub fn sample_csv(&self, n: usize) -> String {
        let d = self.ambient.dimension();
        let mut out = String::from("x,y");
        for i in 1..=d {
            let _ = write!(out, ",x{i}");
        }
        out.push_str(",E,conformality,quadric,minimality\n");
        let r = self.radius;
        let step = (r + r) / T::from_usize(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let half = T::cst(0.5);
                let z = [
                    -r + (T::from_usize(i).unwrap() + half) * step,
                    -r + (T::from_usize(j).unwrap() + half) * step,
                ];
                if z[0].hypot(z[1]) >= r {
                    continue;
                }
                let Ok(jet) = self.jet(z) else { continue };
                let (e, conf) = conformal_parts(&self.ambient, &jet);
                let q = jet.quadric_residual(&self.ambient);
                let m = self.minimality_residual(z).unwrap_or(T::nan());
                let _ = write!(out, "{:e},{:e}", z[0], z[1]);
                for k in 0..d {
                    let _ = write!(out, ",{:e}", jet.value[k]);
                }
                let _ = writeln!(out, ",{e:e},{conf:e},{q:e},{m:e}");
            }
        }
        out
    }
}

/// `(E, conformality residual)` from a jet.
pub fn conformal_parts<T: Real>(space: &AmbientSpace, j: &Jet2Point<T>) -> (T, T) {
    let exx = space.inner(&j.d1[0], &j.d1[0]);
    let eyy = space.inner(&j.d1[1], &j.d1[1]);
    let exy = space.inner(&j.d1[0], &j.d1[1]);
    (exx, (exx - eyy).abs().max(exy.abs()))
}

pub fn first_form<T: Real>(space: &AmbientSpace, j: &Jet2Point<T>) -> Mat2<T> {
    let exx = space.inner(&j.d1[0], &j.d1[0]);
    let exy = space.inner(&j.d1[0], &j.d1[1]);
    let eyy = space.inner(&j.d1[1], &j.d1[1]);
    Mat2::symmetric(exx, exy, eyy)
}

pub fn second_form<T: Real>(space: &AmbientSpace, j: &Jet2Point<T>, w: &Vec5<T>) -> Mat2<T> {
    Mat2::symmetric(
        space.inner(&j.d2[0], w),
        space.inner(&j.d2[1], w),
        space.inner(&j.d2[2], w),
    )
}

/// `<dη3(X), η4>` from a frame sample.
pub fn connection_34<T: Real>(space: &AmbientSpace, f: &FrameSample<T>, x: [T; 2]) -> T {
    let d = f.dnormals[0][0].scale(x[0]) + f.dnormals[0][1].scale(x[1]);
    space.inner(&d, &f.normals[1])
}

/// Radii `r_min..r_max` (12, geometric) times 8 rays, offset from the axes.
pub fn annulus_samples<T: Real>(r_min: T, r_max: T) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(96);
    let ratio = (r_max / r_min).ln();
    for j in 0..12 {
        let r = r_min * (ratio * T::from_usize(j).unwrap() / T::cst(11.0)).exp();
        for k in 0..8 {
            let th = T::TAU() * (T::from_usize(k).unwrap() + T::cst(0.125)) / T::cst(8.0);
            out.push((r, th));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Holomorphic curve `(z^3/3, z^4/4)` in `C^2 = R^4`: `E = |z|^4 (1 + |z|^2)`.
    struct Cubic;
    impl SurfaceFn<f64> for Cubic {
        fn ambient(&self) -> AmbientSpace {
            AmbientSpace::euclidean4()
        }
        fn eval<S: Scalar<Base = f64>>(&self, x: S, y: S) -> Result<Vec5<S>> {
            let z = crate::complex::Cx::new(x, y);
            let a = z.powi(3).scale(S::cst(1.0 / 3.0));
            let b = z.powi(4).scale(S::cst(0.25));
            Ok(Vec5::from4([a.re, a.im, b.re, b.im]))
        }
    }

    #[test]
    fn synthetic_branch_order_two() {
        let s = BranchedSurface::exact("cubic", Cubic).unwrap();
        let z = [0.3, -0.2];
        let (e, res) = s.conformal_factor(z).unwrap();
        let r2: f64 = 0.3f64 * 0.3 + 0.2 * 0.2;
        assert!((e - r2 * r2 * (1.0 + r2)).abs() < 1e-14);
        assert!(res < 1e-14);
        let m = s.branch_order_estimate([0.0, 0.0]).unwrap();
        assert!((m - 2.0).abs() < 0.05, "{m}");
        assert_eq!(s.conformal_factor([0.0, 0.0]).unwrap().0, 0.0);
    }

    #[test]
    fn finite_difference_fallback_matches_exact() {
        let exact = BranchedSurface::exact("cubic", Cubic).unwrap();
        let fd =
            BranchedSurface::from_values("cubic-fd", AmbientSpace::euclidean4(), |z: [f64; 2]| {
                Cubic.eval(z[0], z[1])
            })
            .unwrap();
        let z = [0.4, 0.25];
        let (a, b) = (exact.jet(z).unwrap(), fd.jet(z).unwrap());
        for k in 0..2 {
            assert!((a.d1[k] - b.d1[k]).max_abs() < 1e-9);
        }
        for k in 0..3 {
            assert!((a.d2[k] - b.d2[k]).max_abs() < 1e-8);
        }
    }

    #[test]
    fn annulus_layout() {
        let s = annulus_samples(1e-3, 1e-1);
        assert_eq!(s.len(), 96);
        assert!((s[0].0 - 1e-3).abs() < 1e-18);
        assert!((s[95].0 - 1e-1).abs() < 1e-15);
    }
}
