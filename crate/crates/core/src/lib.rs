//! Minimal hypersurfaces with vanishing Gauss–Kronecker curvature in `R^4`,
//! `S^4` and `H^4`, built as polar maps over branched minimal surfaces, and
//! the numerical checks that certify them.
//!
//! The numerical core is generic over [`scalar::Real`]; the aliases at the
//! crate root fix the scalar to `f64`.

pub mod complex;
pub mod config;
pub mod error;
pub mod gallery;
pub mod geom;
pub mod hypersurface;
pub mod linalg;
pub mod polar;
pub mod poly;
pub mod quaternion;
pub mod scalar;
pub mod surface;

pub use config::Tolerances;
pub use error::{GeomError, Result};
pub use geom::AmbientSpace;
pub use scalar::{Dual, Jet, Real, Scalar};

pub type Vec5 = geom::Vec5<f64>;
pub type Jet2Point = geom::Jet2Point<f64>;
pub type Quaternion = quaternion::Quaternion<f64>;
pub type Mat2 = linalg::Mat2<f64>;
pub type Mat3 = linalg::Mat3<f64>;
pub type BranchedSurface = surface::BranchedSurface<f64>;
pub type PolarMap = polar::PolarMap<f64>;
pub type Cylinder = gallery::weierstrass::Cylinder<f64>;
pub type HyperbolicCylinder = gallery::hyperbolic::HyperbolicCylinder<f64>;
