//! Numerical thresholds. Every band used by the pipelines lives here.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Residual bound for exact-jet pipelines.
    pub exact: f64,
    /// Residual bound for finite-difference pipelines.
    pub fd: f64,
    /// Relative asymmetry accepted by the symmetric eigensolvers.
    pub symmetry: f64,
    /// `|det| <= singular_det` marks a singular point of a polar map.
    pub singular_det: f64,
    /// Maximum relative spread of the branch limit across rays.
    pub branch_spread: f64,
    /// Inner radius of the branch-limit sampling annulus.
    pub branch_r_min: f64,
    /// Outer radius of the branch-limit sampling annulus.
    pub branch_r_max: f64,
    /// `S <= s_min` marks a totally geodesic point.
    pub s_min: f64,
    /// Smallest eigenvalue gap for which a principal frame is built.
    pub eigen_gap: f64,
    /// Minimum `|<E(q), E(p)>|` between neighbouring frame vectors.
    pub frame_continuity: f64,
    /// Smallest admissible normalised projection in frame Gram-Schmidt.
    pub frame_seed: f64,
    /// Step for first-order differences of frames.
    pub fd_step: f64,
    /// Outer step for second-order differences (Laplacians).
    pub fd_outer_step: f64,
    /// Locus threshold relative to the median `S` on the grid.
    pub locus_eps: f64,
    /// Singular-value ratio separating dimension 1 from dimension 2.
    pub pca_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-8,
            fd: 1e-4,
            symmetry: 1e-8,
            singular_det: 1e-9,
            branch_spread: 0.1,
            branch_r_min: 1e-3,
            branch_r_max: 1e-1,
            s_min: 1e-6,
            eigen_gap: 1e-4,
            frame_continuity: 0.5,
            frame_seed: 1e-6,
            fd_step: 1e-4,
            fd_outer_step: 1e-3,
            locus_eps: 1e-2,
            pca_ratio: 10.0,
        }
    }
}
