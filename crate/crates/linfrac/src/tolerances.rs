//! Numerical tolerances used throughout the crate.
//!
//! All thresholds are relative to a problem scale (a matrix norm, a vector
//! norm, or a largest singular value) so that behavior is invariant under the
//! rescaling freedom `A -> lambda A` of the underlying rational map.

use serde::{Deserialize, Serialize};

/// Collection of relative tolerances with sensible defaults.
///
/// Every field can be overridden individually; `Tolerances::default()` is the
/// configuration used by the command-line tool unless flags say otherwise.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Forbidden-set test: a homogeneous vector `u` is treated as having no
    /// projection when `|u_{n+1}| <= pr * ||u||_inf`.
    pub pr: f64,
    /// Singularity threshold: a matrix is singular when
    /// `sigma_min <= sing * sigma_max`.
    pub sing: f64,
    /// Determinant normalization check: `||det| - 1| <= det` after `normalize`.
    pub det: f64,
    /// Eigenvalue clustering radius, relative to `||A||_2`. The default is
    /// wide enough to absorb the `sqrt(machine eps)` scatter that defective
    /// double eigenvalues produce, so multiplicities are counted correctly.
    pub cluster: f64,
    /// Rank decisions on `A - lambda I`, relative to `||A||_2 + |lambda|`.
    pub rank: f64,
    /// Nullspace threshold for the congruence operator, relative to its
    /// largest singular value.
    pub null: f64,
    /// Relative gap that ends the trailing-singular-value scan.
    pub gap: f64,
    /// Membership tolerance for points on quadrics and varieties.
    pub mem: f64,
    /// Half-width of the band around the unit circle in eigenvalue pairing.
    pub unit: f64,
    /// Tolerance for matching an eigenvalue with its pairing partner.
    pub pair: f64,
    /// Residual budget for eigen-decompositions, relative to `||A||_F`.
    pub eig: f64,
    /// Reconstruction tolerance (diagonalization round trips, orbit recursion).
    pub rec: f64,
    /// Periodicity detection tolerance on the homogeneous trace.
    pub per: f64,
    /// Threshold under which a quadratic coefficient `c_i` counts as zero,
    /// relative to the squared norm of the eigen-coordinates.
    pub c_zero: f64,
    /// Threshold under which a single eigen-coordinate counts as zero,
    /// relative to the norm of the coordinate vector.
    pub coord_zero: f64,
    /// Cap on the eigenbasis condition number before results are rejected.
    pub cond_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pr: 1e-12,
            sing: 1e-10,
            det: 1e-10,
            cluster: 1e-7,
            rank: 1e-7,
            null: 1e-9,
            gap: 1e6,
            mem: 1e-8,
            unit: 1e-6,
            pair: 1e-6,
            eig: 1e-7,
            rec: 1e-10,
            per: 1e-9,
            c_zero: 1e-10,
            coord_zero: 1e-8,
            cond_cap: 1e10,
        }
    }
}
