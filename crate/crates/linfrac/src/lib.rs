//! Analysis of n-dimensional rational difference systems whose components
//! share a denominator.
//!
//! Such a system factors through homogeneous coordinates as `F = q . A . l`
//! for a real matrix `A` of order `n + 1`. The crate computes:
//!
//! - invariant quadrics `Q(M)` via symmetric solutions of the congruence
//!   equation `A^T M A = eps M` ([`congruence`]),
//! - invariant affine varieties from `A`-invariant subspaces ([`geometry`]),
//! - orbits in homogeneous coordinates with forbidden-set and periodicity
//!   tracking ([`dynamics`]),
//! - and, for any admissible initial point, a non-degenerate invariant
//!   quadric containing its whole orbit, or the invariant affine variety
//!   that takes over when the quadric construction degenerates
//!   ([`construct`]).
//!
//! The `examples/` directory shows one runnable program per capability; the
//! `linfrac` binary wraps the same entry points behind a small CLI.

pub mod congruence;
pub mod construct;
pub mod dynamics;
pub mod error;
pub mod genlab;
pub mod geometry;
pub mod homogeneous;
pub mod output;
pub mod report;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
pub use homogeneous::{lift, pr, project, SystemInput, SystemMatrix};
pub use spectral::{decompose, decompose_matrix, Epsilon, SpectralDecomposition};
pub use tolerances::Tolerances;

#[cfg(test)]
mod thread_safety {
    // All analysis types are immutable values after construction; batches of
    // systems, orbits and constructions can be sharded across threads.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn analysis_types_are_send_and_sync() {
        assert_send_sync::<crate::SystemMatrix>();
        assert_send_sync::<crate::SpectralDecomposition>();
        assert_send_sync::<crate::spectral::OrderedDiagonalization>();
        assert_send_sync::<crate::congruence::SymmetricSolutionSpace>();
        assert_send_sync::<crate::geometry::Quadric>();
        assert_send_sync::<crate::geometry::AffineVariety>();
        assert_send_sync::<crate::dynamics::Orbit>();
        assert_send_sync::<crate::genlab::GeneratedInstance>();
    }
}
