//! Joint sparse recovery for multiple-measurement-vector (MMV) problems.
//!
//! The centerpiece is sequential compressive MUSIC: an initial k-sparse
//! support estimate is pruned by backward support filtering to its k - r most
//! reliable indices, and the remaining r indices are then found one at a time
//! by forward sequential subspace estimation, re-estimating the augmented
//! signal subspace after every accepted atom.
//!
//! Modules:
//!
//! * [`subspace`] - SVD-based subspace primitives (bases, residuals, ranks, distances).
//! * [`problem`] - synthetic sensing matrices, jointly sparse sources, noise, canonical form.
//! * [`recovery`] - subspace S-OMP, S-OMP, thresholding, MUSIC, CS-MUSIC and the sequential variants.
//! * [`analysis`] - perturbation bound, SNR predicates, `F(alpha)` and the feasibility gap.
//! * [`bench`] - seeded parallel Monte Carlo sweeps and CSV output.
//!
//! Support indices are 0-based throughout.

pub mod analysis;
pub mod bench;
pub mod dump;
mod error;
pub mod problem;
pub mod quadrature;
pub mod recovery;
mod scalar;
pub mod seed;
pub mod subspace;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar, ThinSvd};

pub use nalgebra::{Complex, DMatrix, DVector};
