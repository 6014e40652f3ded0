//! Higher-rank numerical ranges, C-numerical ranges and unitary dilations
//! of finite matrices.
//!
//! The crate computes closures of `Λ_k(A)` as intersections of half-planes
//! with supports `λ_k(Re(e^{iθ}A))`, builds families of unitary dilations
//! (including dilations whose rotated real parts keep the `k`-th eigenvalue
//! of `A`), and checks the dilation-intersection identities numerically.
//!
//! Inner loops over directions, restarts and samples run through [`Exec`],
//! which uses rayon when the `parallel` feature is enabled.

pub mod cnum;
pub mod dilation;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod optimize;
pub mod ranges;
pub mod report;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{ConvexRegion, HalfPlane};
pub use linalg::{ComplexMatrix, C64};
pub use ranges::{Membership, Multiplicity, Operator, RankIndex, SpectralAtom, SpectralModel};
