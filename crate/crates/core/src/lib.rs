//! Continuous families of non-congruent pseudo-Euclidean simplices whose
//! codimension-2 face volumes stay fixed.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactmat`]: exact rational kernel (determinants, rank, inertia, kernels)
//!   for dense symmetric matrices.
//! - [`simplex`]: pseudo-simplices given by squared edge lengths, their Gram
//!   matrices, faces and signed squared volumes.
//! - [`realize`]: embedding of symmetric Gram matrices as vector
//!   configurations in `R^{p,q}`.
//! - [`families`]: the `tA + B/t` deformation families and exact sweeps.
//! - [`dual`]: dual simplices and the volume transfer between a centered
//!   simplex and its dual.
//! - [`search`]: sampling of degenerate components for Euclidean candidates.
//! - [`checks`] and [`cli`]: named verification bundles and the command line.

pub mod checks;
pub mod cli;
pub mod dual;
pub mod exactmat;
pub mod families;
pub mod realize;
pub mod search;
pub mod simplex;

pub use exactmat::{Rational, Signature, SymMatrix};

pub use families::{DeformationFamily, FamilyKind, SweepReport};
pub use realize::RealizedSimplex;
pub use simplex::{PseudoSimplex, SignedSquaredVolume};
