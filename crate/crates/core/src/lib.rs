//! Maximal symmetric subgroups of the classical 3-transposition groups.
//!
//! The largest `n` such that `S_n` embeds in a 3-transposition group `(G, D)`
//! with transpositions going into `D` is one more than the length of the
//! longest chain of transpositions. For the classical groups the
//! transpositions are transvections or reflections `t(v)`, two of them commute
//! exactly when their vectors are orthogonal, and the chain search becomes a
//! search over vectors of an explicit form space.

pub mod chains;
pub mod embeddings;
pub mod error;
pub mod formspace;
pub mod gf;
pub mod matrix;
pub mod norton;
pub mod perm;
pub mod phi;
pub mod transpositions;
pub mod vector;

pub use error::{Error, Result};
pub use formspace::{make_space, BasisPreset, FormKind, FormSpace, QuotientSpace, Sign, Subspace};
pub use gf::{FieldId, Scalar};
pub use matrix::Matrix;
pub use phi::GroupSpec;
pub use transpositions::{ClassElement, ClassSpec};
pub use vector::Vector;
