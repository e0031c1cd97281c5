//! Exhaustive certification of sparse-recovery properties of small codes and
//! matrices: distances and biases of codes, spherical and Boolean
//! embeddings, RIP and flat-RIP constants, disjunctness for group testing,
//! list-decoding radii, and exact sparse recovery.

pub mod algebra;
pub mod bounds;
pub mod codes;
pub mod corpus;
pub mod embeddings;
pub mod enumerate;
pub mod error;
pub mod group_testing;
pub mod linalg;
pub mod list_decoding;
pub mod matrix;
pub mod pipeline;
pub mod props;
pub mod recovery;

pub use algebra::{FieldElement, Word};
pub use codes::{Code, LinearCode};
pub use enumerate::Caps;
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, ComplexMatrix, MatrixFile};
pub use num_complex::Complex64;
