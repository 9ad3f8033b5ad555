//! Exact certificates for the uniqueness of decompositions of a tensor into
//! product tensors, together with brute-force oracles over small prime fields
//! and generators for extremal instances.

pub mod criteria;
pub mod error;
pub mod field;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod oracle;
pub mod subset;
pub mod tensor;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{Matrix, VectorList};
pub use subset::Subset;
pub use tensor::{DimTable, KRankProfile, ProductFamily, ProductTensor, SymmetricFamily};
