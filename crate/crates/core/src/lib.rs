//! Exact classification of solvable Lie algebras of dimension at most three
//! over the rationals and prime fields.
//!
//! Every classification answer comes with an explicit isomorphism witness
//! that is re-checked against the structure constants before it is returned.

pub mod catalog;
pub mod classify;
pub mod frontend;
pub mod lie;
pub mod linalg;
pub mod oracle;
pub mod scalars;

pub use catalog::{ClassLabel, DerivationAction};
pub use classify::{classify, iso_decide, Classification, ClassifyError, Verdict};
pub use lie::{witness_check, IsoWitness, StructureTensor};
pub use linalg::{Matrix, Subspace};
pub use scalars::{FieldSpec, Scalar};
