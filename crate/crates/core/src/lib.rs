//! Coxeter spectral classification of finite posets of Dynkin type A.

pub mod classify;
pub mod congruence;
pub mod enumerate;
pub mod linalg;
pub mod poly;
pub mod poset;
pub mod reflect;
pub mod serde_int;
pub mod spectral;

pub use classify::{ClassifyError, TypeAClass};
pub use congruence::{CanonicalTarget, CongruenceError, CongruenceWitness, PairOutcome};
pub use enumerate::{CensusRow, EnumerateError};
pub use linalg::{IntMatrix, IntVector, LinalgError, MatrixOrder, Signature};
pub use poly::IntPolynomial;
pub use poset::{posets_isomorphic, Arrow, Extremes, HasseShape, Poset, PosetError, ShapeKind};
pub use reflect::{ReflectError, ReflectionStep};
pub use spectral::{spectral_report, SpectralError, SpectralReport};
