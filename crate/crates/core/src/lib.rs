//! Exact toolkit for 7-dimensional solvable Lie algebras with 5-dimensional
//! nilradicals: structure-constant algebras, extension assembly and
//! verification, a catalog language for parametric families, and
//! certificate-based isomorphism checks.
//!
//! Arithmetic is exact over ℚ ([`Q`]) or ℚ(i) ([`QI`]); ℚ models ℝ and ℚ(i)
//! models ℂ.

pub mod catalog;
pub mod extension;
pub mod fixtures;
pub mod isomorphism;
pub mod lie;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod scalar;

pub use catalog::{CatalogEntry, FieldScope, ParamAssignment};
pub use extension::{ExtensionSpec, Semantics, XYChange};
pub use isomorphism::{IsoCertificate, IsoVerdict};
pub use lie::{DecompositionVerdict, Fingerprint, LieAlgebra};
pub use matrix::{Matrix, Subspace};
pub use poly::Poly;
pub use scalar::{FieldKind, Scalar, Q, QI};

/// Library error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("structure constants are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("incompatible extension data: {0}")]
    Incompatible(String),
    #[error("not an automorphism of the nilradical: {0}")]
    NotAutomorphism(String),
    #[error("{0}")]
    Parse(#[from] catalog::ParseError),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("unknown reference: {0}")]
    Unknown(String),
}
