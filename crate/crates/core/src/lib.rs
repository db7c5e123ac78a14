//! Exact classification of Cartan matrices and Coxeter/Dynkin diagrams.
//!
//! Positive definiteness of a symmetrised Cartan matrix is decided with a
//! three-term minor recurrence on chain diagrams and an orthogonal
//! reduction of the three node shapes to chains. All arithmetic is exact,
//! over ℚ or ℚ(√2, √3). Root systems of admissible Cartan matrices are
//! built by closing the simple roots under the simple reflections.
//!
//! The linear algebra ([`Matrix`], [`classify::minor_sequence`],
//! [`classify::sylvester_pd`]) is generic over [`Scalar`]; the aliases
//! below name the instantiations the rest of the crate uses.

pub mod cartan;
pub mod classify;
pub mod cli;
pub mod diagram;
pub mod exactnum;
pub mod matrix;
pub mod roots;
pub mod scalar;

pub use cartan::{CartanError, CartanMatrix, ComponentPartition, SymCartanMatrix};
pub use classify::{ClassificationResult, Family, MinorSequence, Verdict};
pub use diagram::{CoxeterDiagram, DiagramError, DynkinDiagram};
pub use exactnum::{ArithError, Qf};
pub use matrix::Matrix;
pub use roots::{RootSystem, RootVector, RootsError};
pub use scalar::{Scalar, Sign};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Matrix over the quadratic field; the symmetrised Cartan matrices live here.
pub type QfMatrix = Matrix<Qf>;

/// Matrix over ℚ.
pub type RationalMatrix = Matrix<Rational>;

/// Floating point matrix, for approximate cross-checks only.
pub type FloatMatrix = Matrix<f64>;

/// Minor sequences of the chain recurrence over ℚ.
pub type RationalMinors = MinorSequence<Rational>;
