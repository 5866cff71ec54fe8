//! Exact linear algebra over (Z₂)ⁿ-graded-commutative algebras.
//!
//! Graded matrices, graded transpose and trace, and the graded Berezinian,
//! computed both by block decomposition and through the action of the
//! general linear group on the top cohomology of a Koszul complex.
//!
//! Everything is generic over a [`Scalar`] field; [`Rational`] gives exact
//! results and `f64` is available for quick numeric runs.

pub mod algebra;
pub mod berezinian;
pub mod expr;
pub mod gmatrix;
pub mod grading;
pub mod koszul;
pub mod linalg;
pub mod problem;
pub mod scalar;
pub mod verify;

pub use algebra::{AlgebraError, Presentation, Preset};
pub use grading::{Degree, RankVector};
pub use scalar::{Rational, Scalar};

/// Exact algebra over the rationals.
pub type Algebra = algebra::Algebra<Rational>;
/// Exact algebra element.
pub type Element = algebra::AlgebraElement<Rational>;
/// Exact graded matrix.
pub type Matrix = gmatrix::GradedMatrix<Rational>;
/// Exact Koszul complex element.
pub type KElement = koszul::KoszulElement<Rational>;

/// Floating-point algebra.
pub type AlgebraF64 = algebra::Algebra<f64>;
/// Floating-point algebra element.
pub type ElementF64 = algebra::AlgebraElement<f64>;
/// Floating-point graded matrix.
pub type MatrixF64 = gmatrix::GradedMatrix<f64>;
