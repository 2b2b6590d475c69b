pub mod linalg;

pub use linalg::{Fp, Matrix, Scalar, ScalarField};

/// Rational scalars.
pub type Q = num_rational::BigRational;
pub mod check;
pub mod complexes;
pub mod dgalgebra;
pub mod corings;
pub mod fixtures;
pub mod braided;
pub mod duality;
pub mod cobar;
pub mod morita;
pub mod document;
