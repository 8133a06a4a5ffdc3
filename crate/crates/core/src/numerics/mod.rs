//! Small dense linear algebra and polynomial root finding.

pub mod eigen;
pub mod lu;
pub mod matrix;
pub mod poly;

pub use eigen::{cholesky, symmetric_eigenvalues};
pub use lu::invert;
pub use matrix::{ComplexMatrix, Entry, Matrix, RealMatrix};
pub use poly::{char_poly, quartic_roots, roots, QuarticRoots};
