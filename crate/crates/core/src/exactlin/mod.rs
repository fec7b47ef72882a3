//! Exact rational linear algebra and certified spectral data.

pub mod cyclotomic;
pub mod factor;
pub mod lyapunov;
pub mod matrix;
pub mod poly;
pub mod precision;
pub mod primary;
pub mod roots;
pub mod sturm;
pub mod subspace;

pub use cyclotomic::{cyclotomic_polynomial, inverse_totient, is_cyclotomic, root_of_unity_subspace};
pub use factor::{factor_over_q, is_irreducible, squarefree_decomposition};
pub use lyapunov::{lyapunov_data, LyapunovSplitting};
pub use matrix::SquareMatrix;
pub use poly::{berkowitz, IntegerPolynomial, Polynomial, RationalPolynomial};
pub use primary::{primary_decomposition, PrimaryBlock, PrimaryDecomposition};
pub use roots::{isolate_roots, CertifiedRoot, RootSet};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type RationalSquareMatrix = SquareMatrix<BigRational>;
pub type IntegerSquareMatrix = SquareMatrix<BigInt>;

/// Characteristic polynomial `det(xI - M)`, exact and monic.
pub fn char_poly(m: &RationalSquareMatrix) -> RationalPolynomial {
    berkowitz(m)
}

/// Characteristic polynomial of an integer matrix.
pub fn integer_char_poly(m: &RationalSquareMatrix) -> Option<IntegerPolynomial> {
    berkowitz(m).to_integer()
}

