//! Mixing rates, Diophantine certificates, fractional coboundary solvers and
//! exact correlation sums for automorphisms of tori and nilmanifolds.
//!
//! Linear algebra over `Q` is exact. Spectral data (Lyapunov exponents,
//! bases of Lyapunov blocks) is certified at a working precision that is
//! raised until every root cluster is separated.

pub mod catalog;
pub mod correlate;
pub mod dioph;
pub mod error;
pub mod exactlin;
pub mod fracsolve;
pub mod nilalg;
pub mod rates;
pub mod scalar;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use correlate::{CorrelationSeries, DecayFit};
pub use dioph::DiophantineCertificate;
pub use exactlin::{
    IntegerPolynomial, LyapunovSplitting, PrimaryDecomposition, RationalPolynomial, RationalSquareMatrix,
};
pub use fracsolve::{FractionalSolution, Observable};
pub use nilalg::{NilpotentAlgebra, SpectralClassification};
pub use rates::{RateReport, TimeTuple};

/// Observable with double precision coefficients.
pub type FourierObservable = Observable<num_complex::Complex64>;
/// Observable with single precision coefficients.
pub type FourierObservable32 = Observable<num_complex::Complex32>;
/// Observable with exact Gaussian rational coefficients.
pub type ExactObservable = Observable<scalar::GaussianRational>;
/// Square matrices over `f64` and `f32`.
pub type FloatSquareMatrix = exactlin::SquareMatrix<f64>;
pub type Float32SquareMatrix = exactlin::SquareMatrix<f32>;
