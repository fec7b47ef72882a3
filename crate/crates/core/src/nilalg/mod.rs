//! Nilpotent Lie algebras, lattice automorphisms and their spectral classification.

pub mod algebra;
pub mod automorphism;
pub mod classify;
pub mod functionals;
pub mod regular;

pub use algebra::{AlgebraDiagnostics, AlgebraSpec, NilpotentAlgebra};
pub use automorphism::{abelianization_action, validate_automorphism, AutomorphismDiagnostics};
pub use classify::{classify, is_ergodic, AutomorphismType, SpectralClassification};
pub use functionals::{lyapunov_functionals, FunctionalSet, LyapunovFunctional};
pub use regular::{find_regular_element, RegularElement, RegularityCertificate};
