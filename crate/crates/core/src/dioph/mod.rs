//! Empirical Diophantine certificates.

pub mod certificate;
pub mod lemma9;

pub use certificate::{certificate_f64, diophantine_certificate, golden_direction, DiophantineCertificate};
pub use lemma9::{type_i_subspace, verify_lemma9, Lemma9Report, SubspaceCertificate};
