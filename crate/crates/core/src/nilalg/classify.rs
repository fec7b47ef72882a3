//! Ergodicity and rational/irrational type of an automorphism.

use num_rational::BigRational;
use serde::Serialize;

use super::algebra::NilpotentAlgebra;
use super::automorphism::{abelianization_action, require_automorphism};
use crate::error::Result;
use crate::exactlin::cyclotomic::cyclotomic_order_unchecked;
use crate::exactlin::matrix::rational_serde;
use crate::exactlin::primary::{char_poly_factors, primary_decomposition};
use crate::exactlin::subspace::{primitive_integer_vector, span_basis, to_rational_vec};
use crate::exactlin::{lyapunov_data, IntegerPolynomial, LyapunovSplitting, RationalSquareMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AutomorphismType {
    Rational,
    Irrational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianFactor {
    pub factor: IntegerPolynomial,
    pub multiplicity: u32,
    pub cyclotomic_order: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralClassification {
    pub ergodic: bool,
    #[serde(rename = "type")]
    pub kind: AutomorphismType,
    #[serde(with = "rational_serde::nested")]
    pub n_z1: Vec<Vec<BigRational>>,
    #[serde(with = "rational_serde::nested")]
    pub n_z2: Vec<Vec<BigRational>>,
    /// `n^(2)`; for a single automorphism this equals `n_z2`.
    #[serde(with = "rational_serde::nested")]
    pub n2: Vec<Vec<BigRational>>,
    pub w_minus: Vec<Vec<f64>>,
    pub w_zero: Vec<Vec<f64>>,
    pub w_plus: Vec<Vec<f64>>,
    pub abelianization: RationalSquareMatrix,
    pub abelianization_factors: Vec<AbelianFactor>,
    #[serde(skip)]
    pub lyapunov: LyapunovSplitting,
}

/// Reduced basis scaled to primitive integer vectors.
pub fn integer_basis(vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    span_basis(vs)
        .iter()
        .map(|v| to_rational_vec(&primitive_integer_vector(v)))
        .collect()
}

/// Factors of the characteristic polynomial of the abelianization, with
/// their cyclotomic orders.
pub fn abelian_factors(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> Result<Vec<AbelianFactor>> {
    let ab = abelianization_action(a, m);
    Ok(char_poly_factors(&ab)?
        .into_iter()
        .map(|(f, c)| AbelianFactor {
            cyclotomic_order: cyclotomic_order_unchecked(&f),
            factor: f,
            multiplicity: c,
        })
        .collect())
}

/// Parry criterion: ergodic iff no abelianization factor is cyclotomic.
pub fn is_ergodic(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> Result<bool> {
    require_automorphism(a, m)?;
    Ok(abelian_factors(a, m)?.iter().all(|f| f.cyclotomic_order.is_none()))
}

pub fn classify(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> Result<SpectralClassification> {
    require_automorphism(a, m)?;
    let abelianization_factors = abelian_factors(a, m)?;
    let ergodic = abelianization_factors.iter().all(|f| f.cyclotomic_order.is_none());
    let pd = primary_decomposition(m)?;
    let n_z1 = integer_basis(&pd.span_of(|b| cyclotomic_order_unchecked(&b.factor).is_none()));
    let n_z2 = integer_basis(&pd.span_of(|b| cyclotomic_order_unchecked(&b.factor).is_some()));
    let lyapunov = lyapunov_data(m)?;
    Ok(SpectralClassification {
        ergodic,
        kind: if n_z2.is_empty() {
            AutomorphismType::Irrational
        } else {
            AutomorphismType::Rational
        },
        n2: n_z2.clone(),
        n_z1,
        n_z2,
        w_minus: lyapunov.w_minus.clone(),
        w_zero: lyapunov.w_zero.clone(),
        w_plus: lyapunov.w_plus.clone(),
        abelianization: abelianization_action(a, m),
        abelianization_factors,
        lyapunov,
    })
}
