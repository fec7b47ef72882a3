//! Rational primary decomposition `Q^n = ⊕ ker q_i(M)^{c_i}`.

use num_rational::BigRational;
use serde::Serialize;

use super::factor::{factor_over_q, product};
use super::matrix::SquareMatrix;
use super::poly::{berkowitz, IntegerPolynomial};
use super::subspace::{coordinates, kernel, rank};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct PrimaryBlock {
    pub factor: IntegerPolynomial,
    pub multiplicity: u32,
    #[serde(with = "crate::exactlin::matrix::rational_serde::nested")]
    pub basis: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimaryDecomposition {
    pub dim: usize,
    pub blocks: Vec<PrimaryBlock>,
}

/// Factors of the characteristic polynomial of `m`, made integral by
/// clearing denominators of the (monic) rational characteristic polynomial.
pub fn char_poly_factors(m: &SquareMatrix<BigRational>) -> Result<Vec<(IntegerPolynomial, u32)>> {
    let cp = berkowitz(m);
    factor_over_q(&cp.primitive_integer())
}

pub fn primary_decomposition(m: &SquareMatrix<BigRational>) -> Result<PrimaryDecomposition> {
    let n = m.dim();
    let mut blocks = Vec::new();
    for (q, c) in char_poly_factors(m)? {
        let qm = q.to_rational().pow(c).eval_matrix(m);
        let basis = kernel(&qm.rows(), n);
        if basis.len() != c as usize * q.degree() {
            return Err(Error::Malformed("primary block has unexpected dimension".into()));
        }
        blocks.push(PrimaryBlock {
            factor: q,
            multiplicity: c,
            basis,
        });
    }
    Ok(PrimaryDecomposition { dim: n, blocks })
}

impl PrimaryBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix of `m` restricted to the block, in the block basis.
    pub fn restricted(&self, m: &SquareMatrix<BigRational>) -> SquareMatrix<BigRational> {
        let k = self.basis.len();
        let mut out = SquareMatrix::zeros(k);
        for (j, b) in self.basis.iter().enumerate() {
            let img = m.apply(b);
            let coords = coordinates(&self.basis, &img).expect("block is invariant");
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }
}

impl PrimaryDecomposition {
    /// Concatenated bases have full rank.
    pub fn is_direct_sum(&self) -> bool {
        let all: Vec<Vec<BigRational>> = self.blocks.iter().flat_map(|b| b.basis.clone()).collect();
        all.len() == self.dim && rank(&all) == self.dim
    }

    pub fn is_invariant(&self, m: &SquareMatrix<BigRational>) -> bool {
        self.blocks
            .iter()
            .all(|b| b.basis.iter().all(|v| coordinates(&b.basis, &m.apply(v)).is_some()))
    }

    pub fn factor_product(&self) -> IntegerPolynomial {
        let f: Vec<(IntegerPolynomial, u32)> =
            self.blocks.iter().map(|b| (b.factor.clone(), b.multiplicity)).collect();
        product(&f)
    }

    /// Sum of the blocks selected by `keep`.
    pub fn span_of(&self, keep: impl Fn(&PrimaryBlock) -> bool) -> Vec<Vec<BigRational>> {
        self.blocks
            .iter()
            .filter(|b| keep(b))
            .flat_map(|b| b.basis.clone())
            .collect()
    }
}
