//! Lattice automorphisms of a nilpotent algebra and their abelianization.

use num_rational::BigRational;
use serde::Serialize;

use super::algebra::{unit, NilpotentAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::RationalSquareMatrix;

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct AutomorphismDiagnostics {
    pub dimension_ok: bool,
    pub integer_unimodular: bool,
    /// First basis pair `(i, j)` with `[M e_i, M e_j] != M [e_i, e_j]`.
    pub bracket_failure: Option<(usize, usize)>,
}

impl AutomorphismDiagnostics {
    pub fn passed(&self) -> bool {
        self.dimension_ok && self.integer_unimodular && self.bracket_failure.is_none()
    }
}

pub fn validate_automorphism(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> AutomorphismDiagnostics {
    let n = a.dim();
    let mut d = AutomorphismDiagnostics {
        dimension_ok: m.dim() == n,
        ..Default::default()
    };
    if !d.dimension_ok {
        return d;
    }
    d.integer_unimodular = m.is_unimodular_integer();
    'pairs: for i in 0..n {
        let mi = m.column(i);
        for j in i + 1..n {
            let lhs = a.bracket(&mi, &m.column(j));
            let rhs = m.apply(&a.bracket(&unit(n, i), &unit(n, j)));
            if lhs != rhs {
                d.bracket_failure = Some((i, j));
                break 'pairs;
            }
        }
    }
    d
}

/// Validated automorphism, or an error naming the failed check.
pub fn require_automorphism(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> Result<()> {
    let d = validate_automorphism(a, m);
    if !d.dimension_ok {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: m.dim(),
        });
    }
    if !d.integer_unimodular {
        return Err(Error::InvalidAutomorphism("matrix is not integer with determinant ±1".into()));
    }
    if let Some((i, j)) = d.bracket_failure {
        return Err(Error::InvalidAutomorphism(format!(
            "bracket not preserved on basis pair ({i}, {j})"
        )));
    }
    Ok(())
}

/// Induced action on `n / [n, n]` in the basis given by the first layer.
pub fn abelianization_action(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> RationalSquareMatrix {
    let b = a.layers()[0];
    let idx: Vec<usize> = (0..b).collect();
    m.submatrix(&idx)
}

/// `[M e_i]` as columns restricted to a list of vectors.
pub fn image(m: &RationalSquareMatrix, vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    vs.iter().map(|v| m.apply(v)).collect()
}
