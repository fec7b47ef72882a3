//! Built-in systems.

use crate::error::{Error, Result};
use crate::exactlin::RationalSquareMatrix;
use crate::nilalg::NilpotentAlgebra;
use crate::scalar::rational_from_int as q;

pub const NAMES: [&str; 6] = [
    "catmap",
    "cubic3",
    "heisenberg-cat",
    "filiform4",
    "product-t2xt2",
    "cubic-rank2",
];

#[derive(Clone, Debug)]
pub struct System {
    pub name: String,
    pub algebra: NilpotentAlgebra,
    pub generators: Vec<RationalSquareMatrix>,
}

fn m(rows: &[&[i64]]) -> RationalSquareMatrix {
    RationalSquareMatrix::from_i64_rows(rows).expect("square catalog matrix")
}

pub fn cat_map() -> RationalSquareMatrix {
    m(&[&[2, 1], &[1, 1]])
}

/// Companion matrix of `x^3 - x^2 - 2x + 1`.
pub fn cubic_companion() -> RationalSquareMatrix {
    m(&[&[0, 0, -1], &[1, 0, 2], &[0, 1, 1]])
}

pub fn heisenberg() -> NilpotentAlgebra {
    NilpotentAlgebra::from_brackets(3, vec![2, 1], &[(0, 1, vec![q(0), q(0), q(1)])])
        .expect("valid heisenberg")
        .with_names(&["X", "Y", "Z"])
}

pub fn filiform4() -> NilpotentAlgebra {
    NilpotentAlgebra::from_brackets(
        4,
        vec![2, 1, 1],
        &[(0, 1, vec![q(0), q(0), q(1), q(0)]), (0, 2, vec![q(0), q(0), q(0), q(1)])],
    )
    .expect("valid filiform")
}

pub fn system(name: &str) -> Result<System> {
    let (algebra, generators) = match name {
        "catmap" => (NilpotentAlgebra::abelian(2), vec![cat_map()]),
        "cubic3" => (NilpotentAlgebra::abelian(3), vec![cubic_companion()]),
        "heisenberg-cat" => (heisenberg(), vec![m(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]])]),
        "filiform4" => (
            filiform4(),
            vec![m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]])],
        ),
        "product-t2xt2" => (
            NilpotentAlgebra::abelian(4),
            vec![
                m(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
                m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 1], &[0, 0, 1, 1]]),
            ],
        ),
        "cubic-rank2" => {
            let c = cubic_companion();
            let d = c.sub(&RationalSquareMatrix::identity(3));
            (NilpotentAlgebra::abelian(3), vec![c, d])
        }
        other => return Err(Error::Malformed(format!("unknown catalog system {other:?}"))),
    };
    Ok(System {
        name: name.to_string(),
        algebra,
        generators,
    })
}
