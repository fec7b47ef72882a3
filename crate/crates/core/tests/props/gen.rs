//! Generators shared by the suites.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use nilmix::exactlin::RationalSquareMatrix;
use nilmix::scalar::GaussianRational;
use nilmix::{ExactObservable, FourierObservable};

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn matrix(n: usize, entries: &[i64]) -> RationalSquareMatrix {
    RationalSquareMatrix::new(n, entries.iter().map(|&x| q(x)).collect()).unwrap()
}

/// Integer matrices with small entries, dimension in `dims`.
pub fn int_matrix(dims: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = RationalSquareMatrix> {
    dims.prop_flat_map(move |n| prop::collection::vec(-bound..=bound, n * n).prop_map(move |e| matrix(n, &e)))
}

/// Rational matrices with small numerators and denominators.
pub fn rational_matrix(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RationalSquareMatrix> {
    dims.prop_flat_map(|n| {
        prop::collection::vec((-9i64..=9, 1i64..=4), n * n)
            .prop_map(move |e| RationalSquareMatrix::new(n, e.iter().map(|&(a, b)| qq(a, b)).collect()).unwrap())
    })
}

/// Products of elementary transvections and a sign, hence in `GL(n, Z)`.
pub fn unimodular(n: usize, steps: usize) -> impl Strategy<Value = RationalSquareMatrix> {
    (prop::collection::vec((0..n, 0..n, -2i64..=2), 1..=steps), any::<bool>()).prop_map(move |(ops, flip)| {
        let mut m = RationalSquareMatrix::identity(n);
        for (i, j, s) in ops {
            if i == j || s == 0 {
                continue;
            }
            let mut e = RationalSquareMatrix::identity(n);
            e.set(i, j, q(s));
            m = m.mul(&e);
        }
        if flip {
            let mut d = RationalSquareMatrix::identity(n);
            d.set(0, 0, q(-1));
            m = m.mul(&d);
        }
        m
    })
}

/// Frequencies in the Euclidean ball of radius `radius`, excluding 0 when
/// `mean_zero`, with Gaussian-integer coefficients.
pub fn modes(dim: usize, radius: i64, max_modes: usize, mean_zero: bool) -> impl Strategy<Value = Vec<(Vec<i64>, (i64, i64))>> {
    let z = prop::collection::vec(-radius..=radius, dim).prop_filter("in ball", move |z| {
        let n2: i64 = z.iter().map(|x| x * x).sum();
        n2 <= radius * radius && !(mean_zero && n2 == 0)
    });
    prop::collection::vec((z, (-6i64..=6, -6i64..=6)), 1..=max_modes)
}

pub fn exact(dim: usize, m: &[(Vec<i64>, (i64, i64))]) -> ExactObservable {
    ExactObservable::from_modes(dim, m.iter().map(|(z, (a, b))| (z.clone(), GaussianRational::new(qq(*a, 3), qq(*b, 5)))))
        .unwrap()
}

pub fn float(dim: usize, m: &[(Vec<i64>, (i64, i64))]) -> FourierObservable {
    FourierObservable::from_modes(dim, m.iter().map(|(z, (a, b))| (z.clone(), Complex64::new(*a as f64 / 3.0, *b as f64 / 5.0))))
        .unwrap()
}

pub fn norm(z: &[i64]) -> f64 {
    z.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt()
}

/// `sum_k ||k||^p |f_k|`.
pub fn wiener(f: &FourierObservable, p: i32) -> f64 {
    f.iter().map(|(z, c)| norm(z).powi(p) * c.norm()).sum()
}
