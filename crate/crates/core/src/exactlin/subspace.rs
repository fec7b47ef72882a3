//! Subspaces of `T^n` represented by spanning vectors, over any [`Field`].
//!
//! Exact instantiations (`BigRational`) give exact answers; float
//! instantiations use partial pivoting with a relative rank tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::pick_pivot;
use crate::scalar::Field;

fn negligible<T: Field>(x: &T, scale: f64) -> bool {
    if T::EXACT {
        x.is_zero()
    } else {
        x.magnitude() <= 1e-10 * scale.max(f64::MIN_POSITIVE)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Field>(rows: &mut Vec<Vec<T>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let scale = rows
        .iter()
        .flatten()
        .map(|x| x.magnitude())
        .fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = pick_pivot(rows, c, r) else { continue };
        if negligible(&rows[p][c], scale) {
            continue;
        }
        rows.swap(r, p);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() / pv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..ncols {
                let v = rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - f.clone() * v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Canonical basis (RREF rows) of the span of `vectors`.
pub fn span_basis<T: Field>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut rows = vectors.to_vec();
    rref(&mut rows);
    rows
}

pub fn rank<T: Field>(vectors: &[Vec<T>]) -> usize {
    span_basis(vectors).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn kernel<T: Field>(a: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn sum<T: Field>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    span_basis(&all)
}

pub fn intersection<T: Field>(a: &[Vec<T>], b: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let a = span_basis(a);
    let b = span_basis(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum alpha_i a_i - sum beta_j b_j = 0.
    let cols = a.len() + b.len();
    let system: Vec<Vec<T>> = (0..n)
        .map(|coord| {
            a.iter()
                .map(|v| v[coord].clone())
                .chain(b.iter().map(|v| -v[coord].clone()))
                .collect()
        })
        .collect();
    let ker = kernel(&system, cols);
    let vecs: Vec<Vec<T>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![T::zero(); n];
            for (alpha, basis) in k.iter().zip(&a) {
                for (slot, x) in v.iter_mut().zip(basis) {
                    *slot = slot.clone() + alpha.clone() * x.clone();
                }
            }
            v
        })
        .collect();
    span_basis(&vecs)
}

pub fn contains<T: Field>(basis: &[Vec<T>], v: &[T]) -> bool {
    let mut all = basis.to_vec();
    let r = rank(&all);
    all.push(v.to_vec());
    rank(&all) == r
}

pub fn same_subspace<T: Field>(a: &[Vec<T>], b: &[Vec<T>]) -> bool {
    let ra = rank(a);
    ra == rank(b) && rank(&sum(a, b)) == ra
}

/// Coordinates `c` with `sum c_i basis_i = v`, if `v` lies in the span of an
/// independent `basis`.
pub fn coordinates<T: Field>(basis: &[Vec<T>], v: &[T]) -> Option<Vec<T>> {
    let n = v.len();
    let k = basis.len();
    let mut rows: Vec<Vec<T>> = (0..n)
        .map(|i| {
            basis
                .iter()
                .map(|b| b[i].clone())
                .chain(std::iter::once(v[i].clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) || pivots.len() != k {
        return None;
    }
    Some(rows.iter().map(|r| r[k].clone()).collect())
}

/// Least-squares coordinates via exact normal equations.
pub fn least_squares_coordinates(basis: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
    };
    let mut rows: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| dot(&basis[i], &basis[j]))
                .chain(std::iter::once(dot(&basis[i], v)))
                .collect()
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    Some(rows.iter().map(|r| r[k].clone()).collect())
}

/// Scales a rational vector to a primitive integer vector (first nonzero
/// entry positive).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Row-style Hermite normal form of an integer lattice basis; zero rows dropped.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz
                .iter()
                .min_by(|&&x, &&y| rows[x][c].abs().cmp(&rows[y][c].abs()))
                .unwrap();
            rows.swap(r, best);
            let mut done = true;
            for i in (r + 1)..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                for j in 0..ncols {
                    let t = &rows[r][j] * &q;
                    rows[i][j] -= t;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                for j in 0..ncols {
                    let t = &rows[r][j] * &q;
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Integer kernel `{x in Z^n : A x = 0}` for an integer matrix `A` (rows).
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let k = a.len();
    // Row i of the augmented matrix is (A e_i)^T | e_i^T.
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|r| a[r][i].clone())
                .chain((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
                .collect()
        })
        .collect();
    let mut row = 0;
    for c in 0..k {
        loop {
            let nz: Vec<usize> = (row..n).filter(|&i| !aug[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    aug.swap(row, p);
                    row += 1;
                }
                break;
            }
            let best = *nz
                .iter()
                .min_by(|&&x, &&y| aug[x][c].abs().cmp(&aug[y][c].abs()))
                .unwrap();
            aug.swap(row, best);
            for i in (row + 1)..n {
                if aug[i][c].is_zero() {
                    continue;
                }
                let q = aug[i][c].div_floor(&aug[row][c]);
                for j in 0..(k + n) {
                    let t = &aug[row][j] * &q;
                    aug[i][j] -= t;
                }
            }
        }
    }
    let kernel: Vec<Vec<BigInt>> = aug[row..]
        .iter()
        .map(|r| r[k..].to_vec())
        .collect();
    hermite_normal_form(kernel)
}

/// Z-basis of `span(basis) ∩ Z^n` for a rational subspace.
pub fn saturated_lattice_basis(basis: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigInt>> {
    let basis = span_basis(basis);
    if basis.is_empty() {
        return Vec::new();
    }
    // Orthogonal complement, scaled to integers.
    let complement = kernel(&basis, n);
    let comp_int: Vec<Vec<BigInt>> = complement.iter().map(|v| primitive_integer_vector(v)).collect();
    if comp_int.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    integer_kernel(&comp_int, n)
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}
