use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

/// Dense square matrix, row-major. Columns are the images of basis vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.dim {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.debug_list()
                .entries(&self.entries[r * self.dim..(r + 1) * self.dim])
                .finish()?;
        }
        f.write_str("]")
    }
}

impl<T: Ring> SquareMatrix<T> {
    pub fn new(dim: usize, entries: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(SquareMatrix { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed("matrix is not square".into()));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = T::one();
        }
        SquareMatrix { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.dim).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).clone());
            }
        }
        SquareMatrix { dim: n, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![T::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let idx = r * n + c;
                    entries[idx] = entries[idx].clone() + a.clone() * other.get(k, c).clone();
                }
            }
        }
        SquareMatrix { dim: n, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let mut acc = T::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &r in idx {
            for &c in idx {
                entries.push(self.get(r, c).clone());
            }
        }
        SquareMatrix {
            dim: idx.len(),
            entries,
        }
    }

    /// Determinant by the division-free Berkowitz characteristic polynomial.
    pub fn det(&self) -> T {
        let cp = super::poly::berkowitz(self);
        let c0 = cp.coeff(0);
        if self.dim % 2 == 0 {
            c0
        } else {
            -c0
        }
    }
}

impl<T: Field> SquareMatrix<T> {
    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a: Vec<Vec<T>> = self.rows();
        let mut inv: Vec<Vec<T>> = Self::identity(n).rows();
        for col in 0..n {
            let pivot = pick_pivot(&a, col, col).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for c in 0..n {
                a[col][c] = a[col][c].clone() / p.clone();
                inv[col][c] = inv[col][c].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
                    inv[r][c] = inv[r][c].clone() - f.clone() * inv[col][c].clone();
                }
            }
        }
        SquareMatrix::from_rows(inv)
    }

    /// `self^e` for signed `e`; negative powers use the inverse.
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }
}

pub(crate) fn pick_pivot<T: Field>(a: &[Vec<T>], col: usize, start: usize) -> Option<usize> {
    if T::EXACT {
        (start..a.len()).find(|&r| !a[r][col].is_zero())
    } else {
        let best = (start..a.len()).max_by(|&x, &y| {
            a[x][col]
                .magnitude()
                .partial_cmp(&a[y][col].magnitude())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[best][col].magnitude() == 0.0 {
            None
        } else {
            Some(best)
        }
    }
}

impl SquareMatrix<BigRational> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn is_integer(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    /// Integer entries and determinant `±1`.
    pub fn is_unimodular_integer(&self) -> bool {
        self.is_integer() && self.det().abs().is_one()
    }

    pub fn to_integer(&self) -> Option<SquareMatrix<BigInt>> {
        if !self.is_integer() {
            return None;
        }
        Some(SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x.to_integer()).collect(),
        })
    }

    pub fn to_f64(&self) -> SquareMatrix<f64> {
        self.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl SquareMatrix<BigInt> {
    pub fn to_rational(&self) -> SquareMatrix<BigRational> {
        self.map(|x| BigRational::from_integer(x.clone()))
    }
}

/// Serialized as a list of rows; entries are integers or decimal/fraction strings.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct MatrixRepr(Vec<Vec<serde_json::Value>>);

impl Serialize for SquareMatrix<BigRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(rational_to_json).collect())
            .collect();
        MatrixRepr(rows).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix<BigRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let MatrixRepr(rows) = MatrixRepr::deserialize(d)?;
        let parsed: std::result::Result<Vec<Vec<BigRational>>, String> = rows
            .iter()
            .map(|r| r.iter().map(rational_from_json).collect())
            .collect();
        let parsed = parsed.map_err(serde::de::Error::custom)?;
        SquareMatrix::from_rows(parsed).map_err(serde::de::Error::custom)
    }
}

pub fn rational_to_json(x: &BigRational) -> serde_json::Value {
    if x.is_integer() {
        if let Some(v) = x.to_integer().to_i64() {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::String(x.to_string())
}

pub fn rational_from_json(v: &serde_json::Value) -> std::result::Result<BigRational, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                crate::scalar::parse_decimal(&n.to_string())
                    .ok_or_else(|| format!("bad number {n}"))
            }
        }
        serde_json::Value::String(s) => {
            crate::scalar::parse_decimal(s).ok_or_else(|| format!("bad rational {s:?}"))
        }
        other => Err(format!("expected number, got {other}")),
    }
}

/// Serde adapters for rational vectors and vector lists (JSON numbers or
/// `"a/b"` / decimal strings).
pub mod rational_serde {
    use super::{rational_from_json, rational_to_json};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rational_to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|x| rational_from_json(x).map_err(serde::de::Error::custom))
            .collect()
    }

    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|r| r.iter().map(rational_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
            let raw = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
            raw.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| rational_from_json(x).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}
