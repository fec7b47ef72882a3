use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::SquareMatrix;
use crate::scalar::{Field, Ring};

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![T::one()],
        }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`
    pub fn linear(root: T) -> Self {
        Self::new(vec![-root, T::one()])
    }

    pub fn monomial(deg: usize) -> Self {
        let mut c = vec![T::zero(); deg + 1];
        c[deg] = T::one();
        Polynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &SquareMatrix<T>) -> SquareMatrix<T> {
        let n = m.dim();
        let mut acc = SquareMatrix::zeros(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&SquareMatrix::identity(n).scale(c));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let mut k = T::zero();
                    for _ in 0..i {
                        k = k + c.clone();
                    }
                    k
                })
                .collect(),
        )
    }

    /// `x^n p(1/x)`, the coefficient reversal.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `p(-x)`
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Polynomial<T> {
    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            r[k + dd] = T::zero();
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
}

pub type IntegerPolynomial = Polynomial<BigInt>;
pub type RationalPolynomial = Polynomial<BigRational>;

impl Polynomial<BigInt> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn to_rational(&self) -> RationalPolynomial {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Canonical comparison: degree first, then coefficients from the
    /// constant term up.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl Polynomial<BigRational> {
    /// Integer polynomial if every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntegerPolynomial> {
        self.coeffs
            .iter()
            .all(|c| c.is_integer())
            .then(|| Polynomial::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }

    /// Primitive integer polynomial proportional to `self`.
    pub fn primitive_integer(&self) -> IntegerPolynomial {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }
}

/// Characteristic polynomial `det(xI - M)` by Berkowitz's division-free
/// algorithm; stays in the entry ring.
pub fn berkowitz<T: Ring>(m: &SquareMatrix<T>) -> Polynomial<T> {
    let n = m.dim();
    // Each stage contributes a Toeplitz column vector (descending coefficients).
    let mut vectors: Vec<Vec<T>> = Vec::with_capacity(n);
    for k in 0..n {
        // Leading principal block of size k+1: a = M[k][k], R = row k cols <k,
        // C = col k rows <k, A = block of size k.
        let a = m.get(k, k).clone();
        let mut col: Vec<T> = vec![T::one(), -a];
        // C, A C, A^2 C, ...
        let mut cur: Vec<T> = (0..k).map(|i| m.get(i, k).clone()).collect();
        for _ in 0..k {
            let rc = (0..k).fold(T::zero(), |acc, j| acc + m.get(k, j).clone() * cur[j].clone());
            col.push(-rc);
            cur = (0..k)
                .map(|i| (0..k).fold(T::zero(), |acc, j| acc + m.get(i, j).clone() * cur[j].clone()))
                .collect();
        }
        vectors.push(col);
    }
    // poly_k = T_k * poly_{k-1}, with T_k lower-triangular Toeplitz from vectors[k].
    let mut poly: Vec<T> = vec![T::one()];
    for v in vectors.iter() {
        let len = poly.len() + 1;
        let mut next = vec![T::zero(); len];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (j, p) in poly.iter().enumerate() {
                if i >= j && i - j < v.len() {
                    acc = acc + v[i - j].clone() * p.clone();
                }
            }
            *slot = acc;
        }
        poly = next;
    }
    poly.reverse();
    Polynomial::new(poly)
}

fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, coeff: &str, neg: bool, deg: usize) -> fmt::Result {
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let show_coeff = coeff != "1" || deg == 0;
    if show_coeff {
        f.write_str(coeff)?;
    }
    match deg {
        0 => Ok(()),
        1 => f.write_str("x"),
        d => write!(f, "x^{d}"),
    }
}

impl<T: Ring + fmt::Display + Signed> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            fmt_term(f, first, &c.abs().to_string(), c.is_negative(), deg)?;
            first = false;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

impl serde::Serialize for Polynomial<BigInt> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        let vals: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::String(c.to_string()),
            })
            .collect();
        vals.serialize(s)
    }
}
