//! Finite Fourier series on `T^d`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// `f(x) = sum_z c_z e^{2 pi i z.x}` with finitely many nonzero `c_z`.
/// Iteration is lexicographic in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<C> {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> Observable<C> {
    pub fn zero(dim: usize) -> Self {
        Observable {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_modes(dim: usize, modes: impl IntoIterator<Item = (Vec<i64>, C)>) -> Result<Self> {
        let mut f: Self = Observable::zero(dim);
        for (z, c) in modes {
            if z.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: z.len() });
            }
            let c = match f.coeffs.get(&z) {
                Some(old) => old.add(&c),
                None => c,
            };
            f.set(z, c);
        }
        Ok(f)
    }

    /// Single mode `c e^{2 pi i z.x}`.
    pub fn mode(z: Vec<i64>, c: C) -> Self {
        let dim = z.len();
        let mut f = Observable::zero(dim);
        f.set(z, c);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, z: Vec<i64>, c: C) {
        debug_assert_eq!(z.len(), self.dim);
        if c.is_zero() {
            self.coeffs.remove(&z);
        } else {
            self.coeffs.insert(z, c);
        }
    }

    pub fn get(&self, z: &[i64]) -> Option<&C> {
        self.coeffs.get(z)
    }

    pub fn coeff(&self, z: &[i64]) -> C {
        self.coeffs.get(z).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mean(&self) -> C {
        self.coeff(&vec![0; self.dim])
    }

    pub fn is_mean_zero(&self) -> bool {
        self.get(&vec![0; self.dim]).is_none()
    }

    /// Largest Euclidean norm of a supported frequency.
    pub fn support_radius(&self) -> f64 {
        self.coeffs
            .keys()
            .map(|z| z.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Keeps the modes selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[i64], &C) -> bool) -> Self {
        Observable {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(z, c)| keep(z, c))
                .map(|(z, c)| (z.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(&[i64], &C) -> C) -> Self {
        let mut out = Observable::zero(self.dim);
        for (z, c) in &self.coeffs {
            out.set(z.clone(), f(z, c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (z, c) in &other.coeffs {
            let v = out.coeff(z).add(c);
            out.set(z.clone(), v);
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|_, c| c.mul(s))
    }

    /// Pointwise complex conjugate: `c_z -> conj(c_{-z})`.
    pub fn conj(&self) -> Self {
        let mut out = Observable::zero(self.dim);
        for (z, c) in &self.coeffs {
            out.set(z.iter().map(|x| -x).collect(), c.conj());
        }
        out
    }

    /// Pointwise product (coefficient convolution), exact in the coefficient ring.
    pub fn product(&self, other: &Self) -> Self {
        let mut out: Self = Observable::zero(self.dim);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let z: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let v = out.coeff(&z).add(&ca.mul(cb));
                out.set(z, v);
            }
        }
        out
    }

    /// `sum |c_z|^2`, the squared L2 norm.
    pub fn l2_norm_sqr(&self) -> f64 {
        let mut s = crate::scalar::CompensatedSum::<f64>::new();
        for c in self.coeffs.values() {
            s.add(c.to_complex64().norm_sqr());
        }
        s.value()
    }

    pub fn to_complex64(&self) -> Observable<Complex64> {
        Observable {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(z, c)| (z.clone(), c.to_complex64())).collect(),
        }
    }
}

impl Observable<Complex64> {
    /// `cos(2 pi k.x)`.
    pub fn cos(k: Vec<i64>) -> Self {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        Observable::from_modes(k.len(), [(k, Complex64::new(0.5, 0.0)), (neg, Complex64::new(0.5, 0.0))])
            .expect("consistent dimension")
    }

    /// `sin(2 pi k.x)`.
    pub fn sin(k: Vec<i64>) -> Self {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        Observable::from_modes(k.len(), [(k, Complex64::new(0.0, -0.5)), (neg, Complex64::new(0.0, 0.5))])
            .expect("consistent dimension")
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let j: ObservableJson = serde_json::from_value(v).map_err(|e| Error::Malformed(e.to_string()))?;
        j.try_into()
    }

    pub fn to_json(&self) -> ObservableJson {
        ObservableJson {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(z, c)| ModeJson {
                    z: z.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

/// `{"dim": d, "coeffs": [{"z": [..], "re": .., "im": ..}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObservableJson {
    pub dim: usize,
    pub coeffs: Vec<ModeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModeJson {
    pub z: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TryFrom<ObservableJson> for Observable<Complex64> {
    type Error = Error;

    fn try_from(j: ObservableJson) -> Result<Self> {
        if j.dim == 0 {
            return Err(Error::Malformed("observable dimension must be positive".into()));
        }
        if j.coeffs.iter().any(|m| !m.re.is_finite() || !m.im.is_finite()) {
            return Err(Error::Malformed("non-finite coefficient".into()));
        }
        Observable::from_modes(j.dim, j.coeffs.into_iter().map(|m| (m.z, Complex64::new(m.re, m.im))))
    }
}

impl Serialize for Observable<Complex64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Observable<Complex64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ObservableJson::deserialize(d)?;
        j.try_into().map_err(serde::de::Error::custom)
    }
}
