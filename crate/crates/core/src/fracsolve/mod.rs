//! Fractional coboundary equations on torus Fourier lattices and in the
//! Schrödinger line model.

mod observable;
mod schrodinger;

pub use observable::{ModeJson, Observable, ObservableJson};
pub use schrodinger::{schrodinger_threshold, SampledProfile, ThresholdOptions, ThresholdReport, Verdict};

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, CompensatedSum, DoubleDouble};

/// Real directions `v_1..v_t` in `R^d`, optionally known exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Directions {
    float: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
}

impl Directions {
    pub fn from_f64(vs: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(vs.iter().map(|v| v.len()))?;
        if vs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite direction entry".into()));
        }
        Ok(Directions { float: vs, exact: None })
    }

    pub fn from_rational(vs: Vec<Vec<BigRational>>) -> Result<Self> {
        check_shape(vs.iter().map(|v| v.len()))?;
        Ok(Directions {
            float: vs
                .iter()
                .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
            exact: Some(vs),
        })
    }

    pub fn len(&self) -> usize {
        self.float.len()
    }

    pub fn is_empty(&self) -> bool {
        self.float.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.float[0].len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.float
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `z . v_i`, exact-then-rounded for rational directions and in
    /// double-double otherwise.
    pub fn dot(&self, i: usize, z: &[i64]) -> f64 {
        match &self.exact {
            Some(e) => e[i]
                .iter()
                .zip(z)
                .fold(BigRational::zero(), |s, (x, &k)| s + x * BigRational::from_integer(k.into()))
                .to_f64()
                .unwrap_or(f64::NAN),
            None => self.float[i]
                .iter()
                .zip(z)
                .fold(DoubleDouble::ZERO, |s, (&x, &k)| s.add(DoubleDouble { hi: x, lo: 0.0 }.mul_int(k as f64)))
                .to_f64(),
        }
    }

    /// Exact resonance for rational directions, `|z.v| < 1e-15 |z||v|` otherwise.
    pub fn is_resonant(&self, i: usize, z: &[i64]) -> bool {
        match &self.exact {
            Some(e) => e[i]
                .iter()
                .zip(z)
                .fold(BigRational::zero(), |s, (x, &k)| s + x * BigRational::from_integer(k.into()))
                .is_zero(),
            None => {
                let nz = z.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
                let nv = self.float[i].iter().map(|x| x * x).sum::<f64>().sqrt();
                self.dot(i, z).abs() < 1e-15 * nz * nv
            }
        }
    }
}

fn check_shape(mut lens: impl Iterator<Item = usize>) -> Result<()> {
    let d = lens.next().ok_or_else(|| Error::Malformed("at least one direction is required".into()))?;
    if d == 0 {
        return Err(Error::Malformed("directions must have positive dimension".into()));
    }
    for l in lens {
        if l != d {
            return Err(Error::DimensionMismatch { expected: d, got: l });
        }
    }
    Ok(())
}

fn check_dim<C: Coefficient>(f: &Observable<C>, d: usize) -> Result<()> {
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: f.dim() });
    }
    Ok(())
}

/// Splits `f` into the modes annihilating every direction of `E` (`f_o`)
/// and the rest (`f_perp`), by exact rational test.
pub fn project_torus_factor<C: Coefficient>(
    f: &Observable<C>,
    e: &[Vec<BigRational>],
) -> Result<(Observable<C>, Observable<C>)> {
    for t in e {
        if t.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: t.len() });
        }
    }
    let annihilates = |z: &[i64]| {
        e.iter().all(|t| {
            t.iter()
                .zip(z)
                .fold(BigRational::zero(), |s, (x, &k)| s + x * BigRational::from_integer(k.into()))
                .is_zero()
        })
    };
    Ok((f.filter(|z, _| annihilates(z)), f.filter(|z, _| !annihilates(z))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallDivisorSplit<C> {
    /// `sum_j |z.v_j| >= 1`.
    pub large: Observable<C>,
    pub small: Observable<C>,
    pub zero: Observable<C>,
    /// Smallest index attaining `max_j |z.v_j|`, for every supported `z != 0`.
    pub selector: BTreeMap<Vec<i64>, usize>,
}

pub fn selector(v: &Directions, z: &[i64]) -> (usize, f64) {
    let mut best = (0, -1.0);
    let mut sum = 0.0;
    for i in 0..v.len() {
        let a = v.dot(i, z).abs();
        sum += a;
        if a > best.1 {
            best = (i, a);
        }
    }
    (best.0, sum)
}

pub fn split_small_divisor<C: Coefficient>(f: &Observable<C>, v: &Directions) -> Result<SmallDivisorSplit<C>> {
    check_dim(f, v.dim())?;
    let mut sel = BTreeMap::new();
    let mut large = Observable::zero(f.dim());
    let mut small = Observable::zero(f.dim());
    let mut zero = Observable::zero(f.dim());
    for (z, c) in f.iter() {
        if z.iter().all(|&x| x == 0) {
            zero.set(z.clone(), c.clone());
            continue;
        }
        let (i, sum) = selector(v, z);
        sel.insert(z.clone(), i);
        if sum >= 1.0 {
            large.set(z.clone(), c.clone());
        } else {
            small.set(z.clone(), c.clone());
        }
    }
    Ok(SmallDivisorSplit {
        large,
        small,
        zero,
        selector: sel,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// `|v|^r φ = f`, multiplier `|2 pi z.v|^r`.
    Modulus,
    /// `v^r φ = f` for integer `r`, multiplier `(2 pi i z.v)^r`.
    Signed,
}

fn phase(d: f64, r: f64, mode: SolveMode) -> Complex64 {
    match mode {
        SolveMode::Modulus => Complex64::new(1.0, 0.0),
        SolveMode::Signed => {
            let k = r as i64;
            let sign = if d < 0.0 && k % 2 != 0 { -1.0 } else { 1.0 };
            let p = match k.rem_euclid(4) {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            p * sign
        }
    }
}

/// Fourier multiplier of the fractional derivative at `z` with `d = z.v`.
pub fn multiplier(d: f64, r: f64, mode: SolveMode) -> Complex64 {
    phase(d, r, mode) * (2.0 * PI * d.abs()).powf(r)
}

/// `1 / multiplier`; the phase is a unit in `{±1, ±i}`, applied exactly,
/// so both modes give bitwise equal magnitudes.
pub fn inverse_multiplier(d: f64, r: f64, mode: SolveMode) -> Complex64 {
    phase(d, r, mode).conj() * (2.0 * PI * d.abs()).powf(r).recip()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalSolution<C> {
    pub r: f64,
    pub mode: SolveMode,
    /// `φ_i`, supported where the selector picks `i`.
    pub components: Vec<Observable<C>>,
    pub selector: BTreeMap<Vec<i64>, usize>,
    /// `max_z |sum_i m_i(z) φ_{i,z} - f_z|` over nonzero frequencies.
    pub residual: f64,
    pub max_coeff: f64,
    pub norms: Vec<f64>,
    pub dropped_mean: Option<Complex64>,
    pub warnings: Vec<String>,
}

impl<C: Coefficient> FractionalSolution<C> {
    pub fn residual_ok(&self) -> bool {
        self.residual <= 1e-12 * self.max_coeff
    }
}

pub fn solve_fractional<C: Coefficient>(
    f: &Observable<C>,
    v: &Directions,
    r: f64,
    mode: SolveMode,
) -> Result<FractionalSolution<C>> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange(format!("order r = {r} must be positive")));
    }
    if mode == SolveMode::Signed && r.fract() != 0.0 {
        return Err(Error::OutOfRange(format!("signed mode needs an integer order, got {r}")));
    }
    let split = split_small_divisor(f, v)?;
    let t = v.len();
    let mut components: Vec<Observable<C>> = (0..t).map(|_| Observable::zero(f.dim())).collect();
    let mut warnings = Vec::new();
    let dropped_mean = (!split.zero.is_zero()).then(|| split.zero.mean().to_complex64());
    if dropped_mean.is_some() {
        warnings.push("nonzero mean dropped; it lies in the invariant part".to_string());
    }
    let mut residual = 0.0f64;
    let mut max_coeff = 0.0f64;
    for (z, c) in split.large.iter().chain(split.small.iter()) {
        let i = split.selector[z];
        if v.is_resonant(i, z) {
            let detail = if v.is_exact() {
                "exact resonance z.v = 0"
            } else {
                "resonance at float precision"
            };
            return Err(Error::Obstruction {
                frequency: z.clone(),
                detail: detail.into(),
            });
        }
        let d = v.dot(i, z);
        let m = multiplier(d, r, mode);
        let phi = c.mul(&C::from_complex64(inverse_multiplier(d, r, mode)));
        let fz = c.to_complex64();
        max_coeff = max_coeff.max(fz.norm());
        residual = residual.max((m * phi.to_complex64() - fz).norm());
        components[i].set(z.clone(), phi);
    }
    let norms = components.iter().map(|c| c.l2_norm_sqr().sqrt()).collect();
    Ok(FractionalSolution {
        r,
        mode,
        components,
        selector: split.selector,
        residual,
        max_coeff,
        norms,
        dropped_mean,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SobolevDirections {
    Full,
    Subspace(Directions),
}

/// `(sum_z w(z)^s |f_z|^2)^{1/2}` with `w = 1 + 4 pi^2 |z|^2` (full) or
/// `w = 1 + 4 pi^2 sum_i |z.v_i|^2` (along a subspace).
pub fn sobolev_norm<C: Coefficient>(f: &Observable<C>, s: f64, dirs: &SobolevDirections) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::OutOfRange(format!("Sobolev order {s} must be nonnegative")));
    }
    if let SobolevDirections::Subspace(v) = dirs {
        check_dim(f, v.dim())?;
    }
    let mut acc = CompensatedSum::<f64>::new();
    for (z, c) in f.iter() {
        let q = match dirs {
            SobolevDirections::Full => z.iter().map(|&x| (x as f64).powi(2)).sum::<f64>(),
            SobolevDirections::Subspace(v) => (0..v.len()).map(|i| v.dot(i, z).powi(2)).sum(),
        };
        let w = 1.0 + 4.0 * PI * PI * q;
        acc.add(w.powf(s) * c.to_complex64().norm_sqr());
    }
    Ok(acc.value().sqrt())
}

/// Both sides of `|φ_[2],i| <= (C/t)^{-r} (2 pi)^{-r} |f|_{E, r dim E}`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SmallDivisorBound {
    pub lhs: Vec<f64>,
    pub rhs: f64,
    pub holds: bool,
}

pub fn small_divisor_bound<C: Coefficient>(
    f: &Observable<C>,
    v: &Directions,
    r: f64,
    c_emp: f64,
    dim_e: usize,
) -> Result<SmallDivisorBound> {
    let split = split_small_divisor(f, v)?;
    let sol = solve_fractional(&split.small, v, r, SolveMode::Modulus)?;
    let t = v.len() as f64;
    let rhs = (c_emp / t).powf(-r) * (2.0 * PI).powf(-r) * sobolev_norm(f, r * dim_e as f64, &SobolevDirections::Full)?;
    let holds = sol.norms.iter().all(|&l| l <= rhs * (1.0 + 1e-12));
    Ok(SmallDivisorBound {
        lhs: sol.norms,
        rhs,
        holds,
    })
}
