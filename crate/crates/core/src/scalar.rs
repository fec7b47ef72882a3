//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! Linear algebra and polynomial routines are written once against [`Ring`] /
//! [`Field`] and instantiated with `BigInt`, `BigRational`, `f64` or `f32`.
//! Fourier coefficients are abstracted by [`Coefficient`], implemented for
//! `Complex<f32>`, `Complex<f64>` and exact Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Commutative ring with identity.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A field usable by the elimination routines.
///
/// Exact fields pivot on the first nonzero entry; inexact ones pivot on the
/// largest magnitude.
pub trait Field: Ring + std::ops::Div<Output = Self> {
    const EXACT: bool;

    /// Magnitude used for pivoting and rank thresholds.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self;
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Field for f32 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs() as f64
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

/// Floating-point reals accepted by the spectral code (`f32`, `f64`).
pub trait Real:
    num_traits::Float
    + FloatConst
    + FromPrimitive
    + Field
    + fmt::Display
    + Send
    + Sync
    + Default
    + 'static
{
    fn to_f64_lossy(self) -> f64;
}

impl Real for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Exact Gaussian rational `a + b i`.
pub type GaussianRational = Complex<BigRational>;

/// Coefficient ring for Fourier observables and correlation sums.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// `(re, im)` rounded to double precision.
    fn to_complex64(&self) -> Complex<f64>;
    fn from_complex64(z: Complex<f64>) -> Self;
}

impl<T: Real> Coefficient for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn one() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
    fn to_complex64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64_lossy(), self.im.to_f64_lossy())
    }
    fn from_complex64(z: Complex<f64>) -> Self {
        Complex::new(
            T::from_f64(z.re).unwrap_or_else(T::nan),
            T::from_f64(z.im).unwrap_or_else(T::nan),
        )
    }
}

impl Coefficient for GaussianRational {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn add(&self, other: &Self) -> Self {
        Complex::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn mul(&self, other: &Self) -> Self {
        Complex::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_complex64(&self) -> Complex<f64> {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_complex64(z: Complex<f64>) -> Self {
        Complex::new(
            BigRational::from_f64(z.re).unwrap_or_else(BigRational::zero),
            BigRational::from_f64(z.im).unwrap_or_else(BigRational::zero),
        )
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, about 106 bits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn from_rational(x: &BigRational) -> Self {
        let hi = x.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DoubleDouble { hi, lo: 0.0 };
        }
        let rem = x - BigRational::from_f64(hi).unwrap_or_else(BigRational::zero);
        let lo = rem.to_f64().unwrap_or(0.0);
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        DoubleDouble { hi, lo }
    }

    /// Product with an integer that is exactly representable in `f64`.
    #[inline]
    pub fn mul_int(self, m: f64) -> Self {
        let (p, e) = two_prod(self.hi, m);
        let e = e + self.lo * m;
        let (hi, lo) = two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            DoubleDouble {
                hi: -self.hi,
                lo: -self.lo,
            }
        } else {
            self
        }
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

pub fn rational_from_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Parses a decimal literal such as `-0.6180339887` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}
