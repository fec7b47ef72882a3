//! Dyadic rounding of rationals and rigorous bounds for square roots.
//!
//! High-precision approximations are carried as `BigRational` values whose
//! denominators are powers of two, rounded to a fixed number of significant
//! bits after every operation.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 128;
/// Escalation stops here.
pub const MAX_BITS: u32 = 4096;

fn bit_length(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Rounds `x` to about `bits` significant bits (round toward zero).
pub fn round_bits(x: &BigRational, bits: u32) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let magnitude = bit_length(x.numer()) - bit_length(x.denom());
    let shift = bits as i64 - magnitude;
    let scaled = if shift >= 0 {
        (x.numer() << shift as usize) / x.denom()
    } else {
        x.numer() / (x.denom() << (-shift) as usize)
    };
    if shift >= 0 {
        BigRational::new(scaled, BigInt::one() << shift as usize)
    } else {
        BigRational::from_integer(scaled << (-shift) as usize)
    }
}

/// `floor(sqrt(n))` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    if n.sign() != Sign::Plus {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Rational lower bound of `sqrt(x)` with about `bits` bits of accuracy.
pub fn sqrt_lower(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let k = sqrt_scale(x, bits);
    // floor(sqrt(floor(x * 4^k))) / 2^k <= sqrt(x)
    let scaled = (x * BigRational::from_integer(BigInt::one() << (2 * k) as usize)).floor().to_integer();
    BigRational::new(isqrt(&scaled), BigInt::one() << k as usize)
}

/// Rational upper bound of `sqrt(x)`.
pub fn sqrt_upper(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let k = sqrt_scale(x, bits);
    let scaled = (x * BigRational::from_integer(BigInt::one() << (2 * k) as usize)).ceil().to_integer();
    let r = isqrt(&scaled);
    let r = if &r * &r == scaled { r } else { r + 1 };
    BigRational::new(r, BigInt::one() << k as usize)
}

fn sqrt_scale(x: &BigRational, bits: u32) -> u64 {
    let mag = bit_length(x.numer()) - bit_length(x.denom());
    (bits as i64 + 4 - mag / 2).max(0) as u64
}

/// Complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ComplexRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexRational {
            re: BigRational::from_float(re).unwrap_or_else(BigRational::zero),
            im: BigRational::from_float(im).unwrap_or_else(BigRational::zero),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        ComplexRational {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn conj(&self) -> Self {
        ComplexRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact quotient; `None` when dividing by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let d = o.norm_sqr();
        if d.is_zero() {
            return None;
        }
        Some(ComplexRational {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        })
    }

    pub fn round(&self, bits: u32) -> Self {
        ComplexRational {
            re: round_bits(&self.re, bits),
            im: round_bits(&self.im, bits),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Natural logarithm of a positive rational, correct to about double
/// precision, with a rigorous-looking error budget of a few ulps.
///
/// Returns `(value, abs_error_bound)`.
pub fn ln_rational(x: &BigRational) -> (f64, f64) {
    // Split x = m * 2^e with m in [1/2, 2) so the conversion does not overflow.
    let e = bit_length(x.numer()) - bit_length(x.denom());
    let m = if e >= 0 {
        x / BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        x * BigRational::from_integer(BigInt::one() << (-e) as usize)
    };
    let mf = m.to_f64().unwrap_or(f64::NAN);
    let v = mf.ln() + e as f64 * std::f64::consts::LN_2;
    let err = 4.0 * f64::EPSILON * (mf.ln().abs() + (e as f64 * std::f64::consts::LN_2).abs() + 1.0);
    (v, err)
}
