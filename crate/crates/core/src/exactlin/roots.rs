//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth iterations (double precision seed, then
//! dyadic rationals at the working precision). Every root is then enclosed in a
//! disk of radius `n |p(z_i)| / |a_n prod_{j != i} (z_i - z_j)|`; when these
//! disks are pairwise disjoint each contains exactly one root. Disk radii and
//! disjointness are evaluated in exact rational arithmetic.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::IntegerPolynomial;
use super::precision::{round_bits, sqrt_lower, sqrt_upper, ComplexRational, MAX_BITS};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub center: ComplexRational,
    /// Upper bound on the distance from `center` to the true root.
    pub radius: BigRational,
    pub is_real: bool,
    /// Index of the complex-conjugate root (itself when real).
    pub conjugate: usize,
}

impl CertifiedRoot {
    /// Enclosure of `|root|`.
    pub fn modulus_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let n2 = self.center.norm_sqr();
        let lo = sqrt_lower(&n2, bits) - &self.radius;
        let hi = sqrt_upper(&n2, bits) + &self.radius;
        (if lo.is_negative() { BigRational::zero() } else { lo }, hi)
    }

    /// Enclosure of `|root|^2`.
    pub fn modulus_sqr_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let (lo, hi) = self.modulus_bounds(bits);
        (&lo * &lo, &hi * &hi)
    }

    pub fn approx(&self) -> Complex64 {
        let (re, im) = self.center.to_f64();
        Complex64::new(re, im)
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub bits: u32,
    pub roots: Vec<CertifiedRoot>,
}

fn eval_exact(p: &[BigRational], z: &ComplexRational) -> ComplexRational {
    p.iter()
        .rev()
        .fold(ComplexRational::zero(), |acc, c| acc.mul(z).add(&ComplexRational::real(c.clone())))
}

fn eval_rounded(p: &[BigRational], z: &ComplexRational, bits: u32) -> ComplexRational {
    p.iter().rev().fold(ComplexRational::zero(), |acc, c| {
        acc.mul(z).add(&ComplexRational::real(c.clone())).round(bits + 32)
    })
}

fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_refine(p: &[BigRational], dp: &[BigRational], z: &mut [ComplexRational], bits: u32) {
    let n = z.len();
    let tol = BigRational::new(1.into(), num_bigint::BigInt::from(1u8) << (2 * (bits as usize).saturating_sub(6)));
    for _ in 0..200 {
        let mut converged = true;
        for i in 0..n {
            let pv = eval_rounded(p, &z[i], bits);
            if pv.is_zero() {
                continue;
            }
            let dv = eval_rounded(dp, &z[i], bits);
            let Some(ratio) = pv.div(&dv) else { continue };
            let ratio = ratio.round(bits + 16);
            let mut s = ComplexRational::zero();
            for j in 0..n {
                if j != i {
                    if let Some(inv) = ComplexRational::one().div(&z[i].sub(&z[j])) {
                        s = s.add(&inv.round(bits + 16));
                    }
                }
            }
            let denom = ComplexRational::one().sub(&ratio.mul(&s).round(bits + 16));
            let Some(w) = ratio.div(&denom) else { continue };
            let w = w.round(bits + 16);
            let rel = w.norm_sqr() / (BigRational::from_integer(1.into()) + z[i].norm_sqr());
            if rel > tol {
                converged = false;
            }
            z[i] = z[i].sub(&w).round(bits + 8);
        }
        if converged {
            break;
        }
    }
}

/// Attempts a certification at `bits`; `Ok(None)` means "retry with more bits".
fn try_certify(poly: &IntegerPolynomial, z: &[ComplexRational], bits: u32) -> Option<Vec<CertifiedRoot>> {
    let n = z.len();
    let p: Vec<BigRational> = poly.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let lead = p[n].clone();
    let nn = BigRational::from_integer((n as i64 * n as i64).into());
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let pv = eval_exact(&p, &z[i]);
        let mut denom = ComplexRational::real(lead.clone());
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]);
                if d.is_zero() {
                    return None;
                }
                denom = denom.mul(&d);
            }
        }
        let w2 = pv.norm_sqr() / denom.norm_sqr();
        radii.push(sqrt_upper(&(w2 * &nn), bits + 16));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d2 = z[i].sub(&z[j]).norm_sqr();
            let r = &radii[i] + &radii[j];
            if d2 <= &r * &r {
                return None;
            }
        }
    }
    let mut roots: Vec<CertifiedRoot> = z
        .iter()
        .zip(radii)
        .map(|(c, r)| CertifiedRoot {
            center: c.clone(),
            radius: r,
            is_real: false,
            conjugate: usize::MAX,
        })
        .collect();
    // Pair conjugates: conj(D_i) must meet exactly one disk.
    for i in 0..n {
        if roots[i].conjugate != usize::MAX {
            continue;
        }
        let cz = roots[i].center.conj();
        let partners: Vec<usize> = (0..n)
            .filter(|&j| {
                let d2 = cz.sub(&roots[j].center).norm_sqr();
                let r = &roots[i].radius + &roots[j].radius;
                d2 <= &r * &r
            })
            .collect();
        if partners.len() != 1 {
            return None;
        }
        let j = partners[0];
        if j == i {
            let im = roots[i].center.im.abs();
            roots[i].center.im = BigRational::zero();
            roots[i].radius = &roots[i].radius + im;
            roots[i].is_real = true;
            roots[i].conjugate = i;
        } else {
            if roots[j].conjugate != usize::MAX {
                return None;
            }
            let shift = sqrt_upper(&cz.sub(&roots[j].center).norm_sqr(), bits + 16);
            let r = roots[i].radius.clone().max(roots[j].radius.clone()) + shift;
            roots[j].center = cz;
            roots[j].radius = r.clone();
            roots[i].radius = r;
            roots[i].conjugate = j;
            roots[j].conjugate = i;
        }
    }
    // Recentering may have grown radii; re-check disjointness.
    for i in 0..n {
        for j in (i + 1)..n {
            if roots[i].conjugate == j {
                // Conjugate disks are mirror images; disjoint iff the disk
                // misses the real axis.
                if roots[i].center.im.abs() <= roots[i].radius {
                    return None;
                }
                continue;
            }
            let d2 = roots[i].center.sub(&roots[j].center).norm_sqr();
            let r = &roots[i].radius + &roots[j].radius;
            if d2 <= &r * &r {
                return None;
            }
        }
    }
    Some(roots)
}

/// Isolates all complex roots of a squarefree integer polynomial of degree
/// at least one, starting at `bits` of working precision and doubling on
/// failure up to [`MAX_BITS`].
pub fn isolate_roots(poly: &IntegerPolynomial, bits: u32) -> Result<RootSet> {
    let n = poly.degree();
    if poly.is_zero() || n == 0 {
        return Err(Error::Malformed("root isolation needs degree >= 1".into()));
    }
    if n == 1 {
        let root = BigRational::new(-poly.coeff(0), poly.coeff(1));
        return Ok(RootSet {
            bits,
            roots: vec![CertifiedRoot {
                center: ComplexRational::real(root),
                radius: BigRational::zero(),
                is_real: true,
                conjugate: 0,
            }],
        });
    }
    let coeffs_f: Vec<f64> = poly.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
    let seeds = aberth_f64(&coeffs_f);
    let p: Vec<BigRational> = poly.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let dp: Vec<BigRational> = poly
        .derivative()
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut z: Vec<ComplexRational> = seeds.iter().map(|s| ComplexRational::from_f64(s.re, s.im)).collect();
    let mut bits = bits.max(64);
    loop {
        aberth_refine(&p, &dp, &mut z, bits);
        if let Some(mut roots) = try_certify(poly, &z, bits) {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                roots[a]
                    .center
                    .re
                    .cmp(&roots[b].center.re)
                    .then_with(|| roots[a].center.im.cmp(&roots[b].center.im))
            });
            let mut inverse = vec![0; n];
            for (new, &old) in order.iter().enumerate() {
                inverse[old] = new;
            }
            for r in roots.iter_mut() {
                r.conjugate = inverse[r.conjugate];
            }
            let sorted = order.iter().map(|&i| roots[i].clone()).collect();
            return Ok(RootSet { bits, roots: sorted });
        }
        if bits >= MAX_BITS {
            return Err(Error::Precision {
                bits,
                detail: format!("root disks of {} do not separate", poly_display(poly)),
            });
        }
        bits = (bits * 2).min(MAX_BITS);
        for zi in z.iter_mut() {
            *zi = zi.round(bits);
        }
    }
}

fn poly_display(p: &IntegerPolynomial) -> String {
    p.to_string()
}

/// Rounds a rational to `bits` and returns it as `f64` (diagnostics only).
pub fn approx_f64(x: &BigRational) -> f64 {
    round_bits(x, 64).to_f64().unwrap_or(f64::NAN)
}
