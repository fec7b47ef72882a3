//! Empirical Diophantine constants over lattice balls.
//!
//! `C_emp = min ||m||^d * sum_i |m . v_i|` over `0 != m in Z^d`, `||m|| <= R`.
//! The scan is branch and bound: with all coordinates but a pivot fixed,
//! only pivot values with `|m . v_p| <= C_best / ||m_rest||^d` can improve,
//! and they form an interval. Ties go to the lexicographically smallest `m`
//! whose first nonzero coordinate is positive.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::subspace::integer_kernel;
use crate::scalar::{rational_from_f64, DoubleDouble};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DiophantineCertificate {
    pub basis: Vec<Vec<f64>>,
    pub dim_e: usize,
    pub radius: f64,
    /// Certified lower estimate of the minimum over the ball.
    pub c_emp: f64,
    pub argmin: Vec<i64>,
    pub passed: bool,
    pub exact: bool,
    pub candidates_examined: u64,
}

trait Evaluator: Sync {
    type Key: Clone + Send + PartialOrd;
    fn key(&self, m: &[i64], norm2: i128) -> Self::Key;
    /// Upper estimate of the constant represented by `key`.
    fn bound(&self, key: &Self::Key) -> f64;
    fn value(&self, key: &Self::Key) -> f64;
}

/// Rational directions scaled to integer vectors `w_i = D v_i`.
struct ExactEval {
    w: Vec<Vec<i128>>,
    d: u32,
    denom: f64,
}

impl Evaluator for ExactEval {
    /// `||m||^(2d) * (sum |m . w_i|)^2`.
    type Key = BigInt;

    fn key(&self, m: &[i64], norm2: i128) -> BigInt {
        let s: i128 = self
            .w
            .iter()
            .map(|w| w.iter().zip(m).map(|(a, &b)| a * b as i128).sum::<i128>().abs())
            .sum();
        num_traits::pow(BigInt::from(norm2), self.d as usize) * BigInt::from(s) * BigInt::from(s)
    }

    fn bound(&self, key: &BigInt) -> f64 {
        self.value(key) * (1.0 + 1e-9) + 1e-300
    }

    fn value(&self, key: &BigInt) -> f64 {
        let r = key.sqrt();
        let r = if &r * &r == *key { r } else { r + 1 };
        r.to_f64().unwrap_or(f64::INFINITY) / self.denom
    }
}

/// Directions carried in double-double; keys are directed lower bounds.
struct FloatEval {
    v: Vec<Vec<DoubleDouble>>,
    abs: Vec<Vec<f64>>,
    d: u32,
}

impl Evaluator for FloatEval {
    type Key = f64;

    fn key(&self, m: &[i64], norm2: i128) -> f64 {
        let mut lower = 0.0;
        for (v, a) in self.v.iter().zip(&self.abs) {
            let mut acc = DoubleDouble::ZERO;
            let mut scale = 0.0;
            for ((x, ax), &mi) in v.iter().zip(a).zip(m) {
                if mi != 0 {
                    acc = acc.add(x.mul_int(mi as f64));
                    scale += ax * (mi as f64).abs();
                }
            }
            // Double-double dot products are accurate to a few units in 2^-104.
            let err = scale * (m.len() as f64 + 2.0) * 2f64.powi(-100);
            let dd = acc.abs();
            let mag = dd.hi + dd.lo;
            lower += (mag - err).max(0.0);
        }
        let n = (norm2 as f64).powf(self.d as f64 / 2.0);
        n * lower * (1.0 - 8.0 * f64::EPSILON)
    }

    fn bound(&self, key: &f64) -> f64 {
        key * (1.0 + 1e-9) + 1e-300
    }

    fn value(&self, key: &f64) -> f64 {
        *key
    }
}

#[derive(Clone)]
struct Best<K> {
    key: K,
    m: Vec<i64>,
}

fn better<K: PartialOrd>(a: &Best<K>, b: &Best<K>) -> bool {
    match a.key.partial_cmp(&b.key) {
        Some(Ordering::Less) => true,
        Some(Ordering::Equal) => a.m < b.m,
        _ => false,
    }
}

fn canonical(mut m: Vec<i64>) -> Vec<i64> {
    if m.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in m.iter_mut() {
            *x = -*x;
        }
    }
    m
}

struct Search<'a, E: Evaluator> {
    eval: &'a E,
    vf: Vec<f64>,
    pivot: usize,
    d: usize,
    r2: i128,
}

impl<'a, E: Evaluator> Search<'a, E> {
    fn consider(&self, m: Vec<i64>, norm2: i128, best: &mut Option<Best<E::Key>>, count: &mut u64) {
        *count += 1;
        let cand = Best {
            key: self.eval.key(&m, norm2),
            m: canonical(m),
        };
        if best.as_ref().map_or(true, |b| better(&cand, b)) {
            *best = Some(cand);
        }
    }

    /// Pivot values worth evaluating for fixed `rest`.
    fn slab(&self, rest: &[i64], best: &Option<Best<E::Key>>, count: &mut u64, out: &mut Option<Best<E::Key>>) {
        let n_rest: i128 = rest.iter().map(|&x| (x as i128) * (x as i128)).sum();
        let room = self.r2 - n_rest;
        if room < 0 {
            return;
        }
        let kmax = isqrt_i128(room) as i64;
        let mut full = Vec::with_capacity(self.d);
        let (lo, hi) = if n_rest == 0 {
            (1, 1.min(kmax))
        } else {
            let cb = best.as_ref().map_or(f64::INFINITY, |b| self.eval.bound(&b.key));
            let t = cb / (n_rest as f64).powf(self.d as f64 / 2.0);
            let a = self.vf[self.pivot];
            let s: f64 = rest
                .iter()
                .enumerate()
                .map(|(j, &x)| {
                    let jj = if j < self.pivot { j } else { j + 1 };
                    x as f64 * self.vf[jj]
                })
                .sum();
            if !t.is_finite() {
                (-kmax, kmax)
            } else {
                let slack = 1e-9 * (s.abs() / a.abs() + 1.0);
                let x1 = (-s - t) / a;
                let x2 = (-s + t) / a;
                let (l, h) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
                let l = (l - slack).ceil().max(-(kmax as f64)) as i64;
                let h = (h + slack).floor().min(kmax as f64) as i64;
                (l, h)
            }
        };
        for mk in lo..=hi {
            full.clear();
            full.extend_from_slice(&rest[..self.pivot]);
            full.push(mk);
            full.extend_from_slice(&rest[self.pivot..]);
            let norm2 = n_rest + (mk as i128) * (mk as i128);
            if norm2 == 0 {
                continue;
            }
            // Pruning uses the running best, so keep `best` in sync with `out`.
            self.consider(full.clone(), norm2, out, count);
        }
    }

    fn rest_ball(
        &self,
        prefix: &mut Vec<i64>,
        norm2: i128,
        signed: bool,
        best: &mut Option<Best<E::Key>>,
        count: &mut u64,
    ) {
        if prefix.len() == self.d - 1 {
            let snapshot = best.clone();
            self.slab(prefix, &snapshot, count, best);
            return;
        }
        let room = self.r2 - norm2;
        let b = isqrt_i128(room) as i64;
        let lo = if signed { -b } else { 0 };
        for x in lo..=b {
            prefix.push(x);
            self.rest_ball(prefix, norm2 + (x as i128) * (x as i128), signed || x != 0, best, count);
            prefix.pop();
        }
    }
}

fn isqrt_i128(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn run<E: Evaluator>(eval: &E, vf: &[Vec<f64>], d: usize, radius: f64) -> (Best<E::Key>, u64)
where
    E::Key: Sync,
{
    let (p, k, _) = vf
        .iter()
        .enumerate()
        .flat_map(|(i, v)| v.iter().enumerate().map(move |(j, x)| (i, j, x.abs())))
        .fold((0usize, 0usize, -1.0f64), |acc, (i, j, x)| if x > acc.2 { (i, j, x) } else { acc });
    let search = Search {
        eval,
        vf: vf[p].clone(),
        pivot: k,
        d,
        r2: (radius * radius).floor() as i128,
    };
    let mut count = 0u64;
    // Seed from a small full ball.
    let seed_r: f64 = match d {
        1 => 1.0,
        2 => 12.0,
        3 => 4.0,
        _ => 2.0,
    };
    let seed_r2 = (seed_r.min(radius) * seed_r.min(radius)).floor() as i128;
    let mut seed: Option<Best<E::Key>> = None;
    let b = isqrt_i128(seed_r2) as i64;
    let mut cur = vec![-b; d];
    'seed: loop {
        let n2: i128 = cur.iter().map(|&x| (x as i128) * (x as i128)).sum();
        if n2 > 0 && n2 <= seed_r2 && canonical(cur.clone()) == cur {
            search.consider(cur.clone(), n2, &mut seed, &mut count);
        }
        let mut i = d;
        loop {
            if i == 0 {
                break 'seed;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
    if d == 1 {
        return (seed.expect("ball contains m = 1"), count);
    }
    let r = isqrt_i128(search.r2) as i64;
    let results: Vec<(Option<Best<E::Key>>, u64)> = (0..=r)
        .into_par_iter()
        .map(|x0| {
            let mut best = seed.clone();
            let mut c = 0u64;
            let mut prefix = vec![x0];
            if d - 1 == 1 {
                let snapshot = best.clone();
                search.slab(&prefix, &snapshot, &mut c, &mut best);
            } else {
                search.rest_ball(&mut prefix, (x0 as i128) * (x0 as i128), x0 != 0, &mut best, &mut c);
            }
            (best, c)
        })
        .collect();
    let mut best = seed;
    for (b, c) in results {
        count += c;
        if let Some(b) = b {
            if best.as_ref().map_or(true, |cur| better(&b, cur)) {
                best = Some(b);
            }
        }
    }
    (best.expect("nonempty ball"), count)
}

fn validate(v: &[Vec<BigRational>], dim_e: usize, radius: f64) -> Result<()> {
    if v.is_empty() {
        return Err(Error::OutOfRange("at least one direction vector is required".into()));
    }
    if !(radius >= 1.0) || !radius.is_finite() {
        return Err(Error::OutOfRange(format!("radius {radius} must be at least 1")));
    }
    for x in v {
        if x.len() != dim_e {
            return Err(Error::DimensionMismatch {
                expected: dim_e,
                got: x.len(),
            });
        }
        if x.iter().all(|c| c.is_zero()) {
            return Err(Error::OutOfRange("direction vectors must be nonzero".into()));
        }
    }
    Ok(())
}

/// Certificate for `v_1..v_t` in `R^{dim_e}`. With `exact`, the vectors are
/// treated as exact rationals; otherwise they are approximations of real
/// directions and the reported constant is a directed lower bound.
pub fn diophantine_certificate(
    v: &[Vec<BigRational>],
    dim_e: usize,
    radius: f64,
    exact: bool,
) -> Result<DiophantineCertificate> {
    validate(v, dim_e, radius)?;
    let vf: Vec<Vec<f64>> = v
        .iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    let d = dim_e;
    let (c_emp, argmin, count, resonant) = if exact {
        let denom = v.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let w: Option<Vec<Vec<i128>>> = v
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer().to_i64().map(i128::from))
                    .collect()
            })
            .collect();
        let w = w.ok_or_else(|| Error::OutOfRange("exact direction entries exceed 64 bits".into()))?;
        let wint: Vec<Vec<BigInt>> = w.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let resonant = !integer_kernel(&wint, d).is_empty();
        let eval = ExactEval {
            w,
            d: d as u32,
            denom: denom.to_f64().unwrap_or(f64::INFINITY),
        };
        let (best, count) = run(&eval, &vf, d, radius);
        (eval.value(&best.key), best.m, count, resonant)
    } else {
        let eval = FloatEval {
            v: v.iter().map(|r| r.iter().map(DoubleDouble::from_rational).collect()).collect(),
            abs: vf.iter().map(|r| r.iter().map(|x| x.abs()).collect()).collect(),
            d: d as u32,
        };
        let (best, count) = run(&eval, &vf, d, radius);
        (eval.value(&best.key), best.m, count, false)
    };
    let c_emp = if resonant { 0.0_f64.min(c_emp) } else { c_emp };
    Ok(DiophantineCertificate {
        basis: vf,
        dim_e,
        radius,
        c_emp,
        argmin,
        passed: c_emp > 0.0 && !resonant,
        exact,
        candidates_examined: count,
    })
}

/// Same for directions given in double precision (taken as exact binary
/// values of irrational directions).
pub fn certificate_f64(v: &[Vec<f64>], dim_e: usize, radius: f64) -> Result<DiophantineCertificate> {
    let q: Vec<Vec<BigRational>> = v.iter().map(|r| r.iter().map(|&x| rational_from_f64(x)).collect()).collect();
    diophantine_certificate(&q, dim_e, radius, false)
}

/// Golden unstable direction `(1, φ - 1)` of the cat map to `bits` bits.
pub fn golden_direction(bits: u32) -> Vec<BigRational> {
    use crate::exactlin::precision::sqrt_lower;
    let five = BigRational::from_integer(5.into());
    let s = sqrt_lower(&five, bits + 8);
    let half = BigRational::new(1.into(), 2.into());
    vec![BigRational::one(), (s - BigRational::one()) * half]
}
