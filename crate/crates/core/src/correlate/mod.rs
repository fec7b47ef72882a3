//! Exact multiple correlations of trigonometric polynomials under toral
//! `Z^l` actions, by resonance summation.
//!
//! `∫ prod_i f_i(M^{z_i} x) dx = sum prod_i c_i(k_i)` over tuples with
//! `sum_i (M^{z_i})^T k_i = 0`. Frequencies are transported with big
//! integers, and tuples are matched meet-in-the-middle.

mod demos;
mod series;

pub use demos::{counterexample_maxgap, no_uniform_bound_demo, CounterexampleSeries};
pub use series::{decay_fit, CorrelationSeries, DecayFit, SeriesEntry};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{RationalSquareMatrix, SquareMatrix};
use crate::fracsolve::Observable;
use crate::nilalg::functionals::check_commuting;
use crate::scalar::Coefficient;

pub const DEFAULT_BUDGET: u128 = 10_000_000;

type IntMatrix = SquareMatrix<BigInt>;

/// Transposes of the generators and of their inverses, as integer matrices.
#[derive(Clone, Debug)]
pub struct IntegerAction {
    dim: usize,
    forward: Vec<IntMatrix>,
    backward: Vec<IntMatrix>,
}

impl IntegerAction {
    pub fn new(gens: &[RationalSquareMatrix]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Malformed("at least one generator is required".into()));
        }
        check_commuting(gens)?;
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if !g.is_unimodular_integer() {
                return Err(Error::InvalidAutomorphism(format!("generator {i} is not in GL(n, Z)")));
            }
            let inv = g.inverse()?;
            forward.push(g.transpose().to_integer().expect("integer matrix"));
            backward.push(inv.transpose().to_integer().expect("unimodular inverse"));
        }
        Ok(IntegerAction {
            dim: gens[0].dim(),
            forward,
            backward,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.forward.len()
    }

    /// `(M^z)^T`.
    pub fn transport(&self, z: &[i64]) -> Result<IntMatrix> {
        if z.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: z.len() });
        }
        let mut p = IntMatrix::identity(self.dim);
        for (k, &e) in z.iter().enumerate() {
            let base = if e >= 0 { &self.forward[k] } else { &self.backward[k] };
            if e != 0 {
                p = p.mul(&base.pow(e.unsigned_abs()));
            }
        }
        Ok(p)
    }
}

fn apply(p: &IntMatrix, k: &[i64]) -> Vec<BigInt> {
    let kb: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
    p.apply(&kb)
}

fn to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

fn check_obs<C: Coefficient>(fs: &[&Observable<C>], dim: usize) -> Result<()> {
    for f in fs {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: f.dim() });
        }
    }
    Ok(())
}

/// `<f ∘ M^m, g> = sum_k f(k) conj(g((M^T)^m k))`.
pub fn correlation2<C: Coefficient>(f: &Observable<C>, g: &Observable<C>, m: &RationalSquareMatrix, t: i64) -> Result<C> {
    let action = IntegerAction::new(std::slice::from_ref(m))?;
    correlation2_with(f, g, &action, &[t])
}

pub fn correlation2_with<C: Coefficient>(f: &Observable<C>, g: &Observable<C>, action: &IntegerAction, z: &[i64]) -> Result<C> {
    check_obs(&[f, g], action.dim())?;
    let p = action.transport(z)?;
    let mut acc = C::zero();
    for (k, c) in f.iter() {
        if let Some(k2) = to_i64(&apply(&p, k)) {
            if let Some(d) = g.get(&k2) {
                acc = acc.add(&c.mul(&d.conj()));
            }
        }
    }
    Ok(acc)
}

/// Enumerates index tuples of the given factors in lexicographic order.
fn for_each_tuple(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&s| s == 0) {
        return;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        f(&idx);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

type Transported<C> = Vec<(Vec<BigInt>, C)>;

fn half_sums<C: Coefficient>(parts: &[Transported<C>], dim: usize) -> HashMap<Vec<BigInt>, C> {
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let mut map: HashMap<Vec<BigInt>, C> = HashMap::new();
    for_each_tuple(&sizes, |idx| {
        let mut s = vec![BigInt::zero(); dim];
        let mut c = C::one();
        for (p, &i) in parts.iter().zip(idx) {
            for (a, b) in s.iter_mut().zip(&p[i].0) {
                *a += b;
            }
            c = c.mul(&p[i].1);
        }
        map.entry(s).and_modify(|v| *v = v.add(&c)).or_insert(c);
    });
    map
}

/// `∫ prod_i f_i(M^{z_i} x) dx` for commuting generators, no conjugation.
pub fn correlation_n<C: Coefficient>(fs: &[Observable<C>], action: &IntegerAction, times: &[Vec<i64>], budget: u128) -> Result<C> {
    if fs.len() < 2 {
        return Err(Error::OutOfRange("at least two observables are required".into()));
    }
    integral_of_product(fs, action, times, budget)
}

pub(crate) fn integral_of_product<C: Coefficient>(
    fs: &[Observable<C>],
    action: &IntegerAction,
    times: &[Vec<i64>],
    budget: u128,
) -> Result<C> {
    if fs.len() != times.len() {
        return Err(Error::DimensionMismatch { expected: fs.len(), got: times.len() });
    }
    check_obs(&fs.iter().collect::<Vec<_>>(), action.dim())?;
    let dim = action.dim();
    let parts: Vec<Transported<C>> = fs
        .iter()
        .zip(times)
        .map(|(f, z)| {
            let p = action.transport(z)?;
            Ok(f.iter().map(|(k, c)| (apply(&p, k), c.clone())).collect())
        })
        .collect::<Result<_>>()?;
    let sizes: Vec<u128> = parts.iter().map(|p| p.len() as u128).collect();
    if sizes.iter().any(|&s| s == 0) {
        return Ok(C::zero());
    }
    // Split so that the two half products are as balanced as possible.
    let n = parts.len();
    let (mut h, mut needed) = (1, u128::MAX);
    for cut in 1..n {
        let a = sizes[..cut].iter().try_fold(1u128, |x, &y| x.checked_mul(y)).unwrap_or(u128::MAX);
        let b = sizes[cut..].iter().try_fold(1u128, |x, &y| x.checked_mul(y)).unwrap_or(u128::MAX);
        let cost = a.saturating_add(b);
        if cost < needed {
            needed = cost;
            h = cut;
        }
    }
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let left = half_sums(&parts[..h], dim);
    let right = &parts[h..];
    let rest_sizes: Vec<usize> = right[1..].iter().map(|p| p.len()).collect();
    let partials: Vec<C> = (0..right[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut acc = C::zero();
            let mut visit = |idx: &[usize]| {
                let mut s: Vec<BigInt> = right[0][i0].0.iter().map(|x| -x).collect();
                let mut c = right[0][i0].1.clone();
                for (p, &i) in right[1..].iter().zip(idx) {
                    for (a, b) in s.iter_mut().zip(&p[i].0) {
                        *a -= b;
                    }
                    c = c.mul(&p[i].1);
                }
                if let Some(l) = left.get(&s) {
                    acc = acc.add(&l.mul(&c));
                }
            };
            if rest_sizes.is_empty() {
                visit(&[]);
            } else {
                for_each_tuple(&rest_sizes, &mut visit);
            }
            acc
        })
        .collect();
    Ok(partials.iter().fold(C::zero(), |a, b| a.add(b)))
}

/// Smallest `m*` such that no support frequency of `f` (radius `rf`) is sent
/// into the ball of radius `rg` by `(M^T)^m` for `m* <= m <= max_m`.
pub fn resonance_horizon(m: &RationalSquareMatrix, rf: i64, rg: f64, max_m: i64) -> Result<i64> {
    let action = IntegerAction::new(std::slice::from_ref(m))?;
    let d = action.dim();
    let mut last = 0;
    let mut k = vec![-rf; d];
    let p = action.transport(&[1])?;
    'outer: loop {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if n2 > 0 && n2 <= rf * rf {
            let mut v: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
            for t in 1..=max_m {
                v = p.apply(&v);
                let norm2: f64 = v.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum();
                if norm2 <= rg * rg {
                    last = last.max(t);
                }
            }
        }
        let mut i = d;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if k[i] < rf {
                k[i] += 1;
                break;
            }
            k[i] = -rf;
        }
    }
    Ok(last + 1)
}
