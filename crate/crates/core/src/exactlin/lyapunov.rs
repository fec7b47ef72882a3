//! Lyapunov splitting of a rational matrix with certified exponents.
//!
//! Eigenvalue moduli are enclosed through certified roots of each primary
//! factor. Overlapping enclosures are merged only after equality is proved:
//! structurally (conjugate pairs, cyclotomic factors) or by a Sturm count on
//! the polynomial whose roots are all products `λ_i λ_j` of the factors
//! involved. Anything else escalates the precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cyclotomic::cyclotomic_order_unchecked;
use super::matrix::SquareMatrix;
use super::poly::{berkowitz, IntegerPolynomial, RationalPolynomial};
use super::precision::{ln_rational, round_bits, DEFAULT_BITS, MAX_BITS};
use super::primary::{primary_decomposition, PrimaryDecomposition};
use super::roots::{isolate_roots, RootSet};
use super::sturm::count_real_roots;
use crate::error::{Error, Result};

/// Eigenvalues of one primary factor sharing a modulus.
#[derive(Clone, Debug, Serialize)]
pub struct SubBlock {
    pub exponent: f64,
    pub error: f64,
    /// Number of roots of the factor in this group.
    pub roots: usize,
    /// Index of the global block.
    pub global: usize,
    /// Working-precision basis, reduced so each vector has a unit pivot.
    #[serde(skip)]
    pub basis: Vec<Vec<BigRational>>,
    pub basis_f64: Vec<Vec<f64>>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimaryLyapunov {
    pub factor: IntegerPolynomial,
    pub multiplicity: u32,
    pub cyclotomic: Option<u64>,
    /// Approximate roots of the factor, in certified-isolation order.
    pub roots: Vec<(f64, f64)>,
    /// Global block of each root.
    pub root_blocks: Vec<usize>,
    /// Ascending exponents.
    pub sub_blocks: Vec<SubBlock>,
}

impl PrimaryLyapunov {
    pub fn blockmax(&self) -> &SubBlock {
        self.sub_blocks.last().expect("nonempty block")
    }

    pub fn blockmin(&self) -> &SubBlock {
        self.sub_blocks.first().expect("nonempty block")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovBlock {
    pub exponent: f64,
    pub error: f64,
    pub multiplicity: usize,
    pub basis: Vec<Vec<f64>>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovSplitting {
    pub dim: usize,
    pub bits: u32,
    pub blocks: Vec<LyapunovBlock>,
    pub primaries: Vec<PrimaryLyapunov>,
    pub w_plus: Vec<Vec<f64>>,
    pub w_zero: Vec<Vec<f64>>,
    pub w_minus: Vec<Vec<f64>>,
    #[serde(skip)]
    pub w_plus_hp: Vec<Vec<BigRational>>,
    #[serde(skip)]
    pub w_zero_hp: Vec<Vec<BigRational>>,
    #[serde(skip)]
    pub w_minus_hp: Vec<Vec<BigRational>>,
}

impl LyapunovSplitting {
    /// Exponents with multiplicity, ascending.
    pub fn exponents(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat(b.exponent).take(b.multiplicity))
            .collect()
    }

    /// `(sum of exponents with multiplicity, certified error)`.
    pub fn exponent_sum(&self) -> (f64, f64) {
        let s: f64 = self.blocks.iter().map(|b| b.exponent * b.multiplicity as f64).sum();
        let e: f64 = self.blocks.iter().map(|b| b.error * b.multiplicity as f64).sum();
        (s, e + 1e-15 * self.dim as f64)
    }

    pub fn max_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.residual)
            .chain(self.primaries.iter().flat_map(|p| p.sub_blocks.iter().map(|s| s.residual)))
            .fold(0.0, f64::max)
    }

    pub fn min_abs_nonzero_exponent(&self) -> Option<f64> {
        self.blocks
            .iter()
            .filter(|b| b.exponent != 0.0)
            .map(|b| b.exponent.abs())
            .min_by(|a, b| a.total_cmp(b))
    }
}

struct Entry {
    block: usize,
    root: usize,
    lo: BigRational,
    hi: BigRational,
}

const UNIT: usize = usize::MAX;

fn companion(q: &RationalPolynomial) -> SquareMatrix<BigRational> {
    let q = q.monic();
    let n = q.degree();
    let mut c = SquareMatrix::zeros(n);
    for i in 1..n {
        c.set(i, i - 1, BigRational::one());
    }
    for i in 0..n {
        c.set(i, n - 1, -q.coeff(i));
    }
    c
}

fn kronecker(a: &SquareMatrix<BigRational>, b: &SquareMatrix<BigRational>) -> SquareMatrix<BigRational> {
    let (n, m) = (a.dim(), b.dim());
    let mut k = SquareMatrix::zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j).is_zero() {
                continue;
            }
            for r in 0..m {
                for s in 0..m {
                    k.set(i * m + r, j * m + s, a.get(i, j) * b.get(r, s));
                }
            }
        }
    }
    k
}

/// Polynomial vanishing at every `|λ|^2` for roots `λ` of the given factors.
fn modulus_square_poly(factors: &[&IntegerPolynomial]) -> RationalPolynomial {
    let q = factors
        .iter()
        .fold(RationalPolynomial::one(), |acc, f| acc.mul(&f.to_rational()));
    let c = companion(&q);
    berkowitz(&kronecker(&c, &c))
}

enum Grouping {
    Done(Vec<Vec<usize>>),
    Escalate,
}

fn group_moduli(
    pd: &PrimaryDecomposition,
    roots: &[RootSet],
    cyclo: &[Option<u64>],
    entries: &[Entry],
) -> Grouping {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[a].lo.cmp(&entries[b].lo));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut hull_hi: Option<BigRational> = None;
    for &i in &order {
        match &hull_hi {
            Some(h) if entries[i].lo <= *h => {
                clusters.last_mut().unwrap().push(i);
                if entries[i].hi > *h {
                    hull_hi = Some(entries[i].hi.clone());
                }
            }
            _ => {
                clusters.push(vec![i]);
                hull_hi = Some(entries[i].hi.clone());
            }
        }
    }
    for cl in &clusters {
        if cl.len() < 2 {
            continue;
        }
        let real: Vec<&Entry> = cl.iter().map(|&i| &entries[i]).filter(|e| e.block != UNIT).collect();
        let has_unit = real.len() < cl.len();
        if real.iter().all(|e| cyclo[e.block].is_some()) {
            continue;
        }
        if !has_unit
            && real.len() == 2
            && real[0].block == real[1].block
            && roots[real[0].block].roots[real[0].root].conjugate == real[1].root
        {
            continue;
        }
        if real.iter().any(|e| e.lo.is_zero()) {
            return Grouping::Escalate;
        }
        let mut blocks: Vec<usize> = real.iter().map(|e| e.block).collect();
        blocks.sort_unstable();
        blocks.dedup();
        let factors: Vec<&IntegerPolynomial> = blocks.iter().map(|&b| &pd.blocks[b].factor).collect();
        let mut p = modulus_square_poly(&factors);
        if has_unit {
            p = p.mul(&RationalPolynomial::linear(BigRational::one()));
        }
        let lo = cl.iter().map(|&i| &entries[i].lo).min().unwrap();
        let hi = cl.iter().map(|&i| &entries[i].hi).max().unwrap();
        if count_real_roots(&p, lo, hi) != 1 {
            return Grouping::Escalate;
        }
    }
    Grouping::Done(clusters)
}

/// Applies `prod (M - λ)` over the given real factors to `v`, rounding.
fn apply_real_factors(
    m: &SquareMatrix<BigRational>,
    factors: &[(BigRational, Option<BigRational>)],
    v: &[BigRational],
    bits: u32,
) -> Vec<BigRational> {
    let round = |x: Vec<BigRational>| -> Vec<BigRational> { x.iter().map(|y| round_bits(y, bits)).collect() };
    let mut v = v.to_vec();
    for (a, b) in factors {
        let mv = round(m.apply(&v));
        v = match b {
            // Linear factor x - a.
            None => round(mv.iter().zip(&v).map(|(x, y)| x - a * y).collect()),
            // Quadratic factor x^2 + a x + b.
            Some(b) => {
                let mmv = round(m.apply(&mv));
                round(
                    mmv.iter()
                        .zip(&mv)
                        .zip(&v)
                        .map(|((x, y), z)| x + a * y + b * z)
                        .collect(),
                )
            }
        };
    }
    v
}

/// Complete-pivoting reduction of a spanning set to `k` vectors, returned in
/// reduced form: each vector has coordinate 1 at its pivot column and 0 at
/// the other pivots, and pivots are chosen by maximal magnitude.
pub fn reduce_span(vectors: &[Vec<BigRational>], k: usize, bits: Option<u32>) -> Vec<Vec<BigRational>> {
    let rnd = |x: BigRational| match bits {
        Some(b) => round_bits(&x, b),
        None => x,
    };
    let n = vectors.first().map_or(0, |v| v.len());
    let mut rows = vectors.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    for step in 0..k.min(rows.len()) {
        let mut best: Option<(usize, usize, BigRational)> = None;
        for (r, row) in rows.iter().enumerate().skip(step) {
            for (c, x) in row.iter().enumerate() {
                if pivots.contains(&c) {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().map_or(true, |(_, _, b)| a > *b) {
                    best = Some((r, c, a));
                }
            }
        }
        let Some((r, c, a)) = best else { break };
        if a.is_zero() {
            break;
        }
        rows.swap(step, r);
        pivots.push(c);
        let pv = rows[step][c].clone();
        for r2 in step + 1..rows.len() {
            if rows[r2][c].is_zero() {
                continue;
            }
            let f = &rows[r2][c] / &pv;
            for j in 0..n {
                let d = &f * &rows[step][j];
                rows[r2][j] = rnd(&rows[r2][j] - d);
            }
            rows[r2][c] = BigRational::zero();
        }
    }
    let k = pivots.len();
    rows.truncate(k);
    for t in 0..k {
        let p = pivots[t];
        let pv = rows[t][p].clone();
        for j in 0..n {
            rows[t][j] = rnd(&rows[t][j] / &pv);
        }
        rows[t][p] = BigRational::one();
        for s in 0..k {
            if s == t || rows[s][p].is_zero() {
                continue;
            }
            let f = rows[s][p].clone();
            for j in 0..n {
                let d = &f * &rows[t][j];
                rows[s][j] = rnd(&rows[s][j] - d);
            }
            rows[s][p] = BigRational::zero();
        }
    }
    let mut paired: Vec<(usize, Vec<BigRational>)> = pivots.into_iter().zip(rows).collect();
    paired.sort_by_key(|(p, _)| *p);
    paired.into_iter().map(|(_, r)| r).collect()
}

/// Orthonormal basis (modified Gram-Schmidt, two passes).
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= d * y;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            out.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// `max ||M v - P(M v)||` over the orthonormal basis vectors `v`.
pub fn invariance_residual(m: &SquareMatrix<f64>, basis: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for v in basis {
        let w = m.apply(v);
        let mut r = w.clone();
        for b in basis {
            let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in r.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let scale = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        worst = worst.max(r.iter().map(|x| x * x).sum::<f64>().sqrt() / scale);
    }
    worst
}

fn to_f64_vectors(v: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    v.iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn exponent_of(lo: &BigRational, hi: &BigRational) -> (f64, f64) {
    let (a, ea) = ln_rational(lo);
    let (b, eb) = ln_rational(hi);
    let lo_x = 0.5 * (a - ea);
    let hi_x = 0.5 * (b + eb);
    let mid = 0.5 * (lo_x + hi_x);
    (mid, 0.5 * (hi_x - lo_x) + 4.0 * f64::EPSILON * mid.abs())
}

pub fn lyapunov_data(m: &SquareMatrix<BigRational>) -> Result<LyapunovSplitting> {
    lyapunov_data_at(m, DEFAULT_BITS)
}

/// Lyapunov splitting starting at `bits` of working precision.
pub fn lyapunov_data_at(m: &SquareMatrix<BigRational>, bits: u32) -> Result<LyapunovSplitting> {
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    let pd = primary_decomposition(m)?;
    let cyclo: Vec<Option<u64>> = pd
        .blocks
        .iter()
        .map(|b| cyclotomic_order_unchecked(&b.factor))
        .collect();
    let mut bits = bits.max(80);
    let (roots, clusters, entries) = loop {
        let mut roots = Vec::new();
        for b in &pd.blocks {
            let rs = isolate_roots(&b.factor, bits)?;
            bits = bits.max(rs.bits);
            roots.push(rs);
        }
        let mut entries = Vec::new();
        for (bi, rs) in roots.iter().enumerate() {
            for (ri, r) in rs.roots.iter().enumerate() {
                let (lo, hi) = r.modulus_sqr_bounds(bits);
                entries.push(Entry { block: bi, root: ri, lo, hi });
            }
        }
        entries.push(Entry {
            block: UNIT,
            root: 0,
            lo: BigRational::one(),
            hi: BigRational::one(),
        });
        match group_moduli(&pd, &roots, &cyclo, &entries) {
            Grouping::Done(c) => break (roots, c, entries),
            Grouping::Escalate => {
                if bits >= MAX_BITS {
                    return Err(Error::Precision {
                        bits,
                        detail: "eigenvalue moduli neither separated nor proved equal".into(),
                    });
                }
                bits *= 2;
            }
        }
    };
    // Drop the cluster holding only the unit marker.
    let clusters: Vec<Vec<usize>> = clusters
        .into_iter()
        .filter(|c| c.iter().any(|&i| entries[i].block != UNIT))
        .collect();
    let mf = m.to_f64();
    let mut global_exp = Vec::new();
    let mut cluster_of = vec![Vec::new(); pd.blocks.len()];
    for (ci, cl) in clusters.iter().enumerate() {
        let unit = cl.iter().any(|&i| entries[i].block == UNIT);
        let (exp, err) = if unit {
            (0.0, 0.0)
        } else {
            let lo = cl.iter().map(|&i| &entries[i].lo).max().unwrap();
            let hi = cl.iter().map(|&i| &entries[i].hi).min().unwrap();
            if lo <= hi {
                exponent_of(lo, hi)
            } else {
                exponent_of(hi, lo)
            }
        };
        global_exp.push((exp, err));
        for &i in cl {
            let e = &entries[i];
            if e.block != UNIT {
                cluster_of[e.block].push((e.root, ci));
            }
        }
    }
    let mut primaries = Vec::new();
    for (bi, block) in pd.blocks.iter().enumerate() {
        let rs = &roots[bi].roots;
        let mut groups: Vec<usize> = cluster_of[bi].iter().map(|(_, c)| *c).collect();
        groups.sort_unstable();
        groups.dedup();
        let mut subs = Vec::new();
        for &g in &groups {
            let members: Vec<usize> = cluster_of[bi].iter().filter(|(_, c)| *c == g).map(|(r, _)| *r).collect();
            let mut factors = Vec::new();
            for (ri, r) in rs.iter().enumerate() {
                if members.contains(&ri) {
                    continue;
                }
                if r.is_real {
                    factors.push((r.center.re.clone(), None));
                } else if ri < r.conjugate {
                    factors.push((-(&r.center.re * BigRational::from_integer(BigInt::from(2))), Some(r.center.norm_sqr())));
                }
            }
            let k = members.len() * block.multiplicity as usize;
            let basis = if factors.is_empty() {
                reduce_span(&block.basis, k, None)
            } else {
                let mut all = Vec::new();
                for _ in 0..block.multiplicity {
                    all.extend(factors.iter().cloned());
                }
                let images: Vec<Vec<BigRational>> = block
                    .basis
                    .iter()
                    .map(|v| apply_real_factors(m, &all, v, bits))
                    .collect();
                reduce_span(&images, k, Some(bits))
            };
            let basis_f64 = orthonormalize(&to_f64_vectors(&basis));
            let residual = invariance_residual(&mf, &basis_f64);
            subs.push(SubBlock {
                exponent: global_exp[g].0,
                error: global_exp[g].1,
                roots: members.len(),
                global: g,
                basis,
                basis_f64,
                residual,
            });
        }
        let mut root_blocks = vec![0; rs.len()];
        for &(r, c) in &cluster_of[bi] {
            root_blocks[r] = c;
        }
        primaries.push(PrimaryLyapunov {
            factor: block.factor.clone(),
            multiplicity: block.multiplicity,
            cyclotomic: cyclo[bi],
            roots: rs.iter().map(|r| r.center.to_f64()).collect(),
            root_blocks,
            sub_blocks: subs,
        });
    }
    let mut blocks = Vec::new();
    for (g, &(exponent, error)) in global_exp.iter().enumerate() {
        let vecs: Vec<Vec<f64>> = primaries
            .iter()
            .flat_map(|p| p.sub_blocks.iter().filter(|s| s.global == g))
            .flat_map(|s| s.basis_f64.clone())
            .collect();
        let basis = orthonormalize(&vecs);
        let residual = invariance_residual(&mf, &basis);
        blocks.push(LyapunovBlock {
            exponent,
            error,
            multiplicity: basis.len(),
            basis,
            residual,
        });
    }
    let union = |keep: &dyn Fn(f64) -> bool| -> Vec<Vec<BigRational>> {
        let v: Vec<Vec<BigRational>> = primaries
            .iter()
            .flat_map(|p| p.sub_blocks.iter())
            .filter(|s| keep(s.exponent))
            .flat_map(|s| s.basis.clone())
            .collect();
        let k = v.len();
        reduce_span(&v, k, Some(bits))
    };
    let w_plus_hp = union(&|e| e > 0.0);
    let w_zero_hp = union(&|e| e == 0.0);
    let w_minus_hp = union(&|e| e < 0.0);
    Ok(LyapunovSplitting {
        dim: m.dim(),
        bits,
        blocks,
        w_plus: orthonormalize(&to_f64_vectors(&w_plus_hp)),
        w_zero: orthonormalize(&to_f64_vectors(&w_zero_hp)),
        w_minus: orthonormalize(&to_f64_vectors(&w_minus_hp)),
        primaries,
        w_plus_hp,
        w_zero_hp,
        w_minus_hp,
    })
}
