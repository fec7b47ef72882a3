//! Lyapunov functionals of a commuting family of automorphisms.
//!
//! The common primary refinement is computed exactly. Inside each common
//! block, joint eigenvalues are paired through a generic combination
//! `N = sum c_k M_k`: every root of `N` must match exactly one tuple of
//! generator roots, otherwise another combination is tried.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::primary::primary_decomposition;
use crate::exactlin::subspace::{coordinates, intersection};
use crate::exactlin::{berkowitz, isolate_roots, lyapunov_data, LyapunovSplitting, RationalSquareMatrix, SquareMatrix};
use crate::scalar::rational_from_int;

/// `z -> sum_k z_k values[k]`; `blocks[k]` is the Lyapunov block of
/// generator `k`, so two functionals are equal iff their blocks agree.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LyapunovFunctional {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub blocks: Vec<usize>,
    pub multiplicity: usize,
}

impl LyapunovFunctional {
    /// Value and certified error bound at `z`.
    pub fn eval(&self, z: &[i64]) -> (f64, f64) {
        let v: f64 = z.iter().zip(&self.values).map(|(a, b)| *a as f64 * b).sum();
        let e: f64 = z.iter().zip(&self.errors).map(|(a, b)| (*a as f64).abs() * b).sum();
        (v, e + 4.0 * f64::EPSILON * v.abs())
    }

    pub fn eval_real(&self, z: &[f64]) -> (f64, f64) {
        let v: f64 = z.iter().zip(&self.values).map(|(a, b)| a * b).sum();
        let e: f64 = z.iter().zip(&self.errors).map(|(a, b)| a.abs() * b).sum();
        (v, e + 4.0 * f64::EPSILON * v.abs())
    }

    /// Identically zero, certified (every component is an exact zero exponent).
    pub fn is_zero(&self) -> bool {
        self.values.iter().zip(&self.errors).all(|(v, e)| *v == 0.0 && *e == 0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalSet {
    pub rank: usize,
    pub functionals: Vec<LyapunovFunctional>,
    #[serde(skip)]
    pub splittings: Vec<LyapunovSplitting>,
}

impl FunctionalSet {
    pub fn nonzero(&self) -> impl Iterator<Item = &LyapunovFunctional> {
        self.functionals.iter().filter(|f| !f.is_zero())
    }
}

pub fn check_commuting(gens: &[RationalSquareMatrix]) -> Result<()> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].dim() != gens[j].dim() {
                return Err(Error::DimensionMismatch {
                    expected: gens[i].dim(),
                    got: gens[j].dim(),
                });
            }
            if !gens[i].commutes_with(&gens[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

fn restricted(m: &RationalSquareMatrix, basis: &[Vec<BigRational>]) -> Result<RationalSquareMatrix> {
    let k = basis.len();
    let mut out = SquareMatrix::zeros(k);
    for (j, b) in basis.iter().enumerate() {
        let c = coordinates(basis, &m.apply(b))
            .ok_or_else(|| Error::Malformed("common block is not invariant".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    Ok(out)
}

type Tuple = Vec<usize>;

fn match_tuples(
    n: &RationalSquareMatrix,
    c: &[i64],
    roots: &[Vec<(f64, f64)>],
) -> Result<Option<Vec<Tuple>>> {
    let cp = berkowitz(n);
    let sq = cp.div_exact(&cp.gcd(&cp.derivative())).expect("gcd divides");
    let nu = isolate_roots(&sq.primitive_integer(), 64)?;
    let mut all: Vec<Tuple> = vec![Vec::new()];
    for r in roots {
        all = all
            .into_iter()
            .flat_map(|t| {
                (0..r.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for root in &nu.roots {
        let (vr, vi) = root.center.to_f64();
        let mut scored: Vec<(f64, &Tuple)> = all
            .iter()
            .map(|t| {
                let (mut sr, mut si) = (0.0, 0.0);
                for (k, &i) in t.iter().enumerate() {
                    sr += c[k] as f64 * roots[k][i].0;
                    si += c[k] as f64 * roots[k][i].1;
                }
                (((sr - vr).powi(2) + (si - vi).powi(2)).sqrt(), t)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = 1e-7 * (1.0 + vr.hypot(vi));
        let unique = scored[0].0 < tol && scored.get(1).map_or(true, |s| s.0 > 100.0 * tol);
        if !unique {
            return Ok(None);
        }
        out.push(scored[0].1.clone());
    }
    Ok(Some(out))
}

pub fn lyapunov_functionals(gens: &[RationalSquareMatrix]) -> Result<FunctionalSet> {
    if gens.is_empty() {
        return Err(Error::Malformed("at least one generator is required".into()));
    }
    check_commuting(gens)?;
    let n = gens[0].dim();
    let splittings: Vec<LyapunovSplitting> = gens.iter().map(lyapunov_data).collect::<Result<_>>()?;
    let pds = gens.iter().map(primary_decomposition).collect::<Result<Vec<_>>>()?;
    let full: Vec<Vec<BigRational>> = (0..n).map(|i| crate::nilalg::algebra::unit(n, i)).collect();
    let mut common: Vec<(Vec<Vec<BigRational>>, Vec<usize>)> = vec![(full, Vec::new())];
    for pd in &pds {
        let mut next = Vec::new();
        for (f, idx) in &common {
            for (bi, b) in pd.blocks.iter().enumerate() {
                let g = intersection(f, &b.basis, n);
                if !g.is_empty() {
                    let mut idx = idx.clone();
                    idx.push(bi);
                    next.push((g, idx));
                }
            }
        }
        common = next;
    }
    let mut functionals: Vec<LyapunovFunctional> = Vec::new();
    for (basis, idx) in &common {
        let roots: Vec<Vec<(f64, f64)>> = idx
            .iter()
            .enumerate()
            .map(|(k, &b)| splittings[k].primaries[b].roots.clone())
            .collect();
        let restr: Vec<RationalSquareMatrix> = gens.iter().map(|g| restricted(g, basis)).collect::<Result<_>>()?;
        let mut tuples = None;
        for t in 2..40i64 {
            let c: Vec<i64> = (0..gens.len()).map(|k| t.pow(k as u32)).collect();
            let mut comb = SquareMatrix::zeros(basis.len());
            for (k, r) in restr.iter().enumerate() {
                comb = comb.add(&r.scale(&rational_from_int(c[k])));
            }
            if let Some(ts) = match_tuples(&comb, &c, &roots)? {
                tuples = Some(ts);
                break;
            }
        }
        let tuples = tuples.ok_or_else(|| Error::SearchFailed("joint eigenvalues could not be paired".into()))?;
        let mult = basis.len() / tuples.len();
        for t in tuples {
            let blocks: Vec<usize> = t
                .iter()
                .enumerate()
                .map(|(k, &r)| splittings[k].primaries[idx[k]].root_blocks[r])
                .collect();
            if let Some(f) = functionals.iter_mut().find(|f| f.blocks == blocks) {
                f.multiplicity += mult;
                continue;
            }
            functionals.push(LyapunovFunctional {
                values: blocks.iter().enumerate().map(|(k, &b)| splittings[k].blocks[b].exponent).collect(),
                errors: blocks.iter().enumerate().map(|(k, &b)| splittings[k].blocks[b].error).collect(),
                blocks,
                multiplicity: mult,
            });
        }
    }
    functionals.sort_by(|a, b| {
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(FunctionalSet {
        rank: gens.len(),
        functionals,
        splittings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_map_has_two_opposite_functionals() {
        let m = RationalSquareMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let fs = lyapunov_functionals(&[m]).unwrap();
        assert_eq!(fs.functionals.len(), 2);
        assert!((fs.functionals[0].values[0] + fs.functionals[1].values[0]).abs() < 1e-14);
    }

    #[test]
    fn cubic_units_pair_correctly() {
        let c = RationalSquareMatrix::from_i64_rows(&[&[0, 0, -1], &[1, 0, 2], &[0, 1, 1]]).unwrap();
        let d = c.sub(&RationalSquareMatrix::identity(3));
        let fs = lyapunov_functionals(&[c, d]).unwrap();
        assert_eq!(fs.functionals.len(), 3);
        // Roots of x^3 - x^2 - 2x + 1 and the same roots shifted by -1.
        let roots = [1.8019377358048383f64, -1.2469796037174667, 0.4450418679126288];
        for r in roots {
            let want = (r.abs().ln(), (r - 1.0).abs().ln());
            assert!(fs
                .functionals
                .iter()
                .any(|f| (f.values[0] - want.0).abs() < 1e-12 && (f.values[1] - want.1).abs() < 1e-12));
        }
    }

    #[test]
    fn non_commuting_rejected() {
        let a = RationalSquareMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let b = RationalSquareMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(lyapunov_functionals(&[a, b]).unwrap_err(), Error::NonCommuting(0, 1));
    }
}
