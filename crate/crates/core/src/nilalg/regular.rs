//! Regular elements of a commuting family (search of the shrinking type).

use num_rational::BigRational;
use serde::Serialize;

use super::algebra::NilpotentAlgebra;
use super::automorphism::require_automorphism;
use super::functionals::{check_commuting, lyapunov_functionals, FunctionalSet};
use crate::error::{Error, Result};
use crate::exactlin::matrix::rational_serde;
use crate::exactlin::subspace::intersection;
use crate::exactlin::{root_of_unity_subspace, RationalSquareMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct RegularityCertificate {
    /// `min |χ(z)|` over nonzero functionals.
    pub min_functional: f64,
    /// `min |χ_1(z) - χ_2(z)|` over distinct functionals.
    pub min_coincidence_gap: f64,
    /// Every inequality above holds beyond its certified error.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularElement {
    pub z: Vec<i64>,
    #[serde(with = "rational_serde::nested")]
    pub n_z2: Vec<Vec<BigRational>>,
    #[serde(with = "rational_serde::nested")]
    pub n2: Vec<Vec<BigRational>>,
    pub certificate: RegularityCertificate,
}

/// `M^z = prod M_k^{z_k}`, exact.
pub fn action_matrix(gens: &[RationalSquareMatrix], z: &[i64]) -> Result<RationalSquareMatrix> {
    let mut m = RationalSquareMatrix::identity(gens[0].dim());
    for (g, &e) in gens.iter().zip(z) {
        if e != 0 {
            m = m.mul(&g.pow_signed(e)?);
        }
    }
    Ok(m)
}

/// `n^(z,2)`: generalized eigenspaces of `M^z` with root-of-unity eigenvalues.
pub fn n_z2(gens: &[RationalSquareMatrix], z: &[i64]) -> Result<Vec<Vec<BigRational>>> {
    Ok(root_of_unity_subspace(&action_matrix(gens, z)?))
}

/// `n^(2) = ∩_{z != 0} n^(z,2)`, which equals the intersection over the
/// generators for a commuting family.
pub fn n2(gens: &[RationalSquareMatrix]) -> Vec<Vec<BigRational>> {
    let n = gens[0].dim();
    let mut acc: Option<Vec<Vec<BigRational>>> = None;
    for g in gens {
        let s = root_of_unity_subspace(g);
        acc = Some(match acc {
            None => s,
            Some(a) => intersection(&a, &s, n),
        });
    }
    acc.unwrap_or_default()
}

pub fn regularity(fs: &FunctionalSet, z: &[i64]) -> RegularityCertificate {
    let mut cert = RegularityCertificate {
        min_functional: f64::INFINITY,
        min_coincidence_gap: f64::INFINITY,
        certified: true,
    };
    for f in fs.nonzero() {
        let (v, e) = f.eval(z);
        cert.min_functional = cert.min_functional.min(v.abs());
        if v.abs() <= e {
            cert.certified = false;
        }
    }
    let fl = &fs.functionals;
    for i in 0..fl.len() {
        for j in i + 1..fl.len() {
            let (a, ea) = fl[i].eval(z);
            let (b, eb) = fl[j].eval(z);
            cert.min_coincidence_gap = cert.min_coincidence_gap.min((a - b).abs());
            if (a - b).abs() <= ea + eb {
                cert.certified = false;
            }
        }
    }
    cert
}

fn unit_z(l: usize, k: usize) -> Vec<i64> {
    let mut z = vec![0; l];
    z[k] = 1;
    z
}

/// Integer vectors with max-norm exactly `r`, in lexicographic order.
fn shell(l: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; l];
    loop {
        if cur.iter().any(|x| x.abs() == r) {
            out.push(cur.clone());
        }
        let mut i = l;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                break;
            }
            cur[i] = -r;
        }
    }
}

pub fn find_regular_element(a: &NilpotentAlgebra, gens: &[RationalSquareMatrix]) -> Result<RegularElement> {
    if gens.is_empty() {
        return Err(Error::Malformed("at least one generator is required".into()));
    }
    check_commuting(gens)?;
    for g in gens {
        require_automorphism(a, g)?;
    }
    let l = gens.len();
    let dim = a.dim();
    let target = n2(gens);
    let fs = lyapunov_functionals(gens)?;
    let mut bound = (4 * dim * dim + 16) as i64;
    let mut z = unit_z(l, 0);
    let mut current = n_z2(gens, &z)?;
    // Shrink n^(z,2) until it equals n^(2).
    'shrink: while current.len() > target.len() {
        for _ in 0..4 {
            for k in 0..l {
                let ek = root_of_unity_subspace(&gens[k]);
                if intersection(&current, &ek, dim).len() == current.len() {
                    continue;
                }
                for m in 1..=bound {
                    let cand: Vec<i64> = z.iter().zip(unit_z(l, k)).map(|(a, b)| m * a + b).collect();
                    let s = n_z2(gens, &cand)?;
                    if s.len() < current.len() {
                        z = cand;
                        current = s;
                        continue 'shrink;
                    }
                }
            }
            bound *= 2;
        }
        return Err(Error::SearchFailed("could not shrink the root-of-unity subspace".into()));
    }
    let cert = regularity(&fs, &z);
    if cert.certified {
        return Ok(RegularElement {
            z,
            n_z2: current,
            n2: target,
            certificate: cert,
        });
    }
    // Perturb z along small directions, keeping n^(z,2) = n^(2).
    for r in 1..=4 {
        for w in shell(l, r) {
            for m in 1..=bound {
                let cand: Vec<i64> = z.iter().zip(&w).map(|(a, b)| m * a + b).collect();
                if cand.iter().all(|&x| x == 0) {
                    continue;
                }
                let cert = regularity(&fs, &cand);
                if !cert.certified {
                    continue;
                }
                let s = n_z2(gens, &cand)?;
                if s.len() == target.len() {
                    return Ok(RegularElement {
                        z: cand,
                        n_z2: s,
                        n2: target,
                        certificate: cert,
                    });
                }
            }
        }
    }
    Err(Error::Precision {
        bits: fs.splittings.iter().map(|s| s.bits).max().unwrap_or(0),
        detail: "no certified regular element found".into(),
    })
}
