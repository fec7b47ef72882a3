use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::RationalSquareMatrix;
use crate::nilalg::{lyapunov_functionals, FunctionalSet};

/// Times `z_1..z_n` in `Z^l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeTuple(pub Vec<Vec<i64>>);

fn dist(a: &[i64], b: &[i64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) as f64).powi(2))
        .sum::<f64>()
        .sqrt()
}

impl TimeTuple {
    pub fn new(times: Vec<Vec<i64>>) -> Self {
        TimeTuple(times)
    }

    /// Rank-one tuple from scalar times.
    pub fn scalar(times: &[i64]) -> Self {
        TimeTuple(times.iter().map(|&t| vec![t]).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.0.first().map_or(0, |z| z.len())
    }

    fn pair_distances(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.0.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| dist(&self.0[i], &self.0[j])))
    }

    /// Minimum pairwise Euclidean separation.
    pub fn gap(&self) -> f64 {
        self.pair_distances().fold(f64::INFINITY, f64::min)
    }

    pub fn max_gap(&self) -> f64 {
        self.pair_distances().fold(0.0, f64::max)
    }

    pub fn shifted(&self, w: &[i64]) -> Self {
        TimeTuple(
            self.0
                .iter()
                .map(|z| z.iter().zip(w).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    pub fn scaled(&self, t: i64) -> Self {
        TimeTuple(self.0.iter().map(|z| z.iter().map(|a| a * t).collect()).collect())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PairRegularity {
    pub i: usize,
    pub j: usize,
    /// `min |χ(w)| / ||w||` over nonzero functionals, `w = z_i - z_j`.
    pub min_value: f64,
    /// Every functional is certified nonzero on `w`.
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ThetaReport {
    pub theta: f64,
    pub pairs: Vec<PairRegularity>,
    pub regular: bool,
}

/// Primitive part of `w`; normalizing it makes `Θ` exactly scale invariant.
fn primitive(w: &[i64]) -> Vec<i64> {
    let g = w.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        w.to_vec()
    } else {
        w.iter().map(|x| x / g).collect()
    }
}

pub fn theta_with(fs: &FunctionalSet, tuple: &TimeTuple) -> Result<ThetaReport> {
    if tuple.len() < 2 {
        return Err(Error::DegenerateTuple("at least two times are required".into()));
    }
    if tuple.0.iter().any(|z| z.len() != fs.rank) {
        return Err(Error::DimensionMismatch {
            expected: fs.rank,
            got: tuple.0.iter().map(|z| z.len()).find(|&l| l != fs.rank).unwrap_or(0),
        });
    }
    if tuple.gap() == 0.0 {
        return Err(Error::DegenerateTuple("two times coincide".into()));
    }
    let n = tuple.len();
    let mut pairs = Vec::new();
    let mut theta = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w: Vec<i64> = tuple.0[i].iter().zip(&tuple.0[j]).map(|(a, b)| a - b).collect();
            let w = primitive(&w);
            let norm = w.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
            let mut min_value = f64::INFINITY;
            let mut regular = true;
            for f in fs.nonzero() {
                let (v, e) = f.eval(&w);
                if v.abs() <= e {
                    regular = false;
                }
                min_value = min_value.min(v.abs() / norm);
            }
            theta = theta.min(min_value);
            if i < j {
                pairs.push(PairRegularity {
                    i,
                    j,
                    min_value,
                    regular,
                });
            }
        }
    }
    let regular = pairs.iter().all(|p| p.regular);
    Ok(ThetaReport { theta, pairs, regular })
}

/// `Θ = min_{χ != 0, i != j} |χ((z_i - z_j) / ||z_i - z_j||)|`.
pub fn theta(gens: &[RationalSquareMatrix], tuple: &TimeTuple) -> Result<ThetaReport> {
    theta_with(&lyapunov_functionals(gens)?, tuple)
}
