//! Counting densities of regular time tuples in lattice balls of `Z^{nl}`.
//!
//! Every condition is a union of hyperplanes `a . Z = 0` (or cones around
//! them), so along a line parallel to the last axis the excluded points form
//! at most two intervals per hyperplane. Lines are counted in closed form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::RationalSquareMatrix;
use crate::nilalg::lyapunov_functionals;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensityOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            samples: 1_000_000,
            seed: 0x6E69_6C6D,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensityReport {
    pub n: usize,
    pub radius: f64,
    pub eps: f64,
    pub total: u64,
    pub regular_count: u64,
    pub regular_fraction: f64,
    pub delta: f64,
    pub tame_count: u64,
    pub tame_fraction: f64,
    pub hyperplanes: usize,
}

struct Hyperplane {
    a: Vec<f64>,
    err: Vec<f64>,
    norm: f64,
}

fn hyperplanes(gens: &[RationalSquareMatrix], n: usize) -> Result<Vec<Hyperplane>> {
    let fs = lyapunov_functionals(gens)?;
    let l = fs.rank;
    let mut out: Vec<Hyperplane> = Vec::new();
    for f in fs.nonzero() {
        for i in 0..n {
            for j in i + 1..n {
                let mut a = vec![0.0; n * l];
                let mut err = vec![0.0; n * l];
                for k in 0..l {
                    a[i * l + k] = f.values[k];
                    a[j * l + k] = -f.values[k];
                    err[i * l + k] = f.errors[k];
                    err[j * l + k] = f.errors[k];
                }
                // χ and -χ give the same hyperplane.
                if out.iter().any(|h| h.a.iter().zip(&a).all(|(x, y)| x == y || x == &-y)) {
                    continue;
                }
                let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                out.push(Hyperplane { a, err, norm });
            }
        }
    }
    Ok(out)
}

/// Integer intervals `[lo, hi]`, merged and clipped to `[-b, b]`.
fn count_union(mut iv: Vec<(i64, i64)>, b: i64) -> u64 {
    iv.retain(|&(l, h)| l <= h && h >= -b && l <= b);
    iv.iter_mut().for_each(|(l, h)| {
        *l = (*l).max(-b);
        *h = (*h).min(b);
    });
    iv.sort_unstable();
    let mut total = 0u64;
    let mut cur: Option<(i64, i64)> = None;
    for (l, h) in iv {
        match cur {
            Some((cl, ch)) if l <= ch + 1 => cur = Some((cl, ch.max(h))),
            Some((cl, ch)) => {
                total += (ch - cl + 1) as u64;
                cur = Some((l, h));
            }
            None => cur = Some((l, h)),
        }
    }
    if let Some((cl, ch)) = cur {
        total += (ch - cl + 1) as u64;
    }
    total
}

fn clamp_i64(x: f64) -> i64 {
    x.clamp(-9.0e15, 9.0e15) as i64
}

/// Points of the line where `|c + a x| <= e`, with `e` an upper bound of the
/// evaluation error over the line. Uncertified points count as excluded.
fn on_plane(h: &Hyperplane, outer: &[i64], b: i64) -> Vec<(i64, i64)> {
    let last = outer.len();
    let c: f64 = outer.iter().zip(&h.a).map(|(z, a)| *z as f64 * a).sum();
    let e0: f64 = outer.iter().zip(&h.err).map(|(z, e)| (*z as f64).abs() * e).sum();
    let a = h.a[last];
    let e = e0 + h.err[last] * b as f64 + 1e-12 * (c.abs() + a.abs() * b as f64);
    if a == 0.0 {
        return if c.abs() <= e { vec![(-b, b)] } else { vec![] };
    }
    let x1 = (-c - e) / a;
    let x2 = (-c + e) / a;
    let (l, u) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    vec![(clamp_i64(l.ceil()), clamp_i64(u.floor()))]
}

/// Points of the line where `|a . Z| < δ |a| |Z|`.
fn in_cone(h: &Hyperplane, outer: &[i64], b: i64, delta: f64) -> Vec<(i64, i64)> {
    let last = outer.len();
    let c: f64 = outer.iter().zip(&h.a).map(|(z, a)| *z as f64 * a).sum();
    let s: f64 = outer.iter().map(|&z| (z as f64).powi(2)).sum();
    let a = h.a[last];
    let k = delta * delta * h.norm * h.norm;
    let bad = |x: i64| {
        let x = x as f64;
        (c + a * x).powi(2) < k * (s + x * x)
    };
    // q(x) = (a^2 - k) x^2 + 2 a c x + c^2 - k s.
    let qa = a * a - k;
    let qb = 2.0 * a * c;
    let qc = c * c - k * s;
    let disc = qb * qb - 4.0 * qa * qc;
    let refine_left = |mut x: i64, inside: bool| {
        // Smallest point of a run of `bad == inside` containing x.
        while x > -b && bad(x - 1) == inside {
            x -= 1;
        }
        while x <= b && bad(x) != inside {
            x += 1;
        }
        x
    };
    let refine_right = |mut x: i64, inside: bool| {
        while x < b && bad(x + 1) == inside {
            x += 1;
        }
        while x >= -b && bad(x) != inside {
            x -= 1;
        }
        x
    };
    if qa.abs() < 1e-300 {
        // Linear: a single half-line (or nothing/everything).
        let mut iv = Vec::new();
        let lo_bad = bad(-b);
        let hi_bad = bad(b);
        if lo_bad && hi_bad {
            iv.push((-b, b));
        } else if lo_bad {
            iv.push((-b, refine_right(-b, true)));
        } else if hi_bad {
            iv.push((refine_left(b, true), b));
        }
        return iv;
    }
    if disc <= 0.0 {
        // q keeps the sign of qa, up to boundary points.
        let mut iv = Vec::new();
        if qa < 0.0 {
            iv.push((-b, b));
        } else {
            let x0 = clamp_i64((-qb / (2.0 * qa)).round()).clamp(-b, b);
            for x in x0 - 1..=x0 + 1 {
                if x.abs() <= b && bad(x) {
                    iv.push((x, x));
                }
            }
        }
        return iv;
    }
    let sq = disc.sqrt();
    let r1 = (-qb - sq) / (2.0 * qa);
    let r2 = (-qb + sq) / (2.0 * qa);
    let (r1, r2) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    let r1i = clamp_i64(r1.round()).clamp(-b, b);
    let r2i = clamp_i64(r2.round()).clamp(-b, b);
    if qa > 0.0 {
        // Bad between the roots.
        let mid = clamp_i64(((r1 + r2) / 2.0).round()).clamp(-b, b);
        let mut iv = Vec::new();
        for seed in [r1i, mid, r2i] {
            if bad(seed) {
                iv.push((refine_left(seed, true), refine_right(seed, true)));
            }
            for d in [-1, 1] {
                let x = seed + d;
                if x.abs() <= b && bad(x) {
                    iv.push((refine_left(x, true), refine_right(x, true)));
                }
            }
        }
        iv
    } else {
        // Bad outside the roots.
        let mut iv = Vec::new();
        if bad(-b) {
            iv.push((-b, refine_right(-b, true)));
        }
        if bad(b) {
            iv.push((refine_left(b, true), b));
        }
        for seed in [r1i, r2i] {
            for d in -1..=1 {
                let x = seed + d;
                if x.abs() <= b && bad(x) {
                    iv.push((refine_left(x, true), refine_right(x, true)));
                }
            }
        }
        iv
    }
}

struct Counts {
    total: u64,
    regular: u64,
    tame: u64,
}

fn isqrt(n: i128) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x as i64
}

fn count_lines(
    planes: &[Hyperplane],
    dim: usize,
    outer: &mut Vec<i64>,
    norm2: i128,
    r2: i128,
    delta: f64,
    acc: &mut Counts,
) {
    let room = r2 - norm2;
    let b = isqrt(room);
    if b < 0 {
        return;
    }
    if outer.len() == dim - 1 {
        let origin = outer.iter().all(|&x| x == 0);
        let line = (2 * b + 1) as u64 - origin as u64;
        let mut on = Vec::new();
        let mut cone = Vec::new();
        for h in planes {
            on.extend(on_plane(h, outer, b));
            if delta > 0.0 {
                cone.extend(in_cone(h, outer, b, delta));
            }
        }
        let excl = |mut iv: Vec<(i64, i64)>| {
            let n = count_union(iv.clone(), b);
            // The origin is never counted.
            if origin {
                iv.retain(|&(l, h)| l <= 0 && 0 <= h);
                n - (!iv.is_empty()) as u64
            } else {
                n
            }
        };
        acc.total += line;
        acc.regular += line - excl(on);
        acc.tame += line - excl(cone);
        return;
    }
    for x in -b..=b {
        outer.push(x);
        count_lines(planes, dim, outer, norm2 + (x as i128) * (x as i128), r2, delta, acc);
        outer.pop();
    }
}

/// Minimum normalized distance of unit vectors to the hyperplanes, sampled
/// uniformly on the sphere; `δ(ε)` is the empirical `ε`-quantile.
fn delta_for(planes: &[Hyperplane], dim: usize, eps: f64, opts: &DensityOptions) -> f64 {
    if eps >= 1.0 || planes.is_empty() || opts.samples == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut d: Vec<f64> = (0..opts.samples)
        .map(|_| {
            let u: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            planes
                .iter()
                .map(|h| h.a.iter().zip(&u).map(|(a, x)| a * x).sum::<f64>().abs() / (h.norm * nu))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let k = ((eps * opts.samples as f64).floor() as usize).min(d.len() - 1);
    let (_, kth, _) = d.select_nth_unstable_by(k, |a, b| a.total_cmp(b));
    *kth
}

/// Fractions of `0 != Z` in the ball of radius `R` in `Z^{nl}` that avoid
/// the Lyapunov hyperplanes (`R_n`) and stay `δ(ε)` away from them (`T_{n,δ}`).
pub fn density_estimate(
    gens: &[RationalSquareMatrix],
    n: usize,
    radius: f64,
    eps: f64,
    opts: &DensityOptions,
) -> Result<DensityReport> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    if !(radius >= 1.0) || !radius.is_finite() {
        return Err(Error::OutOfRange(format!("radius {radius} must be at least 1")));
    }
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("eps = {eps} must be positive")));
    }
    let planes = hyperplanes(gens, n)?;
    let dim = n * gens.len();
    let delta = delta_for(&planes, dim, eps, opts);
    let r2 = (radius * radius).floor() as i128;
    let b = isqrt(r2);
    let parts: Vec<Counts> = (-b..=b)
        .into_par_iter()
        .map(|x0| {
            let mut acc = Counts {
                total: 0,
                regular: 0,
                tame: 0,
            };
            let mut outer = vec![x0];
            count_lines(&planes, dim, &mut outer, (x0 as i128) * (x0 as i128), r2, delta, &mut acc);
            acc
        })
        .collect();
    let (total, regular, tame) = parts
        .iter()
        .fold((0, 0, 0), |(t, r, m), c| (t + c.total, r + c.regular, m + c.tame));
    Ok(DensityReport {
        n,
        radius,
        eps,
        total,
        regular_count: regular,
        regular_fraction: regular as f64 / total as f64,
        delta,
        tame_count: tame,
        tame_fraction: tame as f64 / total as f64,
        hyperplanes: planes.len(),
    })
}
