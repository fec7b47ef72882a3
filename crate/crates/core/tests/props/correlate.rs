use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use nilmix::catalog;
use nilmix::correlate::{correlation2_with, correlation_n, resonance_horizon, IntegerAction, DEFAULT_BUDGET};
use nilmix::scalar::{Coefficient, GaussianRational};
use nilmix::{ExactObservable, FourierObservable, Observable};

use super::gen::{exact, float, modes, wiener};
use super::{check, CASES};

crate::suites!("correlate": shift_invariance, plancherel, two_block_consistency, finite_horizon_zeros, two_point_envelope, max_gap_envelope);

const LOG_GOLDEN: f64 = 0.9624236501192069;

struct Act {
    name: &'static str,
    action: IntegerAction,
}

fn actions() -> Vec<Act> {
    ["catmap", "cubic3", "cubic-rank2", "product-t2xt2"]
        .into_iter()
        .map(|name| Act {
            name,
            action: IntegerAction::new(&catalog::system(name).unwrap().generators).unwrap(),
        })
        .collect()
}

/// Observables and times for one action, `n` in 2..=4.
fn tuple_case(dim: usize, rank: usize, radius: i64, mean_zero: bool) -> impl Strategy<Value = (Vec<ExactObservable>, Vec<Vec<i64>>)> {
    (2usize..=4).prop_flat_map(move |n| {
        (
            prop::collection::vec(modes(dim, radius, 5, mean_zero), n),
            prop::collection::vec(prop::collection::vec(-3i64..=3, rank), n),
        )
            .prop_map(move |(ms, ts)| (ms.iter().map(|m| exact(dim, m)).collect(), ts))
    })
}

fn case(acts: &[Act], mean_zero: bool) -> impl Strategy<Value = (usize, Vec<ExactObservable>, Vec<Vec<i64>>)> {
    let shapes: Vec<(usize, usize)> = acts.iter().map(|a| (a.action.dim(), a.action.rank())).collect();
    (0..acts.len()).prop_flat_map(move |i| {
        let (d, r) = shapes[i];
        (Just(i), tuple_case(d, r, 3, mean_zero)).prop_map(|(i, (fs, ts))| (i, fs, ts))
    })
}

fn shift_invariance() -> Result<u32, String> {
    let acts = actions();
    let s = (case(&acts, false), prop::collection::vec(-3i64..=3, 2));
    check(CASES, s, |((i, fs, ts), w)| {
        let a = &acts[i].action;
        let w = &w[..a.rank()];
        let shifted: Vec<Vec<i64>> = ts.iter().map(|z| z.iter().zip(w).map(|(x, y)| x + y).collect()).collect();
        let c1 = correlation_n(&fs, a, &ts, DEFAULT_BUDGET).unwrap();
        let c2 = correlation_n(&fs, a, &shifted, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(c1, c2, "{}", acts[i].name);
        Ok(())
    })
}

fn inner(f: &ExactObservable, g: &ExactObservable) -> GaussianRational {
    f.iter().fold(GaussianRational::zero(), |acc, (k, c)| acc.add(&c.mul(&g.coeff(k).conj())))
}

fn plancherel() -> Result<u32, String> {
    let acts = actions();
    check(CASES, case(&acts, false), |(i, fs, ts)| {
        let a = &acts[i].action;
        let (f, g) = (&fs[0], &fs[1]);
        let zero = vec![0; a.rank()];
        prop_assert_eq!(correlation2_with(f, g, a, &zero).unwrap(), inner(f, g));
        // <f o M^z, g> is the integral of f o M^z times conj(g).
        let two = correlation_n(&[f.clone(), g.conj()], a, &[ts[0].clone(), zero], DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(correlation2_with(f, g, a, &ts[0]).unwrap(), two);
        Ok(())
    })
}

/// `f o M^z` for the integer action.
fn transported(f: &ExactObservable, a: &IntegerAction, z: &[i64]) -> ExactObservable {
    let p = a.transport(z).unwrap();
    let modes = f.iter().map(|(k, c)| {
        let kb: Vec<BigInt> = k.iter().map(|&x| x.into()).collect();
        let img: Vec<i64> = p.apply(&kb).iter().map(|x| x.to_i64().unwrap()).collect();
        (img, c.clone())
    });
    Observable::from_modes(f.dim(), modes).unwrap()
}

fn two_block_consistency() -> Result<u32, String> {
    let acts = actions();
    check(CASES, case(&acts, false), |(i, fs, ts)| {
        let a = &acts[i].action;
        let n = fs.len();
        let big = (0..n - 1)
            .map(|j| transported(&fs[j], a, &ts[j]))
            .reduce(|x, y| x.product(&y))
            .unwrap();
        let lhs = correlation_n(&fs, a, &ts, DEFAULT_BUDGET).unwrap();
        let rhs = correlation2_with(&fs[n - 1], &big.conj(), a, &ts[n - 1]).unwrap();
        prop_assert_eq!(lhs, rhs, "{}", acts[i].name);
        Ok(())
    })
}

fn finite_horizon_zeros() -> Result<u32, String> {
    let systems: Vec<_> = ["catmap", "cubic3"].iter().map(|n| catalog::system(n).unwrap().generators[0].clone()).collect();
    const MAX_M: i64 = 24;
    let horizons: Vec<Vec<i64>> = systems
        .iter()
        .map(|m| (1..=4).map(|r| resonance_horizon(m, r, r as f64, MAX_M).unwrap()).collect())
        .collect();
    let s = (0..systems.len(), 1i64..=4).prop_flat_map(|(i, r)| {
        let d = 2 + i;
        (Just(i), Just(r), modes(d, r, 6, true), modes(d, r, 6, true))
    });
    check(CASES, s, |(i, r, mf, mg)| {
        let d = 2 + i;
        let (f, g) = (exact(d, &mf), exact(d, &mg));
        let a = IntegerAction::new(&systems[i..=i]).unwrap();
        let h = horizons[i][r as usize - 1];
        for m in h..=MAX_M {
            prop_assert!(correlation2_with(&f, &g, &a, &[m]).unwrap().is_zero(), "m = {} horizon {}", m, h);
        }
        Ok(())
    })
}

fn two_point_envelope() -> Result<u32, String> {
    let a = IntegerAction::new(&[catalog::cat_map()]).unwrap();
    let s = (modes(2, 6, 8, true), modes(2, 6, 8, true), -14i64..=14);
    check(CASES, s, |(mf, mg, m)| {
        let (f, g): (FourierObservable, FourierObservable) = (float(2, &mf), float(2, &mg));
        let c = correlation2_with(&f, &g, &a, &[m]).unwrap().norm();
        let bound = 5.0 * wiener(&f, 2) * wiener(&g, 2);
        let lhs = c * (2.0 * LOG_GOLDEN * m.abs() as f64).exp();
        prop_assert!(lhs <= bound * (1.0 + 1e-9), "m = {}: {} > {}", m, lhs, bound);
        Ok(())
    })
}

fn max_gap_envelope() -> Result<u32, String> {
    let a = IntegerAction::new(&[catalog::cat_map()]).unwrap();
    let f = || modes(2, 5, 5, true);
    let s = (f(), f(), f(), 0i64..=10, 0i64..=10);
    check(CASES, s, |(m1, m2, m3, ga, gb)| {
        let fs: Vec<FourierObservable> = [&m1, &m2, &m3].iter().map(|m| float(2, m)).collect();
        let ts = vec![vec![0], vec![ga], vec![ga + gb]];
        let c = correlation_n(&fs, &a, &ts, DEFAULT_BUDGET).unwrap().norm();
        let (w0, w2): (Vec<f64>, Vec<f64>) = fs.iter().map(|f| (wiener(f, 0), wiener(f, 2))).unzip();
        let bound = 2.0 * 5f64.sqrt() * (w2[0] * w0[1] * w0[2] + w0[0] * w2[1] * w0[2] + w0[0] * w0[1] * w2[2]);
        let lhs = c * (LOG_GOLDEN * (ga + gb) as f64 / 2.0).exp();
        prop_assert!(lhs <= bound * (1.0 + 1e-9), "gaps ({}, {}): {} > {}", ga, gb, lhs, bound);
        Ok(())
    })
}
