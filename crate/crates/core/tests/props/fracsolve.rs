use num_complex::Complex64;
use proptest::prelude::*;

use nilmix::dioph::certificate_f64;
use nilmix::fracsolve::{
    schrodinger_threshold, selector, small_divisor_bound, solve_fractional, split_small_divisor, Directions, SolveMode,
    ThresholdOptions,
};
use nilmix::scalar::Coefficient;
use nilmix::{ExactObservable, FourierObservable};

use super::gen::{exact, float, modes, qq};
use super::{check, CASES};

crate::suites!("fracsolve": partition_is_exact, selector_dominates, linear, reconstruction, norm_identity, small_divisor_bound_holds, threshold_monotone_in_h);

const PHI: f64 = 0.6180339887498949;

/// Directions in `R^d`: golden, irrational-looking floats, or rationals.
fn directions(d: usize) -> BoxedStrategy<Directions> {
    let fl = prop::collection::vec(prop::collection::vec((0.05f64..1.0, any::<bool>()), d), 1..=d)
        .prop_map(|vs| {
            let vs = vs
                .into_iter()
                .map(|v| v.into_iter().map(|(x, s)| if s { x + PHI * 1e-3 } else { -x }).collect())
                .collect();
            Directions::from_f64(vs).unwrap()
        });
    let rat = prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=13), d), 1..=d)
        .prop_map(|vs| Directions::from_rational(vs.into_iter().map(|v| v.into_iter().map(|(a, b)| qq(a, b)).collect()).collect()).unwrap());
    if d == 2 {
        prop_oneof![Just(Directions::from_f64(vec![vec![1.0, PHI]]).unwrap()), fl, rat].boxed()
    } else {
        prop_oneof![fl, rat].boxed()
    }
}

fn case(mean_zero: bool) -> impl Strategy<Value = (Directions, Vec<(Vec<i64>, (i64, i64))>)> {
    (2usize..=3).prop_flat_map(move |d| (directions(d), modes(d, 12, 24, mean_zero)))
}

fn solvable(f: &ExactObservable, v: &Directions) -> bool {
    f.iter().all(|(z, _)| {
        z.iter().all(|&x| x == 0) || !v.is_resonant(selector(v, z).0, z)
    })
}

fn partition_is_exact() -> Result<u32, String> {
    check(CASES, case(false), |(v, m)| {
        let f = exact(v.dim(), &m);
        let s = split_small_divisor(&f, &v).unwrap();
        prop_assert_eq!(s.large.add(&s.small).add(&s.zero), f.clone());
        prop_assert_eq!(s.large.len() + s.small.len() + s.zero.len(), f.len());
        prop_assert!(s.zero.iter().all(|(z, _)| z.iter().all(|&x| x == 0)));
        for (z, _) in s.large.iter() {
            prop_assert!(selector(&v, z).1 >= 1.0);
        }
        for (z, _) in s.small.iter() {
            prop_assert!(selector(&v, z).1 < 1.0);
        }
        Ok(())
    })
}

fn selector_dominates() -> Result<u32, String> {
    check(CASES, case(true), |(v, m)| {
        let f = exact(v.dim(), &m);
        prop_assume!(solvable(&f, &v));
        let sol = solve_fractional(&f, &v, 1.0, SolveMode::Modulus).unwrap();
        let t = v.len() as f64;
        for (z, &i) in &sol.selector {
            let sum: f64 = (0..v.len()).map(|j| v.dot(j, z).abs()).sum();
            prop_assert!(v.dot(i, z).abs() >= sum / t);
            prop_assert!(sol.components[i].get(z).is_some());
        }
        let total: usize = sol.components.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, sol.selector.len());
        Ok(())
    })
}

fn orders() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.25), Just(0.5), Just(1.0), Just(2.0), 0.05f64..3.0]
}

fn linear() -> Result<u32, String> {
    let s = (case(true), modes(3, 12, 24, true), orders(), (-5i64..=5, -5i64..=5));
    check(CASES, s, |((v, m1), m2, r, (a, b))| {
        let d = v.dim();
        let m2: Vec<_> = m2.into_iter().map(|(z, c)| (z[..d].to_vec(), c)).filter(|(z, _)| z.iter().any(|&x| x != 0)).collect();
        let (f, g) = (float(d, &m1), float(d, &m2));
        prop_assume!(solvable(&exact(d, &m1), &v) && solvable(&exact(d, &m2), &v));
        let (ca, cb) = (Complex64::new(a as f64, 0.0), Complex64::new(0.0, b as f64));
        let h = f.scale(&ca).add(&g.scale(&cb));
        let sf = solve_fractional(&f, &v, r, SolveMode::Modulus).unwrap();
        let sg = solve_fractional(&g, &v, r, SolveMode::Modulus).unwrap();
        let sh = solve_fractional(&h, &v, r, SolveMode::Modulus).unwrap();
        for i in 0..v.len() {
            let want = sf.components[i].scale(&ca).add(&sg.components[i].scale(&cb));
            let scale = want.max_abs().max(sh.components[i].max_abs()).max(f64::MIN_POSITIVE);
            for (z, c) in sh.components[i].iter().chain(want.iter()) {
                let diff = (sh.components[i].coeff(z) - want.coeff(z)).norm();
                prop_assert!(diff <= 1e-12 * scale, "z = {:?}: {} vs {:?}", z, diff, c);
            }
        }
        Ok(())
    })
}

fn reconstruction() -> Result<u32, String> {
    check(CASES, (case(true), orders()), |((v, m), r)| {
        let f: FourierObservable = float(v.dim(), &m);
        prop_assume!(solvable(&exact(v.dim(), &m), &v));
        let sol = solve_fractional(&f, &v, r, SolveMode::Modulus).unwrap();
        prop_assert!(sol.residual_ok(), "residual {} max {}", sol.residual, sol.max_coeff);
        Ok(())
    })
}

fn norm_identity() -> Result<u32, String> {
    check(CASES, (case(true), 1u32..=4), |((v, m), r)| {
        let f = exact(v.dim(), &m);
        prop_assume!(solvable(&f, &v));
        let a = solve_fractional(&f, &v, r as f64, SolveMode::Modulus).unwrap();
        let b = solve_fractional(&f, &v, r as f64, SolveMode::Signed).unwrap();
        prop_assert_eq!(&a.norms, &b.norms);
        for (ca, cb) in a.components.iter().zip(&b.components) {
            for (z, x) in ca.iter() {
                let y = cb.coeff(z);
                prop_assert_eq!(x.to_complex64().norm_sqr(), y.to_complex64().norm_sqr());
            }
        }
        Ok(())
    })
}

fn small_divisor_bound_holds() -> Result<u32, String> {
    let s = (2usize..=3).prop_flat_map(|d| {
        let rat = prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=13), d), 1..=d)
            .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(|(a, b)| a as f64 / b as f64).collect()).collect());
        let golden: Vec<f64> = [1.0, PHI, PHI * PHI][..d].to_vec();
        (prop_oneof![Just(vec![golden]), rat], modes(d, 6, 12, true), orders())
    });
    check(CASES, s, |(vs, m, r): (Vec<Vec<f64>>, _, _)| {
        let v = Directions::from_f64(vs.clone()).unwrap();
        let d = v.dim();
        let f = float(d, &m);
        let cert = certificate_f64(&vs, d, f.support_radius()).unwrap();
        prop_assume!(cert.c_emp > 0.0);
        // Float resonances below the solver's tolerance are not solvable.
        let b = small_divisor_bound(&f, &v, r, cert.c_emp, d);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        prop_assert!(b.holds, "lhs {:?} rhs {}", b.lhs, b.rhs);
        Ok(())
    })
}

fn threshold_monotone_in_h() -> Result<u32, String> {
    let s = (0.05f64..2.5, 0.0f64..2.0, 1e-5f64..0.9, 0.05f64..1.0, 0.0f64..3.0);
    let opts = ThresholdOptions {
        cells: 64,
        ..ThresholdOptions::default()
    };
    check(CASES, s, |(r, a, h1, t, p)| {
        let h2 = h1 * t;
        let profile = |x: f64| a + x.abs().powf(p);
        let i1 = schrodinger_threshold(&profile, r, h1, &opts).unwrap().integral;
        let i2 = schrodinger_threshold(&profile, r, h2, &opts).unwrap().integral;
        prop_assert!(i2 >= i1, "I({}) = {} < I({}) = {}", h2, i2, h1, i1);
        Ok(())
    })
}
