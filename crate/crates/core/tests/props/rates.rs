use proptest::prelude::*;

use nilmix::catalog;
use nilmix::nilalg::{lyapunov_functionals, FunctionalSet};
use nilmix::rates::{density_estimate, holder_rate, order2_envelope, rho_chi, theta_with, DensityOptions, RateReport, TimeTuple};

use super::{check, CASES};

crate::suites!("rates": gamma_monotone_and_capped, envelope_rates_positive, theta_scale_invariant, theta_flags_hyperplanes, density_monotone);

fn ergodic_reports() -> Vec<RateReport> {
    ["catmap", "cubic3", "heisenberg-cat"]
        .iter()
        .map(|n| {
            let s = catalog::system(n).unwrap();
            rho_chi(&s.algebra, &s.generators[0]).unwrap()
        })
        .collect()
}

fn gamma_monotone_and_capped() -> Result<u32, String> {
    let reps = ergodic_reports();
    check(CASES, (0..reps.len(), 0.001f64..40.0, 0.0f64..40.0), |(i, s, ds)| {
        let r = &reps[i];
        let a = holder_rate(r, s).unwrap();
        let b = holder_rate(r, s + ds).unwrap();
        prop_assert!(a.gamma <= b.gamma);
        prop_assert!(b.gamma <= r.rho0 / 2.0);
        for h in [&a, &b] {
            let at_cap = h.s >= 2.0 * r.s0 as f64;
            prop_assert_eq!(h.gamma == r.rho0 / 2.0, at_cap, "s = {}", h.s);
        }
        Ok(())
    })
}

fn envelope_rates_positive() -> Result<u32, String> {
    let reps = ergodic_reports();
    check(CASES, (0..reps.len(), 0.0f64..1.0, 0.01f64..4.0), |(i, frac, r)| {
        let rep = &reps[i];
        let eps = frac * rep.chi.min(rep.rho / 2.0);
        let e = order2_envelope(rep, r, eps).unwrap();
        prop_assert!(e.rate1 > 0.0 && e.rate2 > 0.0);
        Ok(())
    })
}

fn actions() -> Vec<FunctionalSet> {
    ["catmap", "cubic3", "cubic-rank2", "product-t2xt2"]
        .iter()
        .map(|n| lyapunov_functionals(&catalog::system(n).unwrap().generators).unwrap())
        .collect()
}

/// `n` distinct times in `Z^rank`.
fn tuple(rank: usize) -> impl Strategy<Value = TimeTuple> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, rank), 2..=4)
        .prop_filter("distinct", |ts| {
            (0..ts.len()).all(|i| (i + 1..ts.len()).all(|j| ts[i] != ts[j]))
        })
        .prop_map(TimeTuple::new)
}

fn action_and_tuple(fs: &[FunctionalSet]) -> impl Strategy<Value = (usize, TimeTuple)> {
    let ranks: Vec<usize> = fs.iter().map(|f| f.rank).collect();
    (0..fs.len()).prop_flat_map(move |i| (Just(i), tuple(ranks[i])))
}

fn theta_scale_invariant() -> Result<u32, String> {
    let fs = actions();
    check(CASES, (action_and_tuple(&fs), 1i64..=25), |((i, t), k)| {
        let a = theta_with(&fs[i], &t).unwrap();
        let b = theta_with(&fs[i], &t.scaled(k)).unwrap();
        prop_assert_eq!(a.theta, b.theta);
        prop_assert_eq!(a.regular, b.regular);
        Ok(())
    })
}

fn theta_flags_hyperplanes() -> Result<u32, String> {
    let fs = actions();
    check(CASES, action_and_tuple(&fs), |(i, t)| {
        let rep = theta_with(&fs[i], &t).unwrap();
        // Independent pass over all pairs and functionals.
        let mut avoids = true;
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                let w: Vec<i64> = t.0[a].iter().zip(&t.0[b]).map(|(x, y)| x - y).collect();
                for f in fs[i].nonzero() {
                    let (v, e) = f.eval(&w);
                    avoids &= v.abs() > e;
                }
            }
        }
        prop_assert_eq!(rep.regular, avoids);
        if rep.theta > 0.0 && rep.regular {
            prop_assert!(avoids);
        }
        if !avoids {
            prop_assert!(!rep.regular);
        }
        Ok(())
    })
}

fn density_monotone() -> Result<u32, String> {
    let systems = [(catalog::system("catmap").unwrap(), 2), (catalog::system("catmap").unwrap(), 3), (catalog::system("cubic-rank2").unwrap(), 2)];
    let opts = DensityOptions {
        samples: 2000,
        ..DensityOptions::default()
    };
    // Single lattice shells can lower the fraction, so compare radii at
    // least a factor of two apart.
    check(CASES, (0..systems.len(), 2.0f64..10.0, 2.0f64..4.0), |(i, r, k)| {
        let (s, n) = &systems[i];
        let a = density_estimate(&s.generators, *n, r, 0.1, &opts).unwrap();
        let b = density_estimate(&s.generators, *n, k * r, 0.1, &opts).unwrap();
        prop_assert!(b.regular_fraction >= a.regular_fraction, "{} < {}", b.regular_fraction, a.regular_fraction);
        if i == 0 {
            prop_assert!(a.regular_fraction > 1.0 - 5.0 / r);
            // Exact oracle: the only non-regular tuples lie on the diagonal.
            let mut diag = 0u64;
            let mut total = 0u64;
            let ri = r.floor() as i64;
            for x in -ri..=ri {
                for y in -ri..=ri {
                    if (x, y) != (0, 0) && ((x * x + y * y) as f64) <= r * r {
                        total += 1;
                        diag += (x == y) as u64;
                    }
                }
            }
            prop_assert_eq!(a.total, total);
            prop_assert_eq!(a.regular_count, total - diag);
        }
        Ok(())
    })
}
