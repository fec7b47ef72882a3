use proptest::prelude::*;

use nilmix::catalog::{self, cubic_companion, heisenberg};
use nilmix::exactlin::subspace::{coordinates, rank};
use nilmix::exactlin::RationalSquareMatrix;
use nilmix::nilalg::regular::{action_matrix, regularity};
use nilmix::nilalg::{abelianization_action, classify, find_regular_element, lyapunov_functionals, validate_automorphism};
use nilmix::nilalg::NilpotentAlgebra;

use super::gen::{matrix, unimodular};
use super::{check, CASES};

crate::suites!("nilalg": ergodicity_is_power_stable, splitting_spans, abelianization_is_functorial, regular_elements_are_certified);

/// `(algebra, generator)` for every catalog generator.
fn catalog_pairs() -> Vec<(NilpotentAlgebra, RationalSquareMatrix)> {
    catalog::NAMES
        .iter()
        .flat_map(|n| {
            let s = catalog::system(n).unwrap();
            s.generators.into_iter().map(move |g| (s.algebra.clone(), g))
        })
        .collect()
}

fn ergodicity_is_power_stable() -> Result<u32, String> {
    let pairs = catalog_pairs();
    let s = (0..pairs.len(), 1u64..=6);
    check(CASES, s, |(i, p)| {
        let (a, m) = &pairs[i];
        let e1 = classify(a, m).unwrap().ergodic;
        let ep = classify(a, &m.pow(p)).unwrap().ergodic;
        prop_assert_eq!(e1, ep);
        Ok(())
    })
}

fn splitting_spans() -> Result<u32, String> {
    let systems: Vec<_> = catalog::NAMES.iter().map(|n| catalog::system(n).unwrap()).collect();
    let s = (0..systems.len(), prop::collection::vec(-3i64..=3, 2));
    check(CASES, s, |(i, z)| {
        let sys = &systems[i];
        let z: Vec<i64> = z.into_iter().take(sys.generators.len()).collect();
        let m = action_matrix(&sys.generators, &z).unwrap();
        let c = classify(&sys.algebra, &m).unwrap();
        let n = sys.algebra.dim();
        let all: Vec<_> = c.n_z1.iter().chain(&c.n_z2).cloned().collect();
        prop_assert_eq!(all.len(), n);
        prop_assert_eq!(rank(&all), n);
        for part in [&c.n_z1, &c.n_z2] {
            for v in part.iter() {
                prop_assert!(coordinates(part, &m.apply(v)).is_some());
            }
        }
        Ok(())
    })
}

/// Automorphisms `[[A, 0], [c, det A]]` of the Heisenberg algebra.
fn heisenberg_automorphism() -> impl Strategy<Value = RationalSquareMatrix> {
    (unimodular(2, 6), -3i64..=3, -3i64..=3).prop_map(|(a, e, f)| {
        let g = |i, j| -> i64 { a.get(i, j).to_integer().try_into().unwrap() };
        let det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        matrix(3, &[g(0, 0), g(0, 1), 0, g(1, 0), g(1, 1), 0, e, f, det])
    })
}

fn abelianization_is_functorial() -> Result<u32, String> {
    let a = heisenberg();
    check(CASES, (heisenberg_automorphism(), heisenberg_automorphism()), |(m1, m2)| {
        prop_assert!(validate_automorphism(&a, &m1).passed());
        let lhs = abelianization_action(&a, &m1.mul(&m2));
        let rhs = abelianization_action(&a, &m1).mul(&abelianization_action(&a, &m2));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// Rank-two families: units `C^a (C - I)^b` of the cubic field, and
/// `diag(A^a, A^b)` on `T^2 x T^2`.
fn commuting_family() -> impl Strategy<Value = (NilpotentAlgebra, Vec<RationalSquareMatrix>)> {
    let exps = ((-2i64..=2, -2i64..=2), (-2i64..=2, -2i64..=2))
        .prop_filter("independent", |((a, b), (c, d))| a * d - b * c != 0);
    prop_oneof![
        exps.clone().prop_map(|((a, b), (c, d))| {
            let cm = cubic_companion();
            let dm = cm.sub(&RationalSquareMatrix::identity(3));
            let unit = |x: i64, y: i64| action_matrix(&[cm.clone(), dm.clone()], &[x, y]).unwrap();
            (NilpotentAlgebra::abelian(3), vec![unit(a, b), unit(c, d)])
        }),
        exps.prop_map(|((a, b), (c, d))| {
            let s = catalog::system("product-t2xt2").unwrap();
            let g = &s.generators;
            (s.algebra.clone(), vec![action_matrix(g, &[a, b]).unwrap(), action_matrix(g, &[c, d]).unwrap()])
        }),
    ]
}

fn regular_elements_are_certified() -> Result<u32, String> {
    check(CASES, commuting_family(), |(a, gens)| {
        let r = find_regular_element(&a, &gens).unwrap();
        let fs = lyapunov_functionals(&gens).unwrap();
        prop_assert!(regularity(&fs, &r.z).certified);
        for f in &fs.functionals {
            let (v, e) = f.eval(&r.z);
            prop_assert!(f.is_zero() || v.abs() > e);
        }
        for i in 0..fs.functionals.len() {
            for j in i + 1..fs.functionals.len() {
                let (x, ex) = fs.functionals[i].eval(&r.z);
                let (y, ey) = fs.functionals[j].eval(&r.z);
                prop_assert!((x - y).abs() > ex + ey);
            }
        }
        Ok(())
    })
}
