use num_rational::BigRational;
use proptest::prelude::*;

use nilmix::catalog::cubic_companion;
use nilmix::dioph::{diophantine_certificate, verify_lemma9};
use nilmix::exactlin::RationalSquareMatrix;

use super::gen::{q, qq, unimodular};
use super::{check, CASES};

crate::suites!("dioph": monotone_in_radius, linear_in_scaling, exact_resonance_fails, lemma9_on_conjugates);

/// `t` vectors in `Q^d` with small numerators and denominators.
fn directions() -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    (2usize..=3, 1usize..=2).prop_flat_map(|(d, t)| {
        prop::collection::vec(prop::collection::vec((-40i64..=40, 1i64..=37), d), t)
            .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(|(a, b)| qq(a, b)).collect()).collect())
    })
}

fn monotone_in_radius() -> Result<u32, String> {
    check(CASES, (directions(), 2.0f64..25.0, 0.0f64..25.0, any::<bool>()), |(v, r1, dr, exact)| {
        let d = v[0].len();
        let a = diophantine_certificate(&v, d, r1, exact).unwrap();
        let b = diophantine_certificate(&v, d, r1 + dr, exact).unwrap();
        prop_assert!(b.c_emp <= a.c_emp, "{} > {}", b.c_emp, a.c_emp);
        Ok(())
    })
}

fn linear_in_scaling() -> Result<u32, String> {
    // Dyadic factors keep the double-precision report exact.
    check(CASES, (directions(), -4i32..=4, 2.0f64..20.0), |(v, k, r)| {
        let d = v[0].len();
        let t = if k >= 0 { q(1 << k) } else { qq(1, 1 << -k) };
        let tv: Vec<Vec<BigRational>> = v.iter().map(|x| x.iter().map(|y| y * &t).collect()).collect();
        let a = diophantine_certificate(&v, d, r, true).unwrap();
        let b = diophantine_certificate(&tv, d, r, true).unwrap();
        prop_assert_eq!(b.c_emp, a.c_emp * 2f64.powi(k));
        prop_assert_eq!(b.argmin, a.argmin);
        Ok(())
    })
}

/// Directions orthogonal to a fixed integer `m0`.
fn resonant() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<BigRational>>)> {
    let m0 = prop::collection::vec(-4i64..=4, 3).prop_filter("nonzero", |m| m.iter().any(|&x| x != 0));
    (m0, prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..=2)).prop_map(|(m, ws)| {
        let vs = ws
            .iter()
            .map(|w| {
                let c = [w[1] * m[2] - w[2] * m[1], w[2] * m[0] - w[0] * m[2], w[0] * m[1] - w[1] * m[0]];
                c.iter().map(|&x| qq(x, 7)).collect()
            })
            .collect();
        (m, vs)
    })
    .prop_filter("nonzero directions", |(_, vs): &(Vec<i64>, Vec<Vec<BigRational>>)| {
        vs.iter().all(|v| v.iter().any(|x| *x != q(0)))
    })
}

fn exact_resonance_fails() -> Result<u32, String> {
    check(CASES, resonant(), |(m, v)| {
        let radius = m.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt() + 1.0;
        let c = diophantine_certificate(&v, 3, radius, true).unwrap();
        prop_assert!(!c.passed);
        prop_assert_eq!(c.c_emp, 0.0);
        let dot = |w: &Vec<BigRational>| -> BigRational { w.iter().zip(&c.argmin).map(|(a, &b)| a * q(b)).sum() };
        prop_assert!(v.iter().all(|w| dot(w) == q(0)));
        Ok(())
    })
}

/// `P C P^{-1}` for random `P` in `GL(3, Z)`; ergodic since conjugation
/// keeps the characteristic polynomial.
pub fn conjugate() -> impl Strategy<Value = RationalSquareMatrix> {
    unimodular(3, 6).prop_map(|p| p.mul(&cubic_companion()).mul(&p.inverse().unwrap()))
}

fn lemma9_on_conjugates() -> Result<u32, String> {
    check(CASES, conjugate(), |m| {
        let r = verify_lemma9(&m, 100.0).unwrap();
        prop_assert!(r.passed);
        prop_assert!(r.subspaces.iter().all(|s| s.certificate.c_emp > 0.0));
        Ok(())
    })
}
