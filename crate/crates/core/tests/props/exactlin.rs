use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use nilmix::exactlin::cyclotomic::{cyclotomic_polynomial, euler_phi};
use nilmix::exactlin::factor::is_irreducible;
use nilmix::exactlin::{char_poly, integer_char_poly, is_cyclotomic, lyapunov_data, primary_decomposition};
use nilmix::exactlin::{IntegerPolynomial, RationalSquareMatrix};

use super::gen::{int_matrix, rational_matrix, unimodular};
use super::{check, Case, CASES};

crate::suites!("exactlin": cayley_hamilton, unimodular_spectrum, primary_blocks, cyclotomic_brute_force, lyapunov_invariance);

fn cayley_hamilton() -> Result<u32, String> {
    check(CASES, rational_matrix(1..=5), |m| {
        let r = char_poly(&m).eval_matrix(&m);
        prop_assert!(r.entries().iter().all(|x| x.is_zero()));
        Ok(())
    })
}

fn unimodular_spectrum() -> Result<u32, String> {
    check(CASES, (2usize..=4).prop_flat_map(|n| unimodular(n, 10)), |m| {
        let p = integer_char_poly(&m).unwrap();
        prop_assert!(p.coeff(0).abs().is_one());
        let (s, e) = lyapunov_data(&m).unwrap().exponent_sum();
        prop_assert!(s.abs() <= e, "sum {s} error {e}");
        Ok(())
    })
}

fn primary_blocks() -> Result<u32, String> {
    check(CASES, int_matrix(1..=4, 4), |m| {
        let pd = primary_decomposition(&m).unwrap();
        prop_assert!(pd.is_direct_sum());
        prop_assert!(pd.is_invariant(&m));
        Ok(())
    })
}

/// Smallest `d <= bound` with `x^d = 1` in `Z[x]/(q)`, by repeated
/// multiplication by `x`; `q` is monic.
fn brute_order(q: &IntegerPolynomial) -> Option<u64> {
    let n = q.degree();
    let bound = 10 * (n * n) as u64;
    let qc: Vec<BigInt> = (0..n).map(|i| q.coeff(i)).collect();
    let one: Vec<BigInt> = (0..n).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect();
    let mut r = one.clone();
    for d in 1..=bound {
        let top = r[n - 1].clone();
        r.rotate_right(1);
        r[0] = BigInt::zero();
        for (a, c) in r.iter_mut().zip(&qc) {
            *a -= &top * c;
        }
        if r == one {
            return Some(d);
        }
    }
    None
}

fn cyclotomic_or_random() -> impl Strategy<Value = IntegerPolynomial> {
    let small: Vec<u64> = (1..=60).filter(|&d| euler_phi(d) <= 8).collect();
    prop_oneof![
        prop::sample::select(small.clone()).prop_map(cyclotomic_polynomial),
        // Phi_d(-x), again cyclotomic up to sign.
        prop::sample::select(small).prop_map(|d| {
            let p = cyclotomic_polynomial(d).negate_variable();
            if p.leading() < BigInt::zero() {
                p.neg()
            } else {
                p
            }
        }),
        (1usize..=8)
            .prop_flat_map(|n| prop::collection::vec(-2i64..=2, n))
            .prop_map(|mut c| {
                c.push(1);
                IntegerPolynomial::from_i64(&c)
            }),
    ]
}

fn cyclotomic_brute_force() -> Result<u32, String> {
    check(CASES, cyclotomic_or_random(), |q| {
        if is_irreducible(&q).unwrap() {
            prop_assert_eq!(is_cyclotomic(&q).unwrap(), brute_order(&q));
        } else {
            prop_assert!(is_cyclotomic(&q).is_err());
        }
        Ok(())
    })
}

fn nonsingular(m: &RationalSquareMatrix) -> bool {
    !m.det().is_zero()
}

fn lyapunov_invariance() -> Result<u32, String> {
    let s = prop_oneof![
        (2usize..=4).prop_flat_map(|n| unimodular(n, 10)),
        int_matrix(2..=4, 3).prop_filter("nonsingular", nonsingular),
    ];
    check(CASES, s, |m| -> Case {
        let l = lyapunov_data(&m).unwrap();
        prop_assert!(l.max_residual() <= 1e-9, "residual {}", l.max_residual());
        Ok(())
    })
}
