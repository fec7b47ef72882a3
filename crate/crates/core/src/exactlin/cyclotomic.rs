//! Cyclotomic polynomials and detection via inverse totient.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::matrix::SquareMatrix;
use super::poly::{berkowitz, IntegerPolynomial, RationalPolynomial};
use super::subspace::kernel;
use crate::error::{Error, Result};

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// All `d` with `phi(d) = k`, ascending.
pub fn inverse_totient(k: u64) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![1, 2];
    }
    // Every prime p dividing d has (p - 1) | k.
    let primes: Vec<u64> = (1..=k)
        .filter(|dv| k % dv == 0 && is_prime(dv + 1))
        .map(|dv| dv + 1)
        .collect();
    let mut out = Vec::new();
    fn rec(primes: &[u64], idx: usize, remaining: u64, d: u64, out: &mut Vec<u64>) {
        if remaining == 1 {
            out.push(d);
            if d % 2 == 1 {
                out.push(2 * d);
            }
            return;
        }
        for i in idx..primes.len() {
            let p = primes[i];
            if p == 2 || remaining % (p - 1) != 0 {
                continue;
            }
            let mut rem = remaining / (p - 1);
            let mut pk = p;
            loop {
                rec(primes, i + 1, rem, d * pk, out);
                if rem % p != 0 {
                    break;
                }
                rem /= p;
                pk *= p;
            }
        }
    }
    // Powers of two handled separately so the odd part recursion stays simple.
    let mut two_pow = 1u64;
    let mut phi_two = 1u64;
    loop {
        if k % phi_two == 0 {
            let rem = k / phi_two;
            let mut part = Vec::new();
            rec(&primes, 0, rem, 1, &mut part);
            for d in part {
                if two_pow == 1 {
                    out.push(d);
                } else if d % 2 == 1 {
                    out.push(d * two_pow);
                }
            }
        }
        if phi_two > k {
            break;
        }
        two_pow *= 2;
        phi_two = if two_pow == 2 { 1 } else { two_pow / 2 };
    }
    out.retain(|&d| euler_phi(d) == k);
    out.sort_unstable();
    out.dedup();
    out
}

/// `Phi_d`, via `x^d - 1 = prod_{e | d} Phi_e`.
pub fn cyclotomic_polynomial(d: u64) -> IntegerPolynomial {
    let mut p = x_pow_minus_one(d).to_rational();
    for e in 1..d {
        if d % e == 0 {
            p = p
                .div_exact(&cyclotomic_polynomial(e).to_rational())
                .expect("cyclotomic divisor");
        }
    }
    p.to_integer().expect("integer cyclotomic")
}

pub fn x_pow_minus_one(d: u64) -> IntegerPolynomial {
    let mut c = vec![BigInt::from(0); d as usize + 1];
    c[0] = BigInt::from(-1);
    c[d as usize] = BigInt::from(1);
    IntegerPolynomial::new(c)
}

/// Returns `d` when `q = Phi_d`. `q` must be monic irreducible.
pub fn is_cyclotomic(q: &IntegerPolynomial) -> Result<Option<u64>> {
    if q.degree() == 0 || !super::factor::is_irreducible(q)? {
        return Err(Error::NotIrreducible);
    }
    Ok(cyclotomic_order_unchecked(q))
}

/// Same test without the irreducibility check.
pub(crate) fn cyclotomic_order_unchecked(q: &IntegerPolynomial) -> Option<u64> {
    let q = if q.leading() < BigInt::from(0) { q.neg() } else { q.clone() };
    if !q.is_monic() {
        return None;
    }
    inverse_totient(q.degree() as u64)
        .into_iter()
        .find(|&d| cyclotomic_polynomial(d) == q)
}

/// Sum of the generalized eigenspaces of `m` for root-of-unity eigenvalues,
/// computed exactly as `ker g(m)` with `g` the cyclotomic part of the
/// characteristic polynomial.
pub fn root_of_unity_subspace(m: &SquareMatrix<BigRational>) -> Vec<Vec<BigRational>> {
    let n = m.dim();
    let cp = berkowitz(m);
    // phi(d) <= n forces d <= 2 n^2.
    let mut u = RationalPolynomial::one();
    for d in 1..=(2 * n * n + 2) as u64 {
        if euler_phi(d) as usize <= n {
            u = u.mul(&cyclotomic_polynomial(d).to_rational());
        }
    }
    let g = cp.gcd(&u.pow(n as u32));
    if g.degree() == 0 {
        return Vec::new();
    }
    kernel(&g.eval_matrix(m).rows(), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_inverse_matches_brute_force() {
        for k in 1..=40u64 {
            let brute: Vec<u64> = (1..=10 * k + 10).filter(|&d| euler_phi(d) == k).collect();
            assert_eq!(inverse_totient(k), brute, "k = {k}");
        }
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), IntegerPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), IntegerPolynomial::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(12), IntegerPolynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn root_of_unity_subspace_of_heisenberg_cat() {
        let m = SquareMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap();
        let s = root_of_unity_subspace(&m);
        assert_eq!(s.len(), 1);
        assert!(s[0][0] == BigRational::from_integer(0.into()));
        let r = SquareMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(root_of_unity_subspace(&r).len(), 2);
    }

    #[test]
    fn detection_examples() {
        assert_eq!(is_cyclotomic(&IntegerPolynomial::from_i64(&[1, 1, 1])).unwrap(), Some(3));
        assert_eq!(is_cyclotomic(&IntegerPolynomial::from_i64(&[-1, 1])).unwrap(), Some(1));
        assert_eq!(is_cyclotomic(&IntegerPolynomial::from_i64(&[1, -3, 1])).unwrap(), None);
        assert!(is_cyclotomic(&IntegerPolynomial::from_i64(&[-1, 0, 1])).is_err());
    }
}
