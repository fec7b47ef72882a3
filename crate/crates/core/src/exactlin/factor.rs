//! Exact factorization over `Q`.
//!
//! Squarefree decomposition (Yun) followed by a complete irreducibility
//! search: the certified roots of the monic transform are grouped into the
//! smallest conjugation-closed subsets whose monic product has integer
//! coefficients and divides exactly. With certified coefficient error below
//! one half, rounding recovers every true factor, so the search is complete.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{IntegerPolynomial, RationalPolynomial};
use super::precision::{sqrt_upper, ComplexRational, DEFAULT_BITS, MAX_BITS};
use super::roots::{isolate_roots, CertifiedRoot};
use crate::error::{Error, Result};

/// Yun's squarefree decomposition: pairs `(a_i, i)` with `p = c * prod a_i^i`.
pub fn squarefree_decomposition(p: &RationalPolynomial) -> Vec<(RationalPolynomial, u32)> {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let nc = d.div_exact(&a).expect("gcd divides");
        if a.degree() > 0 {
            out.push((a, i));
        }
        d = nc.sub(&nb.derivative());
        b = nb;
        i += 1;
    }
    out
}

fn coefficient_error_bound(roots: &[&CertifiedRoot], bits: u32) -> BigRational {
    let mut with_err = BigRational::one();
    let mut without = BigRational::one();
    for r in roots {
        let m = sqrt_upper(&r.center.norm_sqr(), bits);
        with_err *= BigRational::one() + &m + &r.radius;
        without *= BigRational::one() + m;
    }
    with_err - without
}

fn round_to_integer(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// Returns `Ok(None)` when the precision is insufficient to decide.
fn candidate_factor(
    roots: &[&CertifiedRoot],
    bits: u32,
) -> Option<Option<RationalPolynomial>> {
    let bound = coefficient_error_bound(roots, bits);
    let half = BigRational::new(1.into(), 2.into());
    if bound >= half {
        return None;
    }
    let mut prod = vec![ComplexRational::one()];
    for r in roots {
        let mut next = vec![ComplexRational::zero(); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&r.center));
        }
        prod = next;
    }
    let mut coeffs = Vec::with_capacity(prod.len());
    for c in &prod {
        if c.im.abs() > bound {
            return Some(None);
        }
        let k = round_to_integer(&c.re);
        if (&c.re - BigRational::from_integer(k.clone())).abs() > bound {
            return Some(None);
        }
        coeffs.push(BigRational::from_integer(k));
    }
    Some(Some(RationalPolynomial::new(coeffs)))
}

fn combinations(pool: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(pool, k, 0, &mut Vec::new(), out);
}

/// Irreducible factors of a monic squarefree integer polynomial.
fn split_monic_squarefree(t: &IntegerPolynomial) -> Result<Vec<IntegerPolynomial>> {
    if t.degree() <= 1 {
        return Ok(vec![t.clone()]);
    }
    let mut bits = DEFAULT_BITS;
    'retry: loop {
        let rs = isolate_roots(t, bits)?;
        bits = rs.bits;
        let roots = &rs.roots;
        let mut remaining: Vec<usize> = (0..roots.len()).collect();
        let mut rest = t.to_rational();
        let mut factors = Vec::new();
        while !remaining.is_empty() {
            let r0 = remaining[0];
            let others: Vec<usize> = remaining[1..].to_vec();
            let mut found = None;
            'sizes: for k in 0..=others.len() {
                let mut subsets = Vec::new();
                combinations(&others, k, &mut subsets);
                for mut s in subsets {
                    s.push(r0);
                    if s.iter().any(|&i| !s.contains(&roots[i].conjugate)) {
                        continue;
                    }
                    let refs: Vec<&CertifiedRoot> = s.iter().map(|&i| &roots[i]).collect();
                    match candidate_factor(&refs, bits) {
                        None => {
                            if bits >= MAX_BITS {
                                return Err(Error::Precision {
                                    bits,
                                    detail: "factor coefficients not resolved".into(),
                                });
                            }
                            bits *= 2;
                            continue 'retry;
                        }
                        Some(None) => {}
                        Some(Some(g)) => {
                            if let Some(q) = rest.div_exact(&g) {
                                found = Some((s, g, q));
                                break 'sizes;
                            }
                        }
                    }
                }
            }
            let Some((s, g, q)) = found else {
                return Err(Error::Precision {
                    bits,
                    detail: "no integral factor found for a root".into(),
                });
            };
            remaining.retain(|i| !s.contains(i));
            rest = q;
            factors.push(g.to_integer().expect("integral candidate"));
        }
        return Ok(factors);
    }
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn split_squarefree(s: &IntegerPolynomial) -> Result<Vec<IntegerPolynomial>> {
    let n = s.degree();
    if n <= 1 {
        return Ok(vec![s.primitive()]);
    }
    let lead = s.leading();
    if lead.is_one() {
        return split_monic_squarefree(s);
    }
    // t(y) = lead^(n-1) s(y / lead) is monic with roots lead * x_i.
    let t = IntegerPolynomial::new(
        (0..=n)
            .map(|k| s.coeff(k) * num_traits::pow(lead.clone(), n - k) / &lead)
            .collect(),
    );
    debug_assert!(t.is_monic());
    let factors = split_monic_squarefree(&t)?;
    Ok(factors
        .into_iter()
        .map(|g| {
            // g(lead * x), made primitive.
            IntegerPolynomial::new(
                g.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * num_traits::pow(lead.clone(), k))
                    .collect(),
            )
            .primitive()
        })
        .collect())
}

/// Irreducible factorization over `Q`: primitive factors with positive
/// leading coefficient and their multiplicities, in canonical order (degree,
/// then coefficients from the constant term up). Constants are dropped.
pub fn factor_over_q(p: &IntegerPolynomial) -> Result<Vec<(IntegerPolynomial, u32)>> {
    if p.is_zero() {
        return Err(Error::Malformed("cannot factor the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.to_rational()) {
        for f in split_squarefree(&part.primitive_integer())? {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

pub fn is_irreducible(p: &IntegerPolynomial) -> Result<bool> {
    if p.degree() == 0 {
        return Ok(false);
    }
    let f = factor_over_q(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

pub fn product(factors: &[(IntegerPolynomial, u32)]) -> IntegerPolynomial {
    factors
        .iter()
        .fold(IntegerPolynomial::one(), |acc, (f, m)| acc.mul(&f.pow(*m)))
}

/// Constant factor `c` with `p = c * product(factor_over_q(p))`.
pub fn unit_part(p: &IntegerPolynomial, factors: &[(IntegerPolynomial, u32)]) -> BigRational {
    let prod = product(factors);
    BigRational::new(p.leading(), prod.leading())
}

#[allow(dead_code)]
fn is_zero_poly(p: &IntegerPolynomial) -> bool {
    p.coeffs().iter().all(|c| c.is_zero())
}
