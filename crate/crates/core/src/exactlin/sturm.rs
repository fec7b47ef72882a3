//! Sturm sequences for counting real roots in closed intervals.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::RationalPolynomial;

fn sign_changes(seq: &[RationalPolynomial], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots of `p` in `[lo, hi]`.
pub fn count_real_roots(p: &RationalPolynomial, lo: &BigRational, hi: &BigRational) -> usize {
    if p.degree() == 0 || lo > hi {
        return 0;
    }
    let g = p.gcd(&p.derivative());
    let s = p.div_exact(&g).expect("gcd divides");
    let mut seq = vec![s.clone(), s.derivative()];
    while seq.last().map_or(false, |q| !q.is_zero() && q.degree() > 0) {
        let k = seq.len();
        let (_, r) = seq[k - 2].div_rem(&seq[k - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    let at_lo = usize::from(s.eval(lo).is_zero());
    sign_changes(&seq, lo) - sign_changes(&seq, hi) + at_lo
}
