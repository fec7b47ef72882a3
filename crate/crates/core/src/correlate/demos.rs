use num_complex::Complex64;
use serde::Serialize;

use super::{integral_of_product, CorrelationSeries, IntegerAction};
use crate::error::{Error, Result};
use crate::exactlin::RationalSquareMatrix;
use crate::fracsolve::Observable;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CounterexampleSeries {
    pub series: CorrelationSeries,
    /// `c = ∫ f2^n`.
    pub c: Complex64,
    /// Expected limit `c ∫ f1^2`.
    pub limit: Complex64,
}

/// `∫ (f1 ∘ a^m)^2 (f2 ∘ a^{2m})^n` over `m` in `ms`.
pub fn counterexample_maxgap(
    f1: &Observable<Complex64>,
    f2: &Observable<Complex64>,
    n: usize,
    m: &RationalSquareMatrix,
    ms: &[i64],
    budget: u128,
) -> Result<CounterexampleSeries> {
    if n < 1 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if !f1.is_mean_zero() {
        return Err(Error::InvalidConstruction("f1 must have zero mean".into()));
    }
    let action = IntegerAction::new(std::slice::from_ref(m))?;
    let powers: Vec<Observable<Complex64>> = vec![f2.clone(); n];
    let c = integral_of_product(&powers, &action, &vec![vec![0]; n], budget)?;
    if c.norm() <= 1e-300 {
        return Err(Error::InvalidConstruction("∫ f2^n vanishes".into()));
    }
    let f1_sq = integral_of_product(&[f1.clone(), f1.clone()], &action, &[vec![0], vec![0]], budget)?;
    let mut fs = vec![f1.clone(), f1.clone()];
    fs.extend(powers);
    let mut series = CorrelationSeries::default();
    for &t in ms {
        let mut times = vec![vec![t], vec![t]];
        times.extend(std::iter::repeat(vec![2 * t]).take(n));
        let v = integral_of_product(&fs, &action, &times, budget)?;
        series.push(times, v);
    }
    Ok(CounterexampleSeries {
        series,
        c,
        limit: c * f1_sq,
    })
}

/// On `T^2 x T^2` with `α(z1, z2) = diag(A^{z1}, A^{z2})` and `f(x, y) = g(x)`,
/// `∫ f(α(0, m)) conj(f)(α(0, -m)) = |g|^2` for every `m`, while the time
/// separation `2m` diverges.
pub fn no_uniform_bound_demo(g: &Observable<Complex64>, ms: &[i64], budget: u128) -> Result<CorrelationSeries> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: g.dim() });
    }
    if g.is_zero() {
        return Err(Error::InvalidConstruction("g is zero".into()));
    }
    if !g.is_mean_zero() {
        return Err(Error::InvalidConstruction("g must have zero mean".into()));
    }
    let sys = crate::catalog::system("product-t2xt2")?;
    let action = IntegerAction::new(&sys.generators)?;
    let f = Observable::from_modes(4, g.iter().map(|(k, c)| (vec![k[0], k[1], 0, 0], *c)))?;
    let fs = [f.clone(), f.conj()];
    let mut series = CorrelationSeries::default();
    for &m in ms {
        let times = vec![vec![0, m], vec![0, -m]];
        let v = integral_of_product(&fs, &action, &times, budget)?;
        series.push(times, v);
    }
    Ok(series)
}
