//! `I(r, h) = ∫_{h <= |x| <= 1} |ξ(x)|^2 |x|^{-2r} dx` by composite midpoint
//! rules on the dyadic shells `[2^{-k-1}, 2^{-k}]`, the cell around the
//! origin excluded symmetrically.

use serde::Serialize;

use crate::error::{Error, Result};

/// Piecewise linear interpolation of samples `(x, ξ(x))` on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl SampledProfile {
    pub fn new(mut pts: Vec<(f64, f64)>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::Malformed("a profile needs at least two samples".into()));
        }
        if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Malformed("non-finite profile sample".into()));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Malformed("repeated abscissa in profile".into()));
        }
        if pts[0].0 > -1.0 || pts[pts.len() - 1].0 < 1.0 {
            return Err(Error::Malformed("profile samples must cover [-1, 1]".into()));
        }
        Ok(SampledProfile {
            xs: pts.iter().map(|p| p.0).collect(),
            ys: pts.iter().map(|p| p.1).collect(),
        })
    }

    /// Samples `f` on a uniform grid with `n` cells.
    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize) -> Self {
        let n = n.max(1);
        let pts = (0..=n).map(|i| {
            let x = -1.0 + 2.0 * i as f64 / n as f64;
            (x, f(x))
        });
        SampledProfile::new(pts.collect()).expect("uniform grid")
    }

    /// CSV with header and rows `x,xi`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        lines.next().ok_or_else(|| Error::Malformed("empty profile CSV".into()))?;
        let mut pts = Vec::new();
        for (i, l) in lines.enumerate() {
            let mut it = l.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Malformed(format!("profile row {}: expected two numbers", i + 2)))
            };
            let x = parse(it.next())?;
            let y = parse(it.next())?;
            pts.push((x, y));
        }
        SampledProfile::new(pts)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.xs.partition_point(|&t| t <= x);
        if i == 0 {
            return self.ys[0];
        }
        if i == self.xs.len() {
            return self.ys[i - 1];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (x - x0) / (x1 - x0);
        self.ys[i - 1] * (1.0 - t) + self.ys[i] * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ThresholdOptions {
    /// Midpoint cells per dyadic shell at the coarse level.
    pub cells: usize,
    pub tolerance: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            cells: 256,
            tolerance: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ThresholdReport {
    pub r: f64,
    pub h: f64,
    pub integral: f64,
    /// `|I_2n - I_n|` for the cell-doubling refinement.
    pub refinement_error: f64,
    /// Contributions of the two innermost complete shells, inner first.
    pub inner_shells: (f64, f64),
    /// Exponent `p` with integrand `~ |x|^p` near the origin, fitted from the shells.
    pub local_exponent: f64,
    pub xi_at_zero: f64,
    pub verdict: Verdict,
}

fn shell_integral(xi: &dyn Fn(f64) -> f64, r: f64, a: f64, b: f64, n: usize) -> f64 {
    let w = (b - a) / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        let x = a + (i as f64 + 0.5) * w;
        let p = x.powf(-2.0 * r);
        s += (xi(x).powi(2) + xi(-x).powi(2)) * p;
    }
    s * w
}

fn integral(xi: &dyn Fn(f64) -> f64, r: f64, h: f64, n: usize) -> (f64, Vec<f64>) {
    let mut shells = Vec::new();
    let mut hi = 1.0;
    while hi > h {
        let lo = (hi / 2.0).max(h);
        shells.push(shell_integral(xi, r, lo, hi, n));
        hi /= 2.0;
    }
    // Sum from the small shells up.
    let total = shells.iter().rev().sum();
    (total, shells)
}

pub fn schrodinger_threshold(
    profile: &dyn Fn(f64) -> f64,
    r: f64,
    h: f64,
    opts: &ThresholdOptions,
) -> Result<ThresholdReport> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::OutOfRange(format!("h = {h} must lie in (0, 1)")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange(format!("r = {r} must be positive")));
    }
    let (coarse, _) = integral(profile, r, h, opts.cells);
    let (fine, shells) = integral(profile, r, h, 2 * opts.cells);
    // Complete shells are all but a possibly partial innermost one.
    let k = (1.0 / h).log2().floor() as usize;
    let (inner, outer) = if k >= 2 {
        (shells[k - 1], shells[k - 2])
    } else {
        (shells[0], shells[0])
    };
    // A shell at scale x contributes ~ x^{p+1}; consecutive shells differ by 2^{p+1}.
    let local_exponent = if inner > 0.0 && outer > 0.0 {
        (outer / inner).log2() - 1.0
    } else {
        f64::INFINITY
    };
    let xi0 = profile(0.0);
    let verdict = if r < 0.5 {
        Verdict::Convergent
    } else if xi0.abs() > opts.tolerance {
        Verdict::Divergent
    } else if local_exponent > -1.0 + 0.05 {
        Verdict::Convergent
    } else {
        Verdict::Divergent
    };
    Ok(ThresholdReport {
        r,
        h,
        integral: fine,
        refinement_error: (fine - coarse).abs(),
        inner_shells: (inner, outer),
        local_exponent,
        xi_at_zero: xi0,
        verdict,
    })
}
