use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rates::TimeTuple;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SeriesEntry {
    pub times: Vec<Vec<i64>>,
    pub re: f64,
    pub im: f64,
    pub gap: f64,
    pub max_gap: f64,
}

impl SeriesEntry {
    pub fn new(times: Vec<Vec<i64>>, value: Complex64) -> Self {
        let t = TimeTuple::new(times);
        SeriesEntry {
            gap: t.gap(),
            max_gap: t.max_gap(),
            times: t.0,
            re: value.re,
            im: value.im,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct CorrelationSeries {
    pub entries: Vec<SeriesEntry>,
    pub fit: Option<DecayFit>,
}

impl CorrelationSeries {
    pub fn push(&mut self, times: Vec<Vec<i64>>, value: Complex64) {
        self.entries.push(SeriesEntry::new(times, value));
    }

    /// `(gap, |value|)` pairs.
    pub fn by_gap(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(|e| (e.gap, e.abs())).collect()
    }

    pub fn by_max_gap(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(|e| (e.max_gap, e.abs())).collect()
    }

    /// Columns `times..., gap, maxgap, re, im, abs` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let (n, l) = self
            .entries
            .first()
            .map_or((0, 0), |e| (e.times.len(), e.times.first().map_or(0, |z| z.len())));
        let mut header: Vec<String> = Vec::new();
        for i in 1..=n {
            if l == 1 {
                header.push(format!("z{i}"));
            } else {
                header.extend((1..=l).map(|k| format!("z{i}_{k}")));
            }
        }
        header.extend(["gap", "maxgap", "re", "im", "abs"].map(String::from));
        out.push_str(&header.join(","));
        out.push('\n');
        for e in &self.entries {
            for z in &e.times {
                for x in z {
                    let _ = write!(out, "{x},");
                }
            }
            let _ = writeln!(out, "{},{},{},{},{}", e.gap, e.max_gap, e.re, e.im, e.abs());
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DecayFit {
    /// Envelope constant `max_j |v_j| e^{rate x_j}`.
    pub c: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub rate: f64,
    /// The envelope constant is not set by the entries at the largest
    /// abscissa alone, i.e. the data decays at least as fast as `rate`.
    pub envelope_satisfied: bool,
    pub points_used: usize,
}

pub const FIT_FLOOR: f64 = 1e-14;

/// Least squares of `log |v|` against `x` over entries above the floor,
/// and the envelope `C e^{-rate x}` over all entries.
pub fn decay_fit(points: &[(f64, f64)], rate: f64) -> Result<DecayFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > FIT_FLOOR)
        .map(|&(x, v)| (x, v.ln()))
        .collect();
    if used.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} of {} values exceed {FIT_FLOOR:e}; at least 3 are needed",
            used.len(),
            points.len()
        )));
    }
    let n = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
    let my = used.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = used.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let scaled: Vec<(f64, f64)> = points.iter().map(|&(x, v)| (x, v * (rate * x).exp())).collect();
    let c = scaled.iter().map(|p| p.1).fold(0.0, f64::max);
    let xmax = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let inner = scaled.iter().filter(|p| p.0 < xmax).map(|p| p.1).fold(0.0, f64::max);
    let tail = scaled.iter().filter(|p| p.0 == xmax).map(|p| p.1).fold(0.0, f64::max);
    Ok(DecayFit {
        c,
        slope,
        intercept,
        r2,
        rate,
        envelope_satisfied: inner >= tail * (1.0 - 1e-9),
        points_used: used.len(),
    })
}
