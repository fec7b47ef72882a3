//! Explicit rate quantities: `ρ`, `χ`, order-2 envelopes, Hölder rates,
//! the directional rate `Θ` and lattice densities of regular tuples.

mod density;
mod theta;

pub use density::{density_estimate, DensityOptions, DensityReport};
pub use theta::{theta, theta_with, PairRegularity, ThetaReport, TimeTuple};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{lyapunov_data, RationalSquareMatrix};
use crate::nilalg::{classify, abelianization_action, AutomorphismType, NilpotentAlgebra};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RateReport {
    pub rho: f64,
    pub rho_error: f64,
    pub chi: f64,
    pub chi_error: f64,
    /// 0 for irrational type, 1 otherwise.
    pub delta: u8,
    pub s0: usize,
    pub rho0: f64,
    pub layer_dims: Vec<usize>,
    /// `(ρ_{i,max}, ρ_{i,min})` per primary block of the abelianization.
    pub abelian_blocks: Vec<(f64, f64)>,
}

pub fn rho_chi(a: &NilpotentAlgebra, m: &RationalSquareMatrix) -> Result<RateReport> {
    let cls = classify(a, m)?;
    if !cls.ergodic {
        return Err(Error::NotErgodic);
    }
    let ab = lyapunov_data(&abelianization_action(a, m))?;
    let mut rho = f64::INFINITY;
    let mut rho_error = 0.0f64;
    let mut abelian_blocks = Vec::new();
    for p in &ab.primaries {
        let (hi, lo) = (p.blockmax(), p.blockmin());
        abelian_blocks.push((hi.exponent, lo.exponent));
        let v = hi.exponent.max(lo.exponent.abs());
        if v < rho {
            rho = v;
        }
        rho_error = rho_error.max(hi.error.max(lo.error));
    }
    let ly = &cls.lyapunov;
    let chi_block = ly
        .blocks
        .iter()
        .filter(|b| b.exponent != 0.0)
        .min_by(|x, y| x.exponent.abs().total_cmp(&y.exponent.abs()))
        .ok_or(Error::NotErgodic)?;
    let chi = chi_block.exponent.abs();
    let s0 = a.dim() + 1;
    Ok(RateReport {
        rho,
        rho_error,
        chi,
        chi_error: chi_block.error,
        delta: match cls.kind {
            AutomorphismType::Irrational => 0,
            AutomorphismType::Rational => 1,
        },
        s0,
        rho0: (chi / 2.0).min(rho / 4.0),
        layer_dims: a.layers().to_vec(),
        abelian_blocks,
    })
}

/// `bound(m) = C1 e^{-rate1 |m|} + δ C2 e^{-rate2 |m|}`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Envelope {
    pub r: f64,
    pub eps: f64,
    pub delta: u8,
    pub rate1: f64,
    pub rate2: f64,
}

impl Envelope {
    pub fn bound(&self, m: i64, c1: f64, c2: f64) -> f64 {
        let t = (m as f64).abs();
        c1 * (-self.rate1 * t).exp() + self.delta as f64 * c2 * (-self.rate2 * t).exp()
    }
}

pub fn order2_envelope(rates: &RateReport, r: f64, eps: f64) -> Result<Envelope> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("r = {r} must be positive")));
    }
    let cap = rates.chi.min(rates.rho / 2.0);
    if !(eps > 0.0 && eps < cap) {
        return Err(Error::OutOfRange(format!("eps = {eps} must lie in (0, {cap})")));
    }
    Ok(Envelope {
        r,
        eps,
        delta: rates.delta,
        rate1: (rates.chi - eps) * r,
        rate2: rates.rho / 2.0 - eps,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HolderRate {
    pub s: f64,
    pub s0: usize,
    pub rho0: f64,
    pub gamma: f64,
    pub warning: Option<String>,
}

/// `γ(s) = min{ s ρ0 / (4 s0), ρ0 / 2 }`.
pub fn holder_rate(rates: &RateReport, s: f64) -> Result<HolderRate> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::OutOfRange(format!("s = {s} must be positive")));
    }
    let s0 = rates.s0 as f64;
    Ok(HolderRate {
        s,
        s0: rates.s0,
        rho0: rates.rho0,
        gamma: (s * rates.rho0 / (4.0 * s0)).min(rates.rho0 / 2.0),
        warning: (s >= 1.0).then(|| "the Hölder estimate is stated for 0 < s < 1".to_string()),
    })
}
