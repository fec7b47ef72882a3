//! Diophantine checks attached to an ergodic automorphism, and to the
//! layer projections of a subspace of a graded nilpotent algebra.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::certificate::{diophantine_certificate, DiophantineCertificate};
use crate::error::{Error, Result};
use crate::exactlin::primary::primary_decomposition;
use crate::exactlin::subspace::{coordinates, least_squares_coordinates, saturated_lattice_basis, to_rational_vec};
use crate::exactlin::{lyapunov_data, RationalSquareMatrix};
use crate::nilalg::{is_ergodic, NilpotentAlgebra};

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceCertificate {
    pub label: String,
    pub certificate: DiophantineCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma9Report {
    pub radius: f64,
    pub subspaces: Vec<SubspaceCertificate>,
    pub passed: bool,
}

fn push(out: &mut Vec<SubspaceCertificate>, label: String, v: &[Vec<BigRational>], dim_e: usize, radius: f64) -> Result<()> {
    if v.is_empty() {
        return Ok(());
    }
    out.push(SubspaceCertificate {
        label,
        certificate: diophantine_certificate(v, dim_e, radius, false)?,
    });
    Ok(())
}

/// Certificates for the extreme sub-blocks of each primary block, for
/// `W+` and `W-` in `Z^n`, and for every sub-block inside the lattice of
/// its primary block.
pub fn verify_lemma9(m: &RationalSquareMatrix, radius: f64) -> Result<Lemma9Report> {
    let n = m.dim();
    if !is_ergodic(&NilpotentAlgebra::abelian(n), m)? {
        return Err(Error::NotErgodic);
    }
    let ly = lyapunov_data(m)?;
    let pd = primary_decomposition(m)?;
    let mut out = Vec::new();
    for (i, p) in ly.primaries.iter().enumerate() {
        push(&mut out, format!("blockmax[{i}]"), &p.blockmax().basis, n, radius)?;
        push(&mut out, format!("blockmin[{i}]"), &p.blockmin().basis, n, radius)?;
    }
    push(&mut out, "W+".into(), &ly.w_plus_hp, n, radius)?;
    push(&mut out, "W-".into(), &ly.w_minus_hp, n, radius)?;
    for (i, (p, block)) in ly.primaries.iter().zip(&pd.blocks).enumerate() {
        let lattice: Vec<Vec<BigRational>> = saturated_lattice_basis(&block.basis, n)
            .iter()
            .map(|v| to_rational_vec(v))
            .collect();
        for (j, sb) in p.sub_blocks.iter().enumerate() {
            let coords: Vec<Vec<BigRational>> = sb
                .basis
                .iter()
                .map(|v| least_squares_coordinates(&lattice, v))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Malformed("degenerate primary lattice".into()))?;
            push(&mut out, format!("L[{i},{j}]"), &coords, lattice.len(), radius)?;
        }
    }
    let passed = out.iter().all(|s| s.certificate.passed);
    Ok(Lemma9Report {
        radius,
        subspaces: out,
        passed,
    })
}

fn restrict(v: &[BigRational], a: &NilpotentAlgebra, layer: usize) -> Result<Vec<BigRational>> {
    let idx = a.layer_indices(layer);
    let below = a.layer_indices(1).start..idx.start;
    if v[below].iter().any(|x| !x.is_zero()) {
        return Err(Error::OutOfRange(format!("vector does not lie in n_{layer}")));
    }
    Ok(v[idx].to_vec())
}

/// Certificate for the projection `p_i(V)` inside the lattice `p_i(E) ∩ Z^{d_i}`.
/// `V` and `E` must lie in `n_i`; `E` is a rational subspace.
pub fn type_i_subspace(
    a: &NilpotentAlgebra,
    layer: usize,
    v: &[Vec<BigRational>],
    e: &[Vec<BigRational>],
    radius: f64,
    exact: bool,
) -> Result<DiophantineCertificate> {
    if layer == 0 || layer > a.layers().len() {
        return Err(Error::OutOfRange(format!("layer {layer} out of range")));
    }
    for x in v.iter().chain(e) {
        if x.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: x.len(),
            });
        }
    }
    let d = a.layers()[layer - 1];
    let pv: Vec<Vec<BigRational>> = v.iter().map(|x| restrict(x, a, layer)).collect::<Result<_>>()?;
    let pe: Vec<Vec<BigRational>> = e.iter().map(|x| restrict(x, a, layer)).collect::<Result<_>>()?;
    let lattice: Vec<Vec<BigRational>> = saturated_lattice_basis(&pe, d).iter().map(|x| to_rational_vec(x)).collect();
    if lattice.is_empty() {
        return Err(Error::OutOfRange("p_i(E) is zero".into()));
    }
    let mut coords = Vec::new();
    for x in &pv {
        let c = if exact {
            coordinates(&lattice, x)
        } else {
            least_squares_coordinates(&lattice, x).filter(|c| {
                let r: Vec<f64> = (0..d)
                    .map(|k| {
                        let s: BigRational = c.iter().zip(&lattice).map(|(ci, b)| ci * &b[k]).sum();
                        (s - &x[k]).to_f64().unwrap_or(f64::INFINITY)
                    })
                    .collect();
                let nx: f64 = x.iter().map(|t| t.to_f64().unwrap_or(f64::INFINITY).abs()).sum();
                r.iter().map(|t| t.abs()).sum::<f64>() <= 1e-20 * (1.0 + nx)
            })
        };
        coords.push(c.ok_or_else(|| Error::OutOfRange("p_i(V) is not contained in p_i(E)".into()))?);
    }
    diophantine_certificate(&coords, lattice.len(), radius, exact)
}
