//! Nilpotent Lie algebras given by structure constants in a layered basis.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::matrix::rational_serde;
use crate::exactlin::subspace::{same_subspace, span_basis};

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`. Basis indices are split into
/// consecutive layers; `layers[a]` is the size of layer `a + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentAlgebra {
    dim: usize,
    c: Vec<Vec<Vec<BigRational>>>,
    layers: Vec<usize>,
    names: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    #[serde(with = "rational_serde")]
    pub value: Vec<BigRational>,
}

/// JSON form of an algebra. Brackets are listed for `i < j` only unless
/// `raw` is set, in which case they are taken verbatim.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub layers: Vec<usize>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default)]
    pub names: Vec<String>,
    #[serde(default)]
    pub raw: bool,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct AlgebraDiagnostics {
    pub antisymmetry: Option<(usize, usize)>,
    pub jacobi: Option<(usize, usize, usize)>,
    pub malcev: Option<(usize, usize)>,
    pub layers_match_central_series: bool,
    pub step: Option<usize>,
}

impl AlgebraDiagnostics {
    pub fn passed(&self) -> bool {
        self.antisymmetry.is_none()
            && self.jacobi.is_none()
            && self.malcev.is_none()
            && self.layers_match_central_series
            && self.step.is_some()
    }
}

impl NilpotentAlgebra {
    /// Abelian algebra of dimension `dim` (a single layer).
    pub fn abelian(dim: usize) -> Self {
        NilpotentAlgebra {
            dim,
            c: vec![vec![vec![BigRational::zero(); dim]; dim]; dim],
            layers: vec![dim],
            names: Vec::new(),
        }
    }

    /// Builds from brackets with `i < j`; `[e_j, e_i]` is filled by antisymmetry.
    pub fn from_brackets(dim: usize, layers: Vec<usize>, brackets: &[(usize, usize, Vec<BigRational>)]) -> Result<Self> {
        let mut a = Self::abelian(dim);
        a.set_layers(layers)?;
        for (i, j, v) in brackets {
            a.check_bracket(*i, *j, v)?;
            a.c[*i][*j] = v.clone();
            a.c[*j][*i] = v.iter().map(|x| -x).collect();
        }
        Ok(a)
    }

    /// Builds from raw structure constants without symmetrizing.
    pub fn from_structure_constants(c: Vec<Vec<Vec<BigRational>>>, layers: Vec<usize>) -> Result<Self> {
        let dim = c.len();
        if c.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::Malformed("structure constants must be dim x dim x dim".into()));
        }
        let mut a = Self::abelian(dim);
        a.set_layers(layers)?;
        a.c = c;
        Ok(a)
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self> {
        let mut a = if spec.raw {
            let mut a = Self::abelian(spec.dim);
            a.set_layers(spec.layers.clone())?;
            for b in &spec.brackets {
                a.check_bracket(b.i, b.j, &b.value)?;
                a.c[b.i][b.j] = b.value.clone();
            }
            a
        } else {
            let br: Vec<(usize, usize, Vec<BigRational>)> =
                spec.brackets.iter().map(|b| (b.i, b.j, b.value.clone())).collect();
            Self::from_brackets(spec.dim, spec.layers.clone(), &br)?
        };
        if !spec.names.is_empty() {
            if spec.names.len() != spec.dim {
                return Err(Error::DimensionMismatch {
                    expected: spec.dim,
                    got: spec.names.len(),
                });
            }
            a.names = spec.names.clone();
        }
        Ok(a)
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self.c[i][j].iter().any(|x| !x.is_zero()) {
                    brackets.push(BracketSpec {
                        i,
                        j,
                        value: self.c[i][j].clone(),
                    });
                }
            }
        }
        AlgebraSpec {
            dim: self.dim,
            layers: self.layers.clone(),
            brackets,
            names: self.names.clone(),
            raw: false,
        }
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    fn set_layers(&mut self, layers: Vec<usize>) -> Result<()> {
        if layers.iter().sum::<usize>() != self.dim || layers.iter().any(|&l| l == 0) {
            return Err(Error::Malformed(format!(
                "layer sizes {layers:?} do not partition dimension {}",
                self.dim
            )));
        }
        self.layers = layers;
        Ok(())
    }

    fn check_bracket(&self, i: usize, j: usize, v: &[BigRational]) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::Malformed(format!("bracket index ({i}, {j}) out of range")));
        }
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &[BigRational] {
        &self.c[i][j]
    }

    /// 1-based layer of basis index `i`.
    pub fn layer_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (a, &s) in self.layers.iter().enumerate() {
            acc += s;
            if i < acc {
                return a + 1;
            }
        }
        self.layers.len()
    }

    /// Basis indices of layer `a` (1-based).
    pub fn layer_indices(&self, a: usize) -> std::ops::Range<usize> {
        let start: usize = self.layers[..a - 1].iter().sum();
        start..start + self.layers[a - 1]
    }

    /// Standard basis vectors of layers `a, a+1, ...`.
    pub fn span_from_layer(&self, a: usize) -> Vec<Vec<BigRational>> {
        if a > self.layers.len() {
            return Vec::new();
        }
        let start: usize = self.layers[..a - 1].iter().sum();
        (start..self.dim).map(|i| unit(self.dim, i)).collect()
    }

    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (k, c) in self.c[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &w * c;
                    }
                }
            }
        }
        out
    }

    /// `n_1 = n, n_j = [n_{j-1}, n]`, ending with the zero subspace. Stops
    /// early (without the trailing zero) if the series stabilizes above zero.
    pub fn central_series(&self) -> Vec<Vec<Vec<BigRational>>> {
        let mut series = vec![(0..self.dim).map(|i| unit(self.dim, i)).collect::<Vec<_>>()];
        loop {
            let prev = series.last().unwrap();
            let mut gens = Vec::new();
            for x in prev {
                for k in 0..self.dim {
                    let b = self.bracket(x, &unit(self.dim, k));
                    if b.iter().any(|v| !v.is_zero()) {
                        gens.push(b);
                    }
                }
            }
            let next = span_basis(&gens);
            if next.len() == prev.len() {
                return series;
            }
            let done = next.is_empty();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    pub fn validate(&self) -> AlgebraDiagnostics {
        let n = self.dim;
        let mut d = AlgebraDiagnostics::default();
        'anti: for i in 0..n {
            for j in i..n {
                let ok = self.c[i][j].iter().zip(&self.c[j][i]).all(|(a, b)| (a + b).is_zero());
                if !ok {
                    d.antisymmetry = Some((i, j));
                    break 'anti;
                }
            }
        }
        'jac: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (unit(n, i), unit(n, j), unit(n, k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    if (0..n).any(|t| !(&a[t] + &b[t] + &c[t]).is_zero()) {
                        d.jacobi = Some((i, j, k));
                        break 'jac;
                    }
                }
            }
        }
        'mal: for i in 0..n {
            for j in 0..n {
                let depth = self.layer_of(i).max(self.layer_of(j));
                let bad = self.c[i][j]
                    .iter()
                    .enumerate()
                    .any(|(k, x)| !x.is_zero() && self.layer_of(k) <= depth);
                if bad {
                    d.malcev = Some((i, j));
                    break 'mal;
                }
            }
        }
        let series = self.central_series();
        let nilpotent = series.last().map_or(false, |s| s.is_empty());
        if nilpotent {
            d.step = Some(series.len() - 1);
        }
        d.layers_match_central_series = nilpotent
            && series.len() == self.layers.len() + 1
            && (1..=self.layers.len()).all(|a| same_subspace(&series[a - 1], &self.span_from_layer(a)));
        d
    }

    /// Step of nilpotency, or `None` when not nilpotent.
    pub fn step(&self) -> Option<usize> {
        let s = self.central_series();
        if s.last().map_or(false, |v| v.is_empty()) {
            Some(s.len() - 1)
        } else {
            None
        }
    }
}

pub fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::from_integer(1.into());
    v
}
