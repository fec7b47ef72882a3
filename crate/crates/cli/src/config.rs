//! Experiment configs. Every struct rejects unknown fields, and every
//! defaulted field is written back out so reports carry the resolved config.

use nilmix::catalog::{self, System};
use nilmix::exactlin::RationalSquareMatrix;
use nilmix::fracsolve::{ObservableJson, SolveMode};
use nilmix::nilalg::{AlgebraSpec, NilpotentAlgebra};
use serde::{Deserialize, Serialize};

/// A catalog name or an inline definition.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SystemRef {
    Catalog(String),
    Inline(InlineSystem),
}

// Hand-written so that an inline definition reports its own field errors
// instead of "did not match any variant".
impl<'de> Deserialize<'de> for SystemRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(SystemRef::Catalog(s)),
            v @ serde_json::Value::Object(_) => InlineSystem::deserialize(v)
                .map(SystemRef::Inline)
                .map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!(
                "system must be a catalog name or an object, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineSystem {
    #[serde(default = "inline_name")]
    pub name: String,
    /// Omitted means abelian of the generators' dimension.
    #[serde(default)]
    pub algebra: Option<AlgebraSpec>,
    pub generators: Vec<RationalSquareMatrix>,
}

fn inline_name() -> String {
    "inline".into()
}

impl SystemRef {
    pub fn resolve(&self) -> Result<System, String> {
        match self {
            SystemRef::Catalog(name) => catalog::system(name).map_err(|_| {
                format!("unknown catalog system {name:?}; known: {}", catalog::NAMES.join(", "))
            }),
            SystemRef::Inline(s) => {
                let first = s.generators.first().ok_or("system.generators must not be empty")?;
                let dim = first.dim();
                if s.generators.iter().any(|g| g.dim() != dim) {
                    return Err("system.generators must share one dimension".into());
                }
                let algebra = match &s.algebra {
                    Some(spec) => NilpotentAlgebra::from_spec(spec).map_err(|e| format!("system.algebra: {e}"))?,
                    None => NilpotentAlgebra::abelian(dim),
                };
                if algebra.dim() != dim {
                    return Err(format!("system.algebra has dimension {}, generators {dim}", algebra.dim()));
                }
                let diag = algebra.validate();
                if !diag.passed() {
                    return Err(format!("system.algebra is not a valid layered nilpotent algebra: {diag:?}"));
                }
                for (k, g) in s.generators.iter().enumerate() {
                    let d = nilmix::nilalg::validate_automorphism(&algebra, g);
                    if !d.passed() {
                        return Err(format!("system.generators[{k}] is not an automorphism: {d:?}"));
                    }
                }
                Ok(System {
                    name: s.name.clone(),
                    algebra,
                    generators: s.generators.clone(),
                })
            }
        }
    }
}

fn default_system() -> SystemRef {
    SystemRef::Catalog("catmap".into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub system: SystemRef,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    pub system: SystemRef,
    /// Time `z` whose action `M^z` is analysed; defaults to the first generator.
    #[serde(default)]
    pub element: Option<Vec<i64>>,
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Envelope table covers `m = 0..=envelope_max`.
    #[serde(default = "default_envelope_max")]
    pub envelope_max: i64,
}

fn default_s() -> Vec<f64> {
    vec![0.5]
}
fn default_r() -> f64 {
    1.0
}
fn default_eps() -> f64 {
    0.01
}
fn default_envelope_max() -> i64 {
    10
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionSpec {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(with = "nilmix::exactlin::matrix::rational_serde::nested")]
    pub vectors: Vec<Vec<num_rational::BigRational>>,
    /// Treat the vectors as exact rationals rather than approximations.
    #[serde(default)]
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    #[serde(default = "default_system")]
    pub system: SystemRef,
    #[serde(default)]
    pub element: Option<Vec<i64>>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "yes")]
    pub lemma9: bool,
    #[serde(default)]
    pub directions: Vec<DirectionSpec>,
}

fn default_radius() -> f64 {
    1000.0
}
fn yes() -> bool {
    true
}

/// Where the solver's directions come from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DirectionSource {
    /// The unstable subspace `W+` of the system's first generator.
    Unstable,
    Stable,
    Explicit(DirectionSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    #[serde(default = "default_system")]
    pub system: SystemRef,
    #[serde(default = "default_direction")]
    pub directions: DirectionSource,
    pub observable: ObservableJson,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_mode")]
    pub mode: SolveMode,
    /// Radius of the Diophantine certificate used by the small-divisor bound;
    /// zero skips the bound.
    #[serde(default = "default_radius")]
    pub certificate_radius: f64,
}

fn default_direction() -> DirectionSource {
    DirectionSource::Unstable
}
fn default_mode() -> SolveMode {
    SolveMode::Modulus
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    /// `ξ(x) = c`.
    Constant(f64),
    /// `ξ(x) = |x|^p`.
    Power(f64),
    /// CSV file with header and rows `x,xi`, relative to the config file.
    Csv(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub profile: ProfileSpec,
    pub r: Vec<f64>,
    pub h: Vec<f64>,
    #[serde(default = "default_cells")]
    pub cells: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_cells() -> usize {
    256
}
fn default_tolerance() -> f64 {
    1e-3
}

/// Times `z_i = pattern[i] * m * direction` for `m` in `from..=to`, or an
/// explicit list of tuples.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TimeSpec {
    Range {
        from: i64,
        to: i64,
        pattern: Vec<i64>,
        #[serde(default)]
        direction: Option<Vec<i64>>,
    },
    Tuples(Vec<Vec<Vec<i64>>>),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FitAxis {
    Gap,
    Maxgap,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    #[serde(default = "default_axis")]
    pub against: FitAxis,
    /// Envelope rate; omitted means `χ` of the first generator.
    #[serde(default)]
    pub rate: Option<f64>,
}

fn default_axis() -> FitAxis {
    FitAxis::Gap
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelateConfig {
    #[serde(default = "default_system")]
    pub system: SystemRef,
    pub observables: Vec<ObservableJson>,
    pub times: TimeSpec,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub fit: Option<FitSpec>,
}

fn default_budget() -> u64 {
    nilmix::correlate::DEFAULT_BUDGET as u64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub system: SystemRef,
    #[serde(default = "default_n")]
    pub n: usize,
    pub radius: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_n() -> usize {
    2
}
fn default_samples() -> usize {
    nilmix::rates::DensityOptions::default().samples
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "demo", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CounterexampleConfig {
    /// `∫ (f1∘a^m)^2 (f2∘a^{2m})^n` on a single automorphism.
    Maxgap {
        #[serde(default = "default_system")]
        system: SystemRef,
        f1: ObservableJson,
        f2: ObservableJson,
        n: usize,
        from: i64,
        to: i64,
        #[serde(default = "default_budget")]
        budget: u64,
    },
    /// Constant correlations on `T^2 x T^2` with diverging separation.
    NoUniformBound {
        g: ObservableJson,
        from: i64,
        to: i64,
        #[serde(default = "default_budget")]
        budget: u64,
    },
}
