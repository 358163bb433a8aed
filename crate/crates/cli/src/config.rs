//! Run configuration: one JSON file drives every subcommand. Unknown keys
//! are rejected so typos fail loudly instead of silently using defaults.

use serde::Deserialize;

use latstab::{Geometry, LatticeModel};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: String,
    pub delta: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub e0: f64,
    #[serde(default)]
    pub transform: Option<TransformConfig>,
    #[serde(default)]
    pub extent: Option<Vec<usize>>,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(default = "default_k_samples")]
    pub k_samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Path to the reference band CSV (compare).
    #[serde(default)]
    pub reference: Option<String>,
    /// Validity window on the path parameter (compare).
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    /// Fit the energy zero to the reference midgap (compare; default true).
    #[serde(default)]
    pub fit_e0: Option<bool>,
    #[serde(default)]
    pub tolerances: Option<ToleranceConfig>,
    /// Verification fixture: adds i·value·𝟙 to the family checked for PT
    /// symmetry, which must make `verify` fail.
    #[serde(default)]
    pub pt_perturbation: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    pub kind: String,
    pub parameter: f64,
}

/// Per-check tolerance overrides for `verify`; unset fields keep the
/// defaults pinned in the check table.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default)]
    pub algebra: Option<f64>,
    #[serde(default)]
    pub dispersion: Option<f64>,
    #[serde(default)]
    pub mass_shell: Option<f64>,
    #[serde(default)]
    pub dirac: Option<f64>,
    #[serde(default)]
    pub isospectrality: Option<f64>,
    #[serde(default)]
    pub gap: Option<f64>,
    #[serde(default)]
    pub decomposition: Option<f64>,
    #[serde(default)]
    pub fw: Option<f64>,
    #[serde(default)]
    pub pt: Option<f64>,
    #[serde(default)]
    pub pseudo_hermiticity: Option<f64>,
    #[serde(default)]
    pub realspace: Option<f64>,
    #[serde(default)]
    pub spectral_reality: Option<f64>,
}

fn default_boundary() -> String {
    "periodic".into()
}

fn default_k_samples() -> usize {
    200
}

fn default_seed() -> u64 {
    42
}

impl RunConfig {
    pub fn model(&self) -> Result<LatticeModel, String> {
        let geometry = match self.geometry.as_str() {
            "chain" => Geometry::Chain,
            "honeycomb" => Geometry::Honeycomb,
            other => return Err(format!("unknown geometry '{other}' (chain|honeycomb)")),
        };
        LatticeModel::new(geometry, self.delta, self.mu, self.e0).map_err(|e| e.to_string())
    }

    pub fn extent_or(
        &self,
        default_chain: usize,
        default_honeycomb: usize,
    ) -> Result<[usize; 2], String> {
        let is_chain = self.geometry == "chain";
        match &self.extent {
            None => Ok(if is_chain {
                [default_chain, 1]
            } else {
                [default_honeycomb, default_honeycomb]
            }),
            Some(v) if is_chain && v.len() == 1 => Ok([v[0], 1]),
            Some(v) if !is_chain && v.len() == 2 => Ok([v[0], v[1]]),
            Some(v) => Err(format!(
                "extent must have 1 entry for chain or 2 for honeycomb, got {}",
                v.len()
            )),
        }
    }
}
