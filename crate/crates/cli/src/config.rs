//! Experiment description read from TOML. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use molqudit::coupling::{CavitySpec, CouplingVector, DEFAULT_FOCK_CUTOFF};
use molqudit::effective::PhotonState;
use molqudit::pipeline::{Molecule, System};
use molqudit::resonance::{ResonanceOptions, DEFAULT_COUPLING_FLOOR, DEFAULT_RESONANCE_TOLERANCE};
use molqudit::spin::{MoleculeSpec, SpinMagnitude, StevensTerm, DEFAULT_DEGENERACY_GAP};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub molecules: Vec<MoleculeConfig>,
    pub cavity: CavityConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photon_state: Option<PhotonConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeConfig {
    /// Twice the spin quantum number.
    pub two_s: u32,
    #[serde(default)]
    pub stevens: Vec<StevensConfig>,
    #[serde(default = "default_g")]
    pub g: [f64; 3],
    #[serde(default = "default_zeeman_sign")]
    pub zeeman_sign: i32,
    /// Tesla.
    #[serde(default)]
    pub field: [f64; 3],
    /// GHz.
    pub lambda: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StevensConfig {
    pub k: u32,
    pub q: i32,
    /// GHz.
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    /// GHz.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonConfig {
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_resonance")]
    pub resonance: f64,
    #[serde(default = "default_floor")]
    pub coupling_floor: f64,
    #[serde(default = "default_fock")]
    pub fock_cutoff: usize,
    #[serde(default = "default_gap")]
    pub degeneracy_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            resonance: DEFAULT_RESONANCE_TOLERANCE,
            coupling_floor: DEFAULT_COUPLING_FLOOR,
            fock_cutoff: DEFAULT_FOCK_CUTOFF,
            degeneracy_gap: DEFAULT_DEGENERACY_GAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    /// One level index per molecule (0 = lowest).
    pub initial: Vec<usize>,
    #[serde(rename = "final")]
    pub target: Vec<usize>,
    /// Seconds. Defaults to twice the estimated gate time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default)]
    pub exact_effective: bool,
    #[serde(default)]
    pub exact_full: bool,
    #[serde(default)]
    pub first_order: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldAxis {
    Bx,
    By,
    Bz,
}

impl FieldAxis {
    pub fn index(self) -> usize {
        match self {
            Self::Bx => 0,
            Self::By => 1,
            Self::Bz => 2,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Self::Bx => "B_x",
            Self::By => "B_y",
            Self::Bz => "B_z",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_axis")]
    pub axis: FieldAxis,
    /// Molecules whose field is swept; all of them when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecules: Option<Vec<usize>>,
    /// Tesla.
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.steps == 0 {
            return Err(CliError::Config("sweep needs at least one step".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Config("sweep bounds must be finite".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.start]);
        }
        if self.start == self.stop {
            return Err(CliError::Config("sweep range is empty".into()));
        }
        let step = (self.stop - self.start) / (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + step * k as f64 })
            .collect())
    }
}

fn default_g() -> [f64; 3] {
    [2.0; 3]
}
fn default_zeeman_sign() -> i32 {
    -1
}
fn default_resonance() -> f64 {
    DEFAULT_RESONANCE_TOLERANCE
}
fn default_floor() -> f64 {
    DEFAULT_COUPLING_FLOOR
}
fn default_fock() -> usize {
    DEFAULT_FOCK_CUTOFF
}
fn default_gap() -> f64 {
    DEFAULT_DEGENERACY_GAP
}
fn default_points() -> usize {
    400
}
fn default_axis() -> FieldAxis {
    FieldAxis::Bz
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical serialization, so overrides are reflected.
    pub fn sha256(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.molecules.is_empty() {
            return Err(CliError::Config("at least one molecule is required".into()));
        }
        for (n, m) in self.molecules.iter().enumerate() {
            m.spec()?.validate().map_err(|e| CliError::Config(format!("molecule {n}: {e}")))?;
            CouplingVector(m.lambda)
                .validate()
                .map_err(|e| CliError::Config(format!("molecule {n}: {e}")))?;
        }
        CavitySpec::new(self.cavity.omega, self.tolerances.fock_cutoff).map_err(|e| CliError::Config(e.to_string()))?;
        self.photon()?;
        self.resonance_options()?;
        if !(self.tolerances.degeneracy_gap.is_finite() && self.tolerances.degeneracy_gap >= 0.0) {
            return Err(CliError::Config("degeneracy_gap must be non-negative".into()));
        }
        if let Some(d) = &self.dynamics {
            let n = self.molecules.len();
            if d.initial.len() != n || d.target.len() != n {
                return Err(CliError::Config(format!("dynamics labels need {n} entries")));
            }
            for (labels, name) in [(&d.initial, "initial"), (&d.target, "final")] {
                for (m, &l) in self.molecules.iter().zip(labels) {
                    if l > m.two_s as usize {
                        return Err(CliError::Config(format!("{name} label {l} out of range")));
                    }
                }
            }
            if let Some(t) = d.t_max {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(CliError::Config("t_max must be non-negative".into()));
                }
            }
            if d.n_points < 2 {
                return Err(CliError::Config("n_points must be at least 2".into()));
            }
        }
        if let Some(s) = &self.sweep {
            s.values()?;
            if let Some(list) = &s.molecules {
                if list.iter().any(|&k| k >= self.molecules.len()) {
                    return Err(CliError::Config("sweep molecule index out of range".into()));
                }
            }
        }
        Ok(())
    }

    pub fn photon(&self) -> Result<PhotonState, CliError> {
        match self.photon_state {
            None => Ok(PhotonState::VACUUM),
            Some(p) => PhotonState::new(p.p0, p.p1).map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn resonance_options(&self) -> Result<ResonanceOptions, CliError> {
        let t = &self.tolerances;
        if !(t.resonance.is_finite() && t.resonance > 0.0) {
            return Err(CliError::Config(format!("resonance tolerance must be positive (got {})", t.resonance)));
        }
        if !(t.coupling_floor.is_finite() && t.coupling_floor >= 0.0) {
            return Err(CliError::Config("coupling_floor must be non-negative".into()));
        }
        Ok(ResonanceOptions {
            tolerance: t.resonance,
            coupling_floor: t.coupling_floor,
            ..ResonanceOptions::default()
        })
    }

    pub fn cavity_spec(&self) -> CavitySpec {
        CavitySpec {
            omega: self.cavity.omega,
            fock_cutoff: self.tolerances.fock_cutoff,
        }
    }

    pub fn system(&self) -> Result<System, CliError> {
        Ok(System {
            molecules: self
                .molecules
                .iter()
                .map(|m| {
                    Ok(Molecule {
                        spec: m.spec()?,
                        coupling: CouplingVector(m.lambda),
                    })
                })
                .collect::<Result<_, CliError>>()?,
            omega: self.cavity.omega,
        })
    }

    /// Copy with the sweep field applied.
    pub fn at_field(&self, sweep: &SweepConfig, value: f64) -> Self {
        let mut out = self.clone();
        for (k, m) in out.molecules.iter_mut().enumerate() {
            if sweep.molecules.as_ref().is_none_or(|list| list.contains(&k)) {
                m.field[sweep.axis.index()] = value;
            }
        }
        out
    }
}

impl MoleculeConfig {
    pub fn spec(&self) -> Result<MoleculeSpec, CliError> {
        Ok(MoleculeSpec {
            spin: SpinMagnitude::new(self.two_s).map_err(|e| CliError::Config(e.to_string()))?,
            stevens: self
                .stevens
                .iter()
                .map(|s| StevensTerm { k: s.k, q: s.q, b: s.b })
                .collect(),
            g: self.g,
            zeeman_sign: self.zeeman_sign,
            field: self.field,
        })
    }
}
