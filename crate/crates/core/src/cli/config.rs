// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clock::{uniform_grid, FreeParam, Target};
use crate::dimer::{CouplingMode, DimerSystem, OPERATING_FIELD_MT, OPERATING_VOLTAGE};
use crate::error::{Error, Result};
use crate::open::RelaxationConfig;
use crate::pulses::{Damping, InitLadder, PulseSequence, DEFAULT_OMEGA_MHZ};
use crate::spin::{Preset, SpinSystemParams};

/// Version of every CSV/JSON layout written by the command line.
pub const SCHEMA_VERSION: u32 = 1;

/// Either explicit values or an inclusive uniform range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { start, stop, step } => uniform_grid(*start, *stop, *step)?,
        };
        if v.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("grid values must be finite".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub fields_mt: Grid,
    #[serde(default)]
    pub voltage: f64,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { fields_mt: Grid::Range { start: 0.0, stop: 200.0, step: 0.5 }, voltage: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CtFindSection {
    pub range_mt: (f64, f64),
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub voltage: f64,
}

impl Default for CtFindSection {
    fn default() -> Self {
        Self { range_mt: (0.0, 200.0), pairs: vec![(7, 8)], voltage: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrateSection {
    pub free: Vec<String>,
    pub targets: Vec<Target>,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        use crate::clock::Observable;
        Self {
            free: vec!["delta".into(), "a_z".into()],
            targets: vec![
                Target { observable: Observable::first_ct_field(), value: 24.0, weight: 1.0 },
                Target { observable: Observable::first_ct_frequency(), value: 9.1, weight: 1.0 },
            ],
        }
    }
}

impl CalibrateSection {
    pub fn free_params(&self) -> Result<Vec<FreeParam>> {
        self.free.iter().map(|s| FreeParam::parse(s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaxSection {
    pub fields_mt: Grid,
    pub temperatures_k: Grid,
    #[serde(default)]
    pub model: RelaxationConfig,
}

impl Default for RelaxSection {
    fn default() -> Self {
        Self {
            fields_mt: Grid::Values(vec![24.0]),
            temperatures_k: Grid::Range { start: 3.0, stop: 11.0, step: 1.0 },
            model: RelaxationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DimerSection {
    pub fields_mt: Grid,
    #[serde(default = "default_v_on")]
    pub v_on: f64,
    #[serde(default)]
    pub mode: CouplingMode,
    /// Site separation override (angstrom).
    #[serde(default)]
    pub separation_angstrom: Option<f64>,
}

fn default_v_on() -> f64 {
    OPERATING_VOLTAGE
}
fn default_field() -> f64 {
    OPERATING_FIELD_MT
}
fn default_omega() -> f64 {
    DEFAULT_OMEGA_MHZ
}

impl Default for DimerSection {
    fn default() -> Self {
        Self {
            fields_mt: Grid::Range { start: 0.0, stop: 48.0, step: 1.0 },
            v_on: OPERATING_VOLTAGE,
            mode: CouplingMode::default(),
            separation_angstrom: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    #[default]
    BellPhi,
    BellPsi,
    Swap,
    Rabi,
    /// The sequence given inline or in `sequence_file`.
    Sequence,
    /// The ladder given in `ladder`, or the shipped example ladder.
    Init,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    #[serde(default)]
    pub protocol: Protocol,
    #[serde(default = "default_field")]
    pub field_mt: f64,
    #[serde(default = "default_v_on")]
    pub v_on: f64,
    #[serde(default = "default_omega")]
    pub omega_mhz: f64,
    #[serde(default)]
    pub mode: CouplingMode,
    /// E-off wait override for the Bell protocols (ns).
    #[serde(default)]
    pub wait_ns: Option<f64>,
    #[serde(default)]
    pub sequence: Option<PulseSequence>,
    #[serde(default)]
    pub sequence_file: Option<PathBuf>,
    #[serde(default)]
    pub damping: Option<Damping>,
    #[serde(default)]
    pub ladder: Option<InitLadder>,
    /// Lab-frame integration instead of the rotating frame (Bell protocols).
    #[serde(default)]
    pub lab_frame: bool,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            protocol: Protocol::default(),
            field_mt: OPERATING_FIELD_MT,
            v_on: OPERATING_VOLTAGE,
            omega_mhz: DEFAULT_OMEGA_MHZ,
            mode: CouplingMode::default(),
            wait_ns: None,
            sequence: None,
            sequence_file: None,
            damping: None,
            ladder: None,
            lab_frame: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub preset: Option<String>,
    /// TOML file with a full single-molecule parameter set (replaces the preset).
    #[serde(default)]
    pub params_file: Option<PathBuf>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default)]
    pub ct_find: Option<CtFindSection>,
    #[serde(default)]
    pub calibrate: Option<CalibrateSection>,
    #[serde(default)]
    pub relax: Option<RelaxSection>,
    #[serde(default)]
    pub dimer: Option<DimerSection>,
    #[serde(default)]
    pub pulse: Option<PulseSection>,
}

/// A parsed configuration with everything needed to reproduce a run.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub preset: Preset,
    pub params: SpinSystemParams,
    /// sha256 over the config text, the preset override and referenced files.
    pub hash: String,
    base_dir: PathBuf,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_toml<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {e}")))
}

impl LoadedConfig {
    /// Parse `path` (if any) and apply the `--preset` override.
    pub fn load(path: Option<&Path>, preset_override: Option<&str>) -> Result<Self> {
        let mut hasher = Sha256::new();
        let (config, base_dir) = match path {
            Some(p) => {
                let text = read(p)?;
                hasher.update(text.as_bytes());
                (
                    parse_toml::<RunConfig>(&text, &p.display().to_string())?,
                    p.parent().unwrap_or(Path::new(".")).to_path_buf(),
                )
            }
            None => (RunConfig::default(), PathBuf::from(".")),
        };
        let name = preset_override.map(str::to_string).or_else(|| config.preset.clone());
        let preset = Preset::parse(name.as_deref().unwrap_or(Preset::Experimental9p1GHz.name()))?;
        hasher.update(b"\0preset=");
        hasher.update(preset.name().as_bytes());
        let mut loaded =
            Self { config, preset, params: SpinSystemParams::preset(preset), hash: String::new(), base_dir };
        if let Some(f) = loaded.config.params_file.clone() {
            let p = loaded.resolve(&f)?;
            let text = read(&p)?;
            hasher.update(b"\0params=");
            hasher.update(text.as_bytes());
            loaded.params = parse_toml(&text, &p.display().to_string())?;
            loaded.params.validate()?;
        }
        if let Some(f) = loaded.config.pulse.as_ref().and_then(|s| s.sequence_file.clone()) {
            let p = loaded.resolve(&f)?;
            let text = read(&p)?;
            hasher.update(b"\0sequence=");
            hasher.update(text.as_bytes());
            let seq: PulseSequence = parse_toml(&text, &p.display().to_string())?;
            loaded.config.pulse.as_mut().expect("pulse section").sequence = Some(seq);
        }
        loaded.hash = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Ok(loaded)
    }

    /// Paths in the config are relative to the config file.
    fn resolve(&self, p: &Path) -> Result<PathBuf> {
        let full = if p.is_absolute() { p.to_path_buf() } else { self.base_dir.join(p) };
        if !full.exists() {
            return Err(Error::Config(format!("referenced file {} does not exist", full.display())));
        }
        Ok(full)
    }

    /// Dimer of two copies of the configured molecule.
    pub fn dimer(&self, mode: CouplingMode, separation: Option<f64>) -> Result<DimerSystem> {
        let mut d = DimerSystem::preset(self.preset);
        if self.config.params_file.is_some() {
            d.site_a = self.params.clone();
            d.site_b = self.params.clone();
        }
        d.mode = mode;
        if let Some(r) = separation {
            d.geometry = d.geometry.with_distance(r);
        }
        d.validate()?;
        Ok(d)
    }
}
