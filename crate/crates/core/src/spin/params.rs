// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::MU_B_GHZ_PER_T;

use super::angular::AngularMomentumSpec;
use super::stevens;

/// Key under which the effective doublet model stores its tunneling gap
/// (GHz) in the crystal-field table. The gap plays the role of the
/// B_4^4-type mixing of M_J = +4 and -4.
pub const TUNNELING_KEY: (i32, i32) = (4, 4);

/// First clock-transition field of the calibrated presets, mT.
pub const PRESET_CT_FIELD_MT: f64 = 24.0;

/// Electrode gap of the presets (2 mm).
pub const PRESET_ELECTRODE_GAP_M: f64 = 2.0e-3;

/// Spin-electric response of the tunneling gap, GHz per V/m. Chosen so that
/// 300 V across 2 mm detunes the two operating-space qubits of the preset
/// dimer at 12 mT by the synchronized value used by the pulse presets (see
/// `dimer::calibrate_sec`).
pub const PRESET_SEC_GHZ_PER_V_PER_M: f64 = -2.505_766_244_884_508e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct CfEntry {
    k: i32,
    q: i32,
    value: f64,
}

/// Crystal-field coefficients B_k^q in GHz (or their field derivatives).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<CfEntry>", into = "Vec<CfEntry>")]
pub struct StevensCoefficients(BTreeMap<(i32, i32), f64>);

impl From<Vec<CfEntry>> for StevensCoefficients {
    fn from(v: Vec<CfEntry>) -> Self {
        Self(v.into_iter().map(|e| ((e.k, e.q), e.value)).collect())
    }
}

impl From<StevensCoefficients> for Vec<CfEntry> {
    fn from(c: StevensCoefficients) -> Self {
        c.0.into_iter().map(|((k, q), value)| CfEntry { k, q, value }).collect()
    }
}

impl StevensCoefficients {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, k: i32, q: i32, value: f64) -> Self {
        self.0.insert((k, q), value);
        self
    }

    pub fn get(&self, k: i32, q: i32) -> f64 {
        self.0.get(&(k, q)).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, k: i32, q: i32, value: f64) {
        self.0.insert((k, q), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), f64)> + '_ {
        self.0.iter().map(|(&kq, &v)| (kq, v))
    }

    pub fn nonzero_keys(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.0.iter().filter(|(_, v)| **v != 0.0).map(|(&kq, _)| kq)
    }
}

/// Linear spin-electric response: B_k^q(V) = B_k^q + dB_k^q/dE * V / gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EFieldResponse {
    /// dB_k^q/dE in GHz per V/m.
    #[serde(default)]
    pub derivatives: StevensCoefficients,
    /// Electrode gap in metres.
    pub gap_m: f64,
}

impl EFieldResponse {
    pub fn none() -> Self {
        Self { derivatives: StevensCoefficients::new(), gap_m: PRESET_ELECTRODE_GAP_M }
    }

    pub fn field(&self, voltage: f64) -> f64 {
        voltage / self.gap_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    /// Full electronic multiplet (17 x 8 = 136 states for J = 8, I = 7/2).
    #[serde(rename = "full_J8")]
    FullJ,
    /// Ground M_J = +-m doublet only (2 x 8 = 16 states).
    #[serde(rename = "effective_doublet")]
    EffectiveDoublet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperfineMode {
    /// A_z Jz Iz only.
    #[default]
    Axial,
    /// A_z J . I (nuclear-extradiagonal terms included).
    Isotropic,
}

/// Presets shipped with the library; both put the first clock transition at 24 mT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "experimental_9p1GHz")]
    Experimental9p1GHz,
    #[serde(rename = "calculated_11GHz")]
    Calculated11GHz,
}

impl Preset {
    pub fn ct_frequency_ghz(self) -> f64 {
        match self {
            Preset::Experimental9p1GHz => 9.1,
            Preset::Calculated11GHz => 11.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Experimental9p1GHz => "experimental_9p1GHz",
            Preset::Calculated11GHz => "calculated_11GHz",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "experimental_9p1GHz" => Ok(Preset::Experimental9p1GHz),
            "calculated_11GHz" => Ok(Preset::Calculated11GHz),
            other => Err(Error::Config(format!(
                "unknown preset '{other}' (expected experimental_9p1GHz or calculated_11GHz)"
            ))),
        }
    }
}

/// One molecule: quantum numbers, crystal field, hyperfine, Zeeman and
/// spin-electric response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSystemParams {
    pub model_kind: ModelKind,
    pub electronic: AngularMomentumSpec,
    pub nuclear: AngularMomentumSpec,
    /// |M_J| of the ground doublet used by the effective model.
    #[serde(default = "default_doublet_mj")]
    pub doublet_mj: f64,
    pub g_j: f64,
    /// Axial hyperfine constant, GHz.
    pub a_z: f64,
    #[serde(default)]
    pub hyperfine_mode: HyperfineMode,
    pub cf: StevensCoefficients,
    pub e_response: EFieldResponse,
    /// Nuclear g-factor; the nuclear Zeeman term is added only when set.
    #[serde(default)]
    pub nuclear_g: Option<f64>,
    /// Nuclear quadrupole constant P (GHz); P (Iz^2 - I(I+1)/3) added only when set.
    #[serde(default)]
    pub quadrupole: Option<f64>,
}

fn default_doublet_mj() -> f64 {
    4.0
}

impl SpinSystemParams {
    /// Effective 16-level model with tunneling gap `delta` (GHz) and the
    /// hyperfine constant that puts the M_I = -1/2 clock transition at `ct_field_mt`.
    pub fn effective(delta: f64, ct_field_mt: f64) -> Self {
        let g_j = 1.25;
        Self {
            model_kind: ModelKind::EffectiveDoublet,
            electronic: AngularMomentumSpec::new(8.0).expect("valid"),
            nuclear: AngularMomentumSpec::new(3.5).expect("valid"),
            doublet_mj: 4.0,
            g_j,
            a_z: hyperfine_for_ct(g_j, ct_field_mt * 1e-3, -0.5),
            hyperfine_mode: HyperfineMode::Axial,
            cf: StevensCoefficients::new().with(TUNNELING_KEY.0, TUNNELING_KEY.1, delta),
            e_response: EFieldResponse {
                derivatives: StevensCoefficients::new().with(
                    TUNNELING_KEY.0,
                    TUNNELING_KEY.1,
                    PRESET_SEC_GHZ_PER_V_PER_M,
                ),
                gap_m: PRESET_ELECTRODE_GAP_M,
            },
            nuclear_g: None,
            quadrupole: None,
        }
    }

    pub fn preset(p: Preset) -> Self {
        Self::effective(p.ct_frequency_ghz(), PRESET_CT_FIELD_MT)
    }

    /// Full J = 8 multiplet whose ground doublet is M_J = +-4 (excited
    /// doublet +-3 about 50 cm^-1 higher). B_4^4 is tuned so that the
    /// ground-doublet tunneling gap is 9.1 GHz; see the `full_j8_template`
    /// calibration test.
    pub fn full_j8_template() -> Self {
        let b40 = 0.875;
        let mut p = Self::effective(9.1, PRESET_CT_FIELD_MT);
        p.model_kind = ModelKind::FullJ;
        p.cf = StevensCoefficients::new().with(2, 0, 1015.0 / 3.0 * b40).with(4, 0, b40).with(4, 4, FULL_J8_B44);
        p.e_response = EFieldResponse::none();
        p
    }

    pub fn tunneling_gap(&self) -> f64 {
        self.cf.get(TUNNELING_KEY.0, TUNNELING_KEY.1)
    }

    /// Crystal-field coefficients at the given electrode voltage.
    pub fn cf_at_voltage(&self, voltage: f64) -> StevensCoefficients {
        let e = self.e_response.field(voltage);
        let mut out = self.cf.clone();
        for ((k, q), d) in self.e_response.derivatives.iter() {
            out.set(k, q, self.cf.get(k, q) + d * e);
        }
        out
    }

    pub fn electronic_dim(&self) -> usize {
        match self.model_kind {
            ModelKind::FullJ => self.electronic.dim(),
            ModelKind::EffectiveDoublet => 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.electronic_dim() * self.nuclear.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_j.is_finite() && self.a_z.is_finite()) {
            return Err(Error::InvalidParameter("g_j and a_z must be finite".into()));
        }
        if !(self.e_response.gap_m > 0.0) {
            return Err(Error::InvalidParameter("electrode gap must be positive".into()));
        }
        let tables = [&self.cf, &self.e_response.derivatives];
        for table in tables {
            for ((k, q), v) in table.iter() {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!("B_{k}^{q} is not finite")));
                }
            }
        }
        match self.model_kind {
            ModelKind::EffectiveDoublet => {
                if self.electronic.index_of(self.doublet_mj).is_none() || self.doublet_mj <= 0.0 {
                    return Err(Error::ModelMismatch(format!(
                        "doublet M_J = +-{} does not exist for J = {}",
                        self.doublet_mj,
                        self.electronic.j()
                    )));
                }
                for table in tables {
                    if let Some((k, q)) = table.nonzero_keys().find(|&kq| kq != TUNNELING_KEY) {
                        return Err(Error::ModelMismatch(format!(
                            "effective_doublet accepts only the tunneling entry (k=4, q=4); found B_{k}^{q}"
                        )));
                    }
                }
            }
            ModelKind::FullJ => {
                for table in tables {
                    for (k, q) in table.nonzero_keys() {
                        stevens::validate(k, q)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Hyperfine constant placing the anticrossing of nuclear projection `m_i`
/// at field `b_t` (T): A_z = -g_J mu_B B / m_i.
pub fn hyperfine_for_ct(g_j: f64, b_t: f64, m_i: f64) -> f64 {
    -g_j * MU_B_GHZ_PER_T * b_t / m_i
}

/// Tuned B_4^4 of `full_j8_template`, GHz.
pub const FULL_J8_B44: f64 = 8.460_257_491_675e-2;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_is_valid_and_sized() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        p.validate().unwrap();
        assert_eq!(p.dim(), 16);
        assert_eq!(p.tunneling_gap(), 9.1);
        assert_eq!(SpinSystemParams::full_j8_template().dim(), 136);
    }

    #[test]
    fn mismatched_coefficients_rejected() {
        let mut p = SpinSystemParams::preset(Preset::Calculated11GHz);
        p.cf.set(2, 0, 1.0);
        assert!(matches!(p.validate(), Err(Error::ModelMismatch(_))));
        let mut p = SpinSystemParams::full_j8_template();
        p.cf.set(5, 0, 1.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn voltage_shifts_coefficients_linearly() {
        let p = SpinSystemParams::preset(Preset::Experimental9p1GHz);
        let d1 = p.cf_at_voltage(100.0).get(4, 4) - p.tunneling_gap();
        let d3 = p.cf_at_voltage(300.0).get(4, 4) - p.tunneling_gap();
        assert!((d3 - 3.0 * d1).abs() < 1e-12 * d3.abs());
    }

    #[test]
    fn toml_round_trip() {
        let p = SpinSystemParams::full_j8_template();
        let text = toml::to_string(&p).unwrap();
        let back: SpinSystemParams = toml::from_str(&text).unwrap();
        assert_eq!(p, back);
    }
}
