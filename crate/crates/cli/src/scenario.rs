//! Declarative scenario files.
//!
//! A scenario is TOML with one table per section (`[ofdm]`, `[geometry]`,
//! `[angles]`, `[network]`, `[notch]`, `[sweep]`) plus a few top-level keys.
//! Every key is optional; omitted keys take the defaults below. Unknown keys
//! are rejected.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use risradar_core::{OfdmParams, PatternMode, PeakNetSpec};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed scenario file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("empty OFDM frame: num_subcarriers x num_symbols = {subcarriers} x {symbols}")]
    EmptyFrame { subcarriers: usize, symbols: usize },
    #[error("notch spacing must be non-negative, got {0}")]
    NegativeEpsilon(f64),
    #[error("{name} = {value} rad lies outside [0, pi]")]
    AngleOutOfRange { name: String, value: f64 },
    #[error("sweep.trials must be at least 1")]
    ZeroTrials,
    #[error("invalid parameter {name}: {reason}")]
    Invalid { name: &'static str, reason: String },
}

/// Subcarrier treatment, spelled as in the CLI flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    #[default]
    CarrierOnly,
    AllSubcarriers,
}

impl From<ModeName> for PatternMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::CarrierOnly => PatternMode::CarrierOnly,
            ModeName::AllSubcarriers => PatternMode::AllSubcarriers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OfdmSection {
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    pub cp_ratio: f64,
}

impl Default for OfdmSection {
    fn default() -> Self {
        let p = OfdmParams::default();
        Self {
            carrier_freq_hz: p.carrier_freq_hz,
            bandwidth_hz: p.bandwidth_hz,
            num_subcarriers: p.num_subcarriers,
            num_symbols: p.num_symbols,
            cp_ratio: p.cp_ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    /// L_p, elements used for the trained peak.
    pub peak_elements: usize,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self { peak_elements: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnglesSection {
    pub target_rad: f64,
    pub interferer_rad: f64,
    pub grid_points: usize,
}

impl Default for AnglesSection {
    fn default() -> Self {
        Self {
            target_rad: 2.0 * PI / 5.0,
            interferer_rad: PI / 4.0,
            grid_points: risradar_core::DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkSection {
    pub layers: usize,
    pub hidden_width: usize,
    pub learning_rate: f64,
    pub iterations: usize,
    /// Initialization seed; the master seed when absent.
    pub init_seed: Option<u64>,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let d = PeakNetSpec::default();
        Self {
            layers: d.num_layers,
            hidden_width: d.hidden_width,
            learning_rate: d.learning_rate,
            iterations: d.num_iterations,
            init_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NotchSection {
    /// K, notches per cluster in the multi-notch study.
    pub count: usize,
    /// Cluster spacings compared by the multi-notch study.
    pub epsilons_rad: Vec<f64>,
    /// Level defining the suppression bandwidth, dB relative to the pattern maximum.
    pub suppression_threshold_db: f64,
}

impl Default for NotchSection {
    fn default() -> Self {
        Self {
            count: 4,
            epsilons_rad: vec![0.0, 1e-3, 1e-2],
            suppression_threshold_db: -30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Interference-to-target power ratios |α_i/α|², dB, before RIS gains.
    pub power_ratios_db: Vec<f64>,
    /// Interferer angle offsets from the designed null, rad.
    pub angle_offsets_rad: Vec<f64>,
    pub trials: usize,
    pub target_range_m: f64,
    pub target_velocity_mps: f64,
    pub interferer_range_m: f64,
    pub interferer_velocity_mps: f64,
    pub noise_variance: f64,
    /// Amplitude of the non-RIS direct path removed by frame differencing.
    pub direct_path_amplitude: f64,
    pub pad_range: usize,
    pub pad_velocity: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            power_ratios_db: (0..=12).map(|i| 10.0 * i as f64).collect(),
            angle_offsets_rad: vec![-0.02, -0.015, -0.01, -0.005, 0.0, 0.005, 0.01, 0.015, 0.02],
            trials: 50,
            target_range_m: 30.0,
            target_velocity_mps: 0.0,
            interferer_range_m: 20.0,
            interferer_velocity_mps: 0.0,
            noise_variance: 1.0,
            direct_path_amplitude: 10.0,
            pad_range: 4,
            pad_velocity: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub mode: ModeName,
    pub ofdm: OfdmSection,
    pub geometry: GeometrySection,
    pub angles: AnglesSection,
    pub network: NetworkSection,
    pub notch: NotchSection,
    pub sweep: SweepSection,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            seed: 42,
            output_dir: PathBuf::from("out"),
            mode: ModeName::default(),
            ofdm: OfdmSection::default(),
            geometry: GeometrySection::default(),
            angles: AnglesSection::default(),
            network: NetworkSection::default(),
            notch: NotchSection::default(),
            sweep: SweepSection::default(),
        }
    }
}

fn check_angle(name: &str, value: f64) -> Result<(), ScenarioError> {
    if value.is_finite() && (0.0..=PI).contains(&value) {
        Ok(())
    } else {
        Err(ScenarioError::AngleOutOfRange {
            name: name.to_owned(),
            value,
        })
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario = toml::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let o = &self.ofdm;
        if o.num_subcarriers == 0 || o.num_symbols == 0 {
            return Err(ScenarioError::EmptyFrame {
                subcarriers: o.num_subcarriers,
                symbols: o.num_symbols,
            });
        }
        self.ofdm_params()
            .validate()
            .map_err(|e| ScenarioError::Invalid {
                name: "ofdm",
                reason: e.to_string(),
            })?;
        if let Some(&eps) = self
            .notch
            .epsilons_rad
            .iter()
            .find(|e| e.is_nan() || **e < 0.0)
        {
            return Err(ScenarioError::NegativeEpsilon(eps));
        }
        check_angle("angles.target_rad", self.angles.target_rad)?;
        check_angle("angles.interferer_rad", self.angles.interferer_rad)?;
        for &offset in &self.sweep.angle_offsets_rad {
            check_angle(
                "angles.interferer_rad + sweep.angle_offsets_rad",
                self.angles.interferer_rad + offset,
            )?;
        }
        let half_span = (self.notch.count.max(1) - 1) as f64 / 2.0;
        for &eps in &self.notch.epsilons_rad {
            for side in [-1.0, 1.0] {
                check_angle(
                    "shifted notch angle",
                    self.angles.interferer_rad + side * half_span * eps,
                )?;
            }
        }
        if self.sweep.trials == 0 {
            return Err(ScenarioError::ZeroTrials);
        }
        let invalid = |name, reason: &str| {
            Err(ScenarioError::Invalid {
                name,
                reason: reason.to_owned(),
            })
        };
        if self.geometry.peak_elements == 0 {
            return invalid("geometry.peak_elements", "must be at least 1");
        }
        if self.angles.grid_points < 2 {
            return invalid("angles.grid_points", "must be at least 2");
        }
        if self.notch.count == 0 {
            return invalid("notch.count", "must be at least 1");
        }
        if self.network.layers == 0 || self.network.hidden_width == 0 {
            return invalid("network", "layers and hidden_width must be positive");
        }
        if !(self.network.learning_rate > 0.0 && self.network.learning_rate.is_finite()) {
            return invalid("network.learning_rate", "must be positive");
        }
        if self.sweep.pad_range == 0 || self.sweep.pad_velocity == 0 {
            return invalid("sweep.pad_range/pad_velocity", "must be at least 1");
        }
        if !(self.sweep.noise_variance >= 0.0 && self.sweep.noise_variance.is_finite()) {
            return invalid("sweep.noise_variance", "must be a non-negative number");
        }
        let params = self.ofdm_params();
        for (name, r) in [
            ("sweep.target_range_m", self.sweep.target_range_m),
            ("sweep.interferer_range_m", self.sweep.interferer_range_m),
        ] {
            if !(r >= 0.0 && r < params.unambiguous_range()) {
                return invalid(name, "must lie in [0, unambiguous range)");
            }
        }
        if self.sweep.power_ratios_db.iter().any(|p| !p.is_finite()) {
            return invalid("sweep.power_ratios_db", "must be finite");
        }
        Ok(())
    }

    pub fn ofdm_params(&self) -> OfdmParams {
        OfdmParams {
            carrier_freq_hz: self.ofdm.carrier_freq_hz,
            bandwidth_hz: self.ofdm.bandwidth_hz,
            num_subcarriers: self.ofdm.num_subcarriers,
            num_symbols: self.ofdm.num_symbols,
            cp_ratio: self.ofdm.cp_ratio,
        }
    }

    pub fn net_spec(&self) -> PeakNetSpec {
        PeakNetSpec {
            num_layers: self.network.layers,
            hidden_width: self.network.hidden_width,
            learning_rate: self.network.learning_rate,
            num_iterations: self.network.iterations,
            init_seed: self.network.init_seed.unwrap_or(self.seed),
        }
    }

    pub fn pattern_mode(&self) -> PatternMode {
        self.mode.into()
    }
}
