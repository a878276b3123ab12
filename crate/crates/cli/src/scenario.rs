//! Scenario files.
//!
//! A scenario is a TOML document with the sections `radio`, `geometry`,
//! `panel`, `fading`, `sweep` and `coverage`. Only `radio` and `geometry` are
//! required. Unknown keys are rejected, and every error names the dotted path
//! of the offending field. Angles are written in degrees.

use std::fs;
use std::path::{Path, PathBuf};

use irslink_core::{
    AnglePair, DistanceAxis, FadingMode, FadingSpec, GridSpec, IrsPanel, LinkGeometry, Point3,
    RadioConfig, Scenario, SweepKind, SweepSpec,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The shipped default scenario.
pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.toml");

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ScenarioError {
    /// Dotted field path for parse and validation errors.
    pub fn field_path(&self) -> Option<&str> {
        match self {
            ScenarioError::Read { .. } => None,
            ScenarioError::Parse { path, .. } | ScenarioError::Invalid { path, .. } => Some(path),
        }
    }

    fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub radio: RadioSection,
    pub geometry: GeometrySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel: Option<PanelSection>,
    #[serde(default)]
    pub fading: FadingSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub coverage: CoverageSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_frequency_hz: f64,
    pub transmit_power_w: f64,
    pub bandwidth_hz: f64,
    #[serde(default = "one")]
    pub tx_gain_linear: f64,
    #[serde(default = "one")]
    pub rx_gain_linear: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSection {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<PointSection> for Point3 {
    fn from(p: PointSection) -> Self {
        Point3::new(p.x, p.y, p.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub base_station: PointSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs: Option<PointSection>,
    pub device: PointSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSection {
    pub elements_m: u32,
    pub elements_n: u32,
    pub element_len_x_m: f64,
    pub element_len_y_m: f64,
    pub reflection_coeff: f64,
    pub theta_t_deg: f64,
    pub theta_r_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FadingModeName {
    #[default]
    Deterministic,
    Rayleigh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    #[serde(default)]
    pub mode: FadingModeName,
    /// Power factor for `deterministic` mode.
    #[serde(default = "one")]
    pub h: f64,
    #[serde(default = "free_space_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for FadingSection {
    fn default() -> Self {
        FadingSection {
            mode: FadingModeName::Deterministic,
            h: 1.0,
            alpha: free_space_alpha(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_start")]
    pub start_m: f64,
    #[serde(default = "default_stop")]
    pub stop_m: f64,
    #[serde(default = "default_step")]
    pub step_m: f64,
    #[serde(default)]
    pub monte_carlo_n: u64,
    #[serde(default = "default_pairs")]
    pub angle_pairs_deg: Vec<[f64; 2]>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            start_m: default_start(),
            stop_m: default_stop(),
            step_m: default_step(),
            monte_carlo_n: 0,
            angle_pairs_deg: default_pairs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageSection {
    #[serde(default = "default_grid_min")]
    pub x_min_m: f64,
    #[serde(default = "default_grid_max")]
    pub x_max_m: f64,
    #[serde(default = "default_grid_n")]
    pub nx: usize,
    #[serde(default = "default_grid_min")]
    pub y_min_m: f64,
    #[serde(default = "default_grid_max")]
    pub y_max_m: f64,
    #[serde(default = "default_grid_n")]
    pub ny: usize,
}

impl Default for CoverageSection {
    fn default() -> Self {
        CoverageSection {
            x_min_m: default_grid_min(),
            x_max_m: default_grid_max(),
            nx: default_grid_n(),
            y_min_m: default_grid_min(),
            y_max_m: default_grid_max(),
            ny: default_grid_n(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn free_space_alpha() -> f64 {
    2.0
}
fn default_start() -> f64 {
    15.0
}
fn default_stop() -> f64 {
    120.0
}
fn default_step() -> f64 {
    5.0
}
fn default_pairs() -> Vec<[f64; 2]> {
    vec![[45.0, 45.0], [45.0, 60.0], [60.0, 60.0]]
}
fn default_grid_min() -> f64 {
    -120.0
}
fn default_grid_max() -> f64 {
    120.0
}
fn default_grid_n() -> usize {
    25
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Read {
        path: path.to_owned(),
        source,
    })?;
    ScenarioFile::parse(&text)
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let de = toml::Deserializer::parse(text).map_err(|e| ScenarioError::Parse {
            path: "<document>".into(),
            message: e.message().to_owned(),
        })?;
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ScenarioError::Parse {
                path: if path == "." { "<document>".into() } else { path },
                message: e.into_inner().message().to_owned(),
            }
        })?;
        file.validate()?;
        Ok(file)
    }

    /// Checks every section, as after parsing.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.scenario()?;
        self.sweep_base()
    }

    pub fn default_scenario() -> Self {
        Self::parse(DEFAULT_SCENARIO).expect("shipped default scenario is valid")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// The validated deployment.
    pub fn scenario(&self) -> Result<Scenario, ScenarioError> {
        let radio = RadioConfig {
            carrier_frequency_hz: self.radio.carrier_frequency_hz,
            transmit_power_w: self.radio.transmit_power_w,
            bandwidth_hz: self.radio.bandwidth_hz,
            tx_gain_linear: self.radio.tx_gain_linear,
            rx_gain_linear: self.radio.rx_gain_linear,
        };
        radio.validate().map_err(core_error)?;

        let geometry = LinkGeometry {
            base_station: self.geometry.base_station.into(),
            irs: self.geometry.irs.map(Into::into),
            device: self.geometry.device.into(),
        };
        geometry.validate().map_err(core_error)?;

        let panel = self.panel.as_ref().map(PanelSection::to_panel).transpose()?;
        match (geometry.irs.is_some(), panel.is_some()) {
            (true, false) => {
                return Err(ScenarioError::invalid("panel", "required when geometry.irs is set"))
            }
            (false, true) => {
                return Err(ScenarioError::invalid(
                    "geometry.irs",
                    "required when a panel is configured",
                ))
            }
            _ => {}
        }
        if let (Some(irs), true) = (geometry.irs, panel.is_some()) {
            if irs == geometry.base_station {
                return Err(ScenarioError::invalid(
                    "geometry.irs",
                    "must not coincide with the base station",
                ));
            }
        }
        Ok(Scenario {
            radio,
            geometry,
            panel,
        })
    }

    pub fn fading(&self) -> Result<FadingSpec, ScenarioError> {
        let mode = match self.fading.mode {
            FadingModeName::Deterministic => FadingMode::Deterministic { h: self.fading.h },
            FadingModeName::Rayleigh => FadingMode::RayleighUnitMean,
        };
        let spec = FadingSpec {
            mode,
            alpha: self.fading.alpha,
            seed: self.fading.seed,
        };
        spec.validate().map_err(core_error)?;
        Ok(spec)
    }

    pub fn distance_axis(&self) -> Result<DistanceAxis, ScenarioError> {
        let axis = DistanceAxis {
            start_m: self.sweep.start_m,
            stop_m: self.sweep.stop_m,
            step_m: self.sweep.step_m,
        };
        axis.validate()
            .map_err(|e| ScenarioError::invalid("sweep", sweep_message(e)))?;
        Ok(axis)
    }

    pub fn angle_pairs(&self) -> Result<Vec<AnglePair>, ScenarioError> {
        let path = "sweep.angle_pairs_deg";
        if self.sweep.angle_pairs_deg.is_empty() {
            return Err(ScenarioError::invalid(path, "needs at least one pair"));
        }
        self.sweep
            .angle_pairs_deg
            .iter()
            .map(|[t, r]| {
                if [t, r].iter().all(|a| (0.0..90.0).contains(*a)) {
                    Ok(AnglePair::from_degrees(*t, *r))
                } else {
                    Err(ScenarioError::invalid(path, format!("[{t}, {r}] must lie in [0, 90)")))
                }
            })
            .collect()
    }

    pub fn grid(&self) -> Result<GridSpec, ScenarioError> {
        let c = &self.coverage;
        let grid = GridSpec {
            x_min_m: c.x_min_m,
            x_max_m: c.x_max_m,
            nx: c.nx,
            y_min_m: c.y_min_m,
            y_max_m: c.y_max_m,
            ny: c.ny,
        };
        grid.validate()
            .map_err(|e| ScenarioError::invalid("coverage", sweep_message(e)))?;
        Ok(grid)
    }

    fn sweep_base(&self) -> Result<(), ScenarioError> {
        self.fading()?;
        self.distance_axis()?;
        self.angle_pairs()?;
        self.grid()?;
        Ok(())
    }

    /// Sweep specification of the given kind over this file's axes.
    pub fn sweep_spec(&self, kind: SweepKindName) -> Result<SweepSpec, ScenarioError> {
        let kind = match kind {
            SweepKindName::Distance => SweepKind::Distance(self.distance_axis()?),
            SweepKindName::Angle => SweepKind::Angle {
                axis: self.distance_axis()?,
                pairs: self.angle_pairs()?,
            },
            SweepKindName::Coverage => SweepKind::CoverageGrid(self.grid()?),
            SweepKindName::Compare => SweepKind::Compare(self.distance_axis()?),
        };
        Ok(SweepSpec {
            kind,
            fading: self.fading()?,
            monte_carlo_n: self.sweep.monte_carlo_n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKindName {
    Distance,
    Angle,
    Coverage,
    Compare,
}

impl PanelSection {
    fn to_panel(&self) -> Result<IrsPanel, ScenarioError> {
        for (path, deg) in [
            ("panel.theta_t_deg", self.theta_t_deg),
            ("panel.theta_r_deg", self.theta_r_deg),
        ] {
            if !(0.0..90.0).contains(&deg) {
                return Err(ScenarioError::invalid(path, format!("{deg} must lie in [0, 90)")));
            }
        }
        let panel = IrsPanel {
            elements_m: self.elements_m,
            elements_n: self.elements_n,
            element_len_x_m: self.element_len_x_m,
            element_len_y_m: self.element_len_y_m,
            reflection_coeff: self.reflection_coeff,
            theta_t_rad: self.theta_t_deg.to_radians(),
            theta_r_rad: self.theta_r_deg.to_radians(),
        };
        panel.validate().map_err(core_error)?;
        Ok(panel)
    }
}

fn core_error(e: irslink_core::Error) -> ScenarioError {
    let path = match e.field() {
        Some("panel.theta_t") => "panel.theta_t_deg".to_owned(),
        Some("panel.theta_r") => "panel.theta_r_deg".to_owned(),
        Some(field) => field.to_owned(),
        None => "<scenario>".to_owned(),
    };
    let message = match e {
        irslink_core::Error::Domain { value, reason, .. } => format!("{value}: {reason}"),
        other => other.to_string(),
    };
    ScenarioError::Invalid { path, message }
}

fn sweep_message(e: irslink_core::Error) -> String {
    match e {
        irslink_core::Error::Sweep(msg) => msg,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[radio]
carrier_frequency_hz = 2.4e9
transmit_power_w = 0.5
bandwidth_hz = 10e6

[geometry]
base_station = { x = 0.0, y = 0.0, z = 5.0 }
device = { x = 20.0, y = 0.0, z = 1.0 }
"#;

    fn path_of(text: &str) -> String {
        ScenarioFile::parse(text)
            .unwrap_err()
            .field_path()
            .unwrap()
            .to_owned()
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let f = ScenarioFile::parse(MINIMAL).unwrap();
        assert_eq!(f.fading.mode, FadingModeName::Deterministic);
        assert_eq!(f.fading.h, 1.0);
        assert_eq!(f.radio.tx_gain_linear, 1.0);
        assert!(f.panel.is_none());
        let spec = f.sweep_spec(SweepKindName::Distance).unwrap();
        assert_eq!(spec.fading.mode, FadingMode::Deterministic { h: 1.0 });
        assert!(!f.scenario().unwrap().has_irs());
    }

    #[test]
    fn negative_power_names_field() {
        let text = MINIMAL.replace("transmit_power_w = 0.5", "transmit_power_w = -1.0");
        assert_eq!(path_of(&text), "radio.transmit_power_w");
    }

    #[test]
    fn missing_field_names_section() {
        let text = MINIMAL.replace("bandwidth_hz = 10e6\n", "");
        let err = ScenarioFile::parse(&text).unwrap_err();
        assert_eq!(err.field_path(), Some("radio"));
        assert!(err.to_string().contains("bandwidth_hz"), "{err}");
    }

    #[test]
    fn unknown_key_names_path() {
        let text = MINIMAL.replace("bandwidth_hz = 10e6", "bandwidth_hz = 10e6\nbandwith = 3");
        let err = ScenarioFile::parse(&text).unwrap_err();
        assert_eq!(err.field_path(), Some("radio.bandwith"));

        let nested = MINIMAL.replace("z = 5.0 }", "z = 5.0, w = 1.0 }");
        assert_eq!(path_of(&nested), "geometry.base_station.w");
    }

    #[test]
    fn wrong_type_names_leaf() {
        let text = MINIMAL.replace("transmit_power_w = 0.5", "transmit_power_w = \"loud\"");
        assert_eq!(path_of(&text), "radio.transmit_power_w");
    }

    #[test]
    fn irs_and_panel_go_together() {
        let default = ScenarioFile::default_scenario();
        let mut no_panel = default.clone();
        no_panel.panel = None;
        assert_eq!(no_panel.scenario().unwrap_err().field_path(), Some("panel"));
        let mut no_irs = default;
        no_irs.geometry.irs = None;
        assert_eq!(no_irs.scenario().unwrap_err().field_path(), Some("geometry.irs"));
    }

    #[test]
    fn grazing_angle_rejected() {
        let text = DEFAULT_SCENARIO.replace("theta_t_deg = 45.0", "theta_t_deg = 90.0");
        assert_eq!(path_of(&text), "panel.theta_t_deg");
        let pairs = DEFAULT_SCENARIO.replace("[60.0, 60.0]]", "[60.0, 95.0]]");
        assert_eq!(path_of(&pairs), "sweep.angle_pairs_deg");
    }

    #[test]
    fn bad_axes_are_rejected() {
        let text = DEFAULT_SCENARIO.replace("step_m = 5.0", "step_m = 0.0");
        assert_eq!(path_of(&text), "sweep");
        let grid = DEFAULT_SCENARIO.replace("nx = 25", "nx = 1");
        assert_eq!(path_of(&grid), "coverage");
        let alpha = DEFAULT_SCENARIO.replace("alpha = 4.0", "alpha = 0.5");
        assert_eq!(path_of(&alpha), "fading.alpha");
    }

    #[test]
    fn default_round_trips() {
        let f = ScenarioFile::default_scenario();
        let again = ScenarioFile::parse(&f.to_toml()).unwrap();
        assert_eq!(f, again);
    }
}
