//! Run configuration: a TOML file plus `--set section.key=value` overrides.

use std::path::{Path, PathBuf};

use ferrotorque::dynamics::DriveKind;
use ferrotorque::{builtin_material, FAlphaSpec, Material, SensorConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub material: MaterialSection,
    pub sensor: SensorSection,
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub noise: NoiseSection,
    pub exclusion: Option<ExclusionSection>,
    pub simulate: Option<SimulateSection>,
    #[serde(default)]
    pub reference_lines: Vec<ReferenceLineSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// A built-in material by name, optionally with individual values replaced.
/// A name that is not built in needs all three physical values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    #[serde(default = "default_material")]
    pub name: String,
    pub density_kg_m3: Option<f64>,
    #[serde(rename = "magnetization_A_m")]
    pub magnetization_a_m: Option<f64>,
    #[serde(rename = "gamma0_rad_s_T")]
    pub gamma0_rad_s_t: Option<f64>,
    #[serde(rename = "moment_per_spin_J_T")]
    pub moment_per_spin_j_t: Option<f64>,
}

fn default_material() -> String {
    "NdFeB".to_string()
}

impl Default for MaterialSection {
    fn default() -> Self {
        MaterialSection {
            name: default_material(),
            density_kg_m3: None,
            magnetization_a_m: None,
            gamma0_rad_s_t: None,
            moment_per_spin_j_t: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    pub radius_m: f64,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    pub q_alpha: f64,
    pub q_beta: Option<f64>,
    #[serde(rename = "f_alpha_Hz")]
    pub f_alpha_hz: Option<f64>,
    #[serde(rename = "f_alpha_over_f_I")]
    pub f_alpha_over_f_i: Option<f64>,
    pub z0_m: Option<f64>,
    /// Alternative to z0_m: the levitation height is solved for this β frequency.
    #[serde(rename = "f_beta_Hz")]
    pub f_beta_hz: Option<f64>,
    #[serde(default)]
    pub gamma_dot_rad_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Frequency,
    Radius,
    Mass,
}

impl GridKind {
    fn as_str(self) -> &'static str {
        match self {
            GridKind::Frequency => "frequency",
            GridKind::Radius => "radius",
            GridKind::Mass => "mass",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub kind: GridKind,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    /// Spin relaxation rate for the spin-projection floor [1/s].
    pub gamma_rel_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionSection {
    #[serde(default = "d_source_radius")]
    pub source_radius_m: f64,
    #[serde(default = "d_distance")]
    pub distance_m: f64,
    #[serde(default = "d_spin_density")]
    pub spin_density_m3: f64,
    #[serde(default = "d_t_meas")]
    pub t_meas_s: f64,
    pub modulation_over_f_alpha: Option<f64>,
    #[serde(rename = "f_mod_Hz")]
    pub f_mod_hz: Option<f64>,
    #[serde(default = "d_axis")]
    pub polarization_axis: [f64; 3],
    #[serde(default = "d_geometry")]
    pub geometry: String,
    pub source_order: Option<usize>,
    pub sensor_order: Option<usize>,
    #[serde(default = "d_one")]
    pub coupling_normalization: f64,
    #[serde(default = "d_models")]
    pub noise_models: Vec<String>,
    pub overlay: Option<PathBuf>,
}

fn d_source_radius() -> f64 {
    2e-3
}
fn d_distance() -> f64 {
    4e-3
}
fn d_spin_density() -> f64 {
    ferrotorque::exclusion::DEFAULT_SPIN_DENSITY
}
fn d_t_meas() -> f64 {
    1e6
}
fn d_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}
fn d_geometry() -> String {
    "volume_integral".to_string()
}
fn d_one() -> f64 {
    1.0
}
fn d_models() -> Vec<String> {
    vec!["thermal".to_string(), "sql".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    #[serde(default = "d_mode")]
    pub mode: String,
    #[serde(default)]
    pub gyroscopic: bool,
    pub duration_s: f64,
    pub dt_s: f64,
    #[serde(default = "d_decimation")]
    pub decimation: usize,
    #[serde(default)]
    pub alpha0_rad: f64,
    #[serde(default)]
    pub beta0_rad: f64,
    /// Also run the linear model and report the largest α difference.
    #[serde(default)]
    pub compare_linear: bool,
    #[serde(default)]
    pub drive: DriveSection,
}

fn d_mode() -> String {
    "linear".to_string()
}
fn d_decimation() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    #[serde(default)]
    pub kind: DriveKind,
    /// [T] for a field drive, [N·m] for a torque drive.
    #[serde(default)]
    pub amplitude: f64,
    #[serde(rename = "frequency_Hz")]
    pub frequency_hz: Option<f64>,
    pub frequency_over_f_alpha: Option<f64>,
    #[serde(default)]
    pub phase_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceLineSection {
    pub label: String,
    pub omega_rad_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "d_dir")]
    pub directory: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

fn d_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: d_dir(),
            format: OutputFormat::default(),
        }
    }
}

/// Parses the right-hand side of `--set`: any TOML value, else a bare string.
fn parse_override_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set `{assignment}`: expected section.key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("--set `{assignment}`: empty key segment")));
    }
    let (last, parents) = path.split_last().expect("split yields at least one segment");
    let mut cur = table;
    for (i, seg) in parents.iter().enumerate() {
        let entry = cur
            .entry(seg.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            // [[reference_lines]] and similar: address the last element
            toml::Value::Array(items) => match items.last_mut() {
                Some(toml::Value::Table(t)) => t,
                _ => {
                    return Err(CliError::Config(format!(
                        "--set `{assignment}`: `{}` is not a table",
                        path[..=i].join(".")
                    )))
                }
            },
            _ => {
                return Err(CliError::Config(format!(
                    "--set `{assignment}`: `{}` is not a table",
                    path[..=i].join(".")
                )))
            }
        };
    }
    cur.insert(last.to_string(), parse_override_value(raw.trim()));
    Ok(())
}

/// Reads the config file (if any), applies overrides in order and checks it.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let config: RunConfig = serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Config(e.into_inner().message().to_string())
        } else {
            CliError::Config(format!("{path}: {}", e.into_inner().message()))
        }
    })?;
    config.check()?;
    Ok(config)
}

impl RunConfig {
    /// Cross-field checks that serde cannot express.
    fn check(&self) -> Result<(), CliError> {
        let s = &self.sensor;
        match (s.f_alpha_hz, s.f_alpha_over_f_i) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(CliError::Config(
                    "sensor: give exactly one of f_alpha_Hz and f_alpha_over_f_I".into(),
                ))
            }
            _ => {}
        }
        if s.z0_m.is_some() && s.f_beta_hz.is_some() {
            return Err(CliError::Config("sensor: give at most one of z0_m and f_beta_Hz".into()));
        }
        if let Some(x) = &self.exclusion {
            if x.modulation_over_f_alpha.is_some() && x.f_mod_hz.is_some() {
                return Err(CliError::Config(
                    "exclusion: give at most one of modulation_over_f_alpha and f_mod_Hz".into(),
                ));
            }
            if let Some(p) = &x.overlay {
                if !p.is_file() {
                    return Err(CliError::Config(format!(
                        "exclusion.overlay: file {} does not exist",
                        p.display()
                    )));
                }
            }
        }
        if let Some(sim) = &self.simulate {
            if sim.drive.frequency_hz.is_some() && sim.drive.frequency_over_f_alpha.is_some() {
                return Err(CliError::Config(
                    "simulate.drive: give at most one of frequency_Hz and frequency_over_f_alpha".into(),
                ));
            }
            if sim.decimation == 0 {
                return Err(CliError::Config("simulate.decimation: must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn material(&self) -> Result<Material, CliError> {
        let m = &self.material;
        let mut base = match builtin_material(&m.name) {
            Ok(b) => b,
            Err(e) => match (m.density_kg_m3, m.magnetization_a_m, m.gamma0_rad_s_t) {
                (Some(density), Some(magnetization), Some(gamma0)) => Material {
                    name: m.name.clone(),
                    density,
                    magnetization,
                    gamma0,
                    moment_per_spin: ferrotorque::constants::MU_B,
                },
                _ => return Err(e.into()),
            },
        };
        if let Some(v) = m.density_kg_m3 {
            base.density = v;
        }
        if let Some(v) = m.magnetization_a_m {
            base.magnetization = v;
        }
        if let Some(v) = m.gamma0_rad_s_t {
            base.gamma0 = v;
        }
        if let Some(v) = m.moment_per_spin_j_t {
            base.moment_per_spin = v;
        }
        base.validate()?;
        Ok(base)
    }

    pub fn sensor_config(&self) -> Result<SensorConfig, CliError> {
        let s = &self.sensor;
        let f_alpha = match (s.f_alpha_hz, s.f_alpha_over_f_i) {
            (Some(f), None) => FAlphaSpec::Explicit(f),
            (None, Some(k)) => FAlphaSpec::RatioToEinsteinDeHaas(k),
            _ => unreachable!("checked at load"),
        };
        let config = SensorConfig {
            radius: s.radius_m,
            material: self.material()?,
            temperature: s.temperature_k,
            q_alpha: s.q_alpha,
            q_beta: s.q_beta.unwrap_or(s.q_alpha),
            f_alpha,
            z0: s.z0_m,
            gamma_dot: s.gamma_dot_rad_s,
        };
        config.validate()?;
        match s.f_beta_hz {
            Some(fb) => Ok(config.with_omega_beta(2.0 * std::f64::consts::PI * fb)?),
            None => Ok(config),
        }
    }

    /// Grid values for a subcommand that needs `kind`.
    pub fn grid(&self, kind: GridKind) -> Result<Vec<f64>, CliError> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("missing [grid] table (kind = \"{}\")", kind.as_str())))?;
        if g.kind != kind {
            return Err(CliError::Config(format!(
                "grid.kind: this command needs a {} grid, got {}",
                kind.as_str(),
                g.kind.as_str()
            )));
        }
        build_grid(g)
    }
}

pub fn build_grid(g: &GridSection) -> Result<Vec<f64>, CliError> {
    if !(g.min.is_finite() && g.max.is_finite()) {
        return Err(CliError::Config("grid: min and max must be finite".into()));
    }
    if g.points == 0 {
        return Err(CliError::Config("grid.points: must be at least 1".into()));
    }
    if g.points == 1 {
        if g.min != g.max {
            return Err(CliError::Config("grid: a single-point grid needs min == max".into()));
        }
    } else if !(g.max > g.min) {
        return Err(CliError::Config(format!(
            "grid: max ({}) must exceed min ({})",
            g.max, g.min
        )));
    }
    if g.spacing == Spacing::Log && !(g.min > 0.0) {
        return Err(CliError::Config("grid.min: log spacing needs a positive minimum".into()));
    }
    if g.points == 1 {
        return Ok(vec![g.min]);
    }
    let n = g.points - 1;
    let values = (0..=n)
        .map(|i| {
            if i == 0 {
                return g.min;
            }
            if i == n {
                return g.max;
            }
            let t = i as f64 / n as f64;
            match g.spacing {
                Spacing::Linear => g.min + t * (g.max - g.min),
                Spacing::Log => (g.min.ln() + t * (g.max.ln() - g.min.ln())).exp(),
            }
        })
        .collect::<Vec<f64>>();
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::Config("grid: points are not strictly increasing".into()));
    }
    Ok(values)
}
