//! Run and sweep configuration.
//!
//! Config files are flat TOML with one key per field. Unknown keys, keys
//! from a different scenario's block and missing scenario parameters are all
//! rejected, so a typo never silently falls back to a default.

use std::fmt;
use std::path::Path;

use cosmoflux_core::{
    BlackHoleParams, CosmologyParams, Scenario, SqueezeChannel, SqueezeParameter, UnruhParams,
};
use serde::{Deserialize, Serialize};

use crate::error::AppError;

pub const DEFAULT_CUTOFF: usize = 40;
pub const DEFAULT_LEAKAGE_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_PRECISION: usize = 12;
pub const MIN_CUTOFF: usize = 8;
pub const MAX_LEAKAGE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Cosmology,
    Unruh,
    Blackhole,
    #[serde(rename = "direct-z")]
    DirectZ,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Cosmology => "cosmology",
            ScenarioKind::Unruh => "unruh",
            ScenarioKind::Blackhole => "blackhole",
            ScenarioKind::DirectZ => "direct-z",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::Cosmology => &["k", "m", "epsilon", "sigma"],
            ScenarioKind::Unruh => &["acceleration", "omega"],
            ScenarioKind::Blackhole => &["mass_bh", "omega"],
            ScenarioKind::DirectZ => &["z", "tanh_z", "omega_in", "omega_out"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format `{other}` (json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceleration: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_bh: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tanh_z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_in: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_out: Option<f64>,

    pub temperature: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default = "default_tolerance")]
    pub leakage_tolerance: f64,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_cutoff() -> usize {
    DEFAULT_CUTOFF
}

fn default_tolerance() -> f64 {
    DEFAULT_LEAKAGE_TOLERANCE
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

impl RunConfig {
    /// Direct channel with an explicit squeezing parameter.
    pub fn direct(z: f64, omega_in: f64, omega_out: f64, temperature: f64) -> Self {
        Self {
            z: Some(z),
            omega_in: Some(omega_in),
            omega_out: Some(omega_out),
            ..Self::empty(ScenarioKind::DirectZ, temperature)
        }
    }

    /// Direct channel given by `tanh z`, kept exact.
    pub fn direct_tanh(tanh_z: f64, omega_in: f64, omega_out: f64, temperature: f64) -> Self {
        Self {
            tanh_z: Some(tanh_z),
            omega_in: Some(omega_in),
            omega_out: Some(omega_out),
            ..Self::empty(ScenarioKind::DirectZ, temperature)
        }
    }

    pub fn cosmology(k: f64, m: f64, epsilon: f64, sigma: f64, temperature: f64) -> Self {
        Self {
            k: Some(k),
            m: Some(m),
            epsilon: Some(epsilon),
            sigma: Some(sigma),
            ..Self::empty(ScenarioKind::Cosmology, temperature)
        }
    }

    fn empty(scenario: ScenarioKind, temperature: f64) -> Self {
        Self {
            scenario,
            k: None,
            m: None,
            epsilon: None,
            sigma: None,
            acceleration: None,
            omega: None,
            mass_bh: None,
            z: None,
            tanh_z: None,
            omega_in: None,
            omega_out: None,
            temperature,
            cutoff: DEFAULT_CUTOFF,
            leakage_tolerance: DEFAULT_LEAKAGE_TOLERANCE,
            output: OutputFormat::Json,
            precision: DEFAULT_PRECISION,
        }
    }

    /// The canonical point: `tanh z = 1/2`, `omega = 1`, `omega_out = 2`, `T = 1`.
    pub fn canonical() -> Self {
        Self::direct_tanh(0.5, 1.0, 2.0, 1.0)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, AppError> {
        let table: toml::Table =
            toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, AppError> {
        let config: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| AppError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        Self::from_toml_str(&read(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run config always serialises")
    }

    fn present(&self) -> [(&'static str, Option<f64>); 11] {
        [
            ("k", self.k),
            ("m", self.m),
            ("epsilon", self.epsilon),
            ("sigma", self.sigma),
            ("acceleration", self.acceleration),
            ("omega", self.omega),
            ("mass_bh", self.mass_bh),
            ("z", self.z),
            ("tanh_z", self.tanh_z),
            ("omega_in", self.omega_in),
            ("omega_out", self.omega_out),
        ]
    }

    pub fn validate(&self) -> Result<(), AppError> {
        let allowed = self.scenario.keys();
        for (key, value) in self.present() {
            if value.is_some() && !allowed.contains(&key) {
                return Err(AppError::Config(format!(
                    "`{key}` does not belong to scenario `{}`",
                    self.scenario.name()
                )));
            }
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(AppError::Config(format!("`{key}` must be finite")));
                }
            }
        }
        if self.scenario == ScenarioKind::DirectZ {
            match (self.z, self.tanh_z) {
                (Some(_), Some(_)) => {
                    return Err(AppError::Config("give either `z` or `tanh_z`, not both".into()))
                }
                (None, None) => {
                    return Err(AppError::Config("scenario `direct-z` needs `z` or `tanh_z`".into()))
                }
                _ => {}
            }
        }
        for key in allowed {
            let needed = !matches!(*key, "z" | "tanh_z");
            if needed && self.present().iter().any(|(k, v)| k == key && v.is_none()) {
                return Err(AppError::Config(format!(
                    "scenario `{}` needs `{key}`",
                    self.scenario.name()
                )));
            }
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(AppError::Config(format!(
                "temperature must be finite and non-negative, got {}",
                self.temperature
            )));
        }
        if self.cutoff < MIN_CUTOFF {
            return Err(AppError::Config(format!(
                "cutoff must be at least {MIN_CUTOFF}, got {}",
                self.cutoff
            )));
        }
        if !(self.leakage_tolerance > 0.0 && self.leakage_tolerance <= MAX_LEAKAGE_TOLERANCE) {
            return Err(AppError::Config(format!(
                "leakage_tolerance must lie in (0, {MAX_LEAKAGE_TOLERANCE}], got {}",
                self.leakage_tolerance
            )));
        }
        if !(1..=17).contains(&self.precision) {
            return Err(AppError::Config(format!(
                "precision must be between 1 and 17 digits, got {}",
                self.precision
            )));
        }
        Ok(())
    }

    /// Scenario with its physical parameters checked by the library.
    pub fn scenario(&self) -> Result<Scenario, AppError> {
        self.validate()?;
        let get = |v: Option<f64>| v.expect("checked by validate");
        let scenario = match self.scenario {
            ScenarioKind::Cosmology => Scenario::Cosmology(CosmologyParams::new(
                get(self.k),
                get(self.m),
                get(self.epsilon),
                get(self.sigma),
            )?),
            ScenarioKind::Unruh => {
                Scenario::Unruh(UnruhParams::new(get(self.acceleration), get(self.omega))?)
            }
            ScenarioKind::Blackhole => {
                Scenario::BlackHole(BlackHoleParams::new(get(self.mass_bh), get(self.omega))?)
            }
            ScenarioKind::DirectZ => {
                let z = match (self.z, self.tanh_z) {
                    (Some(z), _) => SqueezeParameter::new(z)?,
                    (_, Some(t)) => SqueezeParameter::from_tanh(t)?,
                    _ => unreachable!(),
                };
                Scenario::Direct(SqueezeChannel::new(
                    z,
                    get(self.omega_in),
                    get(self.omega_out),
                )?)
            }
        };
        Ok(scenario)
    }
}

fn read(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Momentum,
    Mass,
    Sigma,
    Epsilon,
    Temperature,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SweepAxis::Momentum => "momentum",
            SweepAxis::Mass => "mass",
            SweepAxis::Sigma => "sigma",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Temperature => "temperature",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// The `[sweep]` table of a sweep file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>, AppError> {
        let bad = |msg: String| Err(AppError::Config(msg));
        match (&self.values, self.min, self.max, self.count) {
            (Some(values), None, None, None) => {
                if values.is_empty() {
                    return bad("sweep `values` is empty".into());
                }
                Ok(values.clone())
            }
            (None, Some(lo), Some(hi), Some(count)) => {
                if count < 2 {
                    return bad(format!("sweep `count` must be at least 2, got {count}"));
                }
                if !(lo.is_finite() && hi.is_finite()) {
                    return bad("sweep bounds must be finite".into());
                }
                let step = |i: usize| i as f64 / (count - 1) as f64;
                match self.spacing {
                    Spacing::Linear => Ok((0..count).map(|i| lo + (hi - lo) * step(i)).collect()),
                    Spacing::Log => {
                        if !(lo > 0.0 && hi > 0.0) {
                            return bad("log spacing needs positive bounds".into());
                        }
                        let (a, b) = (lo.ln(), hi.ln());
                        Ok((0..count).map(|i| (a + (b - a) * step(i)).exp()).collect())
                    }
                }
            }
            _ => bad("sweep needs either `values` or all of `min`, `max`, `count`".into()),
        }
    }
}

impl SweepConfig {
    pub fn new(base: RunConfig, axis: SweepAxis, grid: Vec<f64>) -> Result<Self, AppError> {
        base.validate()?;
        if axis != SweepAxis::Temperature && base.scenario != ScenarioKind::Cosmology {
            return Err(AppError::Config(format!(
                "axis `{axis}` needs scenario `cosmology`"
            )));
        }
        if grid.is_empty() {
            return Err(AppError::Config("empty sweep grid".into()));
        }
        for &v in &grid {
            let ok = v.is_finite()
                && match axis {
                    SweepAxis::Momentum => true,
                    SweepAxis::Mass | SweepAxis::Temperature => v >= 0.0,
                    SweepAxis::Sigma | SweepAxis::Epsilon => v > 0.0,
                };
            if !ok {
                return Err(AppError::Config(format!(
                    "sweep value {v} is outside the domain of `{axis}`"
                )));
            }
        }
        Ok(Self { base, axis, grid })
    }

    /// Sweep file: run keys at the top level plus a `[sweep]` table.
    pub fn from_toml_str(text: &str) -> Result<Self, AppError> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
        let spec = table
            .remove("sweep")
            .ok_or_else(|| AppError::Config("sweep file needs a [sweep] table".into()))?;
        let spec: SweepSpec = spec
            .try_into()
            .map_err(|e: toml::de::Error| AppError::Config(format!("[sweep]: {e}")))?;
        let base = RunConfig::from_table(table)?;
        Self::new(base, spec.axis, spec.grid()?)
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        Self::from_toml_str(&read(path)?)
    }

    /// The single-run config of grid point `i`.
    pub fn point(&self, i: usize) -> RunConfig {
        let v = self.grid[i];
        let mut c = self.base.clone();
        match self.axis {
            SweepAxis::Momentum => c.k = Some(v),
            SweepAxis::Mass => c.m = Some(v),
            SweepAxis::Sigma => c.sigma = Some(v),
            SweepAxis::Epsilon => c.epsilon = Some(v),
            SweepAxis::Temperature => c.temperature = v,
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trips() {
        let c = RunConfig::canonical();
        let back = RunConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_fail_closed() {
        let err = RunConfig::from_toml_str(
            "scenario = \"direct-z\"\nz = 0.5\nomega_in = 1.0\nomega_out = 2.0\ntemperature = 1.0\ntemprature = 2.0\n",
        )
        .unwrap_err();
        assert!(matches!(err, AppError::Config(_)), "{err}");
    }

    #[test]
    fn foreign_and_missing_keys() {
        let foreign = "scenario = \"unruh\"\nacceleration = 1.0\nomega = 1.0\nsigma = 2.0\ntemperature = 1.0\n";
        assert!(RunConfig::from_toml_str(foreign).is_err());
        let missing = "scenario = \"cosmology\"\nk = 1.0\nm = 1.0\nepsilon = 1.0\ntemperature = 1.0\n";
        assert!(RunConfig::from_toml_str(missing).is_err());
        let both = "scenario = \"direct-z\"\nz = 0.5\ntanh_z = 0.5\nomega_in = 1.0\nomega_out = 2.0\ntemperature = 1.0\n";
        assert!(RunConfig::from_toml_str(both).is_err());
    }

    #[test]
    fn limits_on_cutoff_and_tolerance() {
        let mut c = RunConfig::canonical();
        c.cutoff = 7;
        assert!(c.validate().is_err());
        c.cutoff = 8;
        c.leakage_tolerance = 0.02;
        assert!(c.validate().is_err());
        c.leakage_tolerance = 0.01;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn sweep_grids() {
        let text = "scenario = \"cosmology\"\nk = 1.0\nm = 1.0\nepsilon = 1.0\nsigma = 1.0\ntemperature = 1.0\n\n[sweep]\naxis = \"sigma\"\nmin = 0.01\nmax = 100.0\ncount = 5\nspacing = \"log\"\n";
        let s = SweepConfig::from_toml_str(text).unwrap();
        assert_eq!(s.grid.len(), 5);
        assert!((s.grid[2] - 1.0).abs() < 1e-12);
        assert_eq!(s.point(4).sigma, Some(s.grid[4]));

        let direct = "scenario = \"direct-z\"\nz = 0.5\nomega_in = 1.0\nomega_out = 2.0\ntemperature = 1.0\n[sweep]\naxis = \"mass\"\nvalues = [0.0, 1.0]\n";
        assert!(SweepConfig::from_toml_str(direct).is_err());
        let one = text.replace("count = 5", "count = 1");
        assert!(SweepConfig::from_toml_str(&one).is_err());
    }
}
