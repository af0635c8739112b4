//! Run configuration: defaults, config-file loading and `key=value`
//! overrides. The file format is the same flat key-value text the scenario
//! dumps use, so a printed config is always reloadable.

use pqoff_core::baselines::SchemeId;
use pqoff_core::scenario::ScenarioConfig;

use crate::experiments::SweepAxis;
use crate::kv;
use crate::SimError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub seed: u64,
    /// Monte-Carlo runs per sweep point.
    pub runs: usize,
    /// Scheme run by `solve` and `replay`.
    pub scheme: SchemeId,
    pub axis: SweepAxis,
    /// Sweep grid; empty means the default grid for `axis`.
    pub points: Vec<f64>,
    /// Schemes compared by `sweep`.
    pub schemes: Vec<SchemeId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: ScenarioConfig::default(),
            seed: 1,
            runs: 200,
            scheme: SchemeId::Proposed,
            axis: SweepAxis::DataSize,
            points: Vec::new(),
            schemes: SchemeId::ALL.to_vec(),
        }
    }
}

/// Default sweep grids: task sizes 10-50 KB, edge capacity 0.5-3 GHz around
/// the 2.45 GHz default, device counts 4-18.
pub fn default_points(axis: SweepAxis) -> Vec<f64> {
    match axis {
        SweepAxis::DataSize => [10.0, 20.0, 30.0, 40.0, 50.0].iter().map(|kb| kb * 8192.0).collect(),
        SweepAxis::EdgeCapacity => {
            [0.5, 1.0, 1.5, 1.7, 2.0, 2.45, 3.0].iter().map(|ghz| ghz * 1e9).collect()
        }
        SweepAxis::DeviceCount => [4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0].to_vec(),
    }
}

impl RunConfig {
    pub fn resolved_points(&self) -> Vec<f64> {
        if self.points.is_empty() {
            default_points(self.axis)
        } else {
            self.points.clone()
        }
    }

    /// Applies one `key = value` entry; unknown keys are rejected.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), SimError> {
        let c = &mut self.scenario.constants;
        match key {
            "devices" => self.scenario.devices = kv::parse_usize(key, value)?,
            "cell_radius_m" => self.scenario.cell_radius_m = kv::parse_f64(key, value)?,
            "eve_x_m" => self.scenario.eve_x_m = kv::parse_f64(key, value)?,
            "eve_y_m" => self.scenario.eve_y_m = kv::parse_f64(key, value)?,
            "min_dist_m" => self.scenario.min_dist_m = kv::parse_f64(key, value)?,
            "bandwidth_hz" => c.bandwidth_hz = kv::parse_f64(key, value)?,
            "noise_w" => c.noise_w = kv::parse_f64(key, value)?,
            "local_cpu_hz" => c.local_cpu_hz = kv::parse_f64(key, value)?,
            "edge_cpu_hz" => c.edge_cpu_hz = kv::parse_f64(key, value)?,
            "p_max_w" => c.p_max_w = kv::parse_f64(key, value)?,
            "eps_fraction" => c.eps_fraction = kv::parse_f64(key, value)?,
            "ao_tol_s" => c.ao_tol_s = kv::parse_f64(key, value)?,
            "seed" => self.seed = kv::parse_u64(key, value)?,
            "runs" => self.runs = kv::parse_usize(key, value)?,
            "scheme" => {
                self.scheme = SchemeId::from_name(value)
                    .ok_or_else(|| SimError::Config(format!("scheme: unknown name {value:?}")))?
            }
            "axis" => self.axis = parse_axis(value)?,
            "points" => self.points = kv::parse_f64_list(key, value)?,
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .map(|name| {
                        let name = name.trim();
                        SchemeId::from_name(name).ok_or_else(|| {
                            SimError::Config(format!("schemes: unknown name {name:?}"))
                        })
                    })
                    .collect::<Result<_, _>>()?
            }
            other => return Err(SimError::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, text: &str) -> Result<(), SimError> {
        for (key, value) in kv::parse(text)? {
            self.apply(&key, &value)?;
        }
        Ok(())
    }

    /// Applies `key=value` command-line overrides (after any config file).
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), SimError> {
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| SimError::Config(format!("override {item:?}: expected key=value")))?;
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Full printable form; reloading it reproduces this configuration.
    pub fn render(&self) -> String {
        let c = &self.scenario.constants;
        let schemes =
            self.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ");
        kv::render(&[
            ("devices", self.scenario.devices.to_string()),
            ("cell_radius_m", self.scenario.cell_radius_m.to_string()),
            ("eve_x_m", self.scenario.eve_x_m.to_string()),
            ("eve_y_m", self.scenario.eve_y_m.to_string()),
            ("min_dist_m", self.scenario.min_dist_m.to_string()),
            ("bandwidth_hz", c.bandwidth_hz.to_string()),
            ("noise_w", c.noise_w.to_string()),
            ("local_cpu_hz", c.local_cpu_hz.to_string()),
            ("edge_cpu_hz", c.edge_cpu_hz.to_string()),
            ("p_max_w", c.p_max_w.to_string()),
            ("eps_fraction", c.eps_fraction.to_string()),
            ("ao_tol_s", c.ao_tol_s.to_string()),
            ("seed", self.seed.to_string()),
            ("runs", self.runs.to_string()),
            ("scheme", self.scheme.name().to_string()),
            ("axis", self.axis.name().to_string()),
            ("points", kv::render_f64_list(&self.resolved_points())),
            ("schemes", schemes),
        ])
    }
}

pub fn parse_axis(value: &str) -> Result<SweepAxis, SimError> {
    SweepAxis::from_name(value)
        .ok_or_else(|| SimError::Config(format!("axis: unknown name {value:?}")))
}
