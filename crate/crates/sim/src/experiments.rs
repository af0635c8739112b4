//! Monte-Carlo sweeps: total latency per scheme against task size, edge
//! capacity or device count, averaged over paired scenario realizations.
//!
//! Pairing conventions that make reduced-run comparisons stable:
//! - every scheme at one sweep point sees the identical scenario realization;
//! - run seeds do not depend on the sweep point, so the same draws recur at
//!   every point (the capacity axis changes a constant only; the size axis
//!   overrides the drawn task sizes; the device axis extends per-device
//!   streams without perturbing the existing devices).
//!
//! Runs whose solve does not converge are excluded from the means and
//! counted; more than 1% exclusions fails the whole sweep rather than bias
//! the averages.

use rayon::prelude::*;

use pqoff_core::baselines::{run_scheme, SchemeId};
use pqoff_core::driver::SolverSettings;
use pqoff_core::rng;
use pqoff_core::scenario::{generate, Scenario, ScenarioConfig};
use pqoff_core::Error;

use crate::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Common task size forced on every device, bits.
    DataSize,
    /// Total edge CPU capacity, cycles/s.
    EdgeCapacity,
    /// Number of devices.
    DeviceCount,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::DataSize => "DATA_SIZE",
            SweepAxis::EdgeCapacity => "EDGE_CAPACITY",
            SweepAxis::DeviceCount => "DEVICE_COUNT",
        }
    }

    pub fn from_name(name: &str) -> Option<SweepAxis> {
        [SweepAxis::DataSize, SweepAxis::EdgeCapacity, SweepAxis::DeviceCount]
            .into_iter()
            .find(|axis| axis.name().eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Axis values, strictly increasing.
    pub points: Vec<f64>,
    /// Monte-Carlo runs per point.
    pub runs: usize,
    pub schemes: Vec<SchemeId>,
    pub base: ScenarioConfig,
    pub seed: u64,
    pub settings: SolverSettings,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.runs == 0 {
            return Err(SimError::Config("runs must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(SimError::Config("points must be nonempty".into()));
        }
        if !self.points.windows(2).all(|w| w[0] < w[1]) {
            return Err(SimError::Config("points must be strictly increasing".into()));
        }
        if self.axis == SweepAxis::DeviceCount
            && !self.points.iter().all(|p| p.fract() == 0.0 && *p >= 1.0)
        {
            return Err(SimError::Config("device counts must be positive integers".into()));
        }
        self.base.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub point: f64,
    pub scheme: SchemeId,
    pub mean_latency_s: f64,
    pub stderr_s: f64,
    /// Converged runs behind the mean.
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Runs dropped for non-convergence, over all points.
    pub excluded: usize,
    pub attempted: usize,
}

/// Scenario seed of one Monte-Carlo run; point-independent by design.
pub fn run_seed(base_seed: u64, run: usize) -> u64 {
    rng::derive_seed(base_seed, run as u64)
}

fn scenario_at(spec: &SweepSpec, point: f64, run: usize) -> Result<Scenario, Error> {
    let mut config = spec.base;
    match spec.axis {
        SweepAxis::DataSize => {}
        SweepAxis::EdgeCapacity => config.constants.edge_cpu_hz = point,
        SweepAxis::DeviceCount => config.devices = point as usize,
    }
    let scn = generate(&config, run_seed(spec.seed, run))?;
    Ok(match spec.axis {
        SweepAxis::DataSize => scn.with_common_data_bits(point),
        _ => scn,
    })
}

/// Per-scheme objectives of one run, or None if any scheme failed to
/// converge (the whole run is excluded to keep the comparison paired).
fn run_point(spec: &SweepSpec, point: f64, run: usize) -> Result<Option<Vec<f64>>, SimError> {
    let scn = scenario_at(spec, point, run)?;
    let mut objectives = Vec::with_capacity(spec.schemes.len());
    for &scheme in &spec.schemes {
        match run_scheme(scheme, &scn, &spec.settings) {
            Ok(report) => objectives.push(report.objective()),
            Err(Error::NoConvergence { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Some(objectives))
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SimError> {
    spec.validate()?;
    let mut rows = Vec::new();
    let mut excluded = 0;
    let mut attempted = 0;
    for &point in &spec.points {
        let outcomes: Vec<Result<Option<Vec<f64>>, SimError>> =
            (0..spec.runs).into_par_iter().map(|run| run_point(spec, point, run)).collect();
        let mut per_scheme: Vec<Vec<f64>> = vec![Vec::new(); spec.schemes.len()];
        for outcome in outcomes {
            attempted += 1;
            match outcome? {
                Some(objectives) => {
                    for (s, objective) in objectives.into_iter().enumerate() {
                        per_scheme[s].push(objective);
                    }
                }
                None => excluded += 1,
            }
        }
        for (s, &scheme) in spec.schemes.iter().enumerate() {
            let xs = &per_scheme[s];
            let n = xs.len();
            let mean = if n > 0 { xs.iter().sum::<f64>() / n as f64 } else { f64::NAN };
            let stderr = if n > 1 {
                let var =
                    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                0.0
            };
            rows.push(SweepRow {
                axis: spec.axis,
                point,
                scheme,
                mean_latency_s: mean,
                stderr_s: stderr,
                runs: n,
            });
        }
    }
    if excluded * 100 > attempted {
        return Err(SimError::TooManyExclusions { excluded, attempted });
    }
    Ok(SweepResult { rows, excluded, attempted })
}

pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::from("axis,point,scheme,mean_latency_s,stderr_s,runs\n");
    for row in &result.rows {
        out += &format!(
            "{},{},{},{},{},{}\n",
            row.axis.name(),
            row.point,
            row.scheme.name(),
            row.mean_latency_s,
            row.stderr_s,
            row.runs
        );
    }
    out
}

/// Writes `sweep.csv` and a standalone plot script that consumes only the CSV.
pub fn emit(result: &SweepResult, out_dir: &std::path::Path) -> Result<(), SimError> {
    std::fs::create_dir_all(out_dir).map_err(|e| SimError::io(out_dir, e))?;
    let csv_path = out_dir.join("sweep.csv");
    std::fs::write(&csv_path, to_csv(result)).map_err(|e| SimError::io(&csv_path, e))?;
    let plot_path = out_dir.join("plot_sweep.py");
    std::fs::write(&plot_path, PLOT_SCRIPT).map_err(|e| SimError::io(&plot_path, e))?;
    Ok(())
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot mean total latency per scheme from sweep.csv (same directory)."""
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
AXIS_LABEL = {
    "DATA_SIZE": "task size per device (bits)",
    "EDGE_CAPACITY": "edge CPU capacity (cycles/s)",
    "DEVICE_COUNT": "number of devices",
}

series = defaultdict(list)
axis_name = "sweep axis"
with open(os.path.join(HERE, "sweep.csv"), newline="") as f:
    for row in csv.DictReader(f):
        axis_name = AXIS_LABEL.get(row["axis"], row["axis"])
        series[row["scheme"]].append(
            (float(row["point"]), float(row["mean_latency_s"]), float(row["stderr_s"]))
        )

plt.figure(figsize=(5.2, 3.8))
for scheme, pts in series.items():
    pts.sort()
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    errs = [p[2] for p in pts]
    plt.errorbar(xs, ys, yerr=errs, marker="o", capsize=2, label=scheme)
plt.xlabel(axis_name)
plt.ylabel("mean total latency (s)")
plt.yscale("log")
plt.grid(True, which="both", alpha=0.3)
plt.legend()
plt.tight_layout()
out = os.path.join(HERE, "sweep.png")
plt.savefig(out, dpi=160)
print(f"wrote {out}")
"#;

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            axis: SweepAxis::EdgeCapacity,
            points: vec![1.0e9, 2.45e9],
            runs: 4,
            schemes: vec![SchemeId::Proposed, SchemeId::Flc],
            base: ScenarioConfig { devices: 4, ..ScenarioConfig::default() },
            seed: 3,
            settings: SolverSettings::default(),
        }
    }

    #[test]
    fn sweep_is_deterministic_and_pairs_runs() {
        let spec = small_spec();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b, "same spec must give identical results");
        assert_eq!(a.rows.len(), 4);
        assert_eq!(to_csv(&a), to_csv(&b));
    }

    #[test]
    fn local_computing_is_flat_across_edge_capacity() {
        let result = run_sweep(&small_spec()).unwrap();
        let flc: Vec<&SweepRow> =
            result.rows.iter().filter(|r| r.scheme == SchemeId::Flc).collect();
        assert_eq!(flc.len(), 2);
        assert_eq!(
            flc[0].mean_latency_s, flc[1].mean_latency_s,
            "local computing must not depend on edge capacity"
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = small_spec();
        spec.points = vec![2.0e9, 1.0e9];
        assert!(run_sweep(&spec).is_err());
        let mut spec = small_spec();
        spec.runs = 0;
        assert!(run_sweep(&spec).is_err());
        let mut spec = small_spec();
        spec.axis = SweepAxis::DeviceCount;
        spec.points = vec![2.5, 3.5];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn empty_scheme_list_yields_header_only_csv() {
        let mut spec = small_spec();
        spec.schemes = Vec::new();
        spec.runs = 1;
        let result = run_sweep(&spec).unwrap();
        assert_eq!(to_csv(&result), "axis,point,scheme,mean_latency_s,stderr_s,runs\n");
    }

    #[test]
    fn stderr_shrinks_with_run_count() {
        // One point, growing run counts: the standard error scales down
        // roughly like the square root of the run count.
        let mut spec = small_spec();
        spec.axis = SweepAxis::DataSize;
        spec.points = vec![30.0 * 8192.0];
        spec.schemes = vec![SchemeId::Flc];
        let mut errs = Vec::new();
        for runs in [50usize, 200, 800] {
            spec.runs = runs;
            let result = run_sweep(&spec).unwrap();
            errs.push(result.rows[0].stderr_s);
        }
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        assert!((1.4..2.9).contains(&r1), "50->200 stderr ratio {r1}");
        assert!((1.4..2.9).contains(&r2), "200->800 stderr ratio {r2}");
    }
}
