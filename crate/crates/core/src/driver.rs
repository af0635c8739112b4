//! Alternating optimization over powers, compute shares and offload flags.
//!
//! One iteration runs the power sub-solver at the current flags and shares,
//! re-splits the edge CPU at the new powers, then re-decides the flags
//! greedily. A candidate flag vector is only accepted if it does not worsen
//! the objective, so the reported objective trace is non-increasing by
//! construction; the loop stops once the per-iteration change falls below the
//! scenario's threshold.
//!
//! The objective tracked here is the robust total latency: per-device totals
//! evaluated at the secrecy-rate lower bound, i.e. the tightest thresholds
//! the constraints admit. The power solver's internal surrogate objectives
//! are reported separately in the SCA trace.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::model::{self, Decision, LatencyBreakdown};
use crate::resource::{self, CandidateF};
use crate::sca::{self, ScaIterRecord, ScaSettings};
use crate::scenario::Scenario;

/// Candidate-share rule used by the greedy offload step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyMode {
    /// Price every candidate at the share it would get if all devices
    /// offloaded: a frozen, power-independent vector that under-estimates any
    /// realized share, so accepted devices stay profitable after the actual
    /// split. The default, and the closest reading of the published loop.
    #[default]
    FrozenNominal,
    /// Re-derive the split over the tentative set after each acceptance.
    Rederive,
}

/// Which variables the loop actually optimizes; baselines pin one of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerPolicy {
    Optimize,
    /// All devices transmit at maximum power; the power step is skipped.
    FixedMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputePolicy {
    /// Closed-form KKT split over the offloading set.
    KktSplit,
    /// Equal shares over the offloading set.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub sca: ScaSettings,
    /// Cap on alternating iterations.
    pub max_ao_iters: usize,
    pub greedy: GreedyMode,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            sca: ScaSettings::default(),
            max_ao_iters: 100,
            greedy: GreedyMode::default(),
        }
    }
}

/// Everything a solve produced, including the per-iteration objective trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Robust total latency after initialization and after each iteration,
    /// seconds; non-increasing.
    pub objective_trace: Vec<f64>,
    pub final_decision: Decision,
    pub per_device: Vec<LatencyBreakdown>,
    pub ao_iters: usize,
    pub sca_iters_total: usize,
    /// Concatenated surrogate-solve records across all power steps.
    pub sca_trace: Vec<ScaIterRecord>,
    /// Wall-clock time of the solve, seconds. Zero when built without `std`.
    /// Excluded from report equality: two identical solves differ here.
    pub wall_time_s: f64,
    pub converged: bool,
}

impl SolveReport {
    pub fn objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace starts at initialization")
    }

    /// Equality over everything deterministic (wall time excluded).
    pub fn same_solution(&self, other: &SolveReport) -> bool {
        self.objective_trace == other.objective_trace
            && self.final_decision == other.final_decision
            && self.per_device == other.per_device
            && self.ao_iters == other.ao_iters
            && self.sca_iters_total == other.sca_iters_total
            && self.converged == other.converged
    }
}

/// Sets every latency threshold to its tightest admissible value (the robust
/// per-device total) and returns their sum, the objective.
fn tighten_caps(scn: &Scenario, dec: &mut Decision) -> f64 {
    let mut sum = 0.0;
    for k in 0..scn.devices() {
        let b = model::total_latency(scn, dec, k);
        dec.latency_cap_s[k] = b.t_total_s;
        sum += b.t_total_s;
    }
    sum
}

fn reallocate(scn: &Scenario, dec: &mut Decision, policy: ComputePolicy) {
    let k_all = scn.devices();
    let count = dec.offload.iter().filter(|&&b| b).count();
    if count == 0 {
        dec.edge_cycles = vec![0.0; k_all];
        return;
    }
    dec.edge_cycles = match policy {
        ComputePolicy::KktSplit => {
            resource::allocate_compute(scn, &dec.offload).expect("set is nonempty")
        }
        ComputePolicy::Uniform => {
            let share = scn.constants.edge_cpu_hz / count as f64;
            (0..k_all).map(|k| if dec.offload[k] { share } else { 0.0 }).collect()
        }
    };
}

/// Builds a feasible starting decision: devices whose interference-free
/// secrecy rate at max power is positive and whose estimated latency gain at
/// the all-offload share is negative are admitted in ascending-gain order;
/// powers start at half the cap; shares follow the KKT split.
pub fn initialize(scn: &Scenario) -> Decision {
    let k_all = scn.devices();
    let c = &scn.constants;
    let all = vec![true; k_all];
    let nominal = resource::allocate_compute(scn, &all).expect("all-device set");

    let mut ranked: Vec<(f64, usize)> = Vec::new();
    for k in 0..k_all {
        let h = scn.gain_pqes[k];
        let g_plus = model::eve_gain_plus(scn, k);
        if h <= g_plus {
            continue; // no positive secrecy rate at any power, even alone
        }
        let snr_own = c.p_max_w * h / c.noise_w;
        let snr_eve = c.p_max_w * g_plus / c.noise_w;
        let sr_alone = crate::math::log2(1.0 + snr_own) - crate::math::log2(1.0 + snr_eve);
        let work = scn.d_bits[k] * scn.cycles_per_bit[k];
        let delta = scn.d_bits[k] / (c.bandwidth_hz * sr_alone) + work / nominal[k]
            - work / c.local_cpu_hz;
        if delta < 0.0 {
            ranked.push((delta, k));
        }
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut offload = vec![false; k_all];
    let mut used = 0.0;
    for &(_, k) in &ranked {
        if used + nominal[k] <= c.edge_cpu_hz * (1.0 + 1e-9) {
            offload[k] = true;
            used += nominal[k];
        }
    }

    let mut dec = Decision {
        offload,
        power_w: vec![c.p_max_w / 2.0; k_all],
        edge_cycles: vec![0.0; k_all],
        latency_cap_s: vec![0.0; k_all],
    };
    reallocate(scn, &mut dec, ComputePolicy::KktSplit);
    tighten_caps(scn, &mut dec);
    dec
}

/// Full solve with all three blocks active.
pub fn solve(scn: &Scenario, settings: &SolverSettings) -> Result<SolveReport, Error> {
    solve_with_policies(scn, settings, PowerPolicy::Optimize, ComputePolicy::KktSplit)
}

/// Runs the power solver on the current flags, forcing offloaders local while
/// the sub-problem has no feasible start. Returns the SCA records of the
/// successful solve and the devices that were forced out.
fn power_step(
    scn: &Scenario,
    dec: &mut Decision,
    sca_settings: &ScaSettings,
    compute: ComputePolicy,
) -> Result<(Vec<ScaIterRecord>, Vec<usize>), Error> {
    let mut forced = Vec::new();
    let mut records = Vec::new();
    while dec.offload.iter().any(|&b| b) {
        match sca::solve_sp1(scn, &dec.offload, &dec.edge_cycles, &dec.power_w, sca_settings) {
            Ok(sol) => {
                dec.power_w = sol.power_w;
                records = sol.trace;
                break;
            }
            Err(Error::InfeasibleStart { device }) => {
                dec.offload[device] = false;
                forced.push(device);
                reallocate(scn, dec, compute);
            }
            Err(e) => return Err(e),
        }
    }
    Ok((records, forced))
}

/// Solve with one variable block pinned; the baseline schemes enter here.
pub fn solve_with_policies(
    scn: &Scenario,
    settings: &SolverSettings,
    power: PowerPolicy,
    compute: ComputePolicy,
) -> Result<SolveReport, Error> {
    #[cfg(feature = "std")]
    let t_start = std::time::Instant::now();

    let k_all = scn.devices();
    let c = &scn.constants;

    let mut dec = initialize(scn);
    if power == PowerPolicy::FixedMax {
        dec.power_w = vec![c.p_max_w; k_all];
    }
    reallocate(scn, &mut dec, compute);
    let mut trace = vec![tighten_caps(scn, &mut dec)];

    // Frozen candidate shares for the greedy step: the all-offload split
    // under the active compute policy.
    let frozen: Vec<f64> = match compute {
        ComputePolicy::KktSplit => {
            resource::allocate_compute(scn, &vec![true; k_all]).expect("all-device set")
        }
        ComputePolicy::Uniform => vec![c.edge_cpu_hz / k_all as f64; k_all],
    };

    let mut sca_trace: Vec<ScaIterRecord> = Vec::new();
    let mut converged = false;
    let mut ao_iters = 0;
    // Devices that already failed an expansion attempt; not re-tried.
    let mut no_prospect = vec![false; k_all];

    for _ in 0..settings.max_ao_iters {
        ao_iters += 1;

        // Steps 1 and 2: transmit powers at fixed flags and shares, then the
        // edge split at the new powers. Forcing an offloader local inside the
        // power step can cost more than the power gains buy, so the combined
        // result is reverted if it is worse than the incumbent.
        let snapshot = dec.clone();
        let snapshot_obj = model::objective(scn, &snapshot);
        if power == PowerPolicy::Optimize {
            let (records, _forced) = power_step(scn, &mut dec, &settings.sca, compute)?;
            sca_trace.extend_from_slice(&records);
        }
        reallocate(scn, &mut dec, compute);
        let mut incumbent_obj = tighten_caps(scn, &mut dec);
        if incumbent_obj > snapshot_obj {
            dec = snapshot;
            incumbent_obj = snapshot_obj;
        }
        debug_assert!(dec.validate(scn).is_ok(), "incumbent violated constraints");

        // Step 3: offload flags. Greedy proposes; accept only if it does not
        // worsen the objective, which keeps the trace non-increasing even
        // though the greedy itself is a heuristic. A second candidate pairs
        // the greedy flags at maximum power with the max-power vector itself,
        // so the solve is never beaten by the constant-power scheme whose
        // configurations that candidate spans.
        let rule = match (compute, settings.greedy) {
            (ComputePolicy::KktSplit, GreedyMode::Rederive) => CandidateF::Rederive,
            _ => CandidateF::Frozen(&frozen),
        };
        let mut objective = incumbent_obj;
        let mut candidate = dec.clone();
        candidate.offload = resource::greedy_offload(scn, &dec.power_w, rule);
        reallocate(scn, &mut candidate, compute);
        let candidate_obj = tighten_caps(scn, &mut candidate);
        if candidate_obj <= objective {
            objective = candidate_obj;
            dec = candidate;
        }
        if power == PowerPolicy::Optimize {
            let all_max = vec![c.p_max_w; k_all];
            let mut maxed = dec.clone();
            maxed.offload = resource::greedy_offload(scn, &all_max, rule);
            maxed.power_w = all_max;
            reallocate(scn, &mut maxed, compute);
            let maxed_obj = tighten_caps(scn, &mut maxed);
            if maxed_obj < objective {
                objective = maxed_obj;
                dec = maxed;
            }
        }

        // Expansion pass: the greedy can only admit devices whose secrecy
        // rate is positive at the current powers, so a device sidelined while
        // the powers were unfavorable (say, before the jammers around it were
        // turned up) would stay local forever. Re-admit every local device,
        // let the power solver's anchor scan peel off the ones with no
        // feasible start, and accept on strict improvement only.
        if power == PowerPolicy::Optimize {
            let mut expanded = dec.clone();
            let mut admitted = Vec::new();
            for d in 0..k_all {
                if !dec.offload[d] && !no_prospect[d] {
                    expanded.offload[d] = true;
                    admitted.push(d);
                }
            }
            if !admitted.is_empty() {
                reallocate(scn, &mut expanded, compute);
                let (records, _) = power_step(scn, &mut expanded, &settings.sca, compute)?;
                reallocate(scn, &mut expanded, compute);
                let expanded_obj = tighten_caps(scn, &mut expanded);
                if expanded_obj < objective {
                    dec = expanded;
                    objective = expanded_obj;
                    sca_trace.extend_from_slice(&records);
                }
                // Whatever did not make it into an improving expansion is not
                // worth re-trying; the plain greedy step can still admit it
                // later if the powers ever turn in its favor.
                for d in admitted {
                    if !dec.offload[d] {
                        no_prospect[d] = true;
                    }
                }
            }
        }

        // Drop descent: the greedy prices a candidate by its own gain and
        // never sees the dilution it inflicts on the other offloaders'
        // shares, so a marginal member can cost more than it saves. Dropping
        // is a pure re-evaluation at fixed powers; descend while it helps.
        loop {
            let mut best_drop: Option<(Decision, f64)> = None;
            for d in 0..k_all {
                if !dec.offload[d] {
                    continue;
                }
                let mut cand = dec.clone();
                cand.offload[d] = false;
                reallocate(scn, &mut cand, compute);
                let cand_obj = tighten_caps(scn, &mut cand);
                if cand_obj < objective
                    && best_drop.as_ref().is_none_or(|(_, b)| cand_obj < *b)
                {
                    best_drop = Some((cand, cand_obj));
                }
            }
            match best_drop {
                Some((cand, cand_obj)) => {
                    dec = cand;
                    objective = cand_obj;
                }
                None => break,
            }
        }
        debug_assert!(dec.validate(scn).is_ok(), "accepted decision violated constraints");

        let previous = *trace.last().expect("trace is seeded");
        trace.push(objective);
        if previous.is_finite() && (previous - objective).abs() < c.ao_tol_s {
            converged = true;
            break;
        }
    }

    let per_device: Vec<LatencyBreakdown> =
        (0..k_all).map(|k| model::total_latency(scn, &dec, k)).collect();
    let sca_iters_total = sca_trace.len();
    let report = SolveReport {
        objective_trace: trace,
        final_decision: dec,
        per_device,
        ao_iters,
        sca_iters_total,
        sca_trace,
        #[cfg(feature = "std")]
        wall_time_s: t_start.elapsed().as_secs_f64(),
        #[cfg(not(feature = "std"))]
        wall_time_s: 0.0,
        converged,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NoConvergence { report: Box::new(report) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{generate, ScenarioConfig, SystemConstants};

    #[test]
    fn initialization_is_feasible() {
        let config = ScenarioConfig::default();
        for seed in 0..30 {
            let scn = generate(&config, seed).unwrap();
            let dec = initialize(&scn);
            dec.validate(&scn).unwrap();
        }
    }

    #[test]
    fn colocated_eavesdropper_forces_all_local() {
        // Estimated eavesdropper gains equal to the server gains leave no
        // positive secrecy rate anywhere.
        let config = ScenarioConfig::default();
        let mut scn = generate(&config, 8).unwrap();
        scn.gain_eve_est = scn.gain_pqes.clone();
        scn.eps = vec![0.0; scn.devices()];
        let dec = initialize(&scn);
        assert!(dec.offload.iter().all(|&b| !b));
    }

    #[test]
    fn single_device_no_eve_matches_golden_section_oracle() {
        let mut config = ScenarioConfig::default();
        config.devices = 1;
        let mut scn = generate(&config, 21).unwrap().without_eve();
        // A workload heavy enough that offloading is clearly profitable.
        scn.cycles_per_bit = vec![148_791.0];
        let report = solve(&scn, &SolverSettings::default()).unwrap();
        assert_eq!(report.final_decision.offload, vec![true]);

        let c = &scn.constants;
        let h = scn.gain_pqes[0];
        let latency = |p: f64| -> f64 {
            let rate = crate::math::log2(1.0 + p * h / c.noise_w);
            scn.d_bits[0] / (c.bandwidth_hz * rate)
                + scn.d_bits[0] * scn.cycles_per_bit[0] / c.edge_cpu_hz
        };
        // Golden-section minimization over the power box.
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (c.p_max_w * 1e-12, c.p_max_w);
        let (mut a, mut b) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        let (mut fa, mut fb) = (latency(a), latency(b));
        for _ in 0..200 {
            if fa < fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - phi * (hi - lo);
                fa = latency(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + phi * (hi - lo);
                fb = latency(b);
            }
        }
        let oracle = fa.min(fb);
        let got = report.objective();
        assert!(
            (got - oracle).abs() <= 1e-6 * oracle,
            "objective {got} vs golden-section oracle {oracle}"
        );
        let t_local = scn.d_bits[0] * scn.cycles_per_bit[0] / c.local_cpu_hz;
        assert!(got < t_local, "offloading must beat local here");
    }

    #[test]
    fn starved_edge_degenerates_to_all_local() {
        let mut config = ScenarioConfig::default();
        config.constants.edge_cpu_hz = 1.0; // effectively no edge capacity
        let scn = generate(&config, 33).unwrap();
        let report = solve(&scn, &SolverSettings::default()).unwrap();
        assert!(report.final_decision.offload.iter().all(|&b| !b));
        let t_local_sum: f64 = (0..scn.devices())
            .map(|k| scn.d_bits[k] * scn.cycles_per_bit[k] / scn.constants.local_cpu_hz)
            .sum();
        let got = report.objective();
        assert!((got - t_local_sum).abs() < 1e-12 * t_local_sum, "objective {got}");
    }

    #[test]
    fn trace_is_monotone_and_bounded_by_all_local() {
        let config = ScenarioConfig::default();
        for seed in 0..15 {
            let scn = generate(&config, seed).unwrap();
            let report = solve(&scn, &SolverSettings::default()).unwrap();
            for w in report.objective_trace.windows(2) {
                assert!(
                    w[1] <= w[0] + 1e-9,
                    "seed {seed}: objective rose from {} to {}",
                    w[0],
                    w[1]
                );
            }
            let t_local_sum: f64 = (0..scn.devices())
                .map(|k| scn.d_bits[k] * scn.cycles_per_bit[k] / scn.constants.local_cpu_hz)
                .sum();
            assert!(report.objective() <= t_local_sum + 1e-9);
            assert!(report.converged);
            report.final_decision.validate(&scn).unwrap();
            // Initialization entry is an upper bound on the final objective.
            assert!(report.objective_trace[0] >= report.objective());
        }
    }

    #[test]
    fn solves_are_deterministic() {
        let config = ScenarioConfig::default();
        let scn = generate(&config, 42).unwrap();
        let a = solve(&scn, &SolverSettings::default()).unwrap();
        let b = solve(&scn, &SolverSettings::default()).unwrap();
        assert!(a.same_solution(&b), "identical inputs must give identical reports");
    }

    #[test]
    fn rederive_mode_also_converges_monotonically() {
        let config = ScenarioConfig::default();
        let scn = generate(&config, 3).unwrap();
        let settings = SolverSettings { greedy: GreedyMode::Rederive, ..Default::default() };
        let report = solve(&scn, &settings).unwrap();
        for w in report.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        assert!(report.converged);
    }

    #[test]
    fn fixed_max_power_policy_never_beats_optimized_power() {
        let config = ScenarioConfig::default();
        for seed in 0..10 {
            let scn = generate(&config, seed).unwrap();
            let settings = SolverSettings::default();
            let opt = solve(&scn, &settings).unwrap();
            let ctp =
                solve_with_policies(&scn, &settings, PowerPolicy::FixedMax, ComputePolicy::KktSplit)
                    .unwrap();
            assert!(
                opt.objective() <= ctp.objective() * (1.0 + 1e-6),
                "seed {seed}: optimized {} vs fixed-max {}",
                opt.objective(),
                ctp.objective()
            );
        }
    }

    #[test]
    fn hand_built_scenario_with_unit_constants_still_solves() {
        // Exercises the solver away from the default scales.
        let scn = crate::scenario::Scenario {
            d_bits: vec![1e5, 2e5, 1.5e5],
            cycles_per_bit: vec![2193.0, 24_051.0, 326_105.0],
            gain_pqes: vec![2.0, 1.0, 0.5],
            gain_eve_est: vec![0.2, 0.05, 0.1],
            eps: vec![0.02, 0.005, 0.01],
            constants: SystemConstants {
                noise_w: 1.0,
                bandwidth_hz: 1e6,
                local_cpu_hz: 1e8,
                edge_cpu_hz: 2e9,
                p_max_w: 1.0,
                eps_fraction: 0.1,
                ao_tol_s: 1e-6,
            },
        };
        let report = solve(&scn, &SolverSettings::default()).unwrap();
        assert!(report.converged);
        report.final_decision.validate(&scn).unwrap();
    }
}
