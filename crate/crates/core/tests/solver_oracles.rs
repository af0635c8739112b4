//! Brute-force and scaling checks for the optimizers, kept independent of the
//! solver internals: plain grid search over the same model functions.

use pqoff_core::driver::{solve, SolverSettings};
use pqoff_core::model::{self, Decision};
use pqoff_core::resource;
use pqoff_core::sca::{solve_sp1, ScaSettings};
use pqoff_core::scenario::{generate, Scenario, ScenarioConfig};

/// Robust total latency of one fully specified decision.
fn objective_with_split(scn: &Scenario, offload: &[bool], p: &[f64]) -> f64 {
    let k = scn.devices();
    let edge_cycles = if offload.iter().any(|&b| b) {
        resource::allocate_compute(scn, offload).unwrap()
    } else {
        vec![0.0; k]
    };
    let dec = Decision {
        offload: offload.to_vec(),
        power_w: p.to_vec(),
        edge_cycles,
        latency_cap_s: vec![f64::INFINITY; k],
    };
    model::objective(scn, &dec)
}

#[test]
fn two_device_power_solve_matches_grid_oracle() {
    let mut config = ScenarioConfig::default();
    config.devices = 2;
    let mut checked = 0;
    for seed in 0..12u64 {
        let scn = generate(&config, seed).unwrap();
        let offload = [true, false];
        let p_max = scn.constants.p_max_w;
        let shares = resource::allocate_compute(&scn, &offload).unwrap();

        // 200 x 200 grid over the power box.
        let n = 200;
        let mut grid_best = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let p = [
                    p_max * i as f64 / (n - 1) as f64,
                    p_max * j as f64 / (n - 1) as f64,
                ];
                let obj = objective_with_split(&scn, &offload, &p);
                grid_best = grid_best.min(obj);
            }
        }
        if !grid_best.is_finite() {
            continue; // no secure offloading anywhere in the box
        }

        let p0 = vec![p_max / 2.0; 2];
        let sol = match solve_sp1(&scn, &offload, &shares, &p0, &ScaSettings::default()) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let solver_obj: f64 = sol.latency_cap_s.iter().sum();
        let rel = (solver_obj - grid_best) / grid_best;
        assert!(
            rel < 0.01,
            "seed {seed}: solver {solver_obj} worse than grid {grid_best} by {rel:.4}"
        );
        assert!(
            rel > -0.01,
            "seed {seed}: solver {solver_obj} implausibly beats a 200x200 grid ({grid_best})"
        );
        checked += 1;
    }
    assert!(checked >= 6, "too few feasible two-device instances: {checked}");
}

#[test]
fn three_device_solve_is_near_exhaustive_optimum() {
    let mut config = ScenarioConfig::default();
    config.devices = 3;
    let settings = SolverSettings::default();
    for seed in 0..6u64 {
        let scn = generate(&config, seed).unwrap();
        let p_max = scn.constants.p_max_w;

        // All 8 flag combinations crossed with a 50^3 power grid, each with
        // the closed-form compute split.
        let n = 50;
        let mut brute = f64::INFINITY;
        for mask in 0..8u32 {
            let offload: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let p = [
                            p_max * i as f64 / (n - 1) as f64,
                            p_max * j as f64 / (n - 1) as f64,
                            p_max * l as f64 / (n - 1) as f64,
                        ];
                        brute = brute.min(objective_with_split(&scn, &offload, &p));
                    }
                }
            }
        }

        let report = solve(&scn, &settings).unwrap();
        assert!(
            report.objective() <= 1.05 * brute,
            "seed {seed}: solver {} vs exhaustive {brute}",
            report.objective()
        );
    }
}

#[test]
fn per_iterate_cost_scales_like_a_small_polynomial() {
    // Wall time per SCA iterate against device count; the log-log slope must
    // stay at or below 4 (dense interior-point arithmetic).
    let settings = SolverSettings::default();
    let sizes = [4usize, 8, 16, 32];
    let mut points = Vec::new();
    for &k in &sizes {
        let mut config = ScenarioConfig::default();
        config.devices = k;
        let mut per_iter = Vec::new();
        for seed in 100..103u64 {
            let scn = generate(&config, seed).unwrap();
            if let Ok(report) = solve(&scn, &settings) {
                if report.sca_iters_total > 0 {
                    per_iter.push(report.wall_time_s / report.sca_iters_total as f64);
                }
            }
        }
        per_iter.sort_by(f64::total_cmp);
        assert!(!per_iter.is_empty(), "no converged solve at K={k}");
        points.push((k as f64, per_iter[per_iter.len() / 2]));
    }
    // Least-squares slope in log-log space.
    let logs: Vec<(f64, f64)> = points.iter().map(|&(k, t)| (k.ln(), t.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / logs.len() as f64;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / logs.len() as f64;
    let slope: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum::<f64>()
        / logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum::<f64>();
    assert!(slope <= 4.0, "per-iterate cost slope {slope:.2} exceeds 4 on {points:?}");
}
