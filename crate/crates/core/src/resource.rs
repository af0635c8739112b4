//! Edge-CPU allocation and the offload/local decision.
//!
//! At fixed powers and flags, splitting the edge CPU to minimize the summed
//! edge latencies has the closed-form stationarity solution: shares
//! proportional to `sqrt(d_k c_k)`, normalized to the full budget. The
//! denominator runs over the offloading set only; capacity parked on local
//! devices would be wasted budget.
//!
//! The offload decision itself is NP-hard, so it is approximated greedily:
//! rank devices by the latency gain of offloading (transmission plus edge
//! latency minus local latency) and admit the most profitable ones while the
//! capacity budget holds. Devices whose secrecy-rate lower bound is zero have
//! infinite transmission latency and are never candidates.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::model;
use crate::scenario::Scenario;

/// Latency gain of offloading one device at the current powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaT {
    pub device: usize,
    /// `t_transmit + t_edge - t_local`, seconds; negative means offloading
    /// helps, infinite means secure offloading is impossible at these powers.
    pub delta_s: f64,
    /// Edge share assumed for the gain estimate, cycles/s.
    pub f_required: f64,
}

/// Closed-form optimal edge-CPU split over the offloading set. The returned
/// vector covers all devices (zero for locals) and sums to the full budget
/// over the offloaders, exactly after renormalization.
pub fn allocate_compute(scn: &Scenario, offload: &[bool]) -> Result<Vec<f64>, Error> {
    let weights: Vec<(usize, f64)> = (0..scn.devices())
        .filter(|&k| offload[k])
        .map(|k| (k, math::sqrt(scn.d_bits[k] * scn.cycles_per_bit[k])))
        .collect();
    if weights.is_empty() {
        return Err(Error::EmptyOffloadSet);
    }
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    let mut shares = vec![0.0; scn.devices()];
    for &(k, w) in &weights {
        shares[k] = w / total * scn.constants.edge_cpu_hz;
    }
    // Renormalize away the rounding drift so the budget is met exactly.
    let assigned: f64 = weights.iter().map(|&(k, _)| shares[k]).sum();
    let correction = scn.constants.edge_cpu_hz / assigned;
    for &(k, _) in &weights {
        shares[k] *= correction;
    }
    Ok(shares)
}

/// Latency gain from offloading device `k` given an edge share. Infinite
/// when the secrecy-rate lower bound at `p` is zero.
pub fn delta_t(scn: &Scenario, p: &[f64], edge_share_hz: f64, k: usize) -> f64 {
    let c = &scn.constants;
    let t_local = scn.d_bits[k] * scn.cycles_per_bit[k] / c.local_cpu_hz;
    let sr = model::secrecy_rate_lb(scn, p, k);
    if !(sr > 0.0) || !(edge_share_hz > 0.0) {
        return f64::INFINITY;
    }
    let t_transmit = scn.d_bits[k] / (c.bandwidth_hz * sr);
    let t_edge = scn.d_bits[k] * scn.cycles_per_bit[k] / edge_share_hz;
    t_transmit + t_edge - t_local
}

/// How the greedy pass prices a candidate's edge share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CandidateF<'a> {
    /// Fixed per-device shares; the budget check sums the frozen values and
    /// skips devices that would overflow it.
    Frozen(&'a [f64]),
    /// Re-derive the closed-form split over the tentative set after each
    /// accepted device; the budget then holds by construction and the test
    /// becomes whether the gain stays negative at the diluted share.
    Rederive,
}

/// Greedy offload decision at fixed powers. Devices are considered in
/// ascending order of their latency gain (ties by index); only devices with
/// strictly negative gain are ever selected.
pub fn greedy_offload(scn: &Scenario, p: &[f64], rule: CandidateF) -> Vec<bool> {
    let k_all = scn.devices();
    let order_share = |k: usize| match rule {
        CandidateF::Frozen(f) => f[k],
        // Ordering estimate: the share the device would get if every device
        // offloaded — a lower bound on any realized share, so a pessimistic
        // (safe) gain estimate.
        CandidateF::Rederive => {
            let w: f64 = (0..k_all).map(|j| math::sqrt(scn.d_bits[j] * scn.cycles_per_bit[j])).sum();
            math::sqrt(scn.d_bits[k] * scn.cycles_per_bit[k]) / w * scn.constants.edge_cpu_hz
        }
    };
    let mut ranked: Vec<DeltaT> = (0..k_all)
        .map(|k| {
            let f_required = order_share(k);
            DeltaT { device: k, delta_s: delta_t(scn, p, f_required, k), f_required }
        })
        .filter(|d| d.delta_s.is_finite())
        .collect();
    ranked.sort_by(|a, b| a.delta_s.total_cmp(&b.delta_s).then(a.device.cmp(&b.device)));

    let mut selected = vec![false; k_all];
    match rule {
        CandidateF::Frozen(f) => {
            let budget = scn.constants.edge_cpu_hz * (1.0 + 1e-9);
            let mut used = 0.0;
            for cand in ranked {
                if cand.delta_s >= 0.0 {
                    break;
                }
                if used + f[cand.device] <= budget {
                    selected[cand.device] = true;
                    used += f[cand.device];
                }
            }
        }
        CandidateF::Rederive => {
            for cand in ranked {
                if cand.delta_s >= 0.0 {
                    break;
                }
                selected[cand.device] = true;
                let shares = allocate_compute(scn, &selected).expect("set is nonempty");
                if delta_t(scn, p, shares[cand.device], cand.device) >= 0.0 {
                    selected[cand.device] = false;
                }
            }
        }
    }
    selected
}
