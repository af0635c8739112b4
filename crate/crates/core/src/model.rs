//! Rates and latencies.
//!
//! Pure evaluation of every model quantity for a candidate decision against a
//! scenario: local/transmission/edge latency, the legitimate-link rate, the
//! worst-case eavesdropper rate, and the secrecy-rate lower bound that makes
//! the latency figures robust to the bounded channel-estimation error.
//!
//! Conventions: rates are bits/s/Hz, latencies seconds. An offloader with
//! zero secrecy-rate lower bound has infinite transmission latency;
//! `f64::INFINITY` is used for that, which orders correctly and propagates
//! through sums (never a finite sentinel).

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::scenario::Scenario;

/// One candidate solution: offload flags, transmit powers, edge-CPU split and
/// per-device latency thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// true = offload, false = compute locally (and jam).
    pub offload: Vec<bool>,
    /// Transmit power per device, watts.
    pub power_w: Vec<f64>,
    /// Edge CPU share per device, cycles/s; meaningful only where `offload`.
    pub edge_cycles: Vec<f64>,
    /// Per-device latency threshold, seconds.
    pub latency_cap_s: Vec<f64>,
}

impl Decision {
    pub fn offload_set(&self) -> Vec<usize> {
        (0..self.offload.len()).filter(|&k| self.offload[k]).collect()
    }

    /// Checks the box, positivity and budget constraints against `scn`.
    pub fn validate(&self, scn: &Scenario) -> Result<(), Error> {
        let k = scn.devices();
        if self.offload.len() != k
            || self.power_w.len() != k
            || self.edge_cycles.len() != k
            || self.latency_cap_s.len() != k
        {
            return Err(Error::InvalidConfig { what: "decision length", value: k as f64 });
        }
        let p_max = scn.constants.p_max_w;
        let mut edge_sum = 0.0;
        for i in 0..k {
            let p = self.power_w[i];
            if !(0.0..=p_max * (1.0 + 1e-12)).contains(&p) {
                return Err(Error::InvalidConfig { what: "power out of box", value: p });
            }
            if self.offload[i] {
                if !(self.edge_cycles[i] > 0.0) {
                    return Err(Error::InvalidConfig {
                        what: "offloader without edge share",
                        value: self.edge_cycles[i],
                    });
                }
                edge_sum += self.edge_cycles[i];
            }
        }
        if edge_sum > scn.constants.edge_cpu_hz * (1.0 + 1e-9) {
            return Err(Error::InvalidConfig { what: "edge budget exceeded", value: edge_sum });
        }
        Ok(())
    }
}

/// Every per-device quantity the objective and constraints are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyBreakdown {
    /// Latency if computed locally, s.
    pub t_local_s: f64,
    /// Uplink transmission latency at the secrecy-rate lower bound, s
    /// (infinite when that bound is zero).
    pub t_transmit_s: f64,
    /// Edge compute latency at the allocated share, s.
    pub t_edge_s: f64,
    /// Total per the offload flag, s.
    pub t_total_s: f64,
    /// Worst-case secrecy rate lower bound, bits/s/Hz.
    pub secrecy_rate_lb: f64,
    /// Legitimate-link rate, bits/s/Hz.
    pub rate_rcd: f64,
    /// Worst-case eavesdropper rate upper bound, bits/s/Hz.
    pub rate_eve_ub: f64,
}

/// Local computing latency `d*c / f`, with strict positivity checks.
pub fn local_latency(d_bits: f64, cycles_per_bit: f64, cpu_hz: f64) -> Result<f64, Error> {
    for (what, value) in [
        ("d_bits", d_bits),
        ("cycles_per_bit", cycles_per_bit),
        ("cpu_hz", cpu_hz),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonpositiveInput { what, value });
        }
    }
    Ok(d_bits * cycles_per_bit / cpu_hz)
}

/// Best-case eavesdropper gain for device `k`'s own signal.
#[inline]
pub fn eve_gain_plus(scn: &Scenario, k: usize) -> f64 {
    scn.gain_eve_est[k] + scn.eps[k]
}

/// Worst-case eavesdropper gain for device `j`'s interference (clamped at
/// zero: jamming may miss the eavesdropper entirely).
#[inline]
pub fn eve_gain_minus(scn: &Scenario, j: usize) -> f64 {
    (scn.gain_eve_est[j] - scn.eps[j]).max(0.0)
}

/// Rate of device `k` towards the edge server under powers `p`; interference
/// sums over every other device, offloader or jammer.
pub fn rcd_rate(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    let mut interference = scn.constants.noise_w;
    for j in 0..scn.devices() {
        if j != k {
            interference += p[j] * scn.gain_pqes[j];
        }
    }
    math::log2(1.0 + p[k] * scn.gain_pqes[k] / interference)
}

/// Upper bound on the eavesdropper's rate for device `k`: best-case gain on
/// the tapped signal, worst-case (clamped) gains on the jamming.
pub fn eve_rate_ub(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    let mut interference = scn.constants.noise_w;
    for j in 0..scn.devices() {
        if j != k {
            interference += p[j] * eve_gain_minus(scn, j);
        }
    }
    math::log2(1.0 + p[k] * eve_gain_plus(scn, k) / interference)
}

/// Conservative lower bound on the worst-case secrecy rate, clamped at zero.
pub fn secrecy_rate_lb(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    (rcd_rate(scn, p, k) - eve_rate_ub(scn, p, k)).max(0.0)
}

/// Full latency breakdown of device `k` under `dec`.
pub fn total_latency(scn: &Scenario, dec: &Decision, k: usize) -> LatencyBreakdown {
    let c = &scn.constants;
    let rate_rcd = rcd_rate(scn, &dec.power_w, k);
    let rate_eve_ub = eve_rate_ub(scn, &dec.power_w, k);
    let sr_lb = (rate_rcd - rate_eve_ub).max(0.0);
    let t_local_s = scn.d_bits[k] * scn.cycles_per_bit[k] / c.local_cpu_hz;
    let t_transmit_s = if sr_lb > 0.0 {
        scn.d_bits[k] / (c.bandwidth_hz * sr_lb)
    } else {
        f64::INFINITY
    };
    let t_edge_s = if dec.edge_cycles[k] > 0.0 {
        scn.d_bits[k] * scn.cycles_per_bit[k] / dec.edge_cycles[k]
    } else {
        f64::INFINITY
    };
    let t_total_s = if dec.offload[k] { t_transmit_s + t_edge_s } else { t_local_s };
    LatencyBreakdown {
        t_local_s,
        t_transmit_s,
        t_edge_s,
        t_total_s,
        secrecy_rate_lb: sr_lb,
        rate_rcd,
        rate_eve_ub,
    }
}

/// Objective of the joint problem: total latency over all devices.
pub fn objective(scn: &Scenario, dec: &Decision) -> f64 {
    (0..scn.devices()).map(|k| total_latency(scn, dec, k).t_total_s).sum()
}
