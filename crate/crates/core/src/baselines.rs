//! Comparison schemes sharing the system model.
//!
//! - `Proposed`: the full alternating solve.
//! - `Ctp`: constant transmission power — every device at the cap, only
//!   compute shares and offload flags optimized.
//! - `Ucc`: uniform computing capacity over the offloading set; powers and
//!   flags optimized.
//! - `Flc`: full local computing; nothing optimized.
//! - `NoEve`: the eavesdropper removed, full solve; the performance
//!   upper-bound reference.

use alloc::vec;
use alloc::vec::Vec;

use crate::driver::{self, ComputePolicy, PowerPolicy, SolveReport, SolverSettings};
use crate::error::Error;
use crate::model::{self, Decision};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Proposed,
    Ctp,
    Ucc,
    Flc,
    NoEve,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] =
        [SchemeId::Proposed, SchemeId::Ctp, SchemeId::Ucc, SchemeId::Flc, SchemeId::NoEve];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::Proposed => "PROPOSED",
            SchemeId::Ctp => "CTP",
            SchemeId::Ucc => "UCC",
            SchemeId::Flc => "FLC",
            SchemeId::NoEve => "NO_EVE",
        }
    }

    pub fn from_name(name: &str) -> Option<SchemeId> {
        SchemeId::ALL.iter().copied().find(|s| s.name().eq_ignore_ascii_case(name))
    }
}

impl core::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs one scheme on one scenario realization. Schemes never mutate the
/// scenario, so paired comparisons across schemes are exact.
pub fn run_scheme(
    scheme: SchemeId,
    scn: &Scenario,
    settings: &SolverSettings,
) -> Result<SolveReport, Error> {
    match scheme {
        SchemeId::Proposed => driver::solve(scn, settings),
        SchemeId::Ctp => {
            driver::solve_with_policies(scn, settings, PowerPolicy::FixedMax, ComputePolicy::KktSplit)
        }
        SchemeId::Ucc => {
            driver::solve_with_policies(scn, settings, PowerPolicy::Optimize, ComputePolicy::Uniform)
        }
        SchemeId::Flc => Ok(full_local(scn)),
        SchemeId::NoEve => driver::solve(&scn.without_eve(), settings),
    }
}

/// Everything computed locally: no optimization, no transmissions.
fn full_local(scn: &Scenario) -> SolveReport {
    let k_all = scn.devices();
    let mut dec = Decision {
        offload: vec![false; k_all],
        power_w: vec![0.0; k_all],
        edge_cycles: vec![0.0; k_all],
        latency_cap_s: vec![0.0; k_all],
    };
    let mut objective = 0.0;
    for k in 0..k_all {
        let t = scn.d_bits[k] * scn.cycles_per_bit[k] / scn.constants.local_cpu_hz;
        dec.latency_cap_s[k] = t;
        objective += t;
    }
    let per_device: Vec<_> = (0..k_all).map(|k| model::total_latency(scn, &dec, k)).collect();
    SolveReport {
        objective_trace: vec![objective],
        final_decision: dec,
        per_device,
        ao_iters: 0,
        sca_iters_total: 0,
        sca_trace: Vec::new(),
        wall_time_s: 0.0,
        converged: true,
    }
}
