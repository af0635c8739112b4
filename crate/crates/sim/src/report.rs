//! Text and CSV rendering of solve reports. Deliberately free of wall-clock
//! time so identical solves print byte-identical reports.

use std::fmt::Write as _;

use pqoff_core::driver::SolveReport;
use pqoff_core::scenario::Scenario;

pub fn render_report(scn: &Scenario, report: &SolveReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "converged = {}", report.converged);
    let _ = writeln!(out, "objective_s = {}", report.objective());
    let _ = writeln!(out, "ao_iterations = {}", report.ao_iters);
    let _ = writeln!(out, "sca_iterations = {}", report.sca_iters_total);
    let trace: Vec<String> = report.objective_trace.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "objective_trace_s = {}", trace.join(", "));
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>6} {:>8} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "device", "offload", "power_w", "edge_hz", "latency_s", "sr_lb", "t_local_s"
    );
    let dec = &report.final_decision;
    for k in 0..scn.devices() {
        let b = &report.per_device[k];
        let _ = writeln!(
            out,
            "{:>6} {:>8} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            k,
            u8::from(dec.offload[k]),
            dec.power_w[k],
            dec.edge_cycles[k],
            b.t_total_s,
            b.secrecy_rate_lb,
            b.t_local_s
        );
    }
    out
}

/// Surrogate-solve trace across the whole run: one line per SCA iterate.
pub fn render_sca_trace_csv(report: &SolveReport) -> String {
    let mut out = String::from("iter,objective,max_kkt_residual\n");
    for (i, rec) in report.sca_trace.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i, rec.objective, rec.max_kkt_residual);
    }
    out
}
