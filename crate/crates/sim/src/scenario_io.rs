//! Lossless scenario dump/replay in the flat key-value format.

use pqoff_core::scenario::{Scenario, SystemConstants};

use crate::kv;
use crate::SimError;

pub fn render(scn: &Scenario) -> String {
    let c = &scn.constants;
    kv::render(&[
        ("devices", scn.devices().to_string()),
        ("bandwidth_hz", c.bandwidth_hz.to_string()),
        ("noise_w", c.noise_w.to_string()),
        ("local_cpu_hz", c.local_cpu_hz.to_string()),
        ("edge_cpu_hz", c.edge_cpu_hz.to_string()),
        ("p_max_w", c.p_max_w.to_string()),
        ("eps_fraction", c.eps_fraction.to_string()),
        ("ao_tol_s", c.ao_tol_s.to_string()),
        ("d_bits", kv::render_f64_list(&scn.d_bits)),
        ("cycles_per_bit", kv::render_f64_list(&scn.cycles_per_bit)),
        ("gain_pqes", kv::render_f64_list(&scn.gain_pqes)),
        ("gain_eve_est", kv::render_f64_list(&scn.gain_eve_est)),
        ("eps", kv::render_f64_list(&scn.eps)),
    ])
}

pub fn parse(text: &str) -> Result<Scenario, SimError> {
    let mut devices: Option<usize> = None;
    let mut constants = SystemConstants::default();
    let mut d_bits = None;
    let mut cycles = None;
    let mut gain_pqes = None;
    let mut gain_eve_est = None;
    let mut eps = None;
    for (key, value) in kv::parse(text)? {
        match key.as_str() {
            "devices" => devices = Some(kv::parse_usize(&key, &value)?),
            "bandwidth_hz" => constants.bandwidth_hz = kv::parse_f64(&key, &value)?,
            "noise_w" => constants.noise_w = kv::parse_f64(&key, &value)?,
            "local_cpu_hz" => constants.local_cpu_hz = kv::parse_f64(&key, &value)?,
            "edge_cpu_hz" => constants.edge_cpu_hz = kv::parse_f64(&key, &value)?,
            "p_max_w" => constants.p_max_w = kv::parse_f64(&key, &value)?,
            "eps_fraction" => constants.eps_fraction = kv::parse_f64(&key, &value)?,
            "ao_tol_s" => constants.ao_tol_s = kv::parse_f64(&key, &value)?,
            "d_bits" => d_bits = Some(kv::parse_f64_list(&key, &value)?),
            "cycles_per_bit" => cycles = Some(kv::parse_f64_list(&key, &value)?),
            "gain_pqes" => gain_pqes = Some(kv::parse_f64_list(&key, &value)?),
            "gain_eve_est" => gain_eve_est = Some(kv::parse_f64_list(&key, &value)?),
            "eps" => eps = Some(kv::parse_f64_list(&key, &value)?),
            other => return Err(SimError::Config(format!("unknown scenario key {other:?}"))),
        }
    }
    let missing = |what: &str| SimError::Config(format!("scenario file is missing {what:?}"));
    let scn = Scenario {
        d_bits: d_bits.ok_or_else(|| missing("d_bits"))?,
        cycles_per_bit: cycles.ok_or_else(|| missing("cycles_per_bit"))?,
        gain_pqes: gain_pqes.ok_or_else(|| missing("gain_pqes"))?,
        gain_eve_est: gain_eve_est.ok_or_else(|| missing("gain_eve_est"))?,
        eps: eps.ok_or_else(|| missing("eps"))?,
        constants,
    };
    let devices = devices.ok_or_else(|| missing("devices"))?;
    if devices != scn.devices() {
        return Err(SimError::Config(format!(
            "devices = {devices} disagrees with array length {}",
            scn.devices()
        )));
    }
    scn.validate()?;
    Ok(scn)
}
