//! Problem-instance generation.
//!
//! A scenario fixes everything the optimizer treats as data: per-device task
//! sizes and per-bit cycle costs, linear channel power gains towards the edge
//! server and towards the eavesdropper, the eavesdropper-gain uncertainty
//! radius, and the system constants. Generation is a pure function of
//! `(config, seed)`; see [`crate::rng`] for the substream scheme that makes
//! the draws reproducible field by field.
//!
//! Channel model: 3GPP small-cell path loss `30.6 + 36.7*log10(d)` dB with
//! 8 dB log-normal shadowing, multiplied by a unit-mean exponential power
//! fade (Rayleigh fading). The edge server sits at the origin, the
//! eavesdropper at a configurable point on the x-axis, and devices fall
//! uniformly in a disc around the server.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::catalog;
use crate::error::Error;
use crate::math;
use crate::rng::{self, StreamTag};

/// Path-loss intercept in dB.
pub const PATH_LOSS_INTERCEPT_DB: f64 = 30.6;
/// Path-loss slope per decade of distance, in dB.
pub const PATH_LOSS_SLOPE_DB: f64 = 36.7;
/// Standard deviation of the log-normal shadowing term, in dB.
pub const SHADOWING_STD_DB: f64 = 8.0;
/// Task-size draw bounds in bits (10 KB to 50 KB).
pub const DATA_BITS_LO: f64 = 10.0 * 8192.0;
pub const DATA_BITS_HI: f64 = 50.0 * 8192.0;

/// System-wide constants shared by every device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConstants {
    /// Uplink bandwidth B in Hz.
    pub bandwidth_hz: f64,
    /// Noise power in linear watts, applied at both the server and the
    /// eavesdropper front ends.
    pub noise_w: f64,
    /// Device-local CPU rate in cycles/s.
    pub local_cpu_hz: f64,
    /// Total edge-server CPU rate in cycles/s.
    pub edge_cpu_hz: f64,
    /// Per-device transmit power cap in watts.
    pub p_max_w: f64,
    /// Eavesdropper-gain uncertainty radius as a fraction of the estimate.
    pub eps_fraction: f64,
    /// Absolute objective-change threshold that stops the alternating loop,
    /// in seconds.
    pub ao_tol_s: f64,
}

impl Default for SystemConstants {
    /// 500 MHz bandwidth, -110 dBm noise, 168 MHz device CPU (Cortex-M4
    /// class), 2.45 GHz edge CPU (ARMv8 class), 10% gain uncertainty and a
    /// 1e-6 s stop threshold. The 23 dBm power cap is a typical IoT uplink
    /// class, not a measured value; override `p_max_w` to match a deployment.
    fn default() -> Self {
        SystemConstants {
            bandwidth_hz: 500e6,
            noise_w: math::dbm_to_watts(-110.0),
            local_cpu_hz: 168e6,
            edge_cpu_hz: 2.45e9,
            p_max_w: math::dbm_to_watts(23.0),
            eps_fraction: 0.10,
            ao_tol_s: 1e-6,
        }
    }
}

impl SystemConstants {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_w", self.noise_w),
            ("local_cpu_hz", self.local_cpu_hz),
            ("edge_cpu_hz", self.edge_cpu_hz),
            ("p_max_w", self.p_max_w),
            ("ao_tol_s", self.ao_tol_s),
        ];
        for (what, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidConfig { what, value });
            }
        }
        if !(0.0..1.0).contains(&self.eps_fraction) {
            return Err(Error::InvalidConfig { what: "eps_fraction", value: self.eps_fraction });
        }
        Ok(())
    }
}

/// Everything `generate` needs besides the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    /// Device count K.
    pub devices: usize,
    /// Radius of the disc (centered on the edge server) devices fall in, m.
    pub cell_radius_m: f64,
    /// Eavesdropper position, m.
    pub eve_x_m: f64,
    pub eve_y_m: f64,
    /// Positions closer to the server than this are re-drawn; the path-loss
    /// model is invalid as d -> 0.
    pub min_dist_m: f64,
    pub constants: SystemConstants,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            devices: 10,
            cell_radius_m: 50.0,
            eve_x_m: 50.0,
            eve_y_m: 0.0,
            min_dist_m: 1.0,
            constants: SystemConstants::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), Error> {
        self.constants.validate()?;
        if self.devices == 0 {
            return Err(Error::InvalidConfig { what: "devices", value: 0.0 });
        }
        if !(self.cell_radius_m > 0.0) {
            return Err(Error::InvalidConfig { what: "cell_radius_m", value: self.cell_radius_m });
        }
        if !(self.min_dist_m > 0.0) || self.min_dist_m >= self.cell_radius_m {
            return Err(Error::InvalidConfig { what: "min_dist_m", value: self.min_dist_m });
        }
        Ok(())
    }
}

/// A fully instantiated problem: one realization of workloads and channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Task size per device, bits.
    pub d_bits: Vec<f64>,
    /// CPU cycles per bit per device, from the workload catalog.
    pub cycles_per_bit: Vec<f64>,
    /// Linear power gain device -> edge server (h_k).
    pub gain_pqes: Vec<f64>,
    /// Estimated linear power gain device -> eavesdropper.
    pub gain_eve_est: Vec<f64>,
    /// Per-device uncertainty radius on the eavesdropper gain, linear.
    pub eps: Vec<f64>,
    pub constants: SystemConstants,
}

impl Scenario {
    pub fn devices(&self) -> usize {
        self.d_bits.len()
    }

    /// The same instance with the eavesdropper removed (zero estimated gain,
    /// zero uncertainty); the performance upper-bound reference.
    pub fn without_eve(&self) -> Scenario {
        let mut s = self.clone();
        s.gain_eve_est.iter_mut().for_each(|g| *g = 0.0);
        s.eps.iter_mut().for_each(|e| *e = 0.0);
        s
    }

    /// The same instance with every task size forced to `d_bits` (sweep axes
    /// override the drawn sizes this way).
    pub fn with_common_data_bits(&self, d_bits: f64) -> Scenario {
        let mut s = self.clone();
        s.d_bits.iter_mut().for_each(|d| *d = d_bits);
        s
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.constants.validate()?;
        let k = self.devices();
        if k == 0 {
            return Err(Error::InvalidConfig { what: "devices", value: 0.0 });
        }
        for v in [&self.cycles_per_bit, &self.gain_pqes, &self.gain_eve_est, &self.eps] {
            if v.len() != k {
                return Err(Error::InvalidConfig { what: "field length", value: v.len() as f64 });
            }
        }
        for i in 0..k {
            if !(self.d_bits[i] > 0.0) || !(self.cycles_per_bit[i] > 0.0) {
                return Err(Error::NonpositiveInput { what: "task size/cycles", value: self.d_bits[i] });
            }
            let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
            if !finite_nonneg(self.gain_pqes[i])
                || !finite_nonneg(self.gain_eve_est[i])
                || !finite_nonneg(self.eps[i])
            {
                return Err(Error::InvalidConfig { what: "channel gain", value: self.gain_pqes[i] });
            }
            if self.eps[i] > self.gain_eve_est[i] {
                return Err(Error::InvalidConfig { what: "eps exceeds estimate", value: self.eps[i] });
            }
        }
        Ok(())
    }
}

/// Distance-dependent part of the path loss, dB. Errors on d <= 0.
pub fn path_loss_mean_db(distance_m: f64) -> Result<f64, Error> {
    if !(distance_m > 0.0) {
        return Err(Error::NonpositiveInput { what: "distance_m", value: distance_m });
    }
    Ok(PATH_LOSS_INTERCEPT_DB + PATH_LOSS_SLOPE_DB * math::log10(distance_m))
}

/// Path loss in dB including one shadowing draw from `rng`.
pub fn path_loss_db<R: RngCore>(distance_m: f64, rng: &mut R) -> Result<f64, Error> {
    Ok(path_loss_mean_db(distance_m)? + SHADOWING_STD_DB * rng::standard_normal(rng))
}

/// Linear channel power gain over `distance_m`: inverse path loss (with one
/// shadowing draw) times a unit-mean exponential fade.
fn channel_gain<R: RngCore>(distance_m: f64, shadow: &mut R, fade: &mut R) -> f64 {
    let loss_db = path_loss_mean_db(distance_m).expect("distance checked by caller")
        + SHADOWING_STD_DB * rng::standard_normal(shadow);
    math::db_to_linear(-loss_db) * rng::unit_exponential(fade)
}

/// Generates one scenario. Identical `(config, seed)` pairs produce
/// bit-identical scenarios.
pub fn generate(config: &ScenarioConfig, seed: u64) -> Result<Scenario, Error> {
    config.validate()?;
    let k = config.devices;
    let mut s = Scenario {
        d_bits: Vec::with_capacity(k),
        cycles_per_bit: Vec::with_capacity(k),
        gain_pqes: Vec::with_capacity(k),
        gain_eve_est: Vec::with_capacity(k),
        eps: Vec::with_capacity(k),
        constants: config.constants,
    };
    for dev in 0..k as u64 {
        let mut pos = rng::substream(seed, dev, StreamTag::Position);
        let (mut x, mut y, mut d_pqes);
        loop {
            let r = config.cell_radius_m * math::sqrt(rng::unit_f64(&mut pos));
            let theta = 2.0 * core::f64::consts::PI * rng::unit_f64(&mut pos);
            x = r * math::cos(theta);
            y = r * math::sin(theta);
            d_pqes = r;
            if d_pqes >= config.min_dist_m {
                break;
            }
        }
        let d_eve = math::sqrt(math::sq(x - config.eve_x_m) + math::sq(y - config.eve_y_m));

        let mut shadow_h = rng::substream(seed, dev, StreamTag::ShadowPqes);
        let mut fade_h = rng::substream(seed, dev, StreamTag::FadePqes);
        s.gain_pqes.push(channel_gain(d_pqes, &mut shadow_h, &mut fade_h));

        let mut shadow_g = rng::substream(seed, dev, StreamTag::ShadowEve);
        let mut fade_g = rng::substream(seed, dev, StreamTag::FadeEve);
        // The eavesdropper can only be approached, never hit exactly, because
        // positions are continuous draws; still, clamp to the model floor.
        let g = channel_gain(d_eve.max(f64::MIN_POSITIVE), &mut shadow_g, &mut fade_g);
        s.gain_eve_est.push(g);
        s.eps.push(config.constants.eps_fraction * g);

        let mut data = rng::substream(seed, dev, StreamTag::DataSize);
        s.d_bits.push(rng::uniform(&mut data, DATA_BITS_LO, DATA_BITS_HI));

        let mut workload = rng::substream(seed, dev, StreamTag::Workload);
        s.cycles_per_bit.push(catalog::sample_cycles(&mut workload) as f64);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn path_loss_at_reference_distances() {
        // Shadowing excluded: the distance-only term.
        let at_50 = path_loss_mean_db(50.0).unwrap();
        assert!((at_50 - 92.953).abs() < 1e-3, "50 m loss = {at_50}");
        let at_1 = path_loss_mean_db(1.0).unwrap();
        assert!((at_1 - PATH_LOSS_INTERCEPT_DB).abs() < 1e-12, "1 m loss = {at_1}");
    }

    #[test]
    fn path_loss_rejects_nonpositive_distance() {
        assert!(path_loss_mean_db(0.0).is_err());
        assert!(path_loss_mean_db(-3.0).is_err());
        let mut rng = substream(0, 0, StreamTag::ShadowPqes);
        assert!(path_loss_db(0.0, &mut rng).is_err());
    }

    #[test]
    fn path_loss_monotone_in_distance() {
        let mut prev = f64::NEG_INFINITY;
        for d in [1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0] {
            let l = path_loss_mean_db(d).unwrap();
            assert!(l > prev, "path loss must grow with distance");
            prev = l;
        }
    }

    #[test]
    fn shadowing_moments() {
        let mut rng = substream(3, 0, StreamTag::ShadowPqes);
        let n = 100_000;
        let mut draws = alloc::vec::Vec::with_capacity(n);
        for _ in 0..n {
            let l = path_loss_db(50.0, &mut rng).unwrap();
            draws.push(l - path_loss_mean_db(50.0).unwrap());
        }
        let mean = draws.iter().sum::<f64>() / n as f64;
        let std = (draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64).sqrt();
        assert!(mean.abs() < 0.1, "shadowing mean = {mean}");
        assert!((std - SHADOWING_STD_DB).abs() < 0.1, "shadowing std = {std}");
    }

    #[test]
    fn generation_is_deterministic() {
        let config = ScenarioConfig::default();
        let a = generate(&config, 42).unwrap();
        let b = generate(&config, 42).unwrap();
        assert_eq!(a, b, "same (config, seed) must give bit-identical scenarios");
        let c = generate(&config, 43).unwrap();
        assert_ne!(a, c, "different seeds must differ");
    }

    #[test]
    fn device_draws_do_not_depend_on_k() {
        // Growing K keeps the existing devices' draws fixed.
        let mut config = ScenarioConfig::default();
        config.devices = 4;
        let small = generate(&config, 7).unwrap();
        config.devices = 8;
        let large = generate(&config, 7).unwrap();
        assert_eq!(&large.gain_pqes[..4], &small.gain_pqes[..]);
        assert_eq!(&large.d_bits[..4], &small.d_bits[..]);
    }

    #[test]
    fn zero_uncertainty_fraction_gives_zero_radii() {
        let mut config = ScenarioConfig::default();
        config.constants.eps_fraction = 0.0;
        let s = generate(&config, 11).unwrap();
        assert!(s.eps.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn generated_scenarios_validate_and_are_finite() {
        let config = ScenarioConfig::default();
        for seed in 0..50 {
            let s = generate(&config, seed).unwrap();
            s.validate().unwrap();
            assert!(s.gain_pqes.iter().all(|g| g.is_finite() && *g >= 0.0));
            assert!(s.gain_eve_est.iter().all(|g| g.is_finite() && *g >= 0.0));
            let values = crate::catalog::pqc_cycle_values();
            for c in &s.cycles_per_bit {
                assert!(values.iter().any(|&v| v as f64 == *c), "cycles {c} not in catalog");
            }
        }
    }

    #[test]
    fn mean_task_size_matches_uniform_draw() {
        let mut config = ScenarioConfig::default();
        config.devices = 4;
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..10_000u64 {
            let s = generate(&config, seed).unwrap();
            sum += s.d_bits.iter().sum::<f64>();
            count += s.d_bits.len();
        }
        let mean = sum / count as f64;
        let expected = 30.0 * 8192.0;
        assert!(
            (mean - expected).abs() / expected < 0.01,
            "mean task size {mean} vs expected {expected}"
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = ScenarioConfig::default();
        config.constants.bandwidth_hz = 0.0;
        assert!(generate(&config, 1).is_err());
        let mut config = ScenarioConfig::default();
        config.constants.eps_fraction = 1.0;
        assert!(generate(&config, 1).is_err());
        let mut config = ScenarioConfig::default();
        config.devices = 0;
        assert!(generate(&config, 1).is_err());
    }
}
