//! Transmit-power sub-problem, solved by successive convex approximation.
//!
//! At fixed offload flags and edge shares, minimizing total latency over the
//! powers reduces to: minimize the sum of per-offloader latency thresholds
//! subject to each offloader's secrecy-rate lower bound supporting its rate
//! demand `d / (B (t - t_edge))`, plus the power box. The secrecy bound is a
//! difference of concave log terms in the power vector; the two convexity
//! offenders are replaced by their first-order Taylor expansions around the
//! current anchor, which over-estimate concave functions, so each surrogate
//! constraint set is an inner (safe) approximation of the true one. The
//! resulting convex program is solved with a log-barrier Newton method, the
//! anchor moves to the new optimum, and the loop repeats until the objective
//! settles.
//!
//! Guarantees, relied on elsewhere and asserted in tests:
//! - every surrogate iterate's solution is feasible for the true constraints;
//! - the sequence of surrogate optima is non-increasing (each anchor's
//!   solution stays feasible for the next surrogate);
//! - powers stay strictly inside `[0, p_max]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg;
use crate::math;
use crate::model;
use crate::scenario::Scenario;

const LN2: f64 = core::f64::consts::LN_2;

/// Floor on `t - t_edge` inside the barrier, away from the rate-demand pole.
const T_MARGIN_S: f64 = 1e-9;

/// Transmission slower than the device's own local computation can never be
/// part of a profitable offload, so each slack variable is boxed above by the
/// local latency. Besides pruning useless operating points, the bound keeps
/// the Newton system conditioned when an offloader's rate collapses.
fn slack_cap_s(scn: &Scenario, k: usize) -> f64 {
    let t_local = scn.d_bits[k] * scn.cycles_per_bit[k] / scn.constants.local_cpu_hz;
    t_local.max(1e3 * T_MARGIN_S)
}

/// Minimum workable secrecy rate for device `k`: its demand at just under
/// half the slack cap.
fn rate_floor(scn: &Scenario, k: usize) -> f64 {
    2.2 * scn.d_bits[k] / (scn.constants.bandwidth_hz * slack_cap_s(scn, k))
}

/// Absolute duality-gap target of the final barrier stage, in objective
/// units (seconds). Tight enough that the alternating loop's monotonicity
/// holds well inside its 1e-9 test tolerance.
const BARRIER_GAP_S: f64 = 1e-10;

/// Solver knobs. The defaults are the recorded, reproducible configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaSettings {
    /// Cap on surrogate re-linearizations.
    pub max_sca_iters: usize,
    /// Relative objective-change tolerance between surrogate solves.
    pub sca_tol: f64,
    /// Barrier weight multiplier per stage (> 1).
    pub barrier_mu: f64,
    /// Initial barrier weight.
    pub barrier_t0: f64,
    /// Newton stop tolerance (half squared Newton decrement).
    pub newton_tol: f64,
    /// Cap on Newton steps per barrier stage.
    pub newton_max_steps: usize,
}

impl Default for ScaSettings {
    fn default() -> Self {
        ScaSettings {
            max_sca_iters: 50,
            sca_tol: 1e-6,
            barrier_mu: 10.0,
            barrier_t0: 1.0,
            newton_tol: 1e-8,
            newton_max_steps: 60,
        }
    }
}

/// Affine function anchored at an expansion point:
/// `value = at_anchor + gradient . (p - anchor)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub at_anchor: f64,
    pub gradient: Vec<f64>,
}

impl Affine {
    pub fn eval(&self, p: &[f64], anchor: &[f64]) -> f64 {
        let mut v = self.at_anchor;
        for i in 0..p.len() {
            v += self.gradient[i] * (p[i] - anchor[i]);
        }
        v
    }
}

/// Taylor anchors and the per-device affine over-estimators of the two
/// concave terms that make the rate constraint non-convex.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogatePoint {
    pub p_anchor: Vec<f64>,
    /// Over-estimator of the interference-at-server log term, per device.
    pub j_hat: Vec<Affine>,
    /// Over-estimator of the eavesdropper total-received-power log term.
    pub s_hat: Vec<Affine>,
}

/// `log2` of total received power at the server: the concave rate part kept
/// exact in the surrogate.
pub fn i_term(scn: &Scenario, p: &[f64]) -> f64 {
    let mut a = scn.constants.noise_w;
    for i in 0..scn.devices() {
        a += p[i] * scn.gain_pqes[i];
    }
    math::log2(a)
}

/// `log2` of interference-plus-noise at the server for device `k`.
pub fn j_term(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    let mut a = scn.constants.noise_w;
    for i in 0..scn.devices() {
        if i != k {
            a += p[i] * scn.gain_pqes[i];
        }
    }
    math::log2(a)
}

/// `log2` of worst-case total received power at the eavesdropper for `k`.
pub fn s_term(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    let mut a = scn.constants.noise_w + p[k] * model::eve_gain_plus(scn, k);
    for i in 0..scn.devices() {
        if i != k {
            a += p[i] * model::eve_gain_minus(scn, i);
        }
    }
    math::log2(a)
}

/// `log2` of worst-case jamming-plus-noise at the eavesdropper for `k`: the
/// concave part kept exact.
pub fn w_term(scn: &Scenario, p: &[f64], k: usize) -> f64 {
    let mut a = scn.constants.noise_w;
    for i in 0..scn.devices() {
        if i != k {
            a += p[i] * model::eve_gain_minus(scn, i);
        }
    }
    math::log2(a)
}

/// Builds the affine over-estimators around `p_anchor`. For every `p` in the
/// box the surrogates dominate the true terms (gradient planes of concave
/// functions), with exact equality at the anchor.
pub fn linearize(scn: &Scenario, p_anchor: &[f64]) -> SurrogatePoint {
    let k_all = scn.devices();
    let noise = scn.constants.noise_w;
    let mut j_hat = Vec::with_capacity(k_all);
    let mut s_hat = Vec::with_capacity(k_all);
    for k in 0..k_all {
        let mut denom_j = noise;
        for i in 0..k_all {
            if i != k {
                denom_j += p_anchor[i] * scn.gain_pqes[i];
            }
        }
        let mut grad_j = vec![0.0; k_all];
        for i in 0..k_all {
            if i != k {
                grad_j[i] = scn.gain_pqes[i] / (LN2 * denom_j);
            }
        }
        j_hat.push(Affine { at_anchor: math::log2(denom_j), gradient: grad_j });

        let mut denom_s = noise + p_anchor[k] * model::eve_gain_plus(scn, k);
        for i in 0..k_all {
            if i != k {
                denom_s += p_anchor[i] * model::eve_gain_minus(scn, i);
            }
        }
        let mut grad_s = vec![0.0; k_all];
        for i in 0..k_all {
            let gain = if i == k { model::eve_gain_plus(scn, k) } else { model::eve_gain_minus(scn, i) };
            grad_s[i] = gain / (LN2 * denom_s);
        }
        s_hat.push(Affine { at_anchor: math::log2(denom_s), gradient: grad_s });
    }
    SurrogatePoint { p_anchor: p_anchor.to_vec(), j_hat, s_hat }
}

impl SurrogatePoint {
    /// Surrogate secrecy-rate lower bound for device `k` (unclamped). Never
    /// exceeds the true unclamped bound, and therefore never exceeds the
    /// clamped [`model::secrecy_rate_lb`].
    pub fn rate(&self, scn: &Scenario, p: &[f64], k: usize) -> f64 {
        i_term(scn, p) + w_term(scn, p, k)
            - self.j_hat[k].eval(p, &self.p_anchor)
            - self.s_hat[k].eval(p, &self.p_anchor)
    }
}

/// One surrogate solve in the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaIterRecord {
    /// Total-threshold objective after this surrogate solve, seconds.
    pub objective: f64,
    /// Largest Newton exit residual (half squared decrement) across the
    /// barrier stages of this solve.
    pub max_kkt_residual: f64,
}

/// Result of the power sub-problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Sp1Solution {
    pub power_w: Vec<f64>,
    /// Latency thresholds: tight local latency for non-offloaders, optimized
    /// thresholds for offloaders.
    pub latency_cap_s: Vec<f64>,
    pub trace: Vec<ScaIterRecord>,
}

/// Searches for a power vector giving every offloader a workable secrecy-rate
/// lower bound (enough to meet its demand within the threshold ceiling).
///
/// The given start is tried first, then a family of structured anchors: the
/// offloaders are set so their received powers at the server are equal (a
/// strong-channel offloader otherwise swamps a weak one) and swept down a
/// ten-point ladder, crossed with a ten-point jammer ladder applied either to
/// every jammer or only to the useful ones (louder at the eavesdropper than
/// at the server).
///
/// On failure the error names a victim for the caller to force local:
/// preferably an offloader that cleared its rate floor at no anchor at all,
/// breaking ties (and covering the everyone-passed-somewhere conflict case)
/// by the smallest opportunity cost (local latency minus edge latency).
fn feasible_start(
    scn: &Scenario,
    offload: &[bool],
    p_init: &[f64],
    saving_s: &[f64],
) -> Result<Vec<f64>, Error> {
    let k_all = scn.devices();
    let p_max = scn.constants.p_max_w;
    let floor = p_max * 1e-9;
    let hi = p_max * (1.0 - 1e-9);
    let mut ever_ok = vec![false; k_all];
    let scan = |p: &[f64], ever_ok: &mut [bool]| -> bool {
        let mut all = true;
        for k in 0..k_all {
            if offload[k] {
                if model::secrecy_rate_lb(scn, p, k) > rate_floor(scn, k) {
                    ever_ok[k] = true;
                } else {
                    all = false;
                }
            }
        }
        all
    };
    let clamped: Vec<f64> = p_init.iter().map(|&v| v.clamp(floor, hi)).collect();
    if scan(&clamped, &mut ever_ok) {
        return Ok(clamped);
    }
    let h_max = (0..k_all)
        .filter(|&k| offload[k])
        .fold(0.0_f64, |m, k| m.max(scn.gain_pqes[k]));
    for rx_step in 0..10 {
        let target_rx = p_max * h_max * math::powf(10.0, -(rx_step as f64));
        for jam_step in 0..10 {
            let jam = (p_max * math::powf(10.0, -(jam_step as f64))).clamp(floor, hi);
            for useful_only in [false, true] {
                let p: Vec<f64> = (0..k_all)
                    .map(|i| {
                        if offload[i] {
                            (target_rx / scn.gain_pqes[i]).clamp(floor, hi)
                        } else if !useful_only || model::eve_gain_minus(scn, i) > scn.gain_pqes[i] {
                            jam
                        } else {
                            floor
                        }
                    })
                    .collect();
                if scan(&p, &mut ever_ok) {
                    return Ok(p);
                }
            }
        }
    }
    let victim = (0..k_all)
        .filter(|&k| offload[k])
        .min_by(|&a, &b| {
            ever_ok[a]
                .cmp(&ever_ok[b])
                .then(saving_s[a].total_cmp(&saving_s[b]))
        })
        .expect("at least one offloader");
    Err(Error::InfeasibleStart { device: victim })
}

/// Internal barrier problem: variables are the K powers followed by one slack
/// `u = t - t_edge` per offloader.
struct BarrierProblem<'a> {
    scn: &'a Scenario,
    sp: &'a SurrogatePoint,
    /// Device index of each offloader, in variable order.
    offs: &'a [usize],
    /// Rate demand numerator `d / B` per offloader, seconds.
    d_over_b: Vec<f64>,
    /// Upper bound of each offloader's slack variable, seconds.
    u_caps: Vec<f64>,
}

impl BarrierProblem<'_> {
    fn n(&self) -> usize {
        self.scn.devices() + self.offs.len()
    }

    fn constraint_count(&self) -> usize {
        3 * self.offs.len() + 2 * self.scn.devices()
    }

    /// Surrogate rate-margin constraints; positive means strictly feasible.
    fn rate_slacks(&self, x: &[f64]) -> Vec<f64> {
        let k_all = self.scn.devices();
        self.offs
            .iter()
            .enumerate()
            .map(|(m, &k)| {
                let u = x[k_all + m];
                self.sp.rate(self.scn, &x[..k_all], k) - self.d_over_b[m] / u
            })
            .collect()
    }

    fn strictly_feasible(&self, x: &[f64]) -> bool {
        let k_all = self.scn.devices();
        let p_max = self.scn.constants.p_max_w;
        for i in 0..k_all {
            if !(x[i] > 0.0 && x[i] < p_max) {
                return false;
            }
        }
        for m in 0..self.offs.len() {
            let u = x[k_all + m];
            if !(u > T_MARGIN_S && u < self.u_caps[m]) {
                return false;
            }
        }
        self.rate_slacks(x).iter().all(|&c| c > 0.0 && c.is_finite())
    }

    /// `sum(u) + (1/tau) * barrier`; None outside the strict interior.
    fn value(&self, x: &[f64], tau: f64) -> Option<f64> {
        if !self.strictly_feasible(x) {
            return None;
        }
        let k_all = self.scn.devices();
        let p_max = self.scn.constants.p_max_w;
        let mut obj = 0.0;
        let mut barrier = 0.0;
        for m in 0..self.offs.len() {
            let u = x[k_all + m];
            obj += u;
            barrier -= math::ln(u - T_MARGIN_S) + math::ln(self.u_caps[m] - u);
        }
        for &c in &self.rate_slacks(x) {
            barrier -= math::ln(c);
        }
        for i in 0..k_all {
            barrier -= math::ln(x[i]) + math::ln(p_max - x[i]);
        }
        let v = obj + barrier / tau;
        v.is_finite().then_some(v)
    }

    /// Gradient and Hessian of `value` at a strictly feasible `x`.
    fn derivatives(&self, x: &[f64], tau: f64) -> (Vec<f64>, Vec<f64>) {
        let k_all = self.scn.devices();
        let n = self.n();
        let noise = self.scn.constants.noise_w;
        let p_max = self.scn.constants.p_max_w;
        let inv_tau = 1.0 / tau;
        let mut g = vec![0.0; n];
        let mut h = vec![0.0; n * n];

        // Objective: sum of u.
        for m in 0..self.offs.len() {
            g[k_all + m] += 1.0;
        }

        // Shared total-received-power term.
        let mut a_tot = noise;
        for i in 0..k_all {
            a_tot += x[i] * self.scn.gain_pqes[i];
        }

        let slacks = self.rate_slacks(x);
        // Accumulates sum_m 1/C_m for the shared rank-1 curvature of i_term.
        let mut inv_c_sum = 0.0;

        for (m, &k) in self.offs.iter().enumerate() {
            let c = slacks[m];
            let inv_c = 1.0 / c;
            inv_c_sum += inv_c;
            let u = x[k_all + m];

            let mut d_jam = noise;
            for i in 0..k_all {
                if i != k {
                    d_jam += x[i] * model::eve_gain_minus(self.scn, i);
                }
            }

            // Full gradient of the constraint C_m.
            let mut grad_c = vec![0.0; n];
            for i in 0..k_all {
                let mut v = self.scn.gain_pqes[i] / (LN2 * a_tot);
                if i != k {
                    v += model::eve_gain_minus(self.scn, i) / (LN2 * d_jam);
                }
                v -= self.sp.j_hat[k].gradient[i];
                v -= self.sp.s_hat[k].gradient[i];
                grad_c[i] = v;
            }
            grad_c[k_all + m] = self.d_over_b[m] / math::sq(u);

            // -(1/tau) grad ln C_m.
            for i in 0..n {
                g[i] -= inv_tau * grad_c[i] * inv_c;
            }

            // (1/tau) [ grad grad^T / C^2 - hess(C)/C ].
            for i in 0..n {
                let gi = grad_c[i] * inv_c;
                if gi == 0.0 {
                    continue;
                }
                for j in 0..n {
                    h[i * n + j] += inv_tau * gi * grad_c[j] * inv_c;
                }
            }
            // -hess(C)/C: the jamming-term curvature (rank 1, masked at k)
            // and the u-pole curvature; the shared i_term part is added once
            // below.
            let w_coeff = inv_tau * inv_c / (LN2 * math::sq(d_jam));
            for i in 0..k_all {
                if i == k {
                    continue;
                }
                let gm_i = model::eve_gain_minus(self.scn, i);
                if gm_i == 0.0 {
                    continue;
                }
                for j in 0..k_all {
                    if j != k {
                        h[i * n + j] += w_coeff * gm_i * model::eve_gain_minus(self.scn, j);
                    }
                }
            }
            let ui = k_all + m;
            h[ui * n + ui] += inv_tau * inv_c * 2.0 * self.d_over_b[m] / (u * u * u);

            // Barriers on the slack box.
            let s = u - T_MARGIN_S;
            g[ui] -= inv_tau / s;
            h[ui * n + ui] += inv_tau / math::sq(s);
            let s_hi = self.u_caps[m] - u;
            g[ui] += inv_tau / s_hi;
            h[ui * n + ui] += inv_tau / math::sq(s_hi);
        }

        // Shared i_term curvature: (1/tau) (sum_m 1/C_m) h h^T / (ln2 A^2).
        let i_coeff = inv_tau * inv_c_sum / (LN2 * math::sq(a_tot));
        for i in 0..k_all {
            let hi = self.scn.gain_pqes[i];
            if hi == 0.0 {
                continue;
            }
            for j in 0..k_all {
                h[i * n + j] += i_coeff * hi * self.scn.gain_pqes[j];
            }
        }

        // Power box barriers.
        for i in 0..k_all {
            g[i] -= inv_tau / x[i];
            g[i] += inv_tau / (p_max - x[i]);
            h[i * n + i] += inv_tau * (1.0 / math::sq(x[i]) + 1.0 / math::sq(p_max - x[i]));
        }

        (g, h)
    }
}

enum StageResult {
    /// Final half squared Newton decrement.
    Done(f64),
    /// No feasible descent step found while visibly uncentered.
    Stuck,
    /// The named slack variable ran into its cap (offloader index).
    Evict(usize),
}

/// Damped-Newton minimization of one barrier stage.
fn newton_stage(
    prob: &BarrierProblem,
    x: &mut Vec<f64>,
    tau: f64,
    settings: &ScaSettings,
) -> StageResult {
    let k_all = prob.scn.devices();
    let p_max = prob.scn.constants.p_max_w;
    let mut residual = f64::INFINITY;
    for _ in 0..settings.newton_max_steps {
        for m in 0..prob.offs.len() {
            if x[k_all + m] >= 0.98 * prob.u_caps[m] {
                return StageResult::Evict(m);
            }
        }
        let (g, h) = prob.derivatives(x, tau);
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let step = match linalg::solve_spd(&h, &neg_g) {
            Some(s) => s,
            None => return StageResult::Stuck,
        };
        let decrement_sq: f64 = g.iter().zip(&step).map(|(gi, si)| -gi * si).sum();
        residual = 0.5 * decrement_sq.max(0.0);
        if residual <= settings.newton_tol {
            return StageResult::Done(residual);
        }
        let phi0 = match prob.value(x, tau) {
            Some(v) => v,
            None => return StageResult::Stuck,
        };
        let slope: f64 = g.iter().zip(&step).map(|(gi, si)| gi * si).sum();

        // Fraction-to-boundary start: the box constraints are linear, so the
        // largest step keeping them strict is explicit; only the nonlinear
        // rate slack still needs backtracking.
        let mut alpha: f64 = 1.0;
        for i in 0..k_all {
            if step[i] > 0.0 {
                alpha = alpha.min(0.99 * (p_max - x[i]) / step[i]);
            } else if step[i] < 0.0 {
                alpha = alpha.min(0.99 * x[i] / -step[i]);
            }
        }
        for m in 0..prob.offs.len() {
            let i = k_all + m;
            if step[i] > 0.0 {
                alpha = alpha.min(0.99 * (prob.u_caps[m] - x[i]) / step[i]);
            } else if step[i] < 0.0 {
                alpha = alpha.min(0.99 * (x[i] - T_MARGIN_S) / -step[i]);
            }
        }
        let mut accepted = false;
        if alpha > 0.0 {
            for _ in 0..40 {
                let cand: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + alpha * si).collect();
                if let Some(phi) = prob.value(&cand, tau) {
                    if phi <= phi0 + 1e-4 * alpha * slope {
                        *x = cand;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
        }
        if !accepted {
            // Either centered to floating-point limits (fine) or stuck.
            return if residual <= settings.newton_tol * 1e6 {
                StageResult::Done(residual)
            } else {
                StageResult::Stuck
            };
        }
    }
    StageResult::Done(residual)
}

enum BarrierOutcome {
    /// Worst Newton exit residual across stages and the final barrier weight.
    Solved(f64, f64),
    /// A rate constraint collapsed to floating-point zero: the named
    /// offloader cannot be served together with the rest of the set.
    Pinched(usize),
    Stalled,
}

/// Full barrier schedule for one surrogate problem; `x` is updated in place.
fn barrier_minimize(
    prob: &BarrierProblem,
    x: &mut Vec<f64>,
    settings: &ScaSettings,
    tau_start: f64,
) -> BarrierOutcome {
    let m = prob.constraint_count() as f64;
    let mut tau = tau_start.max(settings.barrier_t0);
    let mut worst = 0.0_f64;
    loop {
        match newton_stage(prob, x, tau, settings) {
            StageResult::Done(residual) => worst = worst.max(residual),
            // A slack variable riding against its cap means that offloader's
            // transmission cannot beat its local run at these powers; it is
            // dead weight that only degrades the conditioning, so it is
            // evicted rather than optimized around.
            StageResult::Evict(m_idx) => return BarrierOutcome::Pinched(prob.offs[m_idx]),
            StageResult::Stuck => {
                let slacks = prob.rate_slacks(x);
                let (m_min, c_min) = slacks
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, &c)| (i, c))
                    .expect("at least one offloader");
                return if c_min < 1e-10 {
                    BarrierOutcome::Pinched(prob.offs[m_min])
                } else {
                    BarrierOutcome::Stalled
                };
            }
        }
        if m / tau <= BARRIER_GAP_S {
            return BarrierOutcome::Solved(worst, tau);
        }
        tau *= settings.barrier_mu;
    }
}

/// Evaluates re-anchoring candidates on the power-box faces (jammers
/// silenced, offloaders maxed, both) at their true tight thresholds. Returns
/// the best strictly feasible candidate as a full variable vector with its
/// objective. Always sound: the true rate equals the surrogate rate at an
/// anchor, so a candidate's objective is attainable by re-linearizing there.
fn best_face_candidate(
    scn: &Scenario,
    offload: &[bool],
    offs: &[usize],
    d_over_b: &[f64],
    t_edge: &[f64],
    p_cur: &[f64],
    local_const: f64,
) -> Option<(Vec<f64>, f64)> {
    let k_all = scn.devices();
    let p_max = scn.constants.p_max_w;
    let floor = p_max * 1e-9;
    let hi = p_max * (1.0 - 1e-9);
    let faces: [Vec<f64>; 3] = [
        (0..k_all).map(|i| if offload[i] { p_cur[i] } else { floor }).collect(),
        (0..k_all).map(|i| if offload[i] { hi } else { p_cur[i] }).collect(),
        (0..k_all).map(|i| if offload[i] { hi } else { floor }).collect(),
    ];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for p in faces {
        let mut obj = local_const;
        let mut u = Vec::with_capacity(offs.len());
        let mut feasible = true;
        for (m, &k) in offs.iter().enumerate() {
            let sr = model::secrecy_rate_lb(scn, &p, k);
            if !(sr > rate_floor(scn, k)) {
                feasible = false;
                break;
            }
            let um = ((1.0 + 1e-9) * d_over_b[m] / sr).max(2.0 * T_MARGIN_S);
            obj += t_edge[m] + um;
            u.push(um);
        }
        if !feasible {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| obj < *b) {
            let mut x = vec![0.0; k_all + offs.len()];
            x[..k_all].copy_from_slice(&p);
            x[k_all..].copy_from_slice(&u);
            best = Some((x, obj));
        }
    }
    best
}

/// Solves the transmit-power sub-problem at fixed offload flags and edge
/// shares. Returns powers, per-device latency thresholds and the SCA trace.
///
/// The returned pair satisfies the true (non-surrogate) constraint: every
/// offloader's secrecy-rate lower bound covers its rate demand at the
/// returned threshold, because the surrogates under-estimate the bound.
pub fn solve_sp1(
    scn: &Scenario,
    offload: &[bool],
    edge_cycles: &[f64],
    p_init: &[f64],
    settings: &ScaSettings,
) -> Result<Sp1Solution, Error> {
    let k_all = scn.devices();
    let bw = scn.constants.bandwidth_hz;
    let offs: Vec<usize> = (0..k_all).filter(|&k| offload[k]).collect();

    let local_caps: Vec<f64> = (0..k_all)
        .map(|k| scn.d_bits[k] * scn.cycles_per_bit[k] / scn.constants.local_cpu_hz)
        .collect();

    if offs.is_empty() {
        // Nothing couples to the powers; thresholds are the local latencies.
        return Ok(Sp1Solution {
            power_w: p_init.to_vec(),
            latency_cap_s: local_caps,
            trace: Vec::new(),
        });
    }

    let mut t_edge = Vec::with_capacity(offs.len());
    let mut saving_s = vec![0.0; k_all];
    for &k in &offs {
        if !(edge_cycles[k] > 0.0) {
            return Err(Error::NonpositiveInput { what: "edge share of an offloader", value: edge_cycles[k] });
        }
        let te = scn.d_bits[k] * scn.cycles_per_bit[k] / edge_cycles[k];
        saving_s[k] = local_caps[k] - te;
        t_edge.push(te);
    }
    let d_over_b: Vec<f64> = offs.iter().map(|&k| scn.d_bits[k] / bw).collect();

    let u_caps: Vec<f64> = offs.iter().map(|&k| slack_cap_s(scn, k)).collect();
    let p0 = feasible_start(scn, offload, p_init, &saving_s)?;
    let mut x = vec![0.0; k_all + offs.len()];
    x[..k_all].copy_from_slice(&p0);
    for (m, &k) in offs.iter().enumerate() {
        let sr = model::secrecy_rate_lb(scn, &p0, k);
        x[k_all + m] = 1.05 * d_over_b[m] / sr;
    }

    let local_const: f64 = (0..k_all).filter(|k| !offload[*k]).map(|k| local_caps[k]).sum();
    let mut trace: Vec<ScaIterRecord> = Vec::new();
    let mut obj_prev = f64::INFINITY;
    let mut tau_start = settings.barrier_t0;

    'sca: for _ in 0..settings.max_sca_iters {
        let anchor = x[..k_all].to_vec();
        let sp = linearize(scn, &anchor);
        // Refresh slacks that sit on the old surrogate's boundary; the new
        // surrogate is tight at the anchor, so a small pad restores strict
        // feasibility without moving the optimum.
        for (m, &k) in offs.iter().enumerate() {
            let rate = sp.rate(scn, &anchor, k);
            debug_assert!(rate > 0.0, "anchor lost feasibility");
            // A demand close to the cap cannot end profitable; evict early
            // rather than squeeze the barrier into the sliver.
            if d_over_b[m] / rate >= 0.9 * u_caps[m] {
                return Err(Error::InfeasibleStart { device: k });
            }
            // The midpoint clamp keeps the refreshed point inside the slack
            // box even when the demand sits just under the cap.
            let u_cur = x[k_all + m];
            let u_min =
                (1.05 * d_over_b[m] / rate.max(f64::MIN_POSITIVE)).min(0.5 * (u_cur + u_caps[m]));
            if u_cur < u_min {
                x[k_all + m] = u_min;
            }
        }
        let prob = BarrierProblem {
            scn,
            sp: &sp,
            offs: &offs,
            d_over_b: d_over_b.clone(),
            u_caps: u_caps.clone(),
        };
        debug_assert!(prob.strictly_feasible(&x), "SCA warm start left the interior");
        let (residual, tau_final) = match barrier_minimize(&prob, &mut x, settings, tau_start) {
            BarrierOutcome::Solved(residual, tau) => (residual, tau),
            BarrierOutcome::Pinched(device) => return Err(Error::InfeasibleStart { device }),
            // Accepted Newton steps are always strictly feasible, so on a
            // stall the current point is a valid, if less polished, solution.
            BarrierOutcome::Stalled => break 'sca,
        };
        // Re-centering from two stages back is enough once the anchor only
        // drifts a little between iterations.
        tau_start = tau_final / (settings.barrier_mu * settings.barrier_mu);

        let mut objective: f64 = local_const
            + (0..offs.len()).map(|m| t_edge[m] + x[k_all + m]).sum::<f64>();

        // Taylor planes are pessimistic away from the anchor, which makes
        // powers heading for a box face crawl there geometrically (a constant
        // objective drop per re-linearization through the log terms). Probe
        // the faces directly: evaluate candidate re-anchorings at their true
        // tight thresholds and jump if strictly better.
        if let Some((cand_x, cand_obj)) =
            best_face_candidate(scn, offload, &offs, &d_over_b, &t_edge, &x[..k_all], local_const)
        {
            // Demand a real improvement; gap-scale wiggles must not cause
            // anchor churn near the fixed point.
            if cand_obj < objective - 0.25 * scn.constants.ao_tol_s {
                x = cand_x;
                objective = cand_obj;
                tau_start = settings.barrier_t0;
            }
        }

        trace.push(ScaIterRecord { objective, max_kkt_residual: residual });
        // Drain until the change clears both the relative tolerance and the
        // alternating loop's absolute threshold; a looser stop here would
        // leave the outer loop harvesting sub-tolerance improvements forever.
        let stop = (settings.sca_tol * obj_prev.abs().max(1.0)).min(0.5 * scn.constants.ao_tol_s);
        if (obj_prev - objective).abs() <= stop {
            break;
        }
        obj_prev = objective;
    }

    let power_w = x[..k_all].to_vec();
    let mut latency_cap_s = local_caps;
    for (m, &k) in offs.iter().enumerate() {
        latency_cap_s[k] = t_edge[m] + x[k_all + m];
        debug_assert!(
            model::secrecy_rate_lb(scn, &power_w, k) * bw * x[k_all + m] >= scn.d_bits[k],
            "surrogate solution violated the true rate constraint"
        );
    }
    Ok(Sp1Solution { power_w, latency_cap_s, trace })
}
