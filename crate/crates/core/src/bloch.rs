//! Brute-force time-domain integration of the driven, pumped two-level
//! density matrix.
//!
//! This is the oracle route for the harmonic-balance results in
//! [`crate::pump_probe`]: the full equations of motion for
//! `(rho_ba, rho_bb, rho_aa)` are stepped with a fixed-step 4th-order
//! integrator, the transient is allowed to settle, and the probe-driven
//! dipole component oscillating at `e^{-i delta t}` is extracted by
//! projection over whole probe periods. No harmonic ansatz enters anywhere.

use num_complex::Complex64 as C64;

use crate::error::{require_finite, require_positive, CoreError, Result};
use crate::pump_probe::{ProbeChi, PumpProbeParams};

const I: C64 = C64::new(0.0, 1.0);

/// Default number of characteristic times `1/min(theta, eta)` integrated
/// before projection starts.
pub const DEFAULT_SETTLE: u32 = 30;
/// Default number of probe periods per projection window.
pub const DEFAULT_PROJECT: u32 = 16;
/// Relative agreement required between consecutive projection windows.
const WINDOW_TOL: f64 = 1e-3;
/// Permitted drift of the density-matrix trace away from unity.
const TRACE_TOL: f64 = 1e-9;

/// The fastest rate or frequency in the problem; the step size must resolve it.
fn rate_scale(p: &PumpProbeParams, delta: f64) -> f64 {
    p.gamma_parallel
        .max(p.gamma_ba)
        .max(p.r_op)
        .max(p.eta())
        .max(p.theta())
        .max(p.effective_rabi())
        .max(delta.abs())
}

/// A step size comfortably inside the stability and accuracy margin.
pub fn stable_step(p: &PumpProbeParams, delta: f64) -> f64 {
    0.04 / rate_scale(p, delta)
}

#[derive(Debug, Clone, Copy)]
struct State {
    rho: C64,
    bb: f64,
    aa: f64,
}

impl State {
    fn add_scaled(self, rhs: State, s: f64) -> State {
        State {
            rho: self.rho + rhs.rho * s,
            bb: self.bb + rhs.bb * s,
            aa: self.aa + rhs.aa * s,
        }
    }

    fn is_finite(&self) -> bool {
        self.rho.re.is_finite()
            && self.rho.im.is_finite()
            && self.bb.is_finite()
            && self.aa.is_finite()
    }
}

struct Integrator<'a> {
    p: &'a PumpProbeParams,
    delta: f64,
    omega2: f64,
}

impl Integrator<'_> {
    fn deriv(&self, y: &State, t: f64) -> State {
        let p = self.p;
        let drive = p.omega1 + self.omega2 * C64::from_polar(1.0, -self.delta * t);
        let inversion = y.bb - y.aa;
        let drho = -C64::new(p.gamma_ba + p.r_op / 2.0, -p.delta_pump) * y.rho
            - 0.5 * I * drive * inversion;
        let pump_term = (drive.conj() * y.rho).im;
        let dbb = p.r_op * y.aa - p.gamma_parallel * y.bb + pump_term;
        let daa = -p.r_op * y.aa + p.gamma_parallel * y.bb - pump_term;
        State {
            rho: drho,
            bb: dbb,
            aa: daa,
        }
    }

    fn step(&self, y: State, t: f64, dt: f64) -> State {
        let k1 = self.deriv(&y, t);
        let k2 = self.deriv(&y.add_scaled(k1, 0.5 * dt), t + 0.5 * dt);
        let k3 = self.deriv(&y.add_scaled(k2, 0.5 * dt), t + 0.5 * dt);
        let k4 = self.deriv(&y.add_scaled(k3, dt), t + dt);
        y.add_scaled(k1, dt / 6.0)
            .add_scaled(k2, dt / 3.0)
            .add_scaled(k3, dt / 3.0)
            .add_scaled(k4, dt / 6.0)
    }
}

/// Probe susceptibility extracted from a full time-domain run.
///
/// Starting from the ground state, the dynamics settle for `n_settle`
/// characteristic times `1/min(theta, eta)`, then `rho_ba(t) e^{+i delta t}`
/// is averaged over two consecutive windows of `n_project` probe periods
/// each (trapezoidal weights; the step is snapped so a period is a whole
/// number of steps, making the projection exact against the other
/// harmonics). The two windows must agree to 1e-3 relative, and the trace
/// `rho_bb + rho_aa` is monitored against drift throughout.
pub fn probe_chi_timedomain(
    p: &PumpProbeParams,
    delta: f64,
    omega2: f64,
    dt: f64,
    n_settle: u32,
    n_project: u32,
) -> Result<ProbeChi> {
    require_finite("delta", delta)?;
    require_positive("omega2", omega2)?;
    require_positive("dt", dt)?;
    if delta == 0.0 {
        return Err(CoreError::invalid(
            "probe projection is undefined at delta = 0 (probe degenerate with pump)".to_string(),
        ));
    }
    let probe_cap = 1e-3 * p.omega1.max(p.eta());
    if omega2 > probe_cap {
        return Err(CoreError::invalid(format!(
            "omega2 {omega2} exceeds the perturbative cap 1e-3 max(Omega_1, eta) = {probe_cap}"
        )));
    }
    if dt * rate_scale(p, delta) >= 0.05 {
        return Err(CoreError::invalid(format!(
            "dt {dt} too coarse: dt * fastest scale = {} >= 0.05",
            dt * rate_scale(p, delta)
        )));
    }
    if n_settle == 0 || n_project == 0 {
        return Err(CoreError::invalid(
            "n_settle and n_project must be >= 1".to_string(),
        ));
    }

    // snap the step so one probe period is an integer number of steps
    let period = std::f64::consts::TAU / delta.abs();
    let steps_per_period = (period / dt).ceil() as u64;
    let dt = period / steps_per_period as f64;

    let integrator = Integrator { p, delta, omega2 };
    let mut y = State {
        rho: C64::new(0.0, 0.0),
        bb: 0.0,
        aa: 1.0,
    };
    let mut t = 0.0;

    let tau = 1.0 / p.theta().min(p.eta());
    let settle_steps = (n_settle as f64 * tau / dt).ceil() as u64;
    for _ in 0..settle_steps {
        y = integrator.step(y, t, dt);
        t += dt;
        if !y.is_finite() {
            return Err(CoreError::NonConvergence(format!(
                "state blew up at t = {t}"
            )));
        }
    }
    check_trace(&y)?;

    let window_steps = n_project as u64 * steps_per_period;
    let mut projections = [C64::new(0.0, 0.0); 2];
    for proj in projections.iter_mut() {
        let mut acc = 0.5 * y.rho * C64::from_polar(1.0, delta * t);
        for s in 0..window_steps {
            y = integrator.step(y, t, dt);
            t += dt;
            let weight = if s == window_steps - 1 { 0.5 } else { 1.0 };
            acc += weight * y.rho * C64::from_polar(1.0, delta * t);
        }
        if !y.is_finite() {
            return Err(CoreError::NonConvergence(format!(
                "state blew up at t = {t}"
            )));
        }
        check_trace(&y)?;
        *proj = acc / window_steps as f64;
    }

    let scale = projections[1].norm();
    if scale == 0.0 || (projections[1] - projections[0]).norm() > WINDOW_TOL * scale {
        return Err(CoreError::NonConvergence(format!(
            "projection windows disagree: {} vs {}",
            projections[0], projections[1]
        )));
    }

    Ok(2.0 * p.gain * p.gamma_ba * projections[1] / omega2)
}

/// Pump-only steady inversion from time-domain integration; the independent
/// check on the closed-form zeroth order.
pub fn steady_inversion(p: &PumpProbeParams, dt: f64, t_end: f64) -> Result<f64> {
    require_positive("dt", dt)?;
    require_positive("t_end", t_end)?;
    if dt * rate_scale(p, 0.0) >= 0.05 {
        return Err(CoreError::invalid(format!(
            "dt {dt} too coarse: dt * fastest scale = {} >= 0.05",
            dt * rate_scale(p, 0.0)
        )));
    }
    let integrator = Integrator {
        p,
        delta: 0.0,
        omega2: 0.0,
    };
    let mut y = State {
        rho: C64::new(0.0, 0.0),
        bb: 0.0,
        aa: 1.0,
    };
    let mut t = 0.0;
    while t < t_end {
        y = integrator.step(y, t, dt);
        t += dt;
        if !y.is_finite() {
            return Err(CoreError::NonConvergence(format!(
                "state blew up at t = {t}"
            )));
        }
    }
    check_trace(&y)?;
    Ok(y.bb - y.aa)
}

fn check_trace(y: &State) -> Result<()> {
    let drift = (y.bb + y.aa - 1.0).abs();
    if drift > TRACE_TOL {
        return Err(CoreError::NonConvergence(format!(
            "density-matrix trace drifted by {drift:e}"
        )));
    }
    Ok(())
}
