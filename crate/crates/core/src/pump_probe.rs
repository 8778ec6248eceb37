//! Probe susceptibility of an incoherently pumped, coherently driven
//! two-level medium.
//!
//! The medium is pumped from the ground state at rate `r_op` (producing
//! inversion when strong), driven by a pump field of Rabi frequency
//! `Omega_1` detuned by `Delta` from the atomic line, and interrogated by a
//! weak probe detuned by `delta` from the pump. The probe susceptibility is
//! computed two independent ways here — a closed form and a 3x3
//! harmonic-balance linear solve — with a third, brute-force time-domain
//! route in [`crate::bloch`]. Convention: `chi = chi' + i chi''` with
//! `chi'' > 0` meaning absorption, so an inverted medium shows `chi'' < 0`
//! (gain) in its far wings.
//!
//! The pump phase is a global gauge, so `Omega_1` is taken real and
//! non-negative throughout.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::cubic::solve_monic_cubic;
use crate::error::{require_finite, require_non_negative, require_positive, CoreError, Result};
use crate::grid::UniformGrid;
use crate::kk::SampledSpectrum;

const I: C64 = C64::new(0.0, 1.0);

/// Complex probe susceptibility at one pump-probe detuning.
pub type ProbeChi = C64;

/// Rates and fields of the pumped, driven two-level medium.
///
/// The composite rates `eta = gamma_ba + r_op/2` (coherence decay including
/// pump broadening) and `theta = r_op + gamma_parallel` (population
/// relaxation including pump) are always recomputed from the stored fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpProbeParams {
    /// Longitudinal decay rate Gamma (rad/s).
    pub gamma_parallel: f64,
    /// Transverse decay rate gamma_ba (rad/s).
    pub gamma_ba: f64,
    /// Incoherent pump rate r_op (rad/s), >= 0.
    pub r_op: f64,
    /// Pump detuning from the atomic line, Delta = nu_1 - omega_ba (rad/s).
    pub delta_pump: f64,
    /// Pump Rabi frequency Omega_1 (rad/s), real and >= 0.
    pub omega1: f64,
    /// Dimensionless gain parameter G.
    pub gain: f64,
}

impl PumpProbeParams {
    pub fn new(
        gamma_parallel: f64,
        gamma_ba: f64,
        r_op: f64,
        delta_pump: f64,
        omega1: f64,
        gain: f64,
    ) -> Result<Self> {
        require_positive("gamma_parallel", gamma_parallel)?;
        require_positive("gamma_ba", gamma_ba)?;
        require_non_negative("r_op", r_op)?;
        require_finite("delta_pump", delta_pump)?;
        require_non_negative("omega1", omega1)?;
        require_positive("gain", gain)?;
        Ok(Self {
            gamma_parallel,
            gamma_ba,
            r_op,
            delta_pump,
            omega1,
            gain,
        })
    }

    /// Coherence decay rate including pump broadening.
    pub fn eta(&self) -> f64 {
        self.gamma_ba + self.r_op / 2.0
    }

    /// Population relaxation rate including pump.
    pub fn theta(&self) -> f64 {
        self.r_op + self.gamma_parallel
    }

    /// Effective Rabi frequency `Omega' = sqrt(Omega_1^2 + Delta^2)`; the
    /// probe sidebands sit at `delta = +-Omega'`.
    pub fn effective_rabi(&self) -> f64 {
        self.omega1.hypot(self.delta_pump)
    }
}

/// Steady state in the presence of the pump alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerothOrder {
    /// Population inversion `n0 = rho_bb - rho_aa`, in [-1, 1].
    pub inversion: f64,
    /// Pump-induced coherence `rho_ba^0`.
    pub coherence: C64,
}

/// Pump-only steady state:
/// `n0 = (r_op - Gamma) / (theta + Omega_1^2 eta / (Delta^2 + eta^2))` and
/// `rho_ba^0 = -(i/2) Omega_1 n0 / (eta - i Delta)`.
pub fn zeroth_order(p: &PumpProbeParams) -> ZerothOrder {
    let eta = p.eta();
    let theta = p.theta();
    let denom = theta + p.omega1 * p.omega1 * eta / (p.delta_pump * p.delta_pump + eta * eta);
    let inversion = (p.r_op - p.gamma_parallel) / denom;
    let coherence = -0.5 * I * p.omega1 * inversion / C64::new(eta, -p.delta_pump);
    ZerothOrder {
        inversion,
        coherence,
    }
}

/// First-harmonic amplitudes of the density matrix under the weak probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicState {
    /// Coefficient of `e^{-i delta t}` in `rho_ba` (the probe-driven dipole).
    pub rho_ba_p1: C64,
    /// Coefficient of `e^{+i delta t}` in `rho_ba` (the four-wave-mixing
    /// counterpart).
    pub rho_ba_m1: C64,
    /// Coefficient of `e^{-i delta t}` in the inversion.
    pub n1: C64,
    /// Coefficient of `e^{+i delta t}` in the inversion, recomputed from its
    /// own balance equation; equals `conj(n1)` because the inversion is real.
    pub n_m1: C64,
    /// Diagnostic ratio |rho_ba_p1| / |rho_ba_0| at the probe amplitude the
    /// solve was run with (not asserted; the expansion assumes it small, and
    /// the ratio scales linearly with that amplitude).
    pub perturbation_ratio: f64,
}

/// Cubic response denominator
/// `P(delta) = (delta + i theta) ((delta + i eta)^2 - Delta^2)
///  - Omega_1^2 (delta + i eta)`.
fn response_denominator(p: &PumpProbeParams, delta: f64) -> C64 {
    let s = C64::new(delta, p.eta());
    let dp = C64::new(delta, p.theta());
    dp * (s * s - p.delta_pump * p.delta_pump) - p.omega1 * p.omega1 * s
}

fn denominator_scale(p: &PumpProbeParams, delta: f64) -> f64 {
    let s = delta.abs() + p.theta() + p.eta() + p.omega1 + p.delta_pump.abs();
    s * s * s
}

/// Closed-form probe susceptibility.
///
/// In the `Omega_1 -> 0` limit this reduces exactly to the linear Lorentzian
/// `chi = G n0 gamma_ba / (Delta + delta + i eta)`. The expression is kept
/// consistent with the harmonic-balance solve ([`probe_chi_solve`]), which
/// acts as its oracle at every parameter set.
pub fn probe_chi_closed(p: &PumpProbeParams, delta: f64) -> Result<ProbeChi> {
    require_finite("delta", delta)?;
    let eta = p.eta();
    let z = zeroth_order(p);
    let denom = response_denominator(p, delta);
    if denom.norm() < 1e-12 * denominator_scale(p, delta) {
        return Err(CoreError::PoleOnRealAxis);
    }
    let o1sq = p.omega1 * p.omega1;
    let correction = o1sq * C64::new(delta, 2.0 * eta) * C64::new(delta - p.delta_pump, eta)
        / (2.0 * C64::new(p.delta_pump, -eta) * denom);
    let prefactor = p.gain * z.inversion * p.gamma_ba / C64::new(p.delta_pump + delta, eta);
    Ok(prefactor * (C64::new(1.0, 0.0) - correction))
}

/// Probe susceptibility from the steady-state harmonic-balance equations,
/// solved as a 3x3 complex linear system with the default internal probe
/// amplitude (which cancels exactly in the returned susceptibility).
pub fn probe_chi_solve(p: &PumpProbeParams, delta: f64) -> Result<(ProbeChi, HarmonicState)> {
    probe_chi_solve_with(p, delta, 1.0)
}

/// Same as [`probe_chi_solve`] with an explicit internal probe Rabi
/// frequency `omega2`; the result is independent of `omega2` up to rounding
/// because the system is linear in the probe.
///
/// Unknowns `(rho_ba^1, conj(rho_ba^-1), n^1)` satisfy
///
/// ```text
/// [eta - i(Delta + delta)] rho_ba^1        = -(i/2)(Omega_1 n^1 + Omega_2 n^0)
/// [eta + i(Delta - delta)] conj(rho_ba^-1) = +(i/2) Omega_1 n^1
/// (theta - i delta) n^1 = i Omega_1 conj(rho_ba^-1) - i Omega_1 rho_ba^1
///                         + i Omega_2 conj(rho_ba^0)
/// ```
///
/// and the susceptibility is `chi = 2 G gamma_ba rho_ba^1 / Omega_2`.
pub fn probe_chi_solve_with(
    p: &PumpProbeParams,
    delta: f64,
    omega2: f64,
) -> Result<(ProbeChi, HarmonicState)> {
    require_finite("delta", delta)?;
    require_positive("omega2", omega2)?;
    let eta = p.eta();
    let theta = p.theta();
    let o1 = p.omega1;
    let z = zeroth_order(p);

    let m = [
        [
            C64::new(eta, -(p.delta_pump + delta)),
            C64::new(0.0, 0.0),
            0.5 * I * o1,
        ],
        [
            C64::new(0.0, 0.0),
            C64::new(eta, p.delta_pump - delta),
            -0.5 * I * o1,
        ],
        [I * o1, -I * o1, C64::new(theta, -delta)],
    ];
    let rhs = [
        -0.5 * I * omega2 * z.inversion,
        C64::new(0.0, 0.0),
        I * omega2 * z.coherence.conj(),
    ];
    let [rho_p1, q, n1] = solve_3x3(m, rhs)?;

    let rho_m1 = q.conj();
    // e^{+i delta t} balance, assembled independently as a reality check on n
    let n_m1 = (I * o1 * rho_p1.conj() - I * o1 * rho_m1 - I * omega2 * z.coherence)
        / C64::new(theta, delta);
    let chi = 2.0 * p.gain * p.gamma_ba * rho_p1 / omega2;
    let perturbation_ratio = if z.coherence.norm() > 0.0 {
        rho_p1.norm() / z.coherence.norm()
    } else {
        f64::INFINITY
    };
    Ok((
        chi,
        HarmonicState {
            rho_ba_p1: rho_p1,
            rho_ba_m1: rho_m1,
            n1,
            n_m1,
            perturbation_ratio,
        },
    ))
}

/// Gaussian elimination with partial pivoting on a 3x3 complex system.
fn solve_3x3(m: [[C64; 3]; 3], rhs: [C64; 3]) -> Result<[C64; 3]> {
    let mut a = [[C64::new(0.0, 0.0); 4]; 3];
    for r in 0..3 {
        a[r][..3].copy_from_slice(&m[r]);
        a[r][3] = rhs[r];
    }
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0f64, f64::max);

    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&r1, &r2| {
                a[r1][col]
                    .norm()
                    .partial_cmp(&a[r2][col].norm())
                    .expect("finite matrix")
            })
            .expect("non-empty range");
        if a[pivot_row][col].norm() < 1e-12 * scale {
            return Err(CoreError::SingularSystem);
        }
        a.swap(col, pivot_row);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot[col];
            for (cell, &p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *cell -= factor * p;
            }
        }
    }

    let mut x = [C64::new(0.0, 0.0); 3];
    for r in (0..3).rev() {
        let mut acc = a[r][3];
        for k in (r + 1)..3 {
            acc -= a[r][k] * x[k];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Poles of the probe response in the complex `delta` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponsePoles {
    pub roots: [C64; 3],
    /// True when every root lies strictly in the lower half plane, i.e. the
    /// response is analytic in the upper half plane and the Kramers-Kronig
    /// relations apply.
    pub stable: bool,
}

/// Roots of the cubic response denominator. For `Omega_1 = 0` the cubic
/// factors exactly into `{-i theta, -Delta - i eta, Delta - i eta}`.
pub fn response_poles(p: &PumpProbeParams) -> ResponsePoles {
    let eta = p.eta();
    let theta = p.theta();
    let rate_sq = eta * eta + p.delta_pump * p.delta_pump;
    let a2 = I * (2.0 * eta + theta);
    let a1 = C64::new(-(rate_sq + 2.0 * eta * theta + p.omega1 * p.omega1), 0.0);
    let a0 = -I * (theta * rate_sq + p.omega1 * p.omega1 * eta);
    let roots = solve_monic_cubic(a2, a1, a0);
    let stable = roots.iter().all(|r| r.im < 0.0);
    ResponsePoles { roots, stable }
}

/// Sweeps the closed-form susceptibility over a detuning grid.
///
/// Refuses parameter sets whose response poles touch or cross the real axis;
/// the steady-state ansatz behind the sweep does not exist there.
pub fn spectrum_sweep(p: &PumpProbeParams, grid: &UniformGrid) -> Result<SampledSpectrum> {
    let poles = response_poles(p);
    let pole_scale = p.theta() + p.eta() + p.effective_rabi();
    if !poles.stable || poles.roots.iter().any(|r| r.im.abs() < 1e-9 * pole_scale) {
        return Err(CoreError::PoleOnRealAxis);
    }
    let mut chi_prime = Vec::with_capacity(grid.len());
    let mut chi_double_prime = Vec::with_capacity(grid.len());
    for delta in grid.values() {
        let chi = probe_chi_closed(p, delta)?;
        chi_prime.push(chi.re);
        chi_double_prime.push(chi.im);
    }
    SampledSpectrum::new(grid.clone(), chi_prime, chi_double_prime)
}

/// Draws a random parameter set with log-uniform rates over
/// `[1e5, 1e9]` rad/s, pump Rabi frequency up to `10 eta`, and unit gain,
/// redrawing until the response is stable with a clear margin from the real
/// axis. Deterministic for a fixed RNG stream.
pub fn random_stable_params<R: Rng>(rng: &mut R) -> PumpProbeParams {
    loop {
        let gamma_parallel = log_uniform(rng, 1e5, 1e9);
        let gamma_ba = log_uniform(rng, 1e5, 1e9);
        let r_op = if rng.random_bool(0.5) {
            log_uniform(rng, 1e5, 1e9)
        } else {
            0.0
        };
        let delta_pump = if rng.random_bool(0.8) {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            sign * log_uniform(rng, 1e5, 1e9)
        } else {
            0.0
        };
        let p = PumpProbeParams::new(gamma_parallel, gamma_ba, r_op, delta_pump, 0.0, 1.0)
            .expect("draw ranges are valid");
        let omega1 = rng.random_range(0.0..10.0 * p.eta());
        let p = PumpProbeParams { omega1, ..p };
        let poles = response_poles(&p);
        let pole_scale = p.theta() + p.eta() + p.effective_rabi();
        if poles.stable && poles.roots.iter().all(|r| r.im.abs() >= 1e-9 * pole_scale) {
            return p;
        }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random_range(0.0..1.0) * (hi / lo).ln()).exp()
}
