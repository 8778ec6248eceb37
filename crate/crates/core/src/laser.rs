//! Steady-state gain clamping of a single-mode ring laser.
//!
//! Above threshold the saturated gain pins itself to the cavity loss, so the
//! lasing band shows `chi'' = -1/Q` with a linear dispersion, while outside
//! the band the medium keeps its unsaturated Lorentzian response. The
//! combined profile is continuous but has derivative kinks at the band
//! edges; `detect_kinks` locates them and `relax_field` validates the
//! clamped intensity by time-domain relaxation of the field equation.

use crate::error::{require_finite, require_positive, CoreError, Result};
use crate::grid::UniformGrid;
use crate::medium::{susceptibility, MediumParams};

/// Ring-cavity parameters; the cavity linewidth is `Gamma_c = nu0 / Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Cavity quality factor Q.
    pub q_factor: f64,
    /// Resonance angular frequency shared with the medium (rad/s).
    pub nu0: f64,
}

impl CavityParams {
    pub fn new(q_factor: f64, nu0: f64) -> Result<Self> {
        require_positive("q_factor", q_factor)?;
        require_positive("nu0", nu0)?;
        Ok(Self { q_factor, nu0 })
    }

    /// Empty-cavity linewidth `nu0 / Q` (rad/s).
    pub fn gamma_c(&self) -> f64 {
        self.nu0 / self.q_factor
    }
}

/// Detuning interval over which unsaturated gain exceeds cavity loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LasingBand {
    /// Half-width of the band: `Gamma sqrt(QG - 1) / 2` (rad/s).
    pub half_width: f64,
}

impl LasingBand {
    /// Lower band edge as a detuning from line center.
    pub fn nu1_offset(&self) -> f64 {
        -self.half_width
    }

    /// Upper band edge as a detuning from line center.
    pub fn nu2_offset(&self) -> f64 {
        self.half_width
    }
}

/// Returns the lasing band, or `None` when `QG <= 1` (sub-threshold gain,
/// including the zero-measure threshold point itself).
pub fn lasing_band(m: &MediumParams, c: &CavityParams) -> Option<LasingBand> {
    let qg = c.q_factor * m.gain;
    if qg > 1.0 {
        Some(LasingBand {
            half_width: m.gamma * (qg - 1.0).sqrt() / 2.0,
        })
    } else {
        None
    }
}

/// One sample of the piecewise clamped profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedPoint {
    /// Detuning from line center (rad/s).
    pub detuning: f64,
    pub chi_prime: f64,
    pub chi_double_prime: f64,
    /// Squared Rabi frequency of the lasing field (rad^2/s^2), proportional
    /// to intensity; zero outside the band.
    pub omega_sq: f64,
}

/// Evaluates the clamped steady-state profile at one detuning.
///
/// Inside the band: `chi'' = -1/Q`, `chi' = 2 (nu - nu0) / (Q Gamma)`, and
/// `Omega^2 = (QG Gamma^2 - Gamma^2 - 4 (nu - nu0)^2) / 2`; the half comes
/// from the `2 Omega^2` saturation term in the susceptibility denominator,
/// so that `chi''(detuning, Omega^2)` evaluates back to exactly `-1/Q` and
/// the relaxed field dynamics land on the same intensity. Outside (or
/// everywhere when sub-threshold): the unsaturated response with
/// `Omega^2 = 0`.
pub fn clamped_susceptibility(
    m: &MediumParams,
    c: &CavityParams,
    detuning: f64,
) -> Result<ClampedPoint> {
    require_finite("detuning", detuning)?;
    let in_band = lasing_band(m, c).is_some_and(|band| detuning.abs() < band.half_width);
    let (chi_double_prime, omega_sq) = if in_band {
        let g2 = m.gamma * m.gamma;
        let omega_sq = 0.5 * (c.q_factor * m.gain * g2 - g2 - 4.0 * detuning * detuning);
        (-1.0 / c.q_factor, omega_sq.max(0.0))
    } else {
        (susceptibility(m, detuning, 0.0)?.chi_double_prime, 0.0)
    };
    // Same construction as the unclamped case: the ratio chi'/chi'' is
    // -2 (nu - nu0) / Gamma on both branches.
    let chi_prime = -chi_double_prime * (2.0 * detuning / m.gamma);
    Ok(ClampedPoint {
        detuning,
        chi_prime,
        chi_double_prime,
        omega_sq,
    })
}

/// The clamped profile sampled on a uniform detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub grid: UniformGrid,
    pub chi_prime: Vec<f64>,
    pub chi_double_prime: Vec<f64>,
    pub omega_sq: Vec<f64>,
}

/// Samples [`clamped_susceptibility`] over a grid.
pub fn sample_profile(
    m: &MediumParams,
    c: &CavityParams,
    grid: &UniformGrid,
) -> Result<SampledProfile> {
    let n = grid.len();
    let mut chi_prime = Vec::with_capacity(n);
    let mut chi_double_prime = Vec::with_capacity(n);
    let mut omega_sq = Vec::with_capacity(n);
    for x in grid.values() {
        let p = clamped_susceptibility(m, c, x)?;
        chi_prime.push(p.chi_prime);
        chi_double_prime.push(p.chi_double_prime);
        omega_sq.push(p.omega_sq);
    }
    Ok(SampledProfile {
        grid: grid.clone(),
        chi_prime,
        chi_double_prime,
        omega_sq,
    })
}

/// Per-step relative change below which the relaxation is steady.
const RELAX_STEADY_TOL: f64 = 1e-10;

/// Relaxes the intensity-like variable `Omega^2` of the field equation to
/// steady state at a fixed lasing detuning and returns the terminal value.
///
/// The dynamics integrated (4th-order fixed step, `nu ~ nu0` in the loss and
/// gain prefactors) are
/// `d(Omega^2)/dt = -(nu0/Q) Omega^2 - nu0 Omega^2 chi''(detuning, Omega^2)`,
/// whose nonzero fixed point is the clamped intensity. The zero fixed point
/// is unstable above threshold, so the seed `e0_rabi_sq` must be positive.
/// Integration stops once the per-step relative change falls below 1e-10 or
/// `t_max` is reached; a sub-threshold detuning simply decays toward zero and
/// runs out the clock, returning the (tiny) terminal value.
pub fn relax_field(
    m: &MediumParams,
    c: &CavityParams,
    detuning: f64,
    e0_rabi_sq: f64,
    dt: f64,
    t_max: f64,
) -> Result<f64> {
    require_finite("detuning", detuning)?;
    require_positive("e0_rabi_sq", e0_rabi_sq)?;
    require_positive("dt", dt)?;
    require_positive("t_max", t_max)?;
    let rate_scale = c.gamma_c().max(c.nu0 * m.gain / 2.0);
    if dt * rate_scale >= 0.1 {
        return Err(CoreError::invalid(format!(
            "dt {dt} too large for stability: dt * max(Gamma_c, nu0 G / 2) = {} >= 0.1",
            dt * rate_scale
        )));
    }

    let g2 = m.gamma * m.gamma;
    let gamma_c = c.gamma_c();
    // chi'' never needs re-validation inside the loop; inline the closed form.
    let deriv = |w: f64| -> f64 {
        let chi2 = -m.gain * g2 / (2.0 * w + g2 + 4.0 * detuning * detuning);
        -gamma_c * w - c.nu0 * w * chi2
    };

    let mut w = e0_rabi_sq;
    let mut t = 0.0;
    while t < t_max {
        let k1 = deriv(w);
        let k2 = deriv(w + 0.5 * dt * k1);
        let k3 = deriv(w + 0.5 * dt * k2);
        let k4 = deriv(w + dt * k3);
        let next = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(CoreError::NonConvergence(format!(
                "field relaxation blew up at t = {t}; reduce dt"
            )));
        }
        let rel_change = if next == 0.0 {
            0.0
        } else {
            ((next - w) / next).abs()
        };
        w = next;
        t += dt;
        if rel_change < RELAX_STEADY_TOL {
            return Ok(w);
        }
    }
    Ok(w)
}

/// Profile component selector for [`detect_kinks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileComponent {
    ChiPrime,
    ChiDoublePrime,
}

/// Kink threshold relative to the median absolute second difference.
const KINK_MEDIAN_FACTOR: f64 = 20.0;
/// A kink must also stand out locally over nearby second differences,
/// otherwise smooth curvature maxima (a Lorentzian peak on a wide window)
/// or a piecewise-trivial median would trigger.
const KINK_LOCAL_FACTOR: f64 = 8.0;
/// Absolute noise floor in units of eps * max|f|.
const KINK_NOISE_FLOOR: f64 = 100.0;

/// Locates derivative kinks in a sampled profile component.
///
/// A node is flagged when its centered second difference exceeds 20x the
/// median absolute second difference of the profile, exceeds 8x every second
/// difference two and three nodes away, and clears an absolute rounding
/// floor. Adjacent flagged nodes (one kink straddled by two stencils) are
/// merged and reported at the strongest node. Smooth and affine profiles
/// return an empty list.
pub fn detect_kinks(profile: &SampledProfile, which: ProfileComponent) -> Result<Vec<f64>> {
    let f = match which {
        ProfileComponent::ChiPrime => &profile.chi_prime,
        ProfileComponent::ChiDoublePrime => &profile.chi_double_prime,
    };
    let n = f.len();
    if n < 5 {
        return Err(CoreError::invalid(format!(
            "kink detection needs >= 5 nodes, got {n}"
        )));
    }

    let d2: Vec<f64> = (1..n - 1)
        .map(|i| (f[i + 1] - 2.0 * f[i] + f[i - 1]).abs())
        .collect();
    let mut sorted = d2.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite second differences"));
    let median = sorted[sorted.len() / 2];
    let scale = f.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = KINK_NOISE_FLOOR * f64::EPSILON * scale;

    let mut flagged: Vec<usize> = Vec::new();
    for (k, &v) in d2.iter().enumerate() {
        if v <= KINK_MEDIAN_FACTOR * median || v <= floor {
            continue;
        }
        let neighborhood = [k.wrapping_sub(3), k.wrapping_sub(2), k + 2, k + 3]
            .into_iter()
            .filter(|&j| j < d2.len())
            .map(|j| d2[j])
            .fold(0.0f64, f64::max);
        if v > KINK_LOCAL_FACTOR * neighborhood {
            flagged.push(k);
        }
    }

    // Merge runs of adjacent flagged nodes, keeping the strongest of each run.
    let mut kinks = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for k in flagged {
        if run.last().is_some_and(|&last| k == last + 1) || run.is_empty() {
            run.push(k);
        } else {
            kinks.push(best_of_run(&run, &d2));
            run = vec![k];
        }
    }
    if !run.is_empty() {
        kinks.push(best_of_run(&run, &d2));
    }

    Ok(kinks
        .into_iter()
        .map(|k| profile.grid.value(k + 1))
        .collect())
}

fn best_of_run(run: &[usize], d2: &[f64]) -> usize {
    *run.iter()
        .max_by(|&&a, &&b| {
            d2[a]
                .partial_cmp(&d2[b])
                .expect("finite second differences")
        })
        .expect("non-empty run")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::MediumParams;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn fig1_like() -> (MediumParams, CavityParams) {
        let q = 3.8e8;
        let m = MediumParams::new(TAU * 1e9, TAU * 3.8e14, 3.0 / q).unwrap();
        let c = CavityParams::new(q, TAU * 3.8e14).unwrap();
        (m, c)
    }

    #[test]
    fn cavity_linewidth_identity() {
        let (_, c) = fig1_like();
        assert_relative_eq!(c.gamma_c() * c.q_factor, c.nu0, max_relative = 1e-12);
        assert_relative_eq!(c.gamma_c(), TAU * 1e6, max_relative = 1e-12);
    }

    #[test]
    fn band_half_width_closed_form() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        assert_relative_eq!(band.half_width, m.gamma / 2f64.sqrt(), max_relative = 1e-12);
        assert_eq!(band.nu2_offset(), -band.nu1_offset());
    }

    #[test]
    fn threshold_and_subthreshold_do_not_lase() {
        let nu0 = TAU * 3.8e14;
        let q = 3.8e8;
        let c = CavityParams::new(q, nu0).unwrap();
        let at_threshold = MediumParams::new(TAU * 1e9, nu0, 1.0 / q).unwrap();
        assert!(lasing_band(&at_threshold, &c).is_none());
        let below = MediumParams::new(TAU * 1e9, nu0, 0.5 / q).unwrap();
        assert!(lasing_band(&below, &c).is_none());
    }

    #[test]
    fn clamp_on_resonance() {
        // QG = 3: Omega^2(0) = (QG - 1) Gamma^2 / 2 = Gamma^2
        let (m, c) = fig1_like();
        let p = clamped_susceptibility(&m, &c, 0.0).unwrap();
        assert_eq!(p.chi_double_prime, -1.0 / c.q_factor);
        assert_eq!(p.chi_prime, 0.0);
        assert_relative_eq!(p.omega_sq, m.gamma * m.gamma, max_relative = 1e-12);
    }

    #[test]
    fn clamped_intensity_saturates_gain_to_loss() {
        // the reported Omega^2 must reproduce chi'' = -1/Q when fed back
        // through the saturable susceptibility
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        for frac in [0.0, 0.3, 0.7, 0.95] {
            let x = frac * band.half_width;
            let p = clamped_susceptibility(&m, &c, x).unwrap();
            let s = susceptibility(&m, x, p.omega_sq).unwrap();
            assert_relative_eq!(s.chi_double_prime, -1.0 / c.q_factor, max_relative = 1e-12);
        }
    }

    #[test]
    fn clamp_outside_band() {
        // detuning = Gamma lies outside the band for QG = 3
        let (m, c) = fig1_like();
        let p = clamped_susceptibility(&m, &c, m.gamma).unwrap();
        assert_relative_eq!(p.chi_double_prime, -m.gain / 5.0, max_relative = 1e-12);
        assert_relative_eq!(p.chi_prime, 2.0 * m.gain / 5.0, max_relative = 1e-12);
        assert_eq!(p.omega_sq, 0.0);
    }

    #[test]
    fn profile_continuous_at_band_edges() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        for edge in [band.nu1_offset(), band.nu2_offset()] {
            let eps = band.half_width * 1e-9;
            let inside = clamped_susceptibility(&m, &c, edge - edge.signum() * eps).unwrap();
            let outside = clamped_susceptibility(&m, &c, edge + edge.signum() * eps).unwrap();
            assert!((inside.chi_double_prime - outside.chi_double_prime).abs() < 1e-8 * m.gain);
            assert!((inside.chi_prime - outside.chi_prime).abs() < 1e-8 * m.gain);
            // both branches agree exactly on -1/Q at the edge itself
            let sat = susceptibility(&m, edge, 0.0).unwrap();
            assert_relative_eq!(
                sat.chi_double_prime,
                -1.0 / c.q_factor,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn omega_sq_parabola() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        let qg = c.q_factor * m.gain;
        let center = clamped_susceptibility(&m, &c, 0.0).unwrap();
        assert_relative_eq!(
            center.omega_sq,
            0.5 * (qg - 1.0) * m.gamma * m.gamma,
            max_relative = 1e-12
        );
        for frac in [0.25, 0.5, 0.9] {
            let x = frac * band.half_width;
            let p = clamped_susceptibility(&m, &c, x).unwrap();
            assert_relative_eq!(
                p.omega_sq,
                0.5 * (qg - 1.0) * m.gamma * m.gamma - 2.0 * x * x,
                max_relative = 1e-12
            );
            assert!(p.omega_sq > 0.0);
        }
        // vanishes just outside
        let out = clamped_susceptibility(&m, &c, band.half_width * 1.0001).unwrap();
        assert_eq!(out.omega_sq, 0.0);
    }

    #[test]
    fn relax_reaches_clamped_intensity() {
        let (m, c) = fig1_like();
        let dt = 0.05 / (c.gamma_c().max(c.nu0 * m.gain / 2.0));
        let t_max = 4000.0 / c.gamma_c();
        let expected = clamped_susceptibility(&m, &c, 0.0).unwrap().omega_sq;
        let seeds = [1e-3 * m.gamma * m.gamma, 10.0 * m.gamma * m.gamma];
        for seed in seeds {
            let w = relax_field(&m, &c, 0.0, seed, dt, t_max).unwrap();
            assert_relative_eq!(w, expected, max_relative = 1e-3);
        }
    }

    #[test]
    fn relax_decays_outside_band() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        let dt = 0.05 / (c.gamma_c().max(c.nu0 * m.gain / 2.0));
        let t_max = 4000.0 / c.gamma_c();
        let seed = m.gamma * m.gamma;
        let w = relax_field(&m, &c, 1.2 * band.half_width, seed, dt, t_max).unwrap();
        assert!(
            w < 1e-6 * seed,
            "field should decay below 1e-6 of seed, got {w:e}"
        );
    }

    #[test]
    fn relax_rejects_bad_inputs() {
        let (m, c) = fig1_like();
        assert!(relax_field(&m, &c, 0.0, 0.0, 1e-9, 1e-3).is_err());
        // dt far beyond the stability precondition
        assert!(relax_field(&m, &c, 0.0, 1.0, 1.0, 1e-3).is_err());
    }

    #[test]
    fn kinks_found_at_band_edges() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        let grid = UniformGrid::from_bounds(-3.0 * m.gamma, 3.0 * m.gamma, 4001).unwrap();
        let profile = sample_profile(&m, &c, &grid).unwrap();
        for which in [ProfileComponent::ChiPrime, ProfileComponent::ChiDoublePrime] {
            let kinks = detect_kinks(&profile, which).unwrap();
            assert_eq!(kinks.len(), 2, "expected two kinks, got {kinks:?}");
            assert!((kinks[0] + band.half_width).abs() <= grid.step());
            assert!((kinks[1] - band.half_width).abs() <= grid.step());
        }
    }

    #[test]
    fn no_kinks_on_smooth_or_affine_profiles() {
        let (m, c) = fig1_like();
        let grid = UniformGrid::from_bounds(-3.0 * m.gamma, 3.0 * m.gamma, 4001).unwrap();
        // unsaturated Lorentzian everywhere (sub-threshold medium)
        let weak = MediumParams::new(m.gamma, m.nu0, 0.5 / c.q_factor).unwrap();
        let lorentzian = sample_profile(&weak, &c, &grid).unwrap();
        assert!(detect_kinks(&lorentzian, ProfileComponent::ChiDoublePrime)
            .unwrap()
            .is_empty());
        assert!(detect_kinks(&lorentzian, ProfileComponent::ChiPrime)
            .unwrap()
            .is_empty());

        let affine = SampledProfile {
            grid: grid.clone(),
            chi_prime: grid.values().map(|x| 3.7e-19 * x).collect(),
            chi_double_prime: vec![0.0; grid.len()],
            omega_sq: vec![0.0; grid.len()],
        };
        assert!(detect_kinks(&affine, ProfileComponent::ChiPrime)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn kink_detection_needs_five_nodes() {
        let grid = UniformGrid::from_bounds(0.0, 1.0, 3).unwrap();
        let tiny = SampledProfile {
            grid,
            chi_prime: vec![0.0; 3],
            chi_double_prime: vec![0.0; 3],
            omega_sq: vec![0.0; 3],
        };
        assert!(detect_kinks(&tiny, ProfileComponent::ChiPrime).is_err());
    }

    #[test]
    fn first_derivative_jump_matches_closed_form() {
        let (m, c) = fig1_like();
        let band = lasing_band(&m, &c).unwrap();
        let qg = c.q_factor * m.gain;
        // closed-form jump of d(chi')/dnu at the upper edge
        let inside_slope = 2.0 / (c.q_factor * m.gamma);
        let outside_slope = 2.0 * (2.0 - qg) / (c.q_factor * c.q_factor * m.gain * m.gamma);
        let expected_jump = (inside_slope - outside_slope).abs();
        assert!(expected_jump > 0.0);
        // finite differences straddling the edge
        let h = m.gamma * 1e-6;
        let x1 = band.nu2_offset();
        let chi = |x: f64| clamped_susceptibility(&m, &c, x).unwrap().chi_prime;
        let slope_in = (chi(x1 - h) - chi(x1 - 2.0 * h)) / h;
        let slope_out = (chi(x1 + 2.0 * h) - chi(x1 + h)) / h;
        let measured_jump = (slope_in - slope_out).abs();
        assert_relative_eq!(measured_jump, expected_jump, max_relative = 0.01);
    }
}
