//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them).
//!
//! Criteria 1-10 live here; criterion 11 (CLI byte-determinism) is in the
//! CLI crate's own acceptance tests.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use lase_kk_core::bloch::{probe_chi_timedomain, stable_step};
use lase_kk_core::kk::{kk_check, lorentzian_pair, SampledSpectrum};
use lase_kk_core::laser::{
    clamped_susceptibility, detect_kinks, lasing_band, relax_field, sample_profile,
    ProfileComponent,
};
use lase_kk_core::medium::susceptibility;
use lase_kk_core::presets::{fig1, preset, Preset, PresetName, ProbePreset};
use lase_kk_core::pump_probe::{
    probe_chi_closed, probe_chi_solve, random_stable_params, response_poles, spectrum_sweep,
    zeroth_order, PumpProbeParams,
};
use lase_kk_core::UniformGrid;

fn probe(name: PresetName) -> ProbePreset {
    match preset(name) {
        Preset::Probe(p) => p,
        Preset::Laser(_) => panic!("{name} is not a probe preset"),
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Midpoint samples of [-span, span], never hitting zero for even counts.
fn midpoints(span: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| -span + (k as f64 + 0.5) * (2.0 * span / count as f64))
        .collect()
}

#[test]
fn acceptance_01_lasing_band() {
    let p = fig1();
    let band = lasing_band(&p.medium, &p.cavity).expect("QG = 3 lases");
    let closed = p.medium.gamma / 2f64.sqrt();
    let rel_closed = (band.half_width - closed).abs() / closed;
    assert!(
        rel_closed < 1e-12,
        "half-width vs closed form: {rel_closed:e}"
    );

    // independent oracle: bisection on chi''(x, 0) = -1/Q over [0, 3 Gamma]
    let target = -1.0 / p.cavity.q_factor;
    let f = |x: f64| susceptibility(&p.medium, x, 0.0).unwrap().chi_double_prime - target;
    let (mut lo, mut hi) = (0.0, 3.0 * p.medium.gamma);
    assert!(
        f(lo) < 0.0 && f(hi) > 0.0,
        "bracket must straddle the band edge"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);
    let rel_bisect = (band.half_width - bisected).abs() / bisected;
    assert!(rel_bisect < 1e-6, "half-width vs bisection: {rel_bisect:e}");
    println!(
        "ACCEPTANCE  1 PASS: half_width = {:.6e} rad/s; vs closed form {rel_closed:.2e}, vs bisection {rel_bisect:.2e}",
        band.half_width
    );
}

#[test]
fn acceptance_02_clamp_continuity_and_kinks() {
    let p = fig1();
    let band = lasing_band(&p.medium, &p.cavity).unwrap();
    let mut worst_jump = 0.0f64;
    for edge in [band.nu1_offset(), band.nu2_offset()] {
        let just_in = edge * (1.0 - 1e-13);
        let just_out = edge * (1.0 + 1e-13);
        let a = clamped_susceptibility(&p.medium, &p.cavity, just_in).unwrap();
        let b = clamped_susceptibility(&p.medium, &p.cavity, just_out).unwrap();
        worst_jump = worst_jump
            .max((a.chi_double_prime - b.chi_double_prime).abs())
            .max((a.chi_prime - b.chi_prime).abs());
    }
    assert!(
        worst_jump < 1e-12 * p.medium.gain,
        "edge jump {worst_jump:e}"
    );

    let grid = p.profile_grid();
    assert_eq!(grid.len(), 4001);
    let profile = sample_profile(&p.medium, &p.cavity, &grid).unwrap();
    let mut kink_summary = Vec::new();
    for which in [ProfileComponent::ChiPrime, ProfileComponent::ChiDoublePrime] {
        let kinks = detect_kinks(&profile, which).unwrap();
        assert_eq!(
            kinks.len(),
            2,
            "{which:?}: expected exactly two kinks, got {kinks:?}"
        );
        for (kink, edge) in kinks.iter().zip([band.nu1_offset(), band.nu2_offset()]) {
            let steps = (kink - edge).abs() / grid.step();
            assert!(steps <= 1.0, "{which:?} kink {steps} grid steps from edge");
            kink_summary.push(steps);
        }
    }
    println!(
        "ACCEPTANCE  2 PASS: edge jump {worst_jump:.2e} (< 1e-12 G = {:.2e}); kinks at {:.2?} grid steps from band edges",
        1e-12 * p.medium.gain,
        kink_summary
    );
}

#[test]
fn acceptance_03_dynamic_gain_clamping() {
    let start = Instant::now();
    let p = fig1();
    let band = lasing_band(&p.medium, &p.cavity).unwrap();
    let gamma_c = p.cavity.gamma_c();
    let dt = 0.05 / gamma_c.max(p.cavity.nu0 * p.medium.gain / 2.0);
    let t_max = 4000.0 / gamma_c;
    let seed = p.medium.gamma * p.medium.gamma;

    let mut worst_in_band = 0.0f64;
    for k in 0..20 {
        let x = -0.9 * band.half_width + k as f64 * (1.8 * band.half_width / 19.0);
        let expected = clamped_susceptibility(&p.medium, &p.cavity, x)
            .unwrap()
            .omega_sq;
        let w = relax_field(&p.medium, &p.cavity, x, seed, dt, t_max).unwrap();
        worst_in_band = worst_in_band.max((w - expected).abs() / expected);
    }
    assert!(
        worst_in_band < 1e-3,
        "in-band relaxation error {worst_in_band:e}"
    );

    let mut worst_out = 0.0f64;
    for mult in [1.2, 1.35, 1.5, 2.0, 3.0] {
        let w = relax_field(
            &p.medium,
            &p.cavity,
            mult * band.half_width,
            seed,
            dt,
            t_max,
        )
        .unwrap();
        worst_out = worst_out.max(w / seed);
    }
    assert!(
        worst_out < 1e-6,
        "out-of-band residual field {worst_out:e} of seed"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "runtime {elapsed:?} exceeds 30 s");
    println!(
        "ACCEPTANCE  3 PASS: 20 in-band relaxations match closed form to {worst_in_band:.2e}; out-of-band decay to {worst_out:.2e} of seed; runtime {elapsed:.2?}"
    );
}

#[test]
fn acceptance_04_oracle_triangle() {
    let start = Instant::now();
    let presets = [
        PresetName::Fig4a,
        PresetName::Fig4b,
        PresetName::Fig4c,
        PresetName::Fig4d,
    ];

    let mut worst_closed_solve = 0.0f64;
    let mut worst_td = 0.0f64;
    for name in presets {
        let pp = probe(name);
        let op = pp.params.effective_rabi();
        for delta in midpoints(5.0 * op, 32) {
            let closed = probe_chi_closed(&pp.params, delta).unwrap();
            let (solved, _) = probe_chi_solve(&pp.params, delta).unwrap();
            worst_closed_solve = worst_closed_solve.max(rel(closed, solved));
        }
        for mult in [-2.4, -1.1, 0.45, 1.3, 2.2] {
            let delta = mult * op;
            let (solved, _) = probe_chi_solve(&pp.params, delta).unwrap();
            let omega2 = 1e-4 * pp.params.omega1.max(pp.params.eta());
            let td = probe_chi_timedomain(
                &pp.params,
                delta,
                omega2,
                stable_step(&pp.params, delta),
                30,
                16,
            )
            .unwrap();
            worst_td = worst_td.max(rel(td, solved));
        }
    }
    assert!(
        worst_closed_solve <= 1e-10,
        "preset closed-vs-solve {worst_closed_solve:e}"
    );
    assert!(worst_td <= 1e-3, "preset solve-vs-timedomain {worst_td:e}");

    let mut rng = ChaCha12Rng::seed_from_u64(42);
    let mut worst_random = 0.0f64;
    for _ in 0..100 {
        let params = random_stable_params(&mut rng);
        let span = 10.0 * params.effective_rabi().max(params.eta());
        for delta in midpoints(span, 32) {
            let closed = probe_chi_closed(&params, delta).unwrap();
            let (solved, _) = probe_chi_solve(&params, delta).unwrap();
            worst_random = worst_random.max(rel(closed, solved));
        }
    }
    assert!(
        worst_random <= 1e-10,
        "random-draw closed-vs-solve {worst_random:e}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "runtime {elapsed:?} exceeds 2 min");
    println!(
        "ACCEPTANCE  4 PASS: closed-vs-solve {worst_closed_solve:.2e} (presets), {worst_random:.2e} (100 seeded draws); solve-vs-timedomain {worst_td:.2e}; runtime {elapsed:.2?}"
    );
}

#[test]
fn acceptance_05_linear_limit_collapse() {
    let mut worst = 0.0f64;
    for name in [
        PresetName::Fig4a,
        PresetName::Fig4b,
        PresetName::Fig4c,
        PresetName::Fig4d,
    ] {
        let base = probe(name).params;
        let eta0 = base.gamma_ba + base.r_op / 2.0;
        let weak = PumpProbeParams {
            omega1: 1e-4 * eta0,
            ..base
        };
        let eta = weak.eta();
        let n0 = zeroth_order(&weak).inversion;
        let span = 5.0 * probe(name).params.effective_rabi();
        let grid = UniformGrid::from_bounds(-span, span, 513).unwrap();
        for delta in grid.values() {
            let full = probe_chi_closed(&weak, delta).unwrap();
            let lorentzian =
                weak.gain * n0 * weak.gamma_ba / C64::new(weak.delta_pump + delta, eta);
            worst = worst.max(rel(full, lorentzian));
        }
    }
    assert!(worst <= 1e-6, "linear-limit deviation {worst:e}");
    println!("ACCEPTANCE  5 PASS: sup-norm deviation from the Lorentzian limit {worst:.2e} at Omega_1 = 1e-4 eta");
}

/// Sideband feature locations read off the extremal structure of chi''.
///
/// For each half-axis, local extrema with |delta| > 0.3 Omega' are ranked by
/// magnitude; when the two dominant ones form an opposite-signed pair
/// (dispersive lineshape, resonant-pump case) the feature sits at their
/// midpoint, otherwise at the dominant extremum (absorptive/emissive peak).
fn sideband_locations(spectrum: &SampledSpectrum, op: f64) -> (f64, f64) {
    let mut per_side = [0.0f64, 0.0];
    for (side, loc) in per_side.iter_mut().enumerate() {
        let sign = if side == 0 { -1.0 } else { 1.0 };
        let mut extrema: Vec<(f64, f64)> = Vec::new();
        let im = &spectrum.chi_double_prime;
        for j in 1..spectrum.grid.len() - 1 {
            let x = spectrum.grid.value(j);
            if sign * x < 0.3 * op {
                continue;
            }
            if (im[j] - im[j - 1]) * (im[j + 1] - im[j]) < 0.0 {
                extrema.push((x, im[j]));
            }
        }
        extrema.sort_by(|a, b| b.1.abs().partial_cmp(&a.1.abs()).unwrap());
        assert!(
            !extrema.is_empty(),
            "no sideband extrema found on side {side}"
        );
        let dominant = extrema[0];
        *loc = if extrema.len() >= 2 {
            let second = extrema[1];
            let paired = second.1.abs() >= 0.25 * dominant.1.abs()
                && second.1.signum() != dominant.1.signum();
            if paired {
                0.5 * (dominant.0 + second.0)
            } else {
                dominant.0
            }
        } else {
            dominant.0
        };
    }
    (per_side[0], per_side[1])
}

#[test]
fn acceptance_06_mollow_structure() {
    let a = probe(PresetName::Fig4a);
    let op = a.params.effective_rabi();
    let sweep = spectrum_sweep(&a.params, &a.sweep_grid()).unwrap();
    let (left, right) = sideband_locations(&sweep, op);
    let err_left = (left + op).abs() / op;
    let err_right = (right - op).abs() / op;
    assert!(
        err_left <= 0.10,
        "left sideband {err_left:.3} away from -Omega'"
    );
    assert!(
        err_right <= 0.10,
        "right sideband {err_right:.3} away from +Omega'"
    );

    // gain/absorption inversion: chi'' at delta = +-Omega' flips sign
    // between the uninverted and inverted medium, for both pump detunings
    let mut flips = Vec::new();
    for (lo_name, hi_name) in [
        (PresetName::Fig4a, PresetName::Fig4b),
        (PresetName::Fig4c, PresetName::Fig4d),
    ] {
        let lo = probe(lo_name).params;
        let hi = probe(hi_name).params;
        let op = lo.effective_rabi();
        for delta in [-op, op] {
            let chi_lo = probe_chi_closed(&lo, delta).unwrap().im;
            let chi_hi = probe_chi_closed(&hi, delta).unwrap().im;
            assert!(
                chi_lo.signum() == -chi_hi.signum(),
                "no sign flip between {lo_name} and {hi_name} at delta = {delta:e}: {chi_lo:e} vs {chi_hi:e}"
            );
            flips.push((chi_lo.signum(), chi_hi.signum()));
        }
    }
    println!(
        "ACCEPTANCE  6 PASS: fig4a sidebands at {:.3} / {:+.3} Omega' (within 10%); chi'' signs at +-Omega' flip a<->b and c<->d {flips:?}",
        left / op,
        right / op
    );
}

#[test]
fn acceptance_07_kk_holds_on_probe_spectra() {
    let mut summary = Vec::new();
    for name in [PresetName::Fig4a, PresetName::Fig4b] {
        let pp = probe(name);
        let spectrum = spectrum_sweep(&pp.params, &pp.kk_grid()).unwrap();
        assert_eq!(spectrum.grid.len(), 1 << 14);
        let report = kk_check(&spectrum).unwrap();
        assert!(
            report.rel_l2_forward < 0.01,
            "{name}: forward residual {}",
            report.rel_l2_forward
        );
        assert!(
            report.rel_l2_backward < 0.01,
            "{name}: backward residual {}",
            report.rel_l2_backward
        );
        summary.push(format!(
            "{name} fwd {:.2e} / bwd {:.2e}",
            report.rel_l2_forward, report.rel_l2_backward
        ));
    }
    println!(
        "ACCEPTANCE  7 PASS: rel_l2 residuals < 0.01 on both directions ({})",
        summary.join("; ")
    );
}

#[test]
fn acceptance_08_kk_fails_on_clamped_profile() {
    // reference residual: fig4a on its own density-matched grid
    let a = probe(PresetName::Fig4a);
    let ref_report = kk_check(&spectrum_sweep(&a.params, &a.kk_grid()).unwrap()).unwrap();

    let p = fig1();
    let grid = p.kk_grid();
    let profile = sample_profile(&p.medium, &p.cavity, &grid).unwrap();
    let spectrum = SampledSpectrum::new(
        grid.clone(),
        profile.chi_prime.clone(),
        profile.chi_double_prime.clone(),
    )
    .unwrap();
    let report = kk_check(&spectrum).unwrap();
    let ratio = report.rel_l2_forward / ref_report.rel_l2_forward;
    assert!(
        ratio > 10.0,
        "clamped/probe residual ratio {ratio:.1} <= 10"
    );

    // the two largest forward residuals sit on the detected kinks
    let kinks = detect_kinks(&profile, ProfileComponent::ChiPrime).unwrap();
    assert_eq!(kinks.len(), 2);
    let kink_nodes: Vec<usize> = kinks.iter().map(|&k| grid.index_nearest(k)).collect();
    let mut residuals: Vec<(usize, f64)> = (report.eval_lo..=report.eval_hi)
        .map(|j| (j, report.residual_chi_prime[j].abs()))
        .collect();
    residuals.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut peak_steps = Vec::new();
    for &(node, _) in residuals.iter().take(2) {
        let steps = kink_nodes
            .iter()
            .map(|&k| (k as i64 - node as i64).unsigned_abs())
            .min()
            .unwrap();
        assert!(
            steps <= 2,
            "residual peak at node {node} is {steps} steps from the kinks"
        );
        peak_steps.push(steps);
    }
    println!(
        "ACCEPTANCE  8 PASS: clamped-profile rel_l2 forward {:.3} = {ratio:.0}x the fig4a value; top-2 residuals {peak_steps:?} steps from detected kinks",
        report.rel_l2_forward
    );
}

#[test]
fn acceptance_09_hilbert_engine_calibration() {
    let eta = 1.0;
    let fine_grid = UniformGrid::from_bounds(-50.0, 50.0, 4096).unwrap();
    let fine = kk_check(&lorentzian_pair(eta, &fine_grid).unwrap()).unwrap();
    assert!(
        fine.rel_l2_forward < 1e-3,
        "forward {}",
        fine.rel_l2_forward
    );
    assert!(
        fine.rel_l2_backward < 1e-3,
        "backward {}",
        fine.rel_l2_backward
    );

    // involution: applying the transform twice negates the input
    let s = lorentzian_pair(eta, &fine_grid).unwrap();
    let (lo, hi) = fine_grid.central_range(0.6);
    let eval1: Vec<f64> = (lo..=hi).map(|j| fine_grid.value(j)).collect();
    let once = lase_kk_core::hilbert_pv(
        &fine_grid,
        &s.chi_double_prime,
        &eval1,
        lase_kk_core::TailExponent::Two,
    )
    .unwrap();
    let inner = UniformGrid::from_bounds(eval1[0], eval1[eval1.len() - 1], eval1.len()).unwrap();
    let (lo2, hi2) = inner.central_range(0.6);
    let eval2: Vec<f64> = (lo2..=hi2).map(|j| inner.value(j)).collect();
    let twice =
        lase_kk_core::hilbert_pv(&inner, &once, &eval2, lase_kk_core::TailExponent::One).unwrap();
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, j) in (lo2..=hi2).enumerate() {
        let truth = -s.chi_double_prime[lo + j];
        num += (twice[k] - truth) * (twice[k] - truth);
        den += truth * truth;
    }
    let involution = (num / den).sqrt();
    assert!(involution < 5e-3, "involution error {involution:e}");

    // halving the grid step (2048 -> 4096 on the same window) must improve
    // the quadrature-limited forward residual by at least 3x
    let coarse_grid = UniformGrid::from_bounds(-50.0, 50.0, 2048).unwrap();
    let coarse = kk_check(&lorentzian_pair(eta, &coarse_grid).unwrap()).unwrap();
    let factor = coarse.rel_l2_forward / fine.rel_l2_forward;
    assert!(factor >= 3.0, "refinement factor {factor:.2} < 3");
    println!(
        "ACCEPTANCE  9 PASS: Lorentzian rel_l2 fwd {:.2e} / bwd {:.2e}; involution {involution:.2e}; halving h improves forward by {factor:.1}x",
        fine.rel_l2_forward, fine.rel_l2_backward
    );
}

#[test]
fn acceptance_10_stability_gate() {
    for name in [
        PresetName::Fig4a,
        PresetName::Fig4b,
        PresetName::Fig4c,
        PresetName::Fig4d,
    ] {
        let pp = probe(name);
        let poles = response_poles(&pp.params);
        assert!(poles.stable, "{name}: poles {:?}", poles.roots);
        assert!(poles.roots.iter().all(|r| r.im < 0.0));
    }

    // exact factorization at Omega_1 = 0 with distinct roots
    let base = probe(PresetName::Fig4c).params;
    let p = PumpProbeParams {
        omega1: 0.0,
        ..base
    };
    let poles = response_poles(&p);
    let expected = [
        C64::new(0.0, -p.theta()),
        C64::new(-p.delta_pump, -p.eta()),
        C64::new(p.delta_pump, -p.eta()),
    ];
    let scale = p.theta().max(p.effective_rabi());
    let mut worst = 0.0f64;
    for e in expected {
        let dist = poles
            .roots
            .iter()
            .map(|r| (r - e).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(dist / scale);
    }
    assert!(worst <= 1e-12, "factorization deviation {worst:e}");
    println!(
        "ACCEPTANCE 10 PASS: all Fig. 4 presets stable (poles in lower half plane); Omega_1 = 0 factorization exact to {worst:.2e}"
    );
}
