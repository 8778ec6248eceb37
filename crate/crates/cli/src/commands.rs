//! The four subcommands: resolution of effective parameters, computation,
//! and deterministic file/stdout emission.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use lase_kk_core::bloch::{probe_chi_timedomain, stable_step};
use lase_kk_core::kk::kk_check;
use lase_kk_core::laser::{detect_kinks, lasing_band, sample_profile, ProfileComponent};
use lase_kk_core::presets::{fig1, preset, LaserPreset, Preset, ProbePreset};
use lase_kk_core::pump_probe::{
    probe_chi_closed, probe_chi_solve, random_stable_params, response_poles, spectrum_sweep,
};
use lase_kk_core::{
    CavityParams, MediumParams, PresetName, PumpProbeParams, SampledSpectrum, UniformGrid,
};

use crate::config::RunConfig;
use crate::csvio::{read_spectrum, render_table, write_file};
use crate::error::{CliError, CliResult};
use crate::svg::{render, Panel};

const CLOSED_VS_SOLVE_BOUND: f64 = 1e-10;
const SOLVE_VS_TIMEDOMAIN_BOUND: f64 = 1e-3;
/// Probe detunings for the time-domain leg, in units of the effective Rabi
/// frequency (never zero: the projection needs a beat note).
const TIMEDOMAIN_DELTAS: [f64; 5] = [-2.4, -1.1, 0.45, 1.3, 2.2];

/// Joins relative output paths onto `LASE_KK_OUT_DIR` when it is set.
fn resolve_out(requested: Option<&Path>, default_name: &str) -> PathBuf {
    let raw = requested.map_or_else(|| PathBuf::from(default_name), Path::to_path_buf);
    if raw.is_absolute() {
        return raw;
    }
    match std::env::var_os("LASE_KK_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(raw),
        None => raw,
    }
}

fn sibling_with_suffix(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

/// Laser scenario after preset + override resolution.
struct LaserScenario {
    medium: MediumParams,
    cavity: CavityParams,
    grid: UniformGrid,
}

fn resolve_laser(cfg: &RunConfig) -> CliResult<LaserScenario> {
    match cfg.preset {
        None | Some(PresetName::Fig1) => {}
        Some(other) => {
            return Err(CliError::Validation(format!(
                "preset '{other}' is a pump-probe scenario; laser-profile needs fig1 or explicit parameters"
            )))
        }
    }
    let base = fig1();
    let gamma = cfg.gamma.unwrap_or(base.medium.gamma);
    let q = cfg.q.unwrap_or(base.cavity.q_factor);
    let gain = match cfg.gq {
        Some(gq) => {
            if gq <= 0.0 {
                return Err(CliError::Validation(format!("--gq must be > 0, got {gq}")));
            }
            gq / q
        }
        None => base.medium.gain,
    };
    let medium = MediumParams::new(gamma, base.medium.nu0, gain)?;
    let cavity = CavityParams::new(q, base.cavity.nu0)?;

    let default_grid = LaserPreset { medium, cavity }.profile_grid();
    let grid = UniformGrid::from_bounds(
        cfg.grid_min.unwrap_or(default_grid.min()),
        cfg.grid_max.unwrap_or(default_grid.max()),
        cfg.grid_n.unwrap_or(default_grid.len()),
    )?;
    Ok(LaserScenario {
        medium,
        cavity,
        grid,
    })
}

/// Probe scenario after preset + override resolution.
fn resolve_probe(cfg: &RunConfig) -> CliResult<PumpProbeParams> {
    let name = cfg.preset.unwrap_or(PresetName::Fig4a);
    let base = match preset(name) {
        Preset::Probe(p) => p.params,
        Preset::Laser(_) => return Err(CliError::Validation(
            "preset 'fig1' is the laser scenario; pick fig4a..fig4d or give explicit parameters"
                .to_string(),
        )),
    };
    Ok(PumpProbeParams::new(
        cfg.gamma.unwrap_or(base.gamma_parallel),
        cfg.gamma_ba.unwrap_or(base.gamma_ba),
        cfg.r_op.unwrap_or(base.r_op),
        cfg.delta_pump.unwrap_or(base.delta_pump),
        cfg.omega1.unwrap_or(base.omega1),
        base.gain,
    )?)
}

fn probe_sweep_grid(cfg: &RunConfig, params: &PumpProbeParams) -> CliResult<UniformGrid> {
    let default_grid = ProbePreset { params: *params }.sweep_grid();
    Ok(UniformGrid::from_bounds(
        cfg.grid_min.unwrap_or(default_grid.min()),
        cfg.grid_max.unwrap_or(default_grid.max()),
        cfg.grid_n.unwrap_or(default_grid.len()),
    )?)
}

/// Effective configuration echoed by `--dump-config`.
fn effective_laser_config(cfg: &RunConfig, s: &LaserScenario, out: &Path) -> RunConfig {
    RunConfig {
        preset: cfg.preset,
        out: Some(out.to_path_buf()),
        svg: Some(cfg.svg.unwrap_or(false)),
        grid_min: Some(s.grid.min()),
        grid_max: Some(s.grid.max()),
        grid_n: Some(s.grid.len()),
        gamma: Some(s.medium.gamma),
        q: Some(s.cavity.q_factor),
        gq: Some(s.cavity.q_factor * s.medium.gain),
        ..Default::default()
    }
}

fn effective_probe_config(
    cfg: &RunConfig,
    p: &PumpProbeParams,
    grid: Option<&UniformGrid>,
    out: &Path,
) -> RunConfig {
    RunConfig {
        preset: Some(cfg.preset.unwrap_or(PresetName::Fig4a)),
        out: Some(out.to_path_buf()),
        svg: Some(cfg.svg.unwrap_or(false)),
        oracles: Some(cfg.oracles.unwrap_or(false)),
        seed: cfg.seed,
        random: cfg.random,
        deltas: cfg.deltas,
        kk_window_mult: cfg.kk_window_mult,
        input: cfg.input.clone(),
        grid_min: grid.map(UniformGrid::min),
        grid_max: grid.map(UniformGrid::max),
        grid_n: grid.map(UniformGrid::len),
        gamma: Some(p.gamma_parallel),
        gamma_ba: Some(p.gamma_ba),
        r_op: Some(p.r_op),
        delta_pump: Some(p.delta_pump),
        omega1: Some(p.omega1),
        ..Default::default()
    }
}

fn maybe_dump(dump_path: Option<&Path>, command: &str, effective: &RunConfig) -> CliResult<()> {
    if let Some(path) = dump_path {
        write_file(path, &effective.dump(command))?;
    }
    Ok(())
}

pub fn laser_profile(cfg: &RunConfig, dump: Option<&Path>) -> CliResult<()> {
    let scenario = resolve_laser(cfg)?;
    let out = resolve_out(cfg.out.as_deref(), "laser_profile.csv");
    maybe_dump(
        dump,
        "laser-profile",
        &effective_laser_config(cfg, &scenario, &out),
    )?;

    let profile = sample_profile(&scenario.medium, &scenario.cavity, &scenario.grid)?;
    let xs: Vec<f64> = scenario.grid.values().collect();
    let table = render_table(
        &[
            "detuning_rad_per_s",
            "chi_prime_dimensionless",
            "chi_double_prime_dimensionless",
            "omega_sq_rad_per_s_sq",
        ],
        &[
            &xs,
            &profile.chi_prime,
            &profile.chi_double_prime,
            &profile.omega_sq,
        ],
    );
    write_file(&out, &table)?;

    let kinks_prime = detect_kinks(&profile, ProfileComponent::ChiPrime)?;
    let kinks_double = detect_kinks(&profile, ProfileComponent::ChiDoublePrime)?;
    let mut kink_text = String::from("component,detuning_rad_per_s\n");
    for k in &kinks_prime {
        kink_text.push_str(&format!("chi_prime,{k}\n"));
    }
    for k in &kinks_double {
        kink_text.push_str(&format!("chi_double_prime,{k}\n"));
    }
    let kink_path = sibling_with_suffix(&out, "_kinks", "csv");
    write_file(&kink_path, &kink_text)?;

    if cfg.svg.unwrap_or(false) {
        let series = |ys: &[f64], flip: bool| -> Vec<(f64, f64)> {
            xs.iter()
                .zip(ys)
                .map(|(&x, &y)| (x, if flip { -y } else { y }))
                .collect()
        };
        let panels = vec![
            Panel {
                title: "dispersion chi'".into(),
                series: vec![("chi'".into(), series(&profile.chi_prime, false))],
            },
            Panel {
                title: "gain -chi''".into(),
                series: vec![("-chi''".into(), series(&profile.chi_double_prime, true))],
            },
            Panel {
                title: "intensity Omega^2".into(),
                series: vec![("Omega^2".into(), series(&profile.omega_sq, false))],
            },
        ];
        write_file(&sibling_with_suffix(&out, "", "svg"), &render(&panels))?;
    }

    match lasing_band(&scenario.medium, &scenario.cavity) {
        Some(band) => println!(
            "laser-profile: nodes={} half_width={} kinks_chi_prime={:?} kinks_chi_double_prime={:?} out={}",
            scenario.grid.len(),
            band.half_width,
            kinks_prime,
            kinks_double,
            out.display()
        ),
        None => println!(
            "laser-profile: nodes={} no lasing (QG = {} <= 1), unsaturated profile written, kink report empty, out={}",
            scenario.grid.len(),
            scenario.cavity.q_factor * scenario.medium.gain,
            out.display()
        ),
    }
    Ok(())
}

pub fn probe_spectrum(cfg: &RunConfig, dump: Option<&Path>) -> CliResult<()> {
    let params = resolve_probe(cfg)?;
    let grid = probe_sweep_grid(cfg, &params)?;
    let out = resolve_out(cfg.out.as_deref(), "probe_spectrum.csv");
    maybe_dump(
        dump,
        "probe-spectrum",
        &effective_probe_config(cfg, &params, Some(&grid), &out),
    )?;

    let spectrum = spectrum_sweep(&params, &grid)
        .map_err(|e| CliError::Numerical(format!("{e}; parameters: {params:?}")))?;
    let xs: Vec<f64> = grid.values().collect();

    let mut headers = vec![
        "delta_rad_per_s",
        "chi_prime_dimensionless",
        "chi_double_prime_dimensionless",
    ];
    let mut columns: Vec<&[f64]> = vec![&xs, &spectrum.chi_prime, &spectrum.chi_double_prime];
    let (solve_re, solve_im, discrepancy);
    let mut max_rel = 0.0f64;
    if cfg.oracles.unwrap_or(false) {
        let mut re = Vec::with_capacity(xs.len());
        let mut im = Vec::with_capacity(xs.len());
        let mut dev = Vec::with_capacity(xs.len());
        for (j, &delta) in xs.iter().enumerate() {
            let (solved, _) = probe_chi_solve(&params, delta)?;
            let closed = C64::new(spectrum.chi_prime[j], spectrum.chi_double_prime[j]);
            let rel = (closed - solved).norm() / solved.norm();
            max_rel = max_rel.max(rel);
            re.push(solved.re);
            im.push(solved.im);
            dev.push(rel);
        }
        solve_re = re;
        solve_im = im;
        discrepancy = dev;
        headers.extend([
            "chi_prime_solve_dimensionless",
            "chi_double_prime_solve_dimensionless",
            "closed_vs_solve_rel_dimensionless",
        ]);
        columns.push(&solve_re);
        columns.push(&solve_im);
        columns.push(&discrepancy);
    }
    write_file(&out, &render_table(&headers, &columns))?;

    if cfg.svg.unwrap_or(false) {
        let to_pts = |ys: &[f64]| xs.iter().zip(ys).map(|(&x, &y)| (x, y)).collect();
        let panels = vec![Panel {
            title: "probe susceptibility".into(),
            series: vec![
                (
                    "chi'' (absorption)".into(),
                    to_pts(&spectrum.chi_double_prime),
                ),
                ("chi' (dispersion)".into(), to_pts(&spectrum.chi_prime)),
            ],
        }];
        write_file(&sibling_with_suffix(&out, "", "svg"), &render(&panels))?;
    }

    print!(
        "probe-spectrum: nodes={} effective_rabi={} ",
        grid.len(),
        params.effective_rabi()
    );
    if cfg.oracles.unwrap_or(false) {
        print!("max_rel_closed_vs_solve={max_rel} ");
    }
    println!("out={}", out.display());
    Ok(())
}

/// Builds the spectrum a `kk-check` run operates on: a spectrum file, the
/// clamped laser profile (fig1), or a probe sweep (fig4a..d, default fig4a).
fn kk_source(cfg: &RunConfig) -> CliResult<(SampledSpectrum, String)> {
    if let Some(input) = &cfg.input {
        return Ok((read_spectrum(input)?, format!("input={}", input.display())));
    }
    if cfg.preset == Some(PresetName::Fig1) {
        let scenario = resolve_laser(cfg)?;
        let laser = LaserPreset {
            medium: scenario.medium,
            cavity: scenario.cavity,
        };
        let grid = laser.kk_grid_with(
            cfg.kk_window_mult
                .unwrap_or(lase_kk_core::presets::KK_WINDOW_GAMMAS),
        );
        let profile = sample_profile(&scenario.medium, &scenario.cavity, &grid)?;
        let spectrum = SampledSpectrum::new(grid, profile.chi_prime, profile.chi_double_prime)?;
        return Ok((spectrum, "preset=fig1".to_string()));
    }
    let params = resolve_probe(cfg)?;
    let probe = ProbePreset { params };
    let grid = probe.kk_grid_with(
        cfg.kk_window_mult
            .unwrap_or(lase_kk_core::presets::KK_WINDOW_ETAS),
    );
    let spectrum = spectrum_sweep(&params, &grid)?;
    Ok((
        spectrum,
        format!("preset={}", cfg.preset.unwrap_or(PresetName::Fig4a)),
    ))
}

pub fn run_kk_check(cfg: &RunConfig, dump: Option<&Path>) -> CliResult<()> {
    let out = resolve_out(cfg.out.as_deref(), "kk_check.csv");
    let (spectrum, source) = kk_source(cfg)?;
    if dump.is_some() {
        let effective = match cfg.preset {
            Some(PresetName::Fig1) => {
                let scenario = resolve_laser(cfg)?;
                let mut e = effective_laser_config(cfg, &scenario, &out);
                e.kk_window_mult = cfg.kk_window_mult;
                e.grid_min = None;
                e.grid_max = None;
                e.grid_n = None;
                e
            }
            _ if cfg.input.is_some() => RunConfig {
                input: cfg.input.clone(),
                out: Some(out.clone()),
                svg: Some(cfg.svg.unwrap_or(false)),
                ..Default::default()
            },
            _ => {
                let params = resolve_probe(cfg)?;
                let mut e = effective_probe_config(cfg, &params, None, &out);
                e.kk_window_mult = cfg.kk_window_mult;
                e
            }
        };
        maybe_dump(dump, "kk-check", &effective)?;
    }

    let report = kk_check(&spectrum)?;
    let xs: Vec<f64> = spectrum.grid.values().collect();
    let table = render_table(
        &[
            "delta_rad_per_s",
            "chi_prime_dimensionless",
            "chi_prime_reconstructed_dimensionless",
            "chi_prime_residual_dimensionless",
            "chi_double_prime_dimensionless",
            "chi_double_prime_reconstructed_dimensionless",
            "chi_double_prime_residual_dimensionless",
        ],
        &[
            &xs,
            &spectrum.chi_prime,
            &report.chi_prime_reconstructed,
            &report.residual_chi_prime,
            &spectrum.chi_double_prime,
            &report.chi_double_prime_reconstructed,
            &report.residual_chi_double_prime,
        ],
    );
    write_file(&out, &table)?;

    if cfg.svg.unwrap_or(false) {
        let to_pts = |ys: &[f64]| {
            xs.iter()
                .zip(ys)
                .filter(|(_, y)| y.is_finite())
                .map(|(&x, &y)| (x, y))
                .collect()
        };
        let panels = vec![
            Panel {
                title: "chi': direct vs Kramers-Kronig reconstruction".into(),
                series: vec![
                    ("direct".into(), to_pts(&spectrum.chi_prime)),
                    (
                        "reconstructed".into(),
                        to_pts(&report.chi_prime_reconstructed),
                    ),
                ],
            },
            Panel {
                title: "chi'': direct vs Kramers-Kronig reconstruction".into(),
                series: vec![
                    ("direct".into(), to_pts(&spectrum.chi_double_prime)),
                    (
                        "reconstructed".into(),
                        to_pts(&report.chi_double_prime_reconstructed),
                    ),
                ],
            },
        ];
        write_file(&sibling_with_suffix(&out, "", "svg"), &render(&panels))?;
    }

    let argmax = (report.eval_lo..=report.eval_hi)
        .max_by(|&a, &b| {
            report.residual_chi_prime[a]
                .abs()
                .partial_cmp(&report.residual_chi_prime[b].abs())
                .expect("finite residuals")
        })
        .map(|j| spectrum.grid.value(j))
        .expect("non-empty eval range");
    println!(
        "kk-check: {source} rel_l2_forward={} rel_l2_backward={} argmax_forward_residual_rad_per_s={argmax} out={}",
        report.rel_l2_forward,
        report.rel_l2_backward,
        out.display()
    );
    Ok(())
}

struct OracleRow {
    label: String,
    params: PumpProbeParams,
    stable: bool,
    closed_vs_solve: f64,
    /// NaN when the time-domain leg was not run (random mode).
    solve_vs_timedomain: f64,
    /// Non-empty when some time-domain evaluation refused to converge;
    /// flags the row without aborting the batch.
    note: String,
}

fn oracle_row(
    label: String,
    params: PumpProbeParams,
    deltas: usize,
    timedomain: bool,
) -> CliResult<OracleRow> {
    let span = 5.0 * params.effective_rabi().max(params.eta());
    let mut closed_vs_solve = 0.0f64;
    for k in 0..deltas {
        let delta = -span + (k as f64 + 0.5) * (2.0 * span / deltas as f64);
        let closed = probe_chi_closed(&params, delta)?;
        let (solved, _) = probe_chi_solve(&params, delta)?;
        closed_vs_solve = closed_vs_solve.max((closed - solved).norm() / solved.norm());
    }
    let mut solve_vs_timedomain = f64::NAN;
    let mut note = String::new();
    if timedomain {
        let mut worst = 0.0f64;
        let unit = params.effective_rabi().max(params.eta());
        for mult in TIMEDOMAIN_DELTAS {
            let delta = mult * unit;
            let (solved, _) = probe_chi_solve(&params, delta)?;
            let omega2 = 1e-4 * params.omega1.max(params.eta());
            match probe_chi_timedomain(&params, delta, omega2, stable_step(&params, delta), 30, 16)
            {
                Ok(td) => worst = worst.max((td - solved).norm() / solved.norm()),
                Err(lase_kk_core::CoreError::NonConvergence(msg)) => {
                    note = format!("non-convergence at delta={delta:e}: {msg}").replace(',', ";");
                }
                Err(e) => return Err(e.into()),
            }
        }
        solve_vs_timedomain = worst;
    }
    Ok(OracleRow {
        label,
        stable: response_poles(&params).stable,
        params,
        closed_vs_solve,
        solve_vs_timedomain,
        note,
    })
}

pub fn oracle_compare(cfg: &RunConfig, dump: Option<&Path>) -> CliResult<()> {
    let out = resolve_out(cfg.out.as_deref(), "oracle_compare.csv");
    let deltas = cfg.deltas.unwrap_or(32);
    if deltas == 0 {
        return Err(CliError::Validation("--deltas must be >= 1".to_string()));
    }

    let mut rows = Vec::new();
    match cfg.random {
        // Random mode compares the two algebraic routes only; the stiffest
        // draws would need ~1e9 time-domain steps, so that leg belongs to
        // the presets.
        Some(n) => {
            if n == 0 {
                return Err(CliError::Validation("--random must be >= 1".to_string()));
            }
            let seed = cfg.seed.unwrap_or(0);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            for k in 0..n {
                let params = random_stable_params(&mut rng);
                rows.push(oracle_row(format!("random{k}"), params, deltas, false)?);
            }
        }
        None => {
            let params = resolve_probe(cfg)?;
            let label = cfg.preset.unwrap_or(PresetName::Fig4a).to_string();
            rows.push(oracle_row(label, params, deltas, true)?);
        }
    }

    let mut text = String::from(
        "source,gamma_parallel_rad_per_s,gamma_ba_rad_per_s,r_op_rad_per_s,delta_pump_rad_per_s,omega1_rad_per_s,stable,max_rel_closed_vs_solve_dimensionless,max_rel_solve_vs_timedomain_dimensionless,note\n",
    );
    for row in &rows {
        let p = &row.params;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.label,
            p.gamma_parallel,
            p.gamma_ba,
            p.r_op,
            p.delta_pump,
            p.omega1,
            row.stable,
            row.closed_vs_solve,
            row.solve_vs_timedomain,
            row.note
        ));
    }
    write_file(&out, &text)?;

    if dump.is_some() {
        let effective = match cfg.random {
            Some(_) => RunConfig {
                random: cfg.random,
                seed: Some(cfg.seed.unwrap_or(0)),
                deltas: Some(deltas),
                out: Some(out.clone()),
                ..Default::default()
            },
            None => {
                let params = resolve_probe(cfg)?;
                let mut e = effective_probe_config(cfg, &params, None, &out);
                e.deltas = Some(deltas);
                e
            }
        };
        maybe_dump(dump, "oracle-compare", &effective)?;
    }

    let max_cs = rows
        .iter()
        .map(|r| r.closed_vs_solve)
        .fold(0.0f64, f64::max);
    let max_td = rows
        .iter()
        .map(|r| r.solve_vs_timedomain)
        .filter(|v| v.is_finite())
        .fold(f64::NAN, f64::max);
    let cs_ok = max_cs <= CLOSED_VS_SOLVE_BOUND;
    let td_ok = max_td.is_nan() || max_td <= SOLVE_VS_TIMEDOMAIN_BOUND;
    let all_stable = rows.iter().all(|r| r.stable);
    let all_converged = rows.iter().all(|r| r.note.is_empty());
    let verdict = if cs_ok && td_ok && all_stable && all_converged {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "oracle-compare: runs={} max_rel_closed_vs_solve={max_cs} max_rel_solve_vs_timedomain={max_td} stable={all_stable} verdict={verdict} out={}",
        rows.len(),
        out.display()
    );
    if verdict == "FAIL" {
        return Err(CliError::Numerical(format!(
            "oracle bounds violated: closed-vs-solve {max_cs} (bound {CLOSED_VS_SOLVE_BOUND}), solve-vs-timedomain {max_td} (bound {SOLVE_VS_TIMEDOMAIN_BOUND})"
        )));
    }
    Ok(())
}
