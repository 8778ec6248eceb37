//! `lase-kk`: clamped ring-laser profiles, pump-probe susceptibility
//! spectra, and numerical Kramers-Kronig checks from the command line.

mod commands;
mod config;
mod csvio;
mod error;
mod svg;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::{CliError, CliResult};
use lase_kk_core::PresetName;

#[derive(Parser)]
#[command(
    name = "lase-kk",
    version,
    about = "Gain-clamped laser dispersion, pump-probe spectra, and Kramers-Kronig checks",
    after_help = "Exit codes: 0 success, 2 validation failure, 3 numerical failure.\n\
                  LASE_KK_OUT_DIR sets the directory for relative output paths."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state clamped susceptibility and intensity profile of the
    /// ring laser (CSV + kink report, optional SVG).
    LaserProfile(CommonArgs),
    /// Probe susceptibility sweep of the pumped, driven two-level medium.
    ProbeSpectrum(CommonArgs),
    /// Bidirectional Kramers-Kronig reconstruction of a spectrum.
    KkCheck(CommonArgs),
    /// Cross-validation of the closed form, linear solve, and time-domain
    /// routes to the probe susceptibility.
    OracleCompare(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::LaserProfile(_) => "laser-profile",
            Command::ProbeSpectrum(_) => "probe-spectrum",
            Command::KkCheck(_) => "kk-check",
            Command::OracleCompare(_) => "oracle-compare",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::LaserProfile(a)
            | Command::ProbeSpectrum(a)
            | Command::KkCheck(a)
            | Command::OracleCompare(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in scenario: fig1 (laser) or fig4a..fig4d (pump-probe).
    #[arg(long)]
    preset: Option<String>,
    /// Read a flat `key = value` configuration file (flags override it).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the merged effective configuration to this path.
    #[arg(long)]
    dump_config: Option<PathBuf>,
    /// Output CSV path (default per subcommand, under LASE_KK_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG rendering next to the CSV.
    #[arg(long)]
    svg: bool,
    /// probe-spectrum: add per-point linear-solve oracle columns.
    #[arg(long)]
    oracles: bool,
    /// kk-check: read the spectrum from a CSV instead of a preset.
    #[arg(long)]
    input: Option<PathBuf>,
    /// oracle-compare: RNG seed for random parameter draws.
    #[arg(long)]
    seed: Option<u64>,
    /// oracle-compare: number of random stable parameter draws.
    #[arg(long)]
    random: Option<usize>,
    /// oracle-compare: probe detunings sampled per parameter set.
    #[arg(long)]
    deltas: Option<usize>,
    /// kk-check: half-window in linewidth units (eta or Gamma).
    #[arg(long)]
    kk_window_mult: Option<f64>,
    /// Sweep grid minimum (rad/s detuning).
    #[arg(long)]
    grid_min: Option<f64>,
    /// Sweep grid maximum (rad/s detuning).
    #[arg(long)]
    grid_max: Option<f64>,
    /// Sweep grid node count.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Medium linewidth Gamma (laser) or longitudinal rate Gamma (probe), rad/s.
    #[arg(long)]
    gamma: Option<f64>,
    /// Transverse decay rate gamma_ba (probe commands), rad/s.
    #[arg(long)]
    gamma_ba: Option<f64>,
    /// Incoherent pump rate r_op (probe commands), rad/s.
    #[arg(long)]
    r_op: Option<f64>,
    /// Pump detuning Delta (probe commands), rad/s.
    #[arg(long)]
    delta_pump: Option<f64>,
    /// Pump Rabi frequency Omega_1 (probe commands), rad/s.
    #[arg(long)]
    omega1: Option<f64>,
    /// Cavity quality factor Q (laser commands).
    #[arg(long)]
    q: Option<f64>,
    /// Gain-loss product QG (laser commands); sets G = gq / Q.
    #[arg(long)]
    gq: Option<f64>,
}

impl CommonArgs {
    fn to_config(&self) -> CliResult<RunConfig> {
        let preset = match &self.preset {
            Some(s) => Some(PresetName::from_str(s).map_err(CliError::Validation)?),
            None => None,
        };
        Ok(RunConfig {
            preset,
            input: self.input.clone(),
            out: self.out.clone(),
            svg: if self.svg { Some(true) } else { None },
            oracles: if self.oracles { Some(true) } else { None },
            seed: self.seed,
            random: self.random,
            deltas: self.deltas,
            kk_window_mult: self.kk_window_mult,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_n: self.grid_n,
            gamma: self.gamma,
            gamma_ba: self.gamma_ba,
            r_op: self.r_op,
            delta_pump: self.delta_pump,
            omega1: self.omega1,
            q: self.q,
            gq: self.gq,
        })
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let args = cli.command.args();
    let flags = args.to_config()?;
    let merged = match &args.config {
        Some(path) => RunConfig::load(path)?.merged_with(&flags),
        None => flags,
    };
    let dump = args.dump_config.as_deref();
    match &cli.command {
        Command::LaserProfile(_) => commands::laser_profile(&merged, dump),
        Command::ProbeSpectrum(_) => commands::probe_spectrum(&merged, dump),
        Command::KkCheck(_) => commands::run_kk_check(&merged, dump),
        Command::OracleCompare(_) => commands::oracle_compare(&merged, dump),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("lase-kk {}: error: {}", cli.command.name(), e.message());
        std::process::exit(e.exit_code());
    }
}
