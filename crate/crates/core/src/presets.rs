//! Built-in parameter sets for the ring-laser and pump-probe scenarios,
//! with their default sweep and Kramers-Kronig grids.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::grid::UniformGrid;
use crate::laser::CavityParams;
use crate::medium::MediumParams;
use crate::pump_probe::PumpProbeParams;

/// Default number of nodes for the clamped-profile sweep.
pub const PROFILE_POINTS: usize = 4001;
/// Default half-window of the clamped-profile sweep, in units of Gamma.
pub const PROFILE_WINDOW_GAMMAS: f64 = 3.0;
/// Default number of nodes for probe-spectrum sweeps.
pub const SWEEP_POINTS: usize = 4096;
/// Default half-window of probe sweeps, in units of the effective Rabi
/// frequency.
pub const SWEEP_WINDOW_RABI: f64 = 5.0;
/// Node count of the probe Kramers-Kronig grid.
pub const KK_POINTS: usize = 1 << 14;
/// Default half-window of the probe Kramers-Kronig grid, in units of eta.
pub const KK_WINDOW_ETAS: f64 = 100.0;
/// Default half-window of the laser Kramers-Kronig grid, in units of Gamma.
pub const KK_WINDOW_GAMMAS: f64 = 10.0;

/// Samples per characteristic linewidth on the probe KK grid; laser KK grids
/// match this density so residual comparisons across the two scenarios see
/// the same resolution relative to their features.
fn kk_samples_per_linewidth() -> f64 {
    KK_POINTS as f64 / (2.0 * KK_WINDOW_ETAS)
}

/// Named built-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    /// Rb-scale ring laser: Gamma = 2pi x 1e9 rad/s, Q = 3.8e8, QG = 3,
    /// nu0 = 2pi x 3.8e14 rad/s.
    Fig1,
    /// Resonant pump, no incoherent pumping: Omega_1 = 2pi x 36e6 rad/s.
    Fig4a,
    /// Resonant pump, inverted medium: r_op = 2 Gamma.
    Fig4b,
    /// Detuned pump (Delta = 2pi x 2e7 rad/s, Omega_1 = 2pi x 66e6 rad/s).
    Fig4c,
    /// Detuned pump, inverted medium.
    Fig4d,
}

impl PresetName {
    pub const ALL: [PresetName; 5] = [
        PresetName::Fig1,
        PresetName::Fig4a,
        PresetName::Fig4b,
        PresetName::Fig4c,
        PresetName::Fig4d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Fig1 => "fig1",
            PresetName::Fig4a => "fig4a",
            PresetName::Fig4b => "fig4b",
            PresetName::Fig4c => "fig4c",
            PresetName::Fig4d => "fig4d",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(PresetName::Fig1),
            "fig4a" => Ok(PresetName::Fig4a),
            "fig4b" => Ok(PresetName::Fig4b),
            "fig4c" => Ok(PresetName::Fig4c),
            "fig4d" => Ok(PresetName::Fig4d),
            other => Err(format!(
                "unknown preset '{other}' (expected one of fig1, fig4a, fig4b, fig4c, fig4d)"
            )),
        }
    }
}

/// Ring-laser scenario parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserPreset {
    pub medium: MediumParams,
    pub cavity: CavityParams,
}

impl LaserPreset {
    /// Default detuning grid for profile sweeps.
    pub fn profile_grid(&self) -> UniformGrid {
        let w = PROFILE_WINDOW_GAMMAS * self.medium.gamma;
        UniformGrid::from_bounds(-w, w, PROFILE_POINTS).expect("static preset grid")
    }

    /// Kramers-Kronig grid at the density-matched default window.
    pub fn kk_grid(&self) -> UniformGrid {
        self.kk_grid_with(KK_WINDOW_GAMMAS)
    }

    /// Kramers-Kronig grid with an explicit half-window in units of Gamma,
    /// holding the samples-per-linewidth density fixed.
    pub fn kk_grid_with(&self, window_gammas: f64) -> UniformGrid {
        let w = window_gammas * self.medium.gamma;
        let n = (kk_samples_per_linewidth() * 2.0 * window_gammas).round() as usize + 1;
        UniformGrid::from_bounds(-w, w, n).expect("static preset grid")
    }
}

/// Pump-probe scenario parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePreset {
    pub params: PumpProbeParams,
}

impl ProbePreset {
    /// Default probe-detuning grid for spectrum sweeps. The window spans
    /// +-5 effective Rabi frequencies, falling back to the coherence
    /// linewidth when the pump is off (a resonant, undriven spectrum is a
    /// bare Lorentzian of width eta).
    pub fn sweep_grid(&self) -> UniformGrid {
        let unit = self.params.effective_rabi().max(self.params.eta());
        let w = SWEEP_WINDOW_RABI * unit;
        UniformGrid::from_bounds(-w, w, SWEEP_POINTS).expect("static preset grid")
    }

    /// Kramers-Kronig grid at the default window of 100 eta.
    pub fn kk_grid(&self) -> UniformGrid {
        self.kk_grid_with(KK_WINDOW_ETAS)
    }

    /// Kramers-Kronig grid with an explicit half-window in units of eta.
    pub fn kk_grid_with(&self, window_etas: f64) -> UniformGrid {
        let w = window_etas * self.params.eta();
        UniformGrid::from_bounds(-w, w, KK_POINTS).expect("static preset grid")
    }
}

/// Either scenario kind, as selected by a [`PresetName`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Laser(LaserPreset),
    Probe(ProbePreset),
}

/// Looks up a built-in scenario.
pub fn preset(name: PresetName) -> Preset {
    match name {
        PresetName::Fig1 => Preset::Laser(fig1()),
        PresetName::Fig4a => Preset::Probe(fig4(PumpKind::Resonant, Pumping::None)),
        PresetName::Fig4b => Preset::Probe(fig4(PumpKind::Resonant, Pumping::TwiceGamma)),
        PresetName::Fig4c => Preset::Probe(fig4(PumpKind::Detuned, Pumping::None)),
        PresetName::Fig4d => Preset::Probe(fig4(PumpKind::Detuned, Pumping::TwiceGamma)),
    }
}

/// The ring-laser scenario.
pub fn fig1() -> LaserPreset {
    let q = 3.8e8;
    let nu0 = TAU * 3.8e14;
    LaserPreset {
        medium: MediumParams::new(TAU * 1e9, nu0, 3.0 / q).expect("static preset"),
        cavity: CavityParams::new(q, nu0).expect("static preset"),
    }
}

enum PumpKind {
    Resonant,
    Detuned,
}

enum Pumping {
    None,
    TwiceGamma,
}

fn fig4(kind: PumpKind, pumping: Pumping) -> ProbePreset {
    let gamma_parallel = TAU * 1e7;
    let gamma_ba = TAU * 5e6;
    let (delta_pump, omega1) = match kind {
        PumpKind::Resonant => (0.0, TAU * 36e6),
        PumpKind::Detuned => (TAU * 2e7, TAU * 66e6),
    };
    let r_op = match pumping {
        Pumping::None => 0.0,
        Pumping::TwiceGamma => 2.0 * gamma_parallel,
    };
    ProbePreset {
        params: PumpProbeParams::new(gamma_parallel, gamma_ba, r_op, delta_pump, omega1, 1.0)
            .expect("static preset"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fig1_values() {
        let p = fig1();
        assert_relative_eq!(p.medium.gamma, TAU * 1e9);
        assert_relative_eq!(p.cavity.q_factor * p.medium.gain, 3.0, max_relative = 1e-12);
        assert_relative_eq!(p.cavity.gamma_c(), TAU * 1e6, max_relative = 1e-12);
        assert_eq!(p.profile_grid().len(), 4001);
    }

    #[test]
    fn fig4_values() {
        let Preset::Probe(a) = preset(PresetName::Fig4a) else {
            panic!("fig4a is probe")
        };
        assert_eq!(a.params.r_op, 0.0);
        assert_eq!(a.params.delta_pump, 0.0);
        assert_relative_eq!(a.params.omega1, TAU * 36e6);

        let Preset::Probe(d) = preset(PresetName::Fig4d) else {
            panic!("fig4d is probe")
        };
        assert_relative_eq!(d.params.r_op, 2.0 * d.params.gamma_parallel);
        assert_relative_eq!(d.params.delta_pump, TAU * 2e7);
        assert_relative_eq!(d.params.omega1, TAU * 66e6);
        // effective Rabi frequency of the detuned presets: 2pi x 68.96 MHz
        assert_relative_eq!(
            d.params.effective_rabi(),
            TAU * 68.96e6,
            max_relative = 1e-4
        );
    }

    #[test]
    fn kk_grids_share_density() {
        let laser = fig1();
        let Preset::Probe(probe) = preset(PresetName::Fig4a) else {
            panic!()
        };
        let per_gamma = laser.medium.gamma / laser.kk_grid().step();
        let per_eta = probe.params.eta() / probe.kk_grid().step();
        assert_relative_eq!(per_gamma, per_eta, max_relative = 1e-3);
        assert_eq!(probe.kk_grid().len(), 16384);
        assert_eq!(laser.kk_grid().len(), 1639);
    }

    #[test]
    fn names_round_trip() {
        for name in PresetName::ALL {
            assert_eq!(name.as_str().parse::<PresetName>().unwrap(), name);
        }
        assert!("fig9".parse::<PresetName>().is_err());
    }
}
