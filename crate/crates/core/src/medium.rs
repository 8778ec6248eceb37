//! Two-level inverted gain medium and its saturable susceptibility.
//!
//! Sign convention used across the crate: `chi = chi' + i chi''` with
//! `chi'' < 0` meaning gain. All spectral arguments are detunings from line
//! center (`nu - nu0`, rad/s); absolute optical frequencies never enter a
//! formula, which keeps kHz-to-GHz features free of catastrophic
//! cancellation against ~1e15 rad/s carriers.

use crate::error::{require_finite, require_non_negative, require_positive, Result};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Constants of a homogeneously broadened two-level gain medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Two-level linewidth Gamma (rad/s).
    pub gamma: f64,
    /// Line-center angular frequency nu0 (rad/s).
    pub nu0: f64,
    /// Dimensionless gain parameter G.
    pub gain: f64,
}

impl MediumParams {
    /// Validates and builds the canonical `(Gamma, nu0, G)` triple.
    pub fn new(gamma: f64, nu0: f64, gain: f64) -> Result<Self> {
        require_positive("gamma", gamma)?;
        require_positive("nu0", nu0)?;
        require_positive("gain", gain)?;
        Ok(Self { gamma, nu0, gain })
    }

    /// Builds the medium from microscopic constants: number density N
    /// (atoms/m^3) and dipole moment (C m), with `G = hbar N xi / eps0`.
    pub fn from_microscopic(n_density: f64, dipole: f64, gamma: f64, nu0: f64) -> Result<Self> {
        let coupling = derive_coupling(n_density, dipole, gamma)?;
        Self::new(gamma, nu0, coupling.gain)
    }
}

/// Complex susceptibility split into its real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    /// Dispersion chi'.
    pub chi_prime: f64,
    /// Gain/absorption chi'' (negative means gain).
    pub chi_double_prime: f64,
}

/// Saturable susceptibility of the inverted two-level medium at a given
/// detuning from line center and saturating Rabi frequency squared.
///
/// `chi'' = -G Gamma^2 / (2 Omega^2 + Gamma^2 + 4 (nu - nu0)^2)` and
/// `chi' = -chi'' * 2 (nu - nu0) / Gamma`; the ratio `chi'/chi''` is exactly
/// `-2 (nu - nu0) / Gamma` for every saturation level.
pub fn susceptibility(m: &MediumParams, detuning: f64, rabi_sq: f64) -> Result<Susceptibility> {
    require_finite("detuning", detuning)?;
    require_non_negative("rabi_sq", rabi_sq)?;
    let g2 = m.gamma * m.gamma;
    let chi_double_prime = -m.gain * g2 / (2.0 * rabi_sq + g2 + 4.0 * detuning * detuning);
    // chi' formed from chi'' so the ratio identity holds to the last bit on
    // every branch.
    let chi_prime = -chi_double_prime * (2.0 * detuning / m.gamma);
    Ok(Susceptibility {
        chi_prime,
        chi_double_prime,
    })
}

/// Microscopic coupling constants of the medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    /// `xi = dipole^2 / (hbar^2 Gamma)` (m^2 / (V^2 s) scale factor).
    pub xi: f64,
    /// Dimensionless gain parameter `G = hbar N xi / eps0`.
    pub gain: f64,
    gamma: f64,
}

impl Coupling {
    /// Converts a field amplitude (V/m) to the squared Rabi frequency
    /// `Omega^2 = Gamma E^2 xi` (rad^2/s^2).
    pub fn rabi_sq_from_field(&self, e_field: f64) -> f64 {
        self.gamma * e_field * e_field * self.xi
    }
}

/// Derives `(xi, G)` from number density, dipole moment and linewidth.
pub fn derive_coupling(n_density: f64, dipole: f64, gamma: f64) -> Result<Coupling> {
    require_positive("n_density", n_density)?;
    require_positive("dipole", dipole)?;
    require_positive("gamma", gamma)?;
    let xi = dipole * dipole / (HBAR * HBAR * gamma);
    let gain = HBAR * n_density * xi / EPSILON_0;
    Ok(Coupling { xi, gain, gamma })
}
