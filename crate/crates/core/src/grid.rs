//! Uniform frequency grids for sampled spectra and profiles.

use crate::error::{require_finite, CoreError, Result};

/// Maximum relative non-uniformity tolerated when reconstructing a grid from
/// raw sample positions.
const UNIFORMITY_TOL: f64 = 1e-12;

/// A strictly increasing, uniformly spaced grid of frequencies (rad/s).
///
/// Node values are always computed as `min + i * step` rather than by
/// accumulation, so a grid is fully determined by `(min, step, len)` and
/// reproduces bit-identical nodes on every traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    min: f64,
    step: f64,
    len: usize,
}

impl UniformGrid {
    /// Builds a grid of `len` nodes spanning `[min, max]` inclusive.
    pub fn from_bounds(min: f64, max: f64, len: usize) -> Result<Self> {
        require_finite("grid min", min)?;
        require_finite("grid max", max)?;
        if len < 2 {
            return Err(CoreError::invalid(format!(
                "grid needs >= 2 nodes, got {len}"
            )));
        }
        if max <= min {
            return Err(CoreError::invalid(format!(
                "grid max ({max}) must exceed min ({min})"
            )));
        }
        let step = (max - min) / (len - 1) as f64;
        Ok(Self { min, step, len })
    }

    /// Reconstructs a grid from raw node positions, requiring uniform spacing
    /// to relative `1e-12`.
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(CoreError::invalid("grid needs >= 2 nodes".to_string()));
        }
        let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !step.is_finite() || step <= 0.0 {
            return Err(CoreError::invalid(
                "grid must be strictly increasing".to_string(),
            ));
        }
        let grid = Self {
            min: xs[0],
            step,
            len: xs.len(),
        };
        let scale = xs[0].abs().max(xs[xs.len() - 1].abs());
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.value(i)).abs() > UNIFORMITY_TOL * scale {
                return Err(CoreError::invalid(format!(
                    "grid is not uniform at node {i}: {x} vs expected {}",
                    grid.value(i)
                )));
            }
        }
        Ok(grid)
    }

    /// Value of node `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// First node.
    pub fn min(&self) -> f64 {
        self.min
    }

    /// Last node.
    pub fn max(&self) -> f64 {
        self.value(self.len - 1)
    }

    /// Iterator over all node values.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.value(i))
    }

    /// Index of the node nearest to `x`.
    pub fn index_nearest(&self, x: f64) -> usize {
        let raw = ((x - self.min) / self.step).round();
        (raw.max(0.0) as usize).min(self.len - 1)
    }

    /// Inclusive index range covering the central fraction `frac` of the
    /// window (e.g. `0.6` keeps the middle 60%).
    pub fn central_range(&self, frac: f64) -> (usize, usize) {
        let margin = 0.5 * (1.0 - frac);
        let lo = (margin * (self.len - 1) as f64).ceil() as usize;
        let hi = ((1.0 - margin) * (self.len - 1) as f64).floor() as usize;
        (lo, hi)
    }
}
