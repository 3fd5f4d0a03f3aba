//! Numerical tolerances and resolutions, gathered in one record.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Number of uniform boundary samples taken by the supremum oracle.
    pub oracle_resolution: usize,
    /// Width of the boundary-parameter bracket at which ternary refinement stops.
    pub refine_tol: f64,
    /// Half-plane oracle: stop doubling the window once the max moves by less than this.
    pub window_tol: f64,
    /// Half-plane oracle: hard cap on window doublings.
    pub max_doublings: u32,
    /// Metric values with magnitude at or below this are reported as exactly zero.
    pub zero_clamp: f64,
    /// Points closer than this to the boundary are treated as outside.
    pub boundary_eps: f64,
    /// Absolute tolerance on the alignment defect.
    pub align_tol: f64,
    /// Normalized triangle area below which three points count as collinear.
    pub collinear_tol: f64,
    /// Relative tolerance on the imaginary part of a cross-ratio deemed real.
    pub cross_ratio_real_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            oracle_resolution: 4096,
            refine_tol: 1e-12,
            window_tol: 1e-10,
            max_doublings: 20,
            zero_clamp: 1e-12,
            boundary_eps: 1e-12,
            align_tol: 1e-9,
            collinear_tol: 1e-12,
            cross_ratio_real_tol: 1e-9,
        }
    }
}

impl Config {
    pub fn clamp(&self, v: f64) -> f64 {
        if v.abs() <= self.zero_clamp {
            0.0
        } else {
            v
        }
    }
}
