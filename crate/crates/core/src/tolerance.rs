//! Numerical tolerances shared by every module.
//!
//! All thresholds live here so that reports can echo the exact values used.

use serde::{Deserialize, Serialize};

/// Relative Hermiticity defect accepted before an input is symmetrised.
pub const TAU_HERM: f64 = 1e-10;
/// Most negative eigenvalue clamped to zero in PSD routines.
pub const TAU_PSD: f64 = 1e-9;
/// Orthonormality tolerance for eigenvector bases and sampled unitaries.
pub const TAU_ORTH: f64 = 1e-10;
/// Relative reconstruction tolerance for factorizations.
pub const TAU_RECON: f64 = 1e-9;
/// Second-largest eigenvalue below which a density is declared pure.
pub const TAU_PURE: f64 = 1e-9;
/// Trace distance below which two states are treated as equal.
pub const TAU_EQUAL: f64 = 1e-9;

/// Overridable set of linear-algebra tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub orth: f64,
    pub recon: f64,
    pub pure: f64,
    pub equal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: TAU_HERM,
            psd: TAU_PSD,
            orth: TAU_ORTH,
            recon: TAU_RECON,
            pure: TAU_PURE,
            equal: TAU_EQUAL,
        }
    }
}
