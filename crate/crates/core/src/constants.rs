//! Physical constants in the crate's natural-unit convention.
//!
//! Energies are in eV, momenta are stored as `p·c` in eV, wavelengths in nm
//! and angles in radians.

use serde::{Deserialize, Serialize};

/// Electron rest energy mc² in eV (CODATA 2018).
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// 2πħc in eV·nm: λ[nm] · ħω[eV].
pub const HC_EV_NM: f64 = 1_239.842_0;

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035_999;

/// The unit constants used by a computation.
///
/// The rest energy is a parameter so the same formulas apply to any
/// charged spin-1/2 fermion; every other constant is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitsConvention {
    pub rest_energy_ev: f64,
    pub hbar_c_ev_nm: f64,
    pub hc_ev_nm: f64,
    pub alpha: f64,
}

impl Default for UnitsConvention {
    fn default() -> Self {
        Self {
            rest_energy_ev: ELECTRON_REST_ENERGY_EV,
            hbar_c_ev_nm: HBAR_C_EV_NM,
            hc_ev_nm: HC_EV_NM,
            alpha: FINE_STRUCTURE,
        }
    }
}

impl UnitsConvention {
    pub fn with_rest_energy(rest_energy_ev: f64) -> Self {
        Self {
            rest_energy_ev,
            ..Self::default()
        }
    }
}
