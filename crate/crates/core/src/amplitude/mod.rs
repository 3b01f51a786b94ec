//! Transition amplitudes for Bessel-beam electrons: OAM selection rules, the
//! closed-form triple-Bessel radial integral, the spinor–polarization factor
//! and an independent quadrature oracle for the radial integral.

mod map;
mod oracle;
mod suite;
mod triangle;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::ELECTRON_REST_ENERGY_EV;
use crate::error::{domain, Result};
use crate::kinematics::Polarization;

pub use map::{
    amplitude_map, kinematic_permits, AmplitudeMap, BoundaryCurves, MapCell, MapRequest, Zone,
};
pub use oracle::{oracle_triple_bessel, OracleOptions, OracleResult};
pub use suite::{oracle_suite, OracleCase, SUITE_EXTERIOR_FRACTION, SUITE_MAX_ORDER, SUITE_REL_TOL};
pub use triangle::{triangle_angles, triangle_area, TriangleAngles, TriangleSides};

/// Cells with S_Δ below this fraction of (max side)² are treated as sitting on
/// the divergent boundary.
pub const BOUNDARY_AREA_FRACTION: f64 = 1e-9;

/// Which of the two spin-flip OAM shifts a flip channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipSign {
    /// Photon Bessel order l_ph + 1.
    Plus,
    /// Photon Bessel order l_ph − 1.
    Minus,
}

/// An emission channel together with the photon Bessel order it implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSelection {
    pub spin_flip: bool,
    pub polarization: Polarization,
    pub flip_sign: FlipSign,
    photon_order: i32,
}

impl ChannelSelection {
    /// No-flip channels conserve l_ph + l_f = l_i; flip channels shift the
    /// photon's Bessel order by ±1.
    pub fn new(l_ph: i32, spin_flip: bool, polarization: Polarization, flip_sign: FlipSign) -> Self {
        let photon_order = match (spin_flip, flip_sign) {
            (false, _) => l_ph,
            (true, FlipSign::Plus) => l_ph + 1,
            (true, FlipSign::Minus) => l_ph - 1,
        };
        Self {
            spin_flip,
            polarization,
            flip_sign,
            photon_order,
        }
    }

    /// Photon Bessel order m = l_i − l_f.
    pub fn photon_order(&self) -> i32 {
        self.photon_order
    }

    /// Outgoing electron OAM fixed by the incoming one.
    pub fn outgoing_oam(&self, l_i: i32) -> i32 {
        l_i - self.photon_order
    }

    /// Photon OAM recovered from the Bessel order.
    pub fn photon_oam(&self) -> i32 {
        match (self.spin_flip, self.flip_sign) {
            (false, _) => self.photon_order,
            (true, FlipSign::Plus) => self.photon_order - 1,
            (true, FlipSign::Minus) => self.photon_order + 1,
        }
    }
}

/// Value of the radial integral ∫ J_{l_i}(s_i r) J_{l_f}(s_f r) J_{l_i−l_f}(s_ph r) r dr.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Amplitude {
    /// The sides do not form a triangle; the integral vanishes.
    Exterior,
    /// The triangle is degenerate (or within the boundary tolerance of it) and
    /// the integral diverges like 1/S_Δ.
    Divergent { s_delta: f64 },
    /// Finite value in eV⁻², with the triangle area in eV².
    Interior { value: f64, s_delta: f64 },
}

impl Amplitude {
    /// Finite value, zero outside the zone, `None` on the divergent boundary.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Amplitude::Exterior => Some(0.0),
            Amplitude::Divergent { .. } => None,
            Amplitude::Interior { value, .. } => Some(value),
        }
    }

    pub fn s_delta(&self) -> Option<f64> {
        match *self {
            Amplitude::Exterior => None,
            Amplitude::Divergent { s_delta } | Amplitude::Interior { s_delta, .. } => Some(s_delta),
        }
    }
}

/// Closed form of the triple-Bessel radial integral with photon order
/// m = l_i − l_f:
///
/// (−1)^{l_f} cos(l_i α_f + l_f α_i) / (2π S_Δ)
///
/// where S_Δ is the area of the triangle with sides (s_i, s_f, s_ph) and α_i,
/// α_f are the angles opposite s_i and s_f.
pub fn closed_form_amplitude(l_i: i32, l_f: i32, sides: &TriangleSides) -> Amplitude {
    let Some(area) = triangle_area(sides) else {
        return Amplitude::Exterior;
    };
    let max = sides.max_side();
    if area <= BOUNDARY_AREA_FRACTION * max * max {
        return Amplitude::Divergent { s_delta: area };
    }
    let angles = triangle_angles(sides).expect("non-degenerate triangle");
    Amplitude::Interior {
        value: closed_form_value(l_i, l_f, &angles, area),
        s_delta: area,
    }
}

pub(crate) fn closed_form_value(l_i: i32, l_f: i32, angles: &TriangleAngles, area: f64) -> f64 {
    let phase = l_i as f64 * angles.alpha_f + l_f as f64 * angles.alpha_i;
    let parity = if l_f.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    parity * phase.cos() / (2.0 * PI * area)
}

/// Spinor–polarization factor of the spin-flip, azimuthally polarized channel:
///
/// [p_fz (E_i + mc²) − p_iz (E_f + mc²)] / [2 √(E_i E_f) √(E_i + mc²) √(E_f + mc²)]
///
/// with momenta given as p·c in eV.
pub fn spinor_factor_flip_azimuthal(e_i: f64, e_f: f64, p_iz: f64, p_fz: f64) -> Result<f64> {
    let m = ELECTRON_REST_ENERGY_EV;
    if !(e_i > m) || !(e_f > m) {
        return Err(domain(format!(
            "spinor factor needs on-shell energies above mc^2, got E_i = {e_i}, E_f = {e_f}"
        )));
    }
    if !p_iz.is_finite() || !p_fz.is_finite() {
        return Err(domain("longitudinal momenta must be finite"));
    }
    let num = p_fz * (e_i + m) - p_iz * (e_f + m);
    let den = 2.0 * (e_i * e_f).sqrt() * (e_i + m).sqrt() * (e_f + m).sqrt();
    Ok(num / den)
}
