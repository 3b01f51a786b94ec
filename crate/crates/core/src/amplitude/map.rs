use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{closed_form_amplitude, spinor_factor_flip_azimuthal, Amplitude, ChannelSelection, TriangleSides};
use crate::angles::{
    cone_band_permits, conservation_solve, conventional_angle, quantum_angle, quantum_cutoff_wavelength,
};
use crate::constants::HC_EV_NM;
use crate::dispersion::{n_at, DispersionModel};
use crate::error::{domain, Result};
use crate::kinematics::CylindricalElectronState;

/// Classification of a (λ, θ_ph) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Interior,
    Boundary,
    Exterior,
    /// The dispersion model could not be evaluated at this wavelength.
    Invalid,
}

impl Zone {
    pub fn as_str(&self) -> &'static str {
        match self {
            Zone::Interior => "interior",
            Zone::Boundary => "boundary",
            Zone::Exterior => "exterior",
            Zone::Invalid => "invalid",
        }
    }

    pub fn is_permitted(&self) -> bool {
        matches!(self, Zone::Interior | Zone::Boundary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapRequest {
    pub beam: CylindricalElectronState,
    pub model: DispersionModel,
    pub channel: ChannelSelection,
    pub lambda_range: (f64, f64),
    pub theta_range: (f64, f64),
    /// (wavelength points, angle points)
    pub grid: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapCell {
    pub lambda_nm: f64,
    pub theta_ph: f64,
    pub zone: Zone,
    /// Signed spatial amplitude; `None` on the divergent boundary or invalid cells.
    pub amplitude: Option<f64>,
    pub s_delta: Option<f64>,
    /// Spin-flip azimuthal spinor factor where the outgoing electron exists.
    /// Reported only, never multiplied into `amplitude`.
    pub spinor_factor: Option<f64>,
}

/// Loci of S_Δ = 0 and the Frank–Tamm reference angle at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurves {
    pub lambda_nm: f64,
    pub theta_cr: Option<f64>,
    /// θ_i − θ_ČR, while θ_ČR ≤ θ_i.
    pub inner_lower: Option<f64>,
    /// θ_ČR − θ_i, while θ_ČR ≥ θ_i.
    pub inner_upper: Option<f64>,
    pub outer: Option<f64>,
    pub conventional: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMap {
    pub lambdas: Vec<f64>,
    pub thetas: Vec<f64>,
    /// Row-major: all angles for `lambdas[0]`, then `lambdas[1]`, ...
    pub cells: Vec<MapCell>,
    pub boundaries: Vec<BoundaryCurves>,
    pub quantum_cutoff_nm: Option<f64>,
    pub l_i: i32,
    pub l_f: i32,
    pub photon_order: i32,
}

impl AmplitudeMap {
    pub fn cell(&self, i_lambda: usize, i_theta: usize) -> &MapCell {
        &self.cells[i_lambda * self.thetas.len() + i_theta]
    }
}

/// Permitted zone from conservation laws alone: the outgoing electron is on
/// shell and the photon direction lies in the band swept by the recoil-corrected
/// angle around the electron cone.
pub fn kinematic_permits(beam: &CylindricalElectronState, n: f64, hbar_omega: f64, theta_ph: f64) -> bool {
    let Ok(Some(_)) = conservation_solve(beam.energy(), beam.spread_angle(), hbar_omega, theta_ph, n) else {
        return false;
    };
    match quantum_angle(beam.beta(), n, hbar_omega) {
        Some(theta_cr) => cone_band_permits(beam.spread_angle(), theta_cr, theta_ph),
        None => false,
    }
}

fn evaluate_cell(
    beam: &CylindricalElectronState,
    n: f64,
    lambda_nm: f64,
    theta_ph: f64,
    l_i: i32,
    l_f: i32,
) -> MapCell {
    let hbar_omega = HC_EV_NM / lambda_nm;
    let exterior = MapCell {
        lambda_nm,
        theta_ph,
        zone: Zone::Exterior,
        amplitude: Some(0.0),
        s_delta: None,
        spinor_factor: None,
    };
    let Ok(Some(out)) = conservation_solve(beam.energy(), beam.spread_angle(), hbar_omega, theta_ph, n) else {
        return exterior;
    };
    let spinor = spinor_factor_flip_azimuthal(beam.energy(), out.energy, beam.p_z(), out.p_z).ok();
    let sides = TriangleSides {
        s_i: beam.p_r(),
        s_f: out.p_r,
        s_ph: n * hbar_omega * theta_ph.sin(),
    };
    let (zone, amplitude, s_delta) = match closed_form_amplitude(l_i, l_f, &sides) {
        Amplitude::Exterior => (Zone::Exterior, Some(0.0), None),
        Amplitude::Divergent { s_delta } => (Zone::Boundary, None, Some(s_delta)),
        Amplitude::Interior { value, s_delta } => (Zone::Interior, Some(value), Some(s_delta)),
    };
    MapCell {
        zone,
        amplitude,
        s_delta,
        spinor_factor: spinor,
        ..exterior
    }
}

fn boundary_at(beam: &CylindricalElectronState, n: Option<f64>, lambda_nm: f64) -> BoundaryCurves {
    let theta_i = beam.spread_angle();
    let theta_cr = n.and_then(|n| quantum_angle(beam.beta(), n, HC_EV_NM / lambda_nm));
    BoundaryCurves {
        lambda_nm,
        theta_cr,
        inner_lower: theta_cr.filter(|t| *t <= theta_i).map(|t| theta_i - t),
        inner_upper: theta_cr.filter(|t| *t >= theta_i).map(|t| t - theta_i),
        outer: theta_cr.map(|t| theta_i + t),
        conventional: n.and_then(|n| conventional_angle(beam.beta(), n)),
    }
}

/// Spatial amplitude over a (λ, θ_ph) grid with zone mask and boundary curves.
pub fn amplitude_map(req: &MapRequest) -> Result<AmplitudeMap> {
    let (nl, nt) = req.grid;
    if nl < 2 || nt < 2 {
        return Err(domain(format!("grid must be at least 2x2, got {nl}x{nt}")));
    }
    let (l0, l1) = req.lambda_range;
    let (t0, t1) = req.theta_range;
    if !(l0 > 0.0 && l1 > l0) {
        return Err(domain(format!("invalid wavelength range {:?}", req.lambda_range)));
    }
    if !(t0 >= 0.0 && t1 > t0 && t1 <= std::f64::consts::PI) {
        return Err(domain(format!("invalid angle range {:?}", req.theta_range)));
    }
    let lambdas = crate::linspace(req.lambda_range, nl);
    let thetas = crate::linspace(req.theta_range, nt);
    let l_i = req.beam.oam();
    let l_f = req.channel.outgoing_oam(l_i);

    let columns: Vec<(Vec<MapCell>, BoundaryCurves)> = lambdas
        .par_iter()
        .map(|&lambda_nm| {
            let n = n_at(&req.model, lambda_nm).ok();
            let cells = thetas
                .iter()
                .map(|&theta_ph| match n {
                    Some(n) => evaluate_cell(&req.beam, n, lambda_nm, theta_ph, l_i, l_f),
                    None => MapCell {
                        lambda_nm,
                        theta_ph,
                        zone: Zone::Invalid,
                        amplitude: None,
                        s_delta: None,
                        spinor_factor: None,
                    },
                })
                .collect();
            (cells, boundary_at(&req.beam, n, lambda_nm))
        })
        .collect();

    let window = req.model.window();
    let quantum_cutoff_nm = if l0 >= window.0 && l1 <= window.1 {
        quantum_cutoff_wavelength(&req.model, req.beam.beta(), req.lambda_range).unwrap_or(None)
    } else {
        None
    };
    let (cells, boundaries): (Vec<_>, Vec<_>) = columns.into_iter().unzip();
    Ok(AmplitudeMap {
        lambdas,
        thetas,
        cells: cells.into_iter().flatten().collect(),
        boundaries,
        quantum_cutoff_nm,
        l_i,
        l_f,
        photon_order: req.channel.photon_order(),
    })
}
