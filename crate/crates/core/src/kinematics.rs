//! Relativistic kinematics and the cylindrical state model.

use serde::{Deserialize, Serialize};

use crate::constants::{ELECTRON_REST_ENERGY_EV, HC_EV_NM};
use crate::error::{domain, Result};

/// Lorentz factor γ = (1 − β²)^(-1/2).
pub fn lorentz_factor(beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(domain(format!("beta must lie in [0, 1), got {beta}")));
    }
    Ok(1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

/// Total energy in eV of an electron moving with velocity β.
pub fn energy_from_beta(beta: f64) -> Result<f64> {
    Ok(lorentz_factor(beta)? * ELECTRON_REST_ENERGY_EV)
}

/// Velocity β of a particle with total energy `energy` and rest energy `rest_energy`.
pub fn beta_from_energy_with_rest(energy: f64, rest_energy: f64) -> Result<f64> {
    if !(energy >= rest_energy) || !energy.is_finite() {
        return Err(domain(format!(
            "total energy {energy} eV is below the rest energy {rest_energy} eV"
        )));
    }
    let r = rest_energy / energy;
    Ok(((1.0 - r) * (1.0 + r)).sqrt())
}

/// Velocity β of an electron with total energy `energy` (eV).
pub fn beta_from_energy(energy: f64) -> Result<f64> {
    beta_from_energy_with_rest(energy, ELECTRON_REST_ENERGY_EV)
}

/// Longitudinal and transverse momenta `(p_z·c, p_r·c)` in eV for a state of
/// total energy `energy` and spread angle `theta`.
pub fn momenta(energy: f64, theta: f64) -> Result<(f64, f64)> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    let p = beta_from_energy(energy)? * energy;
    Ok((p * theta.cos(), p * theta.sin()))
}

/// Direction of a photon-axis conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    EnergyToWavelength,
    WavelengthToEnergy,
}

/// Converts photon energy (eV) to wavelength (nm) or back. The map is its own inverse.
pub fn photon_energy_wavelength(x: f64, direction: Conversion) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "photon energy/wavelength must be positive, got {x} ({direction:?})"
        )));
    }
    Ok(HC_EV_NM / x)
}

pub fn wavelength_to_energy(lambda_nm: f64) -> Result<f64> {
    photon_energy_wavelength(lambda_nm, Conversion::WavelengthToEnergy)
}

pub fn energy_to_wavelength(hbar_omega: f64) -> Result<f64> {
    photon_energy_wavelength(hbar_omega, Conversion::EnergyToWavelength)
}

/// Spin projection along the cylinder axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// Cylindrical photon polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    Azimuthal,
    Radial,
}

/// An electron in a cylindrical (Bessel) state |E, s, θ, l⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalElectronState {
    energy: f64,
    spin: Spin,
    spread_angle: f64,
    oam: i32,
    rest_energy: f64,
}

impl CylindricalElectronState {
    pub fn new(energy: f64, spin: Spin, spread_angle: f64, oam: i32) -> Result<Self> {
        Self::with_rest_energy(energy, spin, spread_angle, oam, ELECTRON_REST_ENERGY_EV)
    }

    pub fn with_rest_energy(
        energy: f64,
        spin: Spin,
        spread_angle: f64,
        oam: i32,
        rest_energy: f64,
    ) -> Result<Self> {
        if !(rest_energy > 0.0) {
            return Err(domain("rest energy must be positive"));
        }
        beta_from_energy_with_rest(energy, rest_energy)?;
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&spread_angle) {
            return Err(domain(format!(
                "spread angle must lie in [0, pi/2), got {spread_angle}"
            )));
        }
        Ok(Self {
            energy,
            spin,
            spread_angle,
            oam,
            rest_energy,
        })
    }

    /// Builds a state from its velocity rather than its energy.
    pub fn from_beta(beta: f64, spin: Spin, spread_angle: f64, oam: i32) -> Result<Self> {
        Self::new(energy_from_beta(beta)?, spin, spread_angle, oam)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn spread_angle(&self) -> f64 {
        self.spread_angle
    }

    pub fn oam(&self) -> i32 {
        self.oam
    }

    pub fn rest_energy(&self) -> f64 {
        self.rest_energy
    }

    pub fn beta(&self) -> f64 {
        let r = self.rest_energy / self.energy;
        ((1.0 - r) * (1.0 + r)).sqrt()
    }

    pub fn gamma(&self) -> f64 {
        self.energy / self.rest_energy
    }

    /// |p|·c in eV.
    pub fn momentum(&self) -> f64 {
        self.beta() * self.energy
    }

    /// p_z·c in eV.
    pub fn p_z(&self) -> f64 {
        self.momentum() * self.spread_angle.cos()
    }

    /// p_r·c in eV.
    pub fn p_r(&self) -> f64 {
        self.momentum() * self.spread_angle.sin()
    }
}

/// An emitted photon |ħω, s_ph, θ_ph, l_ph⟩ in a medium of index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonState {
    energy: f64,
    polarization: Polarization,
    emission_angle: f64,
    oam: i32,
}

impl PhotonState {
    pub fn new(energy: f64, polarization: Polarization, emission_angle: f64, oam: i32) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(domain(format!("photon energy must be positive, got {energy}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&emission_angle) {
            return Err(domain(format!(
                "emission angle must lie in [0, pi], got {emission_angle}"
            )));
        }
        Ok(Self {
            energy,
            polarization,
            emission_angle,
            oam,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn emission_angle(&self) -> f64 {
        self.emission_angle
    }

    pub fn oam(&self) -> i32 {
        self.oam
    }

    pub fn wavelength(&self) -> f64 {
        HC_EV_NM / self.energy
    }

    /// (ħc·k_z, ħc·k_r) in eV for refractive index `n`.
    pub fn wavevector(&self, n: f64) -> (f64, f64) {
        let k = n * self.energy;
        (k * self.emission_angle.cos(), k * self.emission_angle.sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rest_frame() {
        assert_eq!(lorentz_factor(0.0).unwrap(), 1.0);
        let e = energy_from_beta(0.0).unwrap();
        assert_eq!(e - ELECTRON_REST_ENERGY_EV, 0.0);
    }

    #[test]
    fn pythagorean_beta() {
        assert_relative_eq!(lorentz_factor(0.8).unwrap(), 5.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn paper_beam_is_about_190_kev() {
        let ke = energy_from_beta(0.685).unwrap() - ELECTRON_REST_ENERGY_EV;
        // 510998.95 * (1/sqrt(1 - 0.685^2) - 1)
        assert!((ke - 190_399.46).abs() < 0.1, "{ke}");
        assert!((ke / 1e3 - 190.4).abs() < 0.05);
    }

    #[test]
    fn beta_out_of_range() {
        assert!(lorentz_factor(1.0).is_err());
        assert!(lorentz_factor(-0.1).is_err());
        assert!(lorentz_factor(f64::NAN).is_err());
    }

    #[test]
    fn momenta_limits() {
        let e = energy_from_beta(0.5).unwrap();
        let (pz, pr) = momenta(e, 0.0).unwrap();
        assert_eq!(pr, 0.0);
        assert_relative_eq!(pz, 0.5 * e, max_relative = 1e-14);
        assert_eq!(momenta(ELECTRON_REST_ENERGY_EV, 0.3).unwrap(), (0.0, 0.0));
        assert!(momenta(ELECTRON_REST_ENERGY_EV - 1.0, 0.3).is_err());
    }

    #[test]
    fn momenta_at_paper_parameters() {
        // 40-digit evaluation of beta*E*cos(theta), beta*E*sin(theta) with
        // beta = 0.685, theta = 10.3 deg, mc^2 = 510998.95 eV.
        let e = energy_from_beta(0.685).unwrap();
        let (pz, pr) = momenta(e, 10.3_f64.to_radians()).unwrap();
        assert_relative_eq!(pz, 472_715.351_153_640_8, max_relative = 1e-12);
        assert_relative_eq!(pr, 85_906.938_968_496_9, max_relative = 1e-12);
    }

    #[test]
    fn photon_conversion() {
        let l = energy_to_wavelength(2.0).unwrap();
        assert_relative_eq!(l, 619.921, max_relative = 1e-6);
        assert_eq!(wavelength_to_energy(1239.842).unwrap(), 1.0);
        assert!(wavelength_to_energy(0.0).is_err());
        assert!(energy_to_wavelength(-1.0).is_err());
    }

    #[test]
    fn state_validation() {
        assert!(CylindricalElectronState::new(4e5, Spin::Up, 0.1, 0).is_err());
        assert!(CylindricalElectronState::new(7e5, Spin::Up, 1.6, 0).is_err());
        let s = CylindricalElectronState::from_beta(0.685, Spin::Down, 0.18, 3).unwrap();
        assert_relative_eq!(s.beta(), 0.685, max_relative = 1e-14);
        assert_eq!(s.spin().flipped(), Spin::Up);
        assert!(PhotonState::new(0.0, Polarization::Radial, 0.1, 0).is_err());
    }
}
