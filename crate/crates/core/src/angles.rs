//! Emission angles, spectral cutoffs, double-cone geometry and the
//! conservation-law solver for the outgoing electron.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::constants::{ELECTRON_REST_ENERGY_EV, HC_EV_NM};
use crate::dispersion::{bisect, check_bracket, n_at, DispersionModel};
use crate::error::{domain, Error, Result};

/// Tolerance on the cosine argument above 1 that is still treated as the
/// tangency point rather than beyond cutoff.
pub const ARCCOS_CLAMP: f64 = 1e-12;

/// arccos(1 − d) evaluated without cancellation near d = 0.
fn arccos_one_minus(d: f64) -> f64 {
    2.0 * (0.5 * d).sqrt().asin()
}

/// Frank–Tamm cone angle arccos(1/(βn)); `None` below threshold.
pub fn conventional_angle(beta: f64, n: f64) -> Option<f64> {
    let bn = beta * n;
    if !(bn >= 1.0) {
        return None;
    }
    Some(arccos_one_minus(beta.mul_add(n, -1.0) / bn))
}

/// 1 − cos θ_ČR for the recoil-corrected angle, computed so that the
/// threshold difference βn − 1 is never formed by subtracting nearly equal numbers.
pub fn quantum_cos_complement(beta: f64, n: f64, hbar_omega: f64, rest_energy: f64) -> f64 {
    let (excess, recoil) = cos_complement_parts(beta, n, hbar_omega, rest_energy);
    excess - recoil
}

fn cos_complement_parts(beta: f64, n: f64, hbar_omega: f64, rest_energy: f64) -> (f64, f64) {
    let bn = beta * n;
    let recoil = hbar_omega / rest_energy * ((1.0 - beta) * (1.0 + beta)).sqrt() / beta
        * (n * n - 1.0)
        / (2.0 * n);
    (beta.mul_add(n, -1.0) / bn, recoil)
}

/// Recoil-corrected Čerenkov angle θ_ČR for photon energy `hbar_omega` (eV).
///
/// `None` below threshold, beyond the quantum cutoff, or when the cosine
/// argument drops under −1.
pub fn quantum_angle(beta: f64, n: f64, hbar_omega: f64) -> Option<f64> {
    quantum_angle_with_rest_energy(beta, n, hbar_omega, ELECTRON_REST_ENERGY_EV)
}

pub fn quantum_angle_with_rest_energy(
    beta: f64,
    n: f64,
    hbar_omega: f64,
    rest_energy: f64,
) -> Option<f64> {
    if !(beta > 0.0 && beta < 1.0 && n > 0.0 && hbar_omega >= 0.0) {
        return None;
    }
    let (excess, recoil) = cos_complement_parts(beta, n, hbar_omega, rest_energy);
    let mut d = excess - recoil;
    // Below the rounding floor of the subtraction the sign of d is noise;
    // √d would turn it into an angle of order 1e-8.
    if d.abs() <= 4.0 * f64::EPSILON * excess.abs() {
        d = 0.0;
    }
    if !(-ARCCOS_CLAMP..=2.0).contains(&d) {
        None
    } else {
        Some(arccos_one_minus(d.max(0.0)))
    }
}

/// Photon energy (eV) above which emission is kinematically forbidden.
pub fn cutoff_energy(beta: f64, n: f64) -> Result<f64> {
    cutoff_energy_with_rest_energy(beta, n, ELECTRON_REST_ENERGY_EV)
}

pub fn cutoff_energy_with_rest_energy(beta: f64, n: f64, rest_energy: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    if !(n > 1.0) {
        return Err(Error::NoThreshold { n });
    }
    let excess = beta.mul_add(n, -1.0);
    if excess <= 0.0 {
        return Err(Error::BelowThreshold { beta_n: beta * n });
    }
    Ok(signed_cutoff(beta, n, rest_energy, excess))
}

// Continuous in n; negative below threshold.
fn signed_cutoff(beta: f64, n: f64, rest_energy: f64, excess: f64) -> f64 {
    2.0 * rest_energy * excess / ((n * n - 1.0) * ((1.0 - beta) * (1.0 + beta)).sqrt())
}

/// Wavelength (nm) at which the photon energy equals the local quantum cutoff
/// ħω_cutoff(β, n(λ)). `None` when no crossing exists inside the bracket.
pub fn quantum_cutoff_wavelength(
    model: &DispersionModel,
    beta: f64,
    bracket: (f64, f64),
) -> Result<Option<f64>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    check_bracket(model, bracket)?;
    if let DispersionModel::Constant { n } = model {
        return Ok(match cutoff_energy(beta, *n) {
            Ok(w) => {
                let l = HC_EV_NM / w;
                (l >= bracket.0 && l <= bracket.1).then_some(l)
            }
            Err(Error::BelowThreshold { .. }) => None,
            Err(e) => return Err(e),
        });
    }
    bisect(
        |l| {
            let n = n_at(model, l)?;
            if n <= 1.0 {
                return Err(Error::NoThreshold { n });
            }
            let excess = beta.mul_add(n, -1.0);
            Ok(HC_EV_NM / l - signed_cutoff(beta, n, ELECTRON_REST_ENERGY_EV, excess))
        },
        bracket.0,
        bracket.1,
    )
}

/// Inner/outer emission cones of a Bessel beam with spread θ_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeometry {
    pub theta_cr: f64,
    pub inner: f64,
    pub outer: f64,
    /// The outer cone points backwards (> 90°).
    pub backward: bool,
}

pub fn double_cone(theta_i: f64, theta_cr: f64) -> ConeGeometry {
    let outer = theta_i + theta_cr;
    ConeGeometry {
        theta_cr,
        inner: (theta_i - theta_cr).abs(),
        outer,
        backward: outer > FRAC_PI_2,
    }
}

/// Whether a photon at polar angle `theta_ph` can make the angle `theta_cr`
/// with some electron momentum on the cone of half-angle `theta_i`.
///
/// The angle between the two directions ranges over
/// `[|θ_i − θ_ph|, min(θ_i + θ_ph, 2π − θ_i − θ_ph)]` as the relative azimuth varies.
pub fn cone_band_permits(theta_i: f64, theta_cr: f64, theta_ph: f64) -> bool {
    let lo = (theta_i - theta_ph).abs();
    let hi = (theta_i + theta_ph).min(2.0 * PI - theta_i - theta_ph);
    theta_cr >= lo && theta_cr <= hi
}

/// Outgoing electron after emitting a photon, fixed by energy and on-axis momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutgoingKinematics {
    pub energy: f64,
    pub p_z: f64,
    pub p_r: f64,
    pub theta: f64,
}

/// Solves energy and longitudinal-momentum conservation for the outgoing
/// electron. `Ok(None)` marks a forbidden configuration (off shell).
pub fn conservation_solve(
    e_i: f64,
    theta_i: f64,
    hbar_omega: f64,
    theta_ph: f64,
    n: f64,
) -> Result<Option<OutgoingKinematics>> {
    let m = ELECTRON_REST_ENERGY_EV;
    if !(e_i > m) || !e_i.is_finite() {
        return Err(domain(format!("incoming energy {e_i} eV must exceed mc^2")));
    }
    if !(hbar_omega >= 0.0) {
        return Err(domain(format!("photon energy must be >= 0, got {hbar_omega}")));
    }
    if !(0.0..FRAC_PI_2).contains(&theta_i) {
        return Err(domain(format!("theta_i must lie in [0, pi/2), got {theta_i}")));
    }
    let e_f = e_i - hbar_omega;
    if e_f <= m {
        return Ok(None);
    }
    let p_i = ((e_i - m) * (e_i + m)).sqrt();
    let (p_iz, s_i) = (p_i * theta_i.cos(), p_i * theta_i.sin());
    let (cos_ph, k) = (theta_ph.cos(), n * hbar_omega);
    let k_z = k * cos_ph;
    // (E_f² − m²) − p_fz², expanded so that the O(E²) parts cancel analytically.
    let radicand = s_i * s_i - 2.0 * e_i * hbar_omega
        + 2.0 * p_iz * k_z
        + hbar_omega * hbar_omega * (1.0 - n * cos_ph) * (1.0 + n * cos_ph);
    if radicand < 0.0 {
        return Ok(None);
    }
    let p_z = p_iz - k_z;
    let p_r = radicand.sqrt();
    Ok(Some(OutgoingKinematics {
        energy: e_f,
        p_z,
        p_r,
        theta: p_r.atan2(p_z),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::energy_from_beta;
    use approx::assert_relative_eq;

    const N_PAPER: f64 = 1.45986;

    #[test]
    fn conventional_examples() {
        let t = conventional_angle(0.75, 1.5).unwrap();
        assert_relative_eq!(t, (8.0f64 / 9.0).acos(), max_relative = 1e-12);
        assert!((t.to_degrees() - 27.266).abs() < 1e-3);
        assert_eq!(conventional_angle(0.5, 2.0), Some(0.0));
        assert_eq!(conventional_angle(0.5, 1.3), None);
        // arccos(1/(0.685 * 1.45986)) in degrees, 30-digit evaluation.
        let t = conventional_angle(0.685, N_PAPER).unwrap().to_degrees();
        assert_relative_eq!(t, 0.164_069_863_464_095_2, max_relative = 1e-9);
    }

    #[test]
    fn quantum_reduces_to_conventional() {
        for &(b, n) in &[(0.75, 1.5), (0.685, N_PAPER), (0.99, 1.33)] {
            assert_eq!(quantum_angle(b, n, 0.0), conventional_angle(b, n));
        }
    }

    #[test]
    fn quantum_angle_vanishes_at_cutoff() {
        let w = cutoff_energy(0.685, N_PAPER).unwrap();
        let t = quantum_angle(0.685, N_PAPER, w).unwrap();
        assert!(t.abs() < 1e-9, "{t}");
        assert_eq!(quantum_angle(0.685, N_PAPER, w * (1.0 + 1e-6)), None);
    }

    #[test]
    fn quantum_angle_half_cutoff() {
        // 50-digit evaluation of the recoil-corrected arccos at hbar*omega = 2.54 eV.
        let t = quantum_angle(0.685, N_PAPER, 2.54).unwrap();
        assert_relative_eq!(t, 0.002_025_724_560_448_700_6, max_relative = 1e-9);
    }

    #[test]
    fn paper_cutoff_near_244_nm() {
        let w = cutoff_energy(0.685, N_PAPER).unwrap();
        assert!((w - 5.08).abs() < 0.01, "{w}");
        assert!((HC_EV_NM / w - 244.0).abs() < 2.0);
    }

    #[test]
    fn far_from_threshold_cutoff_is_gamma_ray() {
        let w = cutoff_energy(0.75, 1.5).unwrap();
        assert_relative_eq!(w, 154_511.559_076_014_76, max_relative = 1e-12);
    }

    #[test]
    fn cutoff_linear_near_threshold() {
        let n = 1.5;
        let b0 = 1.0 / n;
        let w1 = cutoff_energy(b0 * (1.0 + 1e-6), n).unwrap();
        let w2 = cutoff_energy(b0 * (1.0 + 2e-6), n).unwrap();
        assert_relative_eq!(w2 / w1, 2.0, max_relative = 1e-5);
    }

    #[test]
    fn cutoff_errors() {
        assert!(matches!(cutoff_energy(0.3, 1.5), Err(Error::BelowThreshold { .. })));
        assert!(matches!(cutoff_energy(0.9, 1.0), Err(Error::NoThreshold { .. })));
        assert!(cutoff_energy(1.0, 1.5).is_err());
    }

    #[test]
    fn quantum_cutoff_wavelength_constant_matches_formula() {
        let m = DispersionModel::constant(N_PAPER).unwrap();
        let l = quantum_cutoff_wavelength(&m, 0.685, (200.0, 800.0)).unwrap().unwrap();
        assert_eq!(l, HC_EV_NM / cutoff_energy(0.685, N_PAPER).unwrap());
        let below = DispersionModel::constant(1.2).unwrap();
        assert_eq!(quantum_cutoff_wavelength(&below, 0.685, (200.0, 800.0)).unwrap(), None);
    }

    #[test]
    fn quantum_cutoff_wavelength_silica_resubstitutes() {
        let m = DispersionModel::silica();
        let l = quantum_cutoff_wavelength(&m, 0.685, (210.0, 800.0)).unwrap().unwrap();
        let n = n_at(&m, l).unwrap();
        let resid = HC_EV_NM / l - cutoff_energy(0.685, n).unwrap();
        assert!(resid.abs() < 1e-6, "{resid}");
    }

    #[test]
    fn double_cone_limits() {
        let c = double_cone(0.0, 0.3);
        assert_eq!((c.inner, c.outer), (0.3, 0.3));
        let t = 10.3_f64.to_radians();
        let c = double_cone(t, 0.0);
        assert_eq!((c.inner, c.outer), (t, t));
        assert!(!c.backward);
    }

    #[test]
    fn backward_cone() {
        let tcr = conventional_angle(0.99, 1.5).unwrap();
        assert!((tcr.to_degrees() - 47.6).abs() < 0.1);
        let c = double_cone(50_f64.to_radians(), tcr);
        assert!(c.outer.to_degrees() > 90.0);
        assert!(c.backward);
    }

    #[test]
    fn no_emission_leaves_electron_unchanged() {
        let e = energy_from_beta(0.685).unwrap();
        let t = 10.3_f64.to_radians();
        let out = conservation_solve(e, t, 0.0, 0.2, N_PAPER).unwrap().unwrap();
        assert_eq!(out.energy, e);
        assert_relative_eq!(out.theta, t, max_relative = 1e-12);
    }

    #[test]
    fn total_energy_transfer_leaves_electron_at_rest() {
        let m = ELECTRON_REST_ENERGY_EV;
        let e = energy_from_beta(0.9).unwrap();
        let w = e - m;
        assert_eq!(conservation_solve(e, 0.0, w, 0.3, 1.5).unwrap(), None);
        // Just short of the full transfer, with the photon absorbing all of p_z.
        let w = (e - m) * (1.0 - 1e-9);
        let p_iz = ((e - m) * (e + m)).sqrt();
        let cos_ph = p_iz / (1.5 * w);
        if cos_ph <= 1.0 {
            let out = conservation_solve(e, 0.0, w, cos_ph.acos(), 1.5).unwrap();
            if let Some(out) = out {
                assert!(out.p_z.abs() < 1e-3 * p_iz);
            }
        }
    }

    #[test]
    fn input_validation() {
        assert!(conservation_solve(4e5, 0.1, 1.0, 0.1, 1.5).is_err());
        assert!(conservation_solve(7e5, 0.1, -1.0, 0.1, 1.5).is_err());
        assert!(conservation_solve(7e5, 1.7, 1.0, 0.1, 1.5).is_err());
    }

    #[test]
    fn cone_band() {
        let (ti, tcr) = (0.2, 0.05);
        assert!(cone_band_permits(ti, tcr, 0.2));
        assert!(cone_band_permits(ti, tcr, 0.151));
        assert!(cone_band_permits(ti, tcr, 0.249));
        assert!(!cone_band_permits(ti, tcr, 0.26));
        assert!(!cone_band_permits(ti, tcr, 0.14));
    }
}
