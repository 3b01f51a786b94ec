//! Incoherent averaging of the Bessel-beam rates over a Gaussian spread in
//! spread angle θ_i and energy E_i.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::quantum_cos_complement;
use crate::constants::{ELECTRON_REST_ENERGY_EV, HC_EV_NM};
use crate::dispersion::{bisect, n_at, DispersionModel};
use crate::error::{domain, Result};
use crate::kinematics::beta_from_energy;
use crate::quadrature::{gauss_legendre_on, pairwise_sum};
use crate::rates::{channel_rate, spectrum_row, validate_scan, RateChannel, RateResult, RowFlag, SpectrumTable};

/// FWHM = 2√(2 ln 2) σ.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_energy: usize,
    /// Half-width of the truncation window in standard deviations.
    pub span_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_theta: 32,
            n_energy: 32,
            span_sigmas: 4.0,
        }
    }
}

/// Gaussian electron beam. The energy spread is one standard deviation; the
/// angular spread is the FWHM of a zero-centred Gaussian in the polar angle θ_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBeam {
    pub mean_energy: f64,
    pub energy_sigma: f64,
    pub theta_fwhm: f64,
    pub quadrature: QuadratureSpec,
}

impl GaussianBeam {
    pub fn new(mean_energy: f64, energy_sigma: f64, theta_fwhm: f64, quadrature: QuadratureSpec) -> Result<Self> {
        let beam = Self {
            mean_energy,
            energy_sigma,
            theta_fwhm,
            quadrature,
        };
        beam.validate()?;
        Ok(beam)
    }

    pub fn validate(&self) -> Result<()> {
        let q = &self.quadrature;
        if !(self.energy_sigma >= 0.0) || !(self.theta_fwhm >= 0.0) {
            return Err(domain("beam spreads must be non-negative"));
        }
        if q.n_theta < 2 || q.n_energy < 2 {
            return Err(domain(format!(
                "quadrature needs at least 2 nodes per axis, got {}x{}",
                q.n_theta, q.n_energy
            )));
        }
        if !(q.span_sigmas > 0.0) {
            return Err(domain("span_sigmas must be positive"));
        }
        if !(self.mean_energy - q.span_sigmas * self.energy_sigma > ELECTRON_REST_ENERGY_EV) {
            return Err(domain("energy window reaches below the rest energy"));
        }
        Ok(())
    }

    pub fn theta_sigma(&self) -> f64 {
        self.theta_fwhm / FWHM_PER_SIGMA
    }

    pub fn with_nodes(&self, n_theta: usize, n_energy: usize) -> Self {
        Self {
            quadrature: QuadratureSpec {
                n_theta,
                n_energy,
                ..self.quadrature
            },
            ..*self
        }
    }

    /// Angular nodes and normalised weights (half-normal on [0, span·σ_θ]).
    fn theta_rule(&self) -> (Vec<f64>, Vec<f64>) {
        let sigma = self.theta_sigma();
        if sigma == 0.0 {
            return (vec![0.0], vec![1.0]);
        }
        let k = self.quadrature.span_sigmas;
        let hi = (k * sigma).min(std::f64::consts::FRAC_PI_2 * (1.0 - 1e-12));
        let (x, w) = gauss_legendre_on(self.quadrature.n_theta, 0.0, hi);
        let mass = sigma * (std::f64::consts::PI / 2.0).sqrt() * libm::erf(hi / (sigma * std::f64::consts::SQRT_2));
        let w = x
            .iter()
            .zip(&w)
            .map(|(t, w)| w * (-0.5 * (t / sigma).powi(2)).exp() / mass)
            .collect();
        (x, w)
    }

    /// Energy nodes and normalised weights over `[lo, hi]` ⊆ the truncation window.
    fn energy_rule(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let (mu, sigma) = (self.mean_energy, self.energy_sigma);
        let k = self.quadrature.span_sigmas;
        let mass = sigma * (2.0 * std::f64::consts::PI).sqrt() * libm::erf(k / std::f64::consts::SQRT_2);
        // Offsets from the mean keep the weights accurate when σ ≪ E.
        let (u, w) = gauss_legendre_on(self.quadrature.n_energy, lo - mu, hi - mu);
        let w = u
            .iter()
            .zip(&w)
            .map(|(u, w)| w * (-0.5 * (u / sigma).powi(2)).exp() / mass)
            .collect();
        (u.iter().map(|u| mu + u).collect(), w)
    }
}

/// Where along E the channel switches on: emission needs θ_ČR to exist
/// (quantum channels) or βn > 1 (Frank–Tamm). Both conditions are monotone in
/// E, so the allowed set is [E*, ∞) for a single E*.
fn allowed_from(channel: RateChannel, n: f64, hbar_omega: f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let m = ELECTRON_REST_ENERGY_EV;
    let margin = |e: f64| -> Result<f64> {
        let beta = beta_from_energy(e)?;
        Ok(match channel {
            RateChannel::FrankTamm => beta.mul_add(n, -1.0),
            _ => quantum_cos_complement(beta, n, hbar_omega, m),
        })
    };
    let (m_lo, m_hi) = (margin(lo)?, margin(hi)?);
    if m_lo >= 0.0 {
        return Ok(Some(lo));
    }
    if m_hi < 0.0 {
        return Ok(None);
    }
    bisect(margin, lo, hi)
}

/// Rate of `channel` averaged over the beam's (θ_i, E_i) distribution at
/// refractive index `n` and photon energy `hbar_omega`.
pub fn average_rate(channel: RateChannel, beam: &GaussianBeam, n: f64, hbar_omega: f64) -> Result<RateResult> {
    beam.validate()?;
    let value = average_with(beam, channel, n, hbar_omega, |e, t| {
        channel_rate(channel, e, t, n, hbar_omega).map(|r| r.gamma_omega)
    })?;
    Ok(RateResult {
        gamma_omega: value.unwrap_or(0.0),
        channel,
        below_threshold: false,
        beyond_cutoff: value.is_none(),
    })
}

/// Averages an arbitrary rate function Γ(E_i, θ_i) with the beam weights,
/// integrating only where `channel` allows emission. `None` if the whole
/// energy window is forbidden.
pub fn average_with<F>(
    beam: &GaussianBeam,
    channel: RateChannel,
    n: f64,
    hbar_omega: f64,
    rate: F,
) -> Result<Option<f64>>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let (thetas, theta_w) = beam.theta_rule();
    let mu = beam.mean_energy;
    let (energies, energy_w) = if beam.energy_sigma == 0.0 {
        let ok = allowed_from(channel, n, hbar_omega, mu, mu)?.is_some();
        if !ok {
            return Ok(None);
        }
        (vec![mu], vec![1.0])
    } else {
        let half = beam.quadrature.span_sigmas * beam.energy_sigma;
        let (lo, hi) = (mu - half, mu + half);
        match allowed_from(channel, n, hbar_omega, lo, hi)? {
            None => return Ok(None),
            Some(start) if start >= hi => return Ok(None),
            Some(start) => beam.energy_rule(start, hi),
        }
    };
    let mut terms = Vec::with_capacity(thetas.len() * energies.len());
    for (t, wt) in thetas.iter().zip(&theta_w) {
        for (e, we) in energies.iter().zip(&energy_w) {
            let g = rate(*e, *t)?;
            terms.push(wt * we * g);
        }
    }
    Ok(Some(pairwise_sum(&terms)))
}

/// Spectrum with beam-averaged rates next to the Bessel-beam reference taken
/// at the mean energy and θ_i = θ_FWHM.
pub fn averaged_spectrum_scan(
    beam: &GaussianBeam,
    model: &DispersionModel,
    lambda_range: (f64, f64),
    n_points: usize,
    channels: &[RateChannel],
) -> Result<SpectrumTable> {
    beam.validate()?;
    validate_scan(lambda_range, n_points)?;
    let lambdas = crate::linspace(lambda_range, n_points);
    let rows = lambdas
        .par_iter()
        .map(|&lambda_nm| {
            let mut row = spectrum_row(beam.mean_energy, beam.theta_fwhm, model, lambda_nm, channels);
            let hbar_omega = HC_EV_NM / lambda_nm;
            row.averaged = match row.n {
                Some(n) => channels
                    .iter()
                    .map(|&c| average_rate(c, beam, n, hbar_omega).ok().map(|r| r.gamma_omega))
                    .collect(),
                None => vec![None; channels.len()],
            };
            if row.averaged.iter().any(Option::is_none) && !row.flags.contains(&RowFlag::DispersionError) {
                row.flags.push(RowFlag::KinematicLimit);
            }
            row
        })
        .collect();
    Ok(SpectrumTable {
        channels: channels.to_vec(),
        rows,
    })
}

/// Convenience: beam-averaged rate at wavelength `lambda_nm` for a dispersive medium.
pub fn average_rate_at_wavelength(
    channel: RateChannel,
    beam: &GaussianBeam,
    model: &DispersionModel,
    lambda_nm: f64,
) -> Result<RateResult> {
    let n = n_at(model, lambda_nm)?;
    average_rate(channel, beam, n, HC_EV_NM / lambda_nm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::energy_from_beta;
    use crate::rates::{rate_flip_azimuthal, rate_total};

    fn beam(sigma_e: f64, fwhm_deg: f64) -> GaussianBeam {
        GaussianBeam::new(
            energy_from_beta(0.685).unwrap(),
            sigma_e,
            fwhm_deg.to_radians(),
            QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn zero_width_is_the_bessel_rate() {
        let b = beam(0.0, 0.0);
        for w in [2.0, 4.0, 5.0] {
            let avg = average_rate(RateChannel::FlipAzimuthal, &b, 1.45986, w).unwrap();
            let exact = rate_flip_azimuthal(b.mean_energy, 0.0, 1.45986, w).unwrap();
            assert_eq!(avg.gamma_omega, exact.gamma_omega);
            let avg = average_rate(RateChannel::Total, &b, 1.45986, w).unwrap();
            assert_eq!(avg.gamma_omega, rate_total(b.mean_energy, 1.45986, w).unwrap().gamma_omega);
        }
    }

    #[test]
    fn weights_are_normalised() {
        let b = beam(0.5, 10.3);
        let one = average_with(&b, RateChannel::FrankTamm, 1.5, 1.0, |_, _| Ok(1.0)).unwrap().unwrap();
        assert!((one - 1.0).abs() < 1e-12, "{one}");
    }

    #[test]
    fn linear_in_the_rate() {
        let b = beam(0.5, 10.3);
        let f = |e: f64, t: f64| Ok(rate_flip_azimuthal(e, t, 1.45986, 3.0)?.gamma_omega);
        let a = average_with(&b, RateChannel::FlipAzimuthal, 1.45986, 3.0, f).unwrap().unwrap();
        let s = average_with(&b, RateChannel::FlipAzimuthal, 1.45986, 3.0, |e, t| Ok(4.0 * f(e, t)?))
            .unwrap()
            .unwrap();
        assert!((s / a - 4.0).abs() < 1e-14);
    }

    #[test]
    fn total_ignores_angular_spread() {
        let narrow = beam(0.5, 0.0);
        let wide = beam(0.5, 10.3);
        for w in [3.0, 5.0, 5.3] {
            let a = average_rate(RateChannel::Total, &narrow, 1.45986, w).unwrap().gamma_omega;
            let b = average_rate(RateChannel::Total, &wide, 1.45986, w).unwrap().gamma_omega;
            assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{a} {b}");
        }
    }

    #[test]
    fn rejects_bad_beams() {
        let e = energy_from_beta(0.685).unwrap();
        let q = QuadratureSpec { n_theta: 1, ..Default::default() };
        assert!(GaussianBeam::new(e, 0.5, 0.01, q).is_err());
        assert!(GaussianBeam::new(e, -0.5, 0.01, QuadratureSpec::default()).is_err());
        assert!(GaussianBeam::new(510_999.0, 1.0, 0.01, QuadratureSpec::default()).is_err());
    }
}
