//! Photon emission rates per unit frequency (dimensionless Γ_ω convention).

use serde::{Deserialize, Serialize};

use crate::angles::{conventional_angle, cutoff_energy, quantum_cos_complement, ARCCOS_CLAMP};
use crate::constants::{ELECTRON_REST_ENERGY_EV, FINE_STRUCTURE, HC_EV_NM};
use crate::dispersion::{n_at, DispersionModel};
use crate::error::{domain, Error, Result};
use crate::kinematics::beta_from_energy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateChannel {
    FrankTamm,
    FlipAzimuthal,
    Total,
}

impl RateChannel {
    pub fn name(&self) -> &'static str {
        match self {
            RateChannel::FrankTamm => "frank_tamm",
            RateChannel::FlipAzimuthal => "flip_azimuthal",
            RateChannel::Total => "total",
        }
    }
}

impl std::str::FromStr for RateChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frank_tamm" => Ok(RateChannel::FrankTamm),
            "flip_azimuthal" => Ok(RateChannel::FlipAzimuthal),
            "total" => Ok(RateChannel::Total),
            other => Err(Error::Config(format!("unknown rate channel '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub gamma_omega: f64,
    pub channel: RateChannel,
    pub below_threshold: bool,
    pub beyond_cutoff: bool,
}

impl RateResult {
    fn value(channel: RateChannel, gamma_omega: f64) -> Self {
        Self {
            gamma_omega,
            channel,
            below_threshold: false,
            beyond_cutoff: false,
        }
    }

    fn below_threshold(channel: RateChannel) -> Self {
        Self {
            below_threshold: true,
            ..Self::value(channel, 0.0)
        }
    }

    fn beyond_cutoff(channel: RateChannel) -> Self {
        Self {
            beyond_cutoff: true,
            ..Self::value(channel, 0.0)
        }
    }

    pub fn is_zero_flagged(&self) -> bool {
        self.below_threshold || self.beyond_cutoff
    }
}

/// Classical rate αβ sin²θ with cos θ = 1/(βn).
pub fn frank_tamm(beta: f64, n: f64) -> RateResult {
    let channel = RateChannel::FrankTamm;
    if conventional_angle(beta, n).is_none() {
        return RateResult::below_threshold(channel);
    }
    let bn = beta * n;
    let sin2 = beta.mul_add(n, -1.0) * (bn + 1.0) / (bn * bn);
    RateResult::value(channel, FINE_STRUCTURE * beta * sin2)
}

/// Shared setup for the quantum channels: β, and (1 − cos θ_ČR) when emission is allowed.
enum Allowed {
    Yes { beta: f64, cos_complement: f64 },
    BelowThreshold,
    BeyondCutoff,
}

fn check_quantum(e_i: f64, n: f64, hbar_omega: f64) -> Result<Allowed> {
    let m = ELECTRON_REST_ENERGY_EV;
    let beta = beta_from_energy(e_i)?;
    if !(e_i > m) {
        return Err(domain(format!("incoming energy {e_i} eV must exceed mc^2")));
    }
    if !(hbar_omega > 0.0 && hbar_omega < e_i - m) {
        return Err(domain(format!(
            "photon energy {hbar_omega} eV must lie in (0, E_i - mc^2 = {})",
            e_i - m
        )));
    }
    if !(n > 0.0) {
        return Err(domain(format!("refractive index must be positive, got {n}")));
    }
    if !(beta * n > 1.0) {
        return Ok(Allowed::BelowThreshold);
    }
    let d = quantum_cos_complement(beta, n, hbar_omega, m);
    if !(-ARCCOS_CLAMP..=2.0).contains(&d) {
        return Ok(Allowed::BeyondCutoff);
    }
    Ok(Allowed::Yes {
        beta,
        cos_complement: d.max(0.0),
    })
}

fn flip_value(beta: f64, e_i: f64, theta_i: f64, n: f64, hbar_omega: f64, cos_cr: f64, sin2_cr: f64) -> f64 {
    let m = ELECTRON_REST_ENERGY_EV;
    let e_f = e_i - hbar_omega;
    let ratio = hbar_omega / e_i;
    let (s, c) = theta_i.sin_cos();
    let longitudinal = beta * e_i - n * (e_i + m) * cos_cr;
    let first = c * c * longitudinal * longitudinal / ((e_i + m) * (e_f + m));
    let second = 0.5 * n * n * s * s * sin2_cr * (e_i + m) / (e_f + m);
    FINE_STRUCTURE / (4.0 * beta) * ratio * ratio * (first + second)
}

/// Spin-flip emission into azimuthal polarization:
///
/// Γ = (α/4β)(ħω/E_i)² { cos²θ_i (βE_i − n(E_i+mc²) cos θ_ČR)² / ((E_i+mc²)(E_f+mc²))
///                       + ½ n² sin²θ_i sin²θ_ČR (E_i+mc²)/(E_f+mc²) }
pub fn rate_flip_azimuthal(e_i: f64, theta_i: f64, n: f64, hbar_omega: f64) -> Result<RateResult> {
    let channel = RateChannel::FlipAzimuthal;
    Ok(match check_quantum(e_i, n, hbar_omega)? {
        Allowed::BelowThreshold => RateResult::below_threshold(channel),
        Allowed::BeyondCutoff => RateResult::beyond_cutoff(channel),
        Allowed::Yes { beta, cos_complement: d } => {
            let value = flip_value(beta, e_i, theta_i, n, hbar_omega, 1.0 - d, d * (2.0 - d));
            RateResult::value(channel, value)
        }
    })
}

/// Rate summed over outgoing spin and photon polarization:
/// Γ = αβ sin²θ_ČR + (α/β)(ħω/E_i)² (n² − 1)/2. Independent of the beam spread.
pub fn rate_total(e_i: f64, n: f64, hbar_omega: f64) -> Result<RateResult> {
    let channel = RateChannel::Total;
    Ok(match check_quantum(e_i, n, hbar_omega)? {
        Allowed::BelowThreshold => RateResult::below_threshold(channel),
        Allowed::BeyondCutoff => RateResult::beyond_cutoff(channel),
        Allowed::Yes { beta, cos_complement: d } => {
            let ratio = hbar_omega / e_i;
            let value = FINE_STRUCTURE * beta * d * (2.0 - d)
                + FINE_STRUCTURE / beta * ratio * ratio * (n * n - 1.0) / 2.0;
            RateResult::value(channel, value)
        }
    })
}

/// Evaluates one channel for a Bessel beam of energy `e_i` and spread `theta_i`.
pub fn channel_rate(channel: RateChannel, e_i: f64, theta_i: f64, n: f64, hbar_omega: f64) -> Result<RateResult> {
    match channel {
        RateChannel::FrankTamm => Ok(frank_tamm(beta_from_energy(e_i)?, n)),
        RateChannel::FlipAzimuthal => rate_flip_azimuthal(e_i, theta_i, n, hbar_omega),
        RateChannel::Total => rate_total(e_i, n, hbar_omega),
    }
}

/// Size of the jump at the quantum cutoff: the left limit of the channel rate
/// (θ_ČR → 0), the right limit being zero.
pub fn discontinuity_at_cutoff(e_i: f64, theta_i: f64, n: f64, channel: RateChannel) -> Result<f64> {
    let m = ELECTRON_REST_ENERGY_EV;
    let beta = beta_from_energy(e_i)?;
    let w = cutoff_energy(beta, n)?;
    if !(w < e_i - m) {
        return Err(domain(format!(
            "cutoff {w} eV exceeds the available kinetic energy {}",
            e_i - m
        )));
    }
    match channel {
        RateChannel::FlipAzimuthal => Ok(flip_value(beta, e_i, theta_i, n, w, 1.0, 0.0)),
        RateChannel::Total => {
            let ratio = w / e_i;
            Ok(FINE_STRUCTURE / beta * ratio * ratio * (n * n - 1.0) / 2.0)
        }
        RateChannel::FrankTamm => Err(domain("the Frank-Tamm rate has no cutoff discontinuity")),
    }
}

/// Row annotations for spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    BelowThreshold,
    BeyondCutoff,
    DispersionError,
    KinematicLimit,
}

impl RowFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowFlag::BelowThreshold => "below_threshold",
            RowFlag::BeyondCutoff => "beyond_cutoff",
            RowFlag::DispersionError => "dispersion_error",
            RowFlag::KinematicLimit => "kinematic_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub lambda_nm: f64,
    pub hbar_omega_ev: f64,
    pub n: Option<f64>,
    pub theta_cr_rad: Option<f64>,
    pub frank_tamm: Option<f64>,
    /// One entry per requested channel, in `SpectrumTable::channels` order.
    pub rates: Vec<Option<f64>>,
    /// Beam-averaged rates, same order; empty for unaveraged scans.
    pub averaged: Vec<Option<f64>>,
    pub flags: Vec<RowFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub channels: Vec<RateChannel>,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn column(&self, channel: RateChannel) -> Option<Vec<Option<f64>>> {
        let k = self.channels.iter().position(|c| *c == channel)?;
        Some(self.rows.iter().map(|r| r.rates[k]).collect())
    }

    pub fn averaged_column(&self, channel: RateChannel) -> Option<Vec<Option<f64>>> {
        let k = self.channels.iter().position(|c| *c == channel)?;
        if self.rows.iter().any(|r| r.averaged.len() <= k) {
            return None;
        }
        Some(self.rows.iter().map(|r| r.averaged[k]).collect())
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.lambda_nm).collect()
    }
}

pub(crate) fn validate_scan(lambda_range: (f64, f64), n_points: usize) -> Result<()> {
    let (a, b) = lambda_range;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(domain(format!("invalid wavelength range {lambda_range:?}")));
    }
    if n_points < 2 {
        return Err(domain(format!("need at least 2 scan points, got {n_points}")));
    }
    Ok(())
}

/// Unaveraged row at one wavelength; dispersion and kinematic problems become flags.
pub(crate) fn spectrum_row(
    e_i: f64,
    theta_i: f64,
    model: &DispersionModel,
    lambda_nm: f64,
    channels: &[RateChannel],
) -> SpectrumRow {
    let hbar_omega = HC_EV_NM / lambda_nm;
    let mut row = SpectrumRow {
        lambda_nm,
        hbar_omega_ev: hbar_omega,
        n: None,
        theta_cr_rad: None,
        frank_tamm: None,
        rates: vec![None; channels.len()],
        averaged: Vec::new(),
        flags: Vec::new(),
    };
    let n = match n_at(model, lambda_nm) {
        Ok(n) => n,
        Err(_) => {
            row.flags.push(RowFlag::DispersionError);
            return row;
        }
    };
    row.n = Some(n);
    let beta = match beta_from_energy(e_i) {
        Ok(b) => b,
        Err(_) => {
            row.flags.push(RowFlag::KinematicLimit);
            return row;
        }
    };
    row.theta_cr_rad = crate::angles::quantum_angle(beta, n, hbar_omega);
    row.frank_tamm = Some(frank_tamm(beta, n).gamma_omega);
    for (slot, &channel) in row.rates.iter_mut().zip(channels) {
        match channel_rate(channel, e_i, theta_i, n, hbar_omega) {
            Ok(r) => *slot = Some(r.gamma_omega),
            Err(_) => {
                if !row.flags.contains(&RowFlag::KinematicLimit) {
                    row.flags.push(RowFlag::KinematicLimit);
                }
            }
        }
    }
    if !(beta * n > 1.0) {
        row.flags.push(RowFlag::BelowThreshold);
    } else if row.theta_cr_rad.is_none() {
        row.flags.push(RowFlag::BeyondCutoff);
    }
    row
}

/// Rates over an evenly spaced wavelength grid for a Bessel beam.
pub fn spectrum_scan(
    e_i: f64,
    theta_i: f64,
    model: &DispersionModel,
    lambda_range: (f64, f64),
    n_points: usize,
    channels: &[RateChannel],
) -> Result<SpectrumTable> {
    use rayon::prelude::*;
    validate_scan(lambda_range, n_points)?;
    beta_from_energy(e_i)?;
    let lambdas = crate::linspace(lambda_range, n_points);
    let rows = lambdas
        .par_iter()
        .map(|&l| spectrum_row(e_i, theta_i, model, l, channels))
        .collect();
    Ok(SpectrumTable {
        channels: channels.to_vec(),
        rows,
    })
}
