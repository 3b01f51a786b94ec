//! JSON scan configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::amplitude::{ChannelSelection, FlipSign};
use crate::beam::{GaussianBeam, QuadratureSpec};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::kinematics::{energy_from_beta, CylindricalElectronState, Polarization, Spin};
use crate::rates::RateChannel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    Spectrum,
    AveragedSpectrum,
    Ampmap,
}

impl ScanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanKind::Spectrum => "spectrum",
            ScanKind::AveragedSpectrum => "averaged_spectrum",
            ScanKind::Ampmap => "ampmap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    /// Either `beta` or `energy_ev` (total energy).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_ev: Option<f64>,
    #[serde(default)]
    pub theta_i_deg: f64,
    #[serde(default)]
    pub oam: i32,
    #[serde(default = "default_spin")]
    pub spin: Spin,
    #[serde(default)]
    pub energy_sigma_ev: f64,
    /// Defaults to `theta_i_deg` for averaged scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_fwhm_deg: Option<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

fn default_spin() -> Spin {
    Spin::Up
}

impl BeamConfig {
    pub fn energy(&self) -> Result<f64> {
        match (self.beta, self.energy_ev) {
            (Some(b), None) => energy_from_beta(b),
            (None, Some(e)) => Ok(e),
            _ => Err(Error::Config("beam: give exactly one of `beta` or `energy_ev`".into())),
        }
    }

    pub fn theta_i(&self) -> f64 {
        self.theta_i_deg.to_radians()
    }

    pub fn electron(&self) -> Result<CylindricalElectronState> {
        CylindricalElectronState::new(self.energy()?, self.spin, self.theta_i(), self.oam)
    }

    pub fn gaussian(&self) -> Result<GaussianBeam> {
        let fwhm = self.theta_fwhm_deg.unwrap_or(self.theta_i_deg).to_radians();
        GaussianBeam::new(self.energy()?, self.energy_sigma_ev, fwhm, self.quadrature)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MediumConfig {
    /// Fused silica, three-term Sellmeier.
    Silica,
    Constant {
        n: f64,
    },
    Sellmeier {
        b: [f64; 3],
        /// Resonance wavelengths squared, µm².
        c: [f64; 3],
        window_nm: (f64, f64),
    },
    /// Two-column CSV of (λ nm, n), relative paths resolved against the config file.
    Table {
        path: PathBuf,
    },
}

impl MediumConfig {
    pub fn model(&self, base: Option<&Path>) -> Result<DispersionModel> {
        match self {
            MediumConfig::Silica => Ok(DispersionModel::silica()),
            MediumConfig::Constant { n } => DispersionModel::constant(*n),
            MediumConfig::Sellmeier { b, c, window_nm } => DispersionModel::sellmeier(*b, *c, *window_nm),
            MediumConfig::Table { path } => {
                let full = match base {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                DispersionModel::tabulated_from_path(full)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kind: ScanKind,
    pub lambda_nm: (f64, f64),
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_ph_deg: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeConfig {
    pub l_ph: i32,
    #[serde(default)]
    pub spin_flip: bool,
    #[serde(default = "default_polarization")]
    pub polarization: Polarization,
    #[serde(default = "default_flip_sign")]
    pub flip_sign: FlipSign,
}

fn default_polarization() -> Polarization {
    Polarization::Azimuthal
}

fn default_flip_sign() -> FlipSign {
    FlipSign::Plus
}

impl AmplitudeConfig {
    pub fn selection(&self) -> ChannelSelection {
        ChannelSelection::new(self.l_ph, self.spin_flip, self.polarization, self.flip_sign)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoWorkers {
    Auto,
}

/// Worker count, or `"auto"` for the global pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Workers {
    Count(usize),
    Auto(AutoWorkers),
}

impl Default for Workers {
    fn default() -> Self {
        Workers::Auto(AutoWorkers::Auto)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    pub stem: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            stem: "scan".into(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub beam: BeamConfig,
    pub medium: MediumConfig,
    pub scan: GridConfig,
    /// Rate channels for spectra.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<RateChannel>,
    /// Amplitude channel for maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<AmplitudeConfig>,
    #[serde(default)]
    pub workers: Workers,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory relative table paths are resolved against. Not part of the schema.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// The part of a config that determines the numbers in the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsBlock {
    pub beam: BeamConfig,
    pub medium: MediumConfig,
    pub scan: GridConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<RateChannel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<AmplitudeConfig>,
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn physics(&self) -> PhysicsBlock {
        PhysicsBlock {
            beam: self.beam,
            medium: self.medium.clone(),
            scan: self.scan,
            channels: self.channels.clone(),
            amplitude: self.amplitude,
        }
    }

    pub fn model(&self) -> Result<DispersionModel> {
        self.medium.model(self.base_dir.as_deref())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.beam.energy()?;
        let g = &self.scan;
        let (a, b) = g.lambda_nm;
        if !(a > 0.0 && b > a && b.is_finite()) {
            return bad(format!("scan.lambda_nm must be ordered and positive, got {:?}", g.lambda_nm));
        }
        if g.points < 2 {
            return bad(format!("scan.points must be at least 2, got {}", g.points));
        }
        match g.kind {
            ScanKind::Spectrum | ScanKind::AveragedSpectrum => {
                if self.channels.is_empty() {
                    return bad("spectrum scans need a non-empty `channels` list".into());
                }
                if g.theta_ph_deg.is_some() || g.theta_points.is_some() || self.amplitude.is_some() {
                    return bad("theta_ph_deg, theta_points and amplitude only apply to ampmap scans".into());
                }
            }
            ScanKind::Ampmap => {
                let Some((t0, t1)) = g.theta_ph_deg else {
                    return bad("ampmap scans need scan.theta_ph_deg".into());
                };
                if !(t0 >= 0.0 && t1 > t0 && t1 <= 180.0) {
                    return bad(format!("scan.theta_ph_deg must be ordered within [0, 180], got {:?}", (t0, t1)));
                }
                if g.theta_points.unwrap_or(0) < 2 {
                    return bad("ampmap scans need scan.theta_points >= 2".into());
                }
                if self.amplitude.is_none() {
                    return bad("ampmap scans need an `amplitude` block".into());
                }
                if !self.channels.is_empty() {
                    return bad("`channels` only applies to spectrum scans".into());
                }
            }
        }
        if let Workers::Count(0) = self.workers {
            return bad("workers must be positive or \"auto\"".into());
        }
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return bad(format!("output.stem must be a plain file stem, got {:?}", self.output.stem));
        }
        Ok(())
    }
}
