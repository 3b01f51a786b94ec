//! Config-driven scans: grid orchestration, worker pools and result metadata.

mod config;
mod output;
mod svg;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{
    AmplitudeConfig, AutoWorkers, BeamConfig, GridConfig, MediumConfig, OutputConfig, OutputFormat, PhysicsBlock,
    ScanConfig, ScanKind, Workers,
};
pub use output::{parse_spectrum_csv, render, spectrum_csv, map_csv, write_outputs, ParsedSpectrum};
pub use svg::{map_svg, spectrum_svg};

use crate::amplitude::{amplitude_map, AmplitudeMap, MapRequest};
use crate::angles::quantum_cutoff_wavelength;
use crate::beam::averaged_spectrum_scan;
use crate::constants::{ELECTRON_REST_ENERGY_EV, FINE_STRUCTURE, HBAR_C_EV_NM, HC_EV_NM};
use crate::dispersion::{dispersion_cutoff_wavelength, DispersionModel};
use crate::error::{Error, Result};
use crate::kinematics::beta_from_energy;
use crate::rates::{spectrum_scan, SpectrumTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanData {
    Spectrum(SpectrumTable),
    Map(AmplitudeMap),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBlock {
    pub rest_energy_ev: f64,
    pub hbar_c_ev_nm: f64,
    pub hc_ev_nm: f64,
    pub alpha: f64,
    pub medium: String,
    pub dispersion: DispersionModel,
}

/// Cutoff markers for the scanned medium, nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffMarkers {
    pub quantum_nm: Option<f64>,
    pub dispersion_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    pub kind: ScanKind,
    /// Effective physics config; feeding it back reproduces the output.
    pub config: PhysicsBlock,
    /// SHA-256 of the compact JSON of `config`.
    pub config_hash: String,
    pub constants: ConstantsBlock,
    pub cutoffs: CutoffMarkers,
    pub interpretations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub metadata: Metadata,
    pub data: ScanData,
    /// Not written to files, so reruns stay byte-identical.
    pub wall_time_s: f64,
}

pub fn config_hash(physics: &PhysicsBlock) -> String {
    let text = serde_json::to_string(physics).expect("config serializes");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn interpretations(kind: ScanKind) -> Vec<String> {
    let mut v = vec![
        "spectrum rows use the beam's theta_i for the Bessel-beam reference".to_string(),
    ];
    if kind == ScanKind::AveragedSpectrum {
        v.push("energy_sigma_ev is one standard deviation of a Gaussian in total energy".into());
        v.push("theta_fwhm_deg is the FWHM of a zero-centred Gaussian in the polar spread angle".into());
        v.push("energy and angle are averaged as independent distributions".into());
    }
    if kind == ScanKind::Ampmap {
        v.push("amplitude is the signed spatial part; the spinor factor is reported separately".into());
    }
    v
}

fn cutoffs(model: &DispersionModel, e_i: f64, range: (f64, f64)) -> CutoffMarkers {
    let Ok(beta) = beta_from_energy(e_i) else {
        return CutoffMarkers { quantum_nm: None, dispersion_nm: None };
    };
    let (w0, w1) = model.window();
    let bracket = (range.0.max(w0), range.1.min(w1));
    let usable = bracket.1 > bracket.0;
    CutoffMarkers {
        quantum_nm: if usable { quantum_cutoff_wavelength(model, beta, bracket).ok().flatten() } else { None },
        dispersion_nm: if usable && !model.is_constant() {
            dispersion_cutoff_wavelength(model, beta, bracket).ok().flatten()
        } else {
            None
        },
    }
}

fn compute(cfg: &ScanConfig, model: &DispersionModel) -> Result<ScanData> {
    let g = &cfg.scan;
    match g.kind {
        ScanKind::Spectrum => {
            let e = cfg.beam.energy()?;
            spectrum_scan(e, cfg.beam.theta_i(), model, g.lambda_nm, g.points, &cfg.channels).map(ScanData::Spectrum)
        }
        ScanKind::AveragedSpectrum => {
            let beam = cfg.beam.gaussian()?;
            averaged_spectrum_scan(&beam, model, g.lambda_nm, g.points, &cfg.channels).map(ScanData::Spectrum)
        }
        ScanKind::Ampmap => {
            let (t0, t1) = g.theta_ph_deg.expect("validated");
            let amp = cfg.amplitude.expect("validated");
            let req = MapRequest {
                beam: cfg.beam.electron()?,
                model: model.clone(),
                channel: amp.selection(),
                lambda_range: g.lambda_nm,
                theta_range: (t0.to_radians(), t1.to_radians()),
                grid: (g.points, g.theta_points.expect("validated")),
            };
            amplitude_map(&req).map(ScanData::Map)
        }
    }
}

/// Runs a validated config. Results do not depend on the worker count.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let start = Instant::now();
    let model = cfg.model()?;
    let data = match cfg.workers {
        Workers::Auto(_) => compute(cfg, &model)?,
        Workers::Count(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?
            .install(|| compute(cfg, &model))?,
    };
    let physics = cfg.physics();
    let metadata = Metadata {
        generator: format!("qcherenkov {}", env!("CARGO_PKG_VERSION")),
        kind: cfg.scan.kind,
        config_hash: config_hash(&physics),
        config: physics,
        constants: ConstantsBlock {
            rest_energy_ev: ELECTRON_REST_ENERGY_EV,
            hbar_c_ev_nm: HBAR_C_EV_NM,
            hc_ev_nm: HC_EV_NM,
            alpha: FINE_STRUCTURE,
            medium: model.label(),
            dispersion: model.clone(),
        },
        cutoffs: cutoffs(&model, cfg.beam.energy()?, cfg.scan.lambda_nm),
        interpretations: interpretations(cfg.scan.kind),
    };
    Ok(ScanResult {
        metadata,
        data,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3b(points: usize) -> ScanConfig {
        ScanConfig::from_json(&format!(
            r#"{{
            "beam": {{"beta": 0.685, "theta_i_deg": 0.1}},
            "medium": {{"kind": "constant", "n": 1.45986}},
            "scan": {{"kind": "spectrum", "lambda_nm": [200, 700], "points": {points}}},
            "channels": ["flip_azimuthal", "total"]
        }}"#
        ))
        .unwrap()
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut cfg = fig3b(301);
        cfg.workers = Workers::Count(1);
        let a = spectrum_csv(&run_scan(&cfg).unwrap());
        cfg.workers = Workers::Count(8);
        let b = spectrum_csv(&run_scan(&cfg).unwrap());
        assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn metadata_hash_tracks_physics_only() {
        let mut cfg = fig3b(11);
        let a = run_scan(&cfg).unwrap().metadata;
        cfg.workers = Workers::Count(3);
        cfg.output.stem = "other".into();
        let b = run_scan(&cfg).unwrap().metadata;
        assert_eq!(a, b);
        cfg.beam.theta_i_deg = 0.2;
        assert_ne!(run_scan(&cfg).unwrap().metadata.config_hash, a.config_hash);
    }

    #[test]
    fn records_cutoffs() {
        let m = run_scan(&fig3b(11)).unwrap().metadata;
        let q = m.cutoffs.quantum_nm.unwrap();
        assert!((q - 244.0).abs() < 2.0, "{q}");
        assert_eq!(m.cutoffs.dispersion_nm, None);
    }
}
