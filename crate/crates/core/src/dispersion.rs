//! Refractive-index models n(λ) and the threshold / dispersion-cutoff solvers.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Malitson (1965) fused-silica coefficients, λ in µm.
pub const SILICA_B: [f64; 3] = [0.696_166_3, 0.407_942_6, 0.897_479_4];
/// Squared resonance wavelengths in µm² for [`SILICA_B`].
pub const SILICA_C: [f64; 3] = [
    0.068_404_3 * 0.068_404_3,
    0.116_241_4 * 0.116_241_4,
    9.896_161 * 9.896_161,
];
/// Range over which the Malitson fit was measured, nm.
pub const SILICA_WINDOW_NM: (f64, f64) = (210.0, 3710.0);

/// Refractive index as a function of vacuum wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DispersionModel {
    Constant {
        n: f64,
    },
    /// n² = 1 + Σ B_k λ² / (λ² − C_k), λ in µm, C in µm².
    Sellmeier {
        b: [f64; 3],
        c: [f64; 3],
        window_nm: (f64, f64),
    },
    /// Linear interpolation on a strictly increasing wavelength grid (nm).
    Tabulated {
        points: Vec<(f64, f64)>,
    },
}

impl DispersionModel {
    pub fn constant(n: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(domain(format!("refractive index must be positive, got {n}")));
        }
        Ok(DispersionModel::Constant { n })
    }

    /// Fused silica with the Malitson three-term coefficients.
    pub fn silica() -> Self {
        DispersionModel::Sellmeier {
            b: SILICA_B,
            c: SILICA_C,
            window_nm: SILICA_WINDOW_NM,
        }
    }

    pub fn sellmeier(b: [f64; 3], c: [f64; 3], window_nm: (f64, f64)) -> Result<Self> {
        if b.iter().chain(c.iter()).any(|v| !v.is_finite()) {
            return Err(domain("Sellmeier coefficients must be finite"));
        }
        if c.iter().any(|&v| v < 0.0) {
            return Err(domain("Sellmeier C coefficients are squared wavelengths and must be >= 0"));
        }
        if !(window_nm.0 > 0.0 && window_nm.1 > window_nm.0) {
            return Err(domain(format!("invalid validity window {window_nm:?}")));
        }
        Ok(DispersionModel::Sellmeier { b, c, window_nm })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(domain("a tabulated model needs at least two points"));
        }
        if points.iter().any(|&(l, n)| !(l > 0.0) || !(n > 0.0) || !l.is_finite() || !n.is_finite()) {
            return Err(domain("tabulated wavelengths and indices must be positive and finite"));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(domain("tabulated wavelengths must be strictly increasing"));
        }
        Ok(DispersionModel::Tabulated { points })
    }

    /// Reads a two-column `lambda_nm,n` CSV. A header row is optional.
    pub fn tabulated_from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Config(format!("dispersion table: {e}")))?;
            if record.len() != 2 {
                return Err(Error::Config(format!(
                    "dispersion table line {}: expected 2 columns, found {}",
                    i + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(l), Ok(n)) => points.push((l, n)),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::Config(format!(
                        "dispersion table line {}: cannot parse {:?}",
                        i + 1,
                        record
                    )))
                }
            }
        }
        Self::tabulated(points)
    }

    pub fn tabulated_from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::tabulated_from_csv(file)
    }

    /// Wavelength range (nm) over which the model may be evaluated.
    pub fn window(&self) -> (f64, f64) {
        match self {
            DispersionModel::Constant { .. } => (0.0, f64::INFINITY),
            DispersionModel::Sellmeier { window_nm, .. } => *window_nm,
            DispersionModel::Tabulated { points } => (points[0].0, points[points.len() - 1].0),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DispersionModel::Constant { .. })
    }

    /// Short human-readable label used in output metadata.
    pub fn label(&self) -> String {
        match self {
            DispersionModel::Constant { n } => format!("constant n = {n}"),
            DispersionModel::Sellmeier { b, c, .. } if *b == SILICA_B && *c == SILICA_C => {
                "fused silica (Malitson 1965 Sellmeier)".to_string()
            }
            DispersionModel::Sellmeier { .. } => "three-term Sellmeier".to_string(),
            DispersionModel::Tabulated { points } => format!("tabulated ({} points)", points.len()),
        }
    }
}

/// Refractive index at vacuum wavelength `lambda_nm`.
pub fn n_at(model: &DispersionModel, lambda_nm: f64) -> Result<f64> {
    if !(lambda_nm > 0.0) || !lambda_nm.is_finite() {
        return Err(domain(format!("wavelength must be positive, got {lambda_nm}")));
    }
    match model {
        DispersionModel::Constant { n } => Ok(*n),
        DispersionModel::Sellmeier { b, c, window_nm } => {
            if lambda_nm < window_nm.0 || lambda_nm > window_nm.1 {
                return Err(domain(format!(
                    "wavelength {lambda_nm} nm outside Sellmeier window {window_nm:?}"
                )));
            }
            let l2 = (lambda_nm * 1e-3).powi(2);
            let n2 = 1.0 + (0..3).map(|k| b[k] * l2 / (l2 - c[k])).sum::<f64>();
            if !(n2 > 0.0) || !n2.is_finite() {
                return Err(domain(format!("n^2 = {n2} at {lambda_nm} nm")));
            }
            Ok(n2.sqrt())
        }
        DispersionModel::Tabulated { points } => {
            let (lo, hi) = (points[0].0, points[points.len() - 1].0);
            if lambda_nm < lo || lambda_nm > hi {
                return Err(domain(format!(
                    "wavelength {lambda_nm} nm outside table [{lo}, {hi}]"
                )));
            }
            let j = points.partition_point(|p| p.0 <= lambda_nm).clamp(1, points.len() - 1);
            let (l0, n0) = points[j - 1];
            let (l1, n1) = points[j];
            Ok(n0 + (n1 - n0) * (lambda_nm - l0) / (l1 - l0))
        }
    }
}

/// Minimum velocity for emission, β_min = 1/n.
pub fn threshold_beta(n: f64) -> Result<f64> {
    if n.is_nan() {
        return Err(domain("refractive index is NaN"));
    }
    if n <= 1.0 {
        return Err(Error::NoThreshold { n });
    }
    Ok(1.0 / n)
}

/// Bisection on a sign change of `f` over `[a, b]`, refined until the bracket
/// stops shrinking in floating point. Returns `None` without a sign change.
pub(crate) fn bisect<F>(mut f: F, a: f64, b: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if f_hi == 0.0 {
        return Ok(Some(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

pub(crate) fn check_bracket(model: &DispersionModel, bracket: (f64, f64)) -> Result<()> {
    let (a, b) = bracket;
    let (lo, hi) = model.window();
    if !(a > 0.0 && b > a && a.is_finite() && b.is_finite()) {
        return Err(domain(format!("invalid wavelength bracket {bracket:?}")));
    }
    if a < lo || b > hi {
        return Err(domain(format!(
            "bracket {bracket:?} leaves the model window ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// Wavelength where n(λ) crosses 1/β, i.e. the long-wavelength edge of emission
/// set by material dispersion. `None` when n − 1/β does not change sign in the bracket.
pub fn dispersion_cutoff_wavelength(
    model: &DispersionModel,
    beta: f64,
    bracket: (f64, f64),
) -> Result<Option<f64>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    check_bracket(model, bracket)?;
    if model.is_constant() {
        return Ok(None);
    }
    let target = 1.0 / beta;
    bisect(|l| Ok(n_at(model, l)? - target), bracket.0, bracket.1)
}
