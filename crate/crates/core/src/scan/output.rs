//! CSV, JSON and SVG emission.

use std::path::PathBuf;

use serde::Serialize;

use super::config::{OutputConfig, OutputFormat};
use super::svg::{map_svg, spectrum_svg};
use super::{Metadata, ScanData, ScanResult};
use crate::amplitude::AmplitudeMap;
use crate::error::{Error, Result};
use crate::rates::SpectrumTable;

/// 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn comment_line(meta: &Metadata) -> Result<String> {
    let json = serde_json::to_string(meta).map_err(|e| Error::Numerical(format!("metadata: {e}")))?;
    Ok(format!("# {json}\n"))
}

fn to_csv(meta: &Metadata, header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let mut out = comment_line(meta)?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

fn table_csv(meta: &Metadata, table: &SpectrumTable) -> Result<String> {
    let averaged = table.rows.iter().any(|r| !r.averaged.is_empty());
    let mut header: Vec<String> = ["lambda_nm", "hbar_omega_ev", "n", "theta_cr_rad", "frank_tamm"]
        .map(String::from)
        .into();
    header.extend(table.channels.iter().map(|c| c.name().to_string()));
    if averaged {
        header.extend(table.channels.iter().map(|c| format!("avg_{}", c.name())));
    }
    header.push("flags".into());
    let rows = table.rows.iter().map(|r| {
        let mut v = vec![
            num(r.lambda_nm),
            num(r.hbar_omega_ev),
            opt(r.n),
            opt(r.theta_cr_rad),
            opt(r.frank_tamm),
        ];
        v.extend(r.rates.iter().map(|x| opt(*x)));
        if averaged {
            v.extend(r.averaged.iter().map(|x| opt(*x)));
        }
        v.push(r.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";"));
        v
    });
    to_csv(meta, header, rows)
}

fn cells_csv(meta: &Metadata, map: &AmplitudeMap) -> Result<String> {
    let header = ["lambda_nm", "theta_ph_rad", "theta_ph_deg", "zone", "amplitude", "s_delta", "spinor_factor"]
        .map(String::from)
        .into();
    let rows = map.cells.iter().map(|c| {
        vec![
            num(c.lambda_nm),
            num(c.theta_ph),
            num(c.theta_ph.to_degrees()),
            c.zone.as_str().to_string(),
            opt(c.amplitude),
            opt(c.s_delta),
            opt(c.spinor_factor),
        ]
    });
    to_csv(meta, header, rows)
}

fn boundaries_csv(meta: &Metadata, map: &AmplitudeMap) -> Result<String> {
    let header = ["lambda_nm", "theta_cr", "inner_lower", "inner_upper", "outer", "conventional"]
        .map(String::from)
        .into();
    let rows = map.boundaries.iter().map(|b| {
        vec![
            num(b.lambda_nm),
            opt(b.theta_cr),
            opt(b.inner_lower),
            opt(b.inner_upper),
            opt(b.outer),
            opt(b.conventional),
        ]
    });
    to_csv(meta, header, rows)
}

/// Spectrum CSV, or `None` for map results.
pub fn spectrum_csv(result: &ScanResult) -> Option<Result<String>> {
    match &result.data {
        ScanData::Spectrum(t) => Some(table_csv(&result.metadata, t)),
        ScanData::Map(_) => None,
    }
}

/// Cell CSV and boundary-curve CSV, or `None` for spectra.
pub fn map_csv(result: &ScanResult) -> Option<Result<(String, String)>> {
    match &result.data {
        ScanData::Map(m) => Some(
            cells_csv(&result.metadata, m).and_then(|c| Ok((c, boundaries_csv(&result.metadata, m)?))),
        ),
        ScanData::Spectrum(_) => None,
    }
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    metadata: &'a Metadata,
    data: &'a ScanData,
}

/// Renders one format as (file-name suffix, contents) pairs.
pub fn render(result: &ScanResult, format: OutputFormat) -> Result<Vec<(String, String)>> {
    Ok(match (format, &result.data) {
        (OutputFormat::Csv, ScanData::Spectrum(t)) => vec![(".csv".into(), table_csv(&result.metadata, t)?)],
        (OutputFormat::Csv, ScanData::Map(m)) => vec![
            (".csv".into(), cells_csv(&result.metadata, m)?),
            ("_boundaries.csv".into(), boundaries_csv(&result.metadata, m)?),
        ],
        (OutputFormat::Json, data) => {
            let doc = JsonDoc {
                metadata: &result.metadata,
                data,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Numerical(format!("json: {e}")))?;
            s.push('\n');
            vec![(".json".into(), s)]
        }
        (OutputFormat::Svg, ScanData::Spectrum(t)) => vec![(".svg".into(), spectrum_svg(&result.metadata, t))],
        (OutputFormat::Svg, ScanData::Map(m)) => vec![(".svg".into(), map_svg(&result.metadata, m))],
    })
}

/// Writes every requested format into `out.dir`, returning the paths written.
pub fn write_outputs(result: &ScanResult, out: &OutputConfig) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&out.dir).map_err(|e| Error::Io(format!("{}: {e}", out.dir.display())))?;
    let mut written = Vec::new();
    for &format in &out.formats {
        for (suffix, text) in render(result, format)? {
            let path = out.dir.join(format!("{}{suffix}", out.stem));
            std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSpectrum {
    pub metadata: serde_json::Value,
    pub header: Vec<String>,
    /// Numeric columns; empty fields are `None`.
    pub values: Vec<Vec<Option<f64>>>,
    pub flags: Vec<String>,
}

/// Reads back a spectrum CSV written by [`render`].
pub fn parse_spectrum_csv(text: &str) -> Result<ParsedSpectrum> {
    let first = text.lines().next().unwrap_or_default();
    let meta = first
        .strip_prefix("# ")
        .ok_or_else(|| Error::Config("missing metadata line".into()))?;
    let metadata = serde_json::from_str(meta).map_err(|e| Error::Config(format!("metadata: {e}")))?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let bad = |e: csv::Error| Error::Config(e.to_string());
    let header: Vec<String> = rdr.headers().map_err(bad)?.iter().map(String::from).collect();
    let mut values = Vec::new();
    let mut flags = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(bad)?;
        let n = rec.len();
        let row = rec
            .iter()
            .take(n - 1)
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>().map(Some).map_err(|e| Error::Config(format!("{f:?}: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
        flags.push(rec[n - 1].to_string());
    }
    Ok(ParsedSpectrum {
        metadata,
        header,
        values,
        flags,
    })
}
