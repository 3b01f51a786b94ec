//! Minimal SVG plots: stacked line charts for spectra, a heatmap for maps.

use std::fmt::Write;

use super::Metadata;
use crate::amplitude::{AmplitudeMap, Zone};
use crate::rates::{RateChannel, SpectrumTable};

const W: f64 = 640.0;
const PANEL_H: f64 = 180.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 40.0;

struct Axes {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y0) / (self.y1 - self.y0) * self.height
    }

    fn frame(&self, out: &mut String, title: &str, x_label: &str) {
        let (l, t, w, h) = (self.left, self.top, self.width, self.height);
        let _ = writeln!(out, r#"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#, l, t - 6.0, escape(title));
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#, l + w / 2.0, t + h + 30.0, escape(x_label));
        for (v, anchor, y) in [(self.x0, "start", t + h + 14.0), (self.x1, "end", t + h + 14.0)] {
            let x = self.px(v);
            let _ = writeln!(out, r#"<text x="{x:.2}" y="{y:.2}" font-size="10" text-anchor="{anchor}">{}</text>"#, tick(v));
        }
        for v in [self.y0, self.y1] {
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#, l - 4.0, self.py(v) + 3.0, tick(v));
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], stroke: &str, dash: Option<&str>) {
        if pts.len() < 2 {
            return;
        }
        let d: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", self.px(*x), self.py(*y))).collect();
        let dash = dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.2"{dash}/>"#, d.join(" "));
    }

    fn vline(&self, out: &mut String, x: f64, stroke: &str) {
        if x < self.x0 || x > self.x1 {
            return;
        }
        let px = self.px(x);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="{stroke}" stroke-dasharray="2,3"/>"#,
            self.top,
            self.top + self.height
        );
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, h: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W:.0}" height="{h:.0}" viewBox="0 0 {W:.0} {h:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn series(lambdas: &[f64], ys: &[Option<f64>]) -> Vec<(f64, f64)> {
    lambdas.iter().zip(ys).filter_map(|(x, y)| y.map(|y| (*x, y))).collect()
}

/// One panel per channel: Bessel-beam rate solid, beam average dashed,
/// Frank–Tamm dashed black; cutoffs as dotted verticals.
pub fn spectrum_svg(meta: &Metadata, table: &SpectrumTable) -> String {
    let lambdas = table.lambdas();
    let (x0, x1) = (lambdas[0], lambdas[lambdas.len() - 1]);
    let height = MARGIN_T + table.channels.len() as f64 * (PANEL_H + MARGIN_B + MARGIN_T);
    let mut out = String::new();
    header(&mut out, height);
    let ft: Vec<Option<f64>> = table.rows.iter().map(|r| r.frank_tamm).collect();
    for (k, &ch) in table.channels.iter().enumerate() {
        let rates = table.column(ch).unwrap_or_default();
        let avg = table.averaged_column(ch).unwrap_or_default();
        let mut all: Vec<&Option<f64>> = rates.iter().chain(avg.iter()).collect();
        if ch == RateChannel::Total {
            all.extend(ft.iter());
        }
        let y1 = all.iter().filter_map(|v| **v).filter(|v| v.is_finite()).fold(0.0, f64::max);
        let axes = Axes {
            x0,
            x1,
            y0: 0.0,
            y1: if y1 > 0.0 { y1 * 1.05 } else { 1.0 },
            left: MARGIN_L,
            top: MARGIN_T + k as f64 * (PANEL_H + MARGIN_B + MARGIN_T),
            width: W - MARGIN_L - MARGIN_R,
            height: PANEL_H,
        };
        axes.frame(&mut out, &format!("rate per unit length and frequency: {}", ch.name()), "wavelength (nm)");
        if ch == RateChannel::Total {
            axes.polyline(&mut out, &series(&lambdas, &ft), "black", Some("6,4"));
        }
        axes.polyline(&mut out, &series(&lambdas, &rates), "crimson", None);
        if !avg.is_empty() {
            axes.polyline(&mut out, &series(&lambdas, &avg), "crimson", Some("4,3"));
        }
        for c in [meta.cutoffs.quantum_nm, meta.cutoffs.dispersion_nm].into_iter().flatten() {
            axes.vline(&mut out, c, "purple");
        }
    }
    out.push_str("</svg>\n");
    out
}

/// |amplitude| heatmap saturated at the 95th percentile, with the boundary
/// curves, conventional angle and quantum cutoff overlaid.
pub fn map_svg(meta: &Metadata, map: &AmplitudeMap) -> String {
    let (nl, nt) = (map.lambdas.len(), map.thetas.len());
    let deg: Vec<f64> = map.thetas.iter().map(|t| t.to_degrees()).collect();
    let axes = Axes {
        x0: map.lambdas[0],
        x1: map.lambdas[nl - 1],
        y0: deg[0],
        y1: deg[nt - 1],
        left: MARGIN_L,
        top: MARGIN_T,
        width: W - MARGIN_L - MARGIN_R,
        height: 400.0,
    };
    let mut mags: Vec<f64> = map.cells.iter().filter_map(|c| c.amplitude).map(f64::abs).collect();
    mags.sort_by(f64::total_cmp);
    let sat = mags.get((mags.len() as f64 * 0.95) as usize).copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let mut out = String::new();
    header(&mut out, axes.top + axes.height + MARGIN_B + 10.0);
    let cw = axes.width / nl as f64;
    let ch = axes.height / nt as f64;
    for (i, _) in map.lambdas.iter().enumerate() {
        for j in 0..nt {
            let cell = map.cell(i, j);
            let shade = match (cell.zone, cell.amplitude) {
                (Zone::Boundary, _) => 0,
                (_, Some(a)) => 255 - ((a.abs() / sat).min(1.0) * 255.0).round() as i32,
                _ => continue,
            };
            let x = axes.left + i as f64 * cw;
            let y = axes.top + axes.height - (j + 1) as f64 * ch;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{})"/>"#,
                cw + 0.05,
                ch + 0.05,
                255.min(shade + 40)
            );
        }
    }
    let curve = |f: &dyn Fn(&crate::amplitude::BoundaryCurves) -> Option<f64>| -> Vec<(f64, f64)> {
        map.boundaries
            .iter()
            .filter_map(|b| f(b).map(|t| (b.lambda_nm, t.to_degrees())))
            .filter(|(_, t)| *t >= axes.y0 && *t <= axes.y1)
            .collect()
    };
    axes.polyline(&mut out, &curve(&|b| b.inner_lower), "blue", Some("5,3"));
    axes.polyline(&mut out, &curve(&|b| b.inner_upper), "red", Some("5,3"));
    axes.polyline(&mut out, &curve(&|b| b.outer), "green", Some("5,3"));
    axes.polyline(&mut out, &curve(&|b| b.conventional), "black", Some("6,4"));
    if let Some(c) = map.quantum_cutoff_nm.or(meta.cutoffs.quantum_nm) {
        axes.vline(&mut out, c, "purple");
    }
    axes.frame(
        &mut out,
        &format!("|amplitude|, l_i = {}, l_f = {}, photon order {}", map.l_i, map.l_f, map.photon_order),
        "wavelength (nm)",
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" font-size="11" transform="rotate(-90 14 {:.2})" text-anchor="middle">emission angle (deg)</text>"#,
        axes.top + axes.height / 2.0,
        axes.top + axes.height / 2.0
    );
    out.push_str("</svg>\n");
    out
}
