//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use std::process::ExitCode;
use std::time::Instant;

use qcherenkov::amplitude::{amplitude_map, kinematic_permits, oracle_suite, ChannelSelection, FlipSign, MapRequest, OracleOptions};
use qcherenkov::angles::{conventional_angle, cutoff_energy, double_cone, quantum_angle, quantum_cutoff_wavelength};
use qcherenkov::beam::{average_rate, averaged_spectrum_scan, GaussianBeam, QuadratureSpec};
use qcherenkov::constants::HC_EV_NM;
use qcherenkov::dispersion::{dispersion_cutoff_wavelength, n_at, DispersionModel};
use qcherenkov::kinematics::{energy_from_beta, CylindricalElectronState, Polarization, Spin};
use qcherenkov::rates::{discontinuity_at_cutoff, frank_tamm, rate_flip_azimuthal, rate_total, RateChannel};
use qcherenkov::scan::{run_scan, spectrum_csv, map_csv, ScanConfig, Workers};
use qcherenkov_validation::{config_path, GOLDEN_CONFIGS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BETA: f64 = 0.685;
const N_CONST: f64 = 1.45986;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c1_quantum_cutoff() -> Outcome {
    let w = cutoff_energy(BETA, N_CONST).unwrap();
    let nm = HC_EV_NM / w;
    outcome((nm - 244.0).abs() <= 2.0, format!("lambda_cutoff = {nm:.4} nm (want 244 +/- 2)"))
}

fn c2_dispersion_cutoff() -> Outcome {
    let nm = dispersion_cutoff_wavelength(&DispersionModel::silica(), BETA, (300.0, 800.0)).unwrap();
    match nm {
        Some(nm) => outcome((nm - 550.0).abs() <= 15.0, format!("lambda_dispersion = {nm:.4} nm (want 550 +/- 15)")),
        None => outcome(false, "no dispersion cutoff in (300, 800) nm"),
    }
}

/// Cone at the emitting side of a cutoff wavelength.
fn cone_at_cutoff(model: &DispersionModel, lambda_cut: f64, theta_i: f64) -> Option<(f64, f64)> {
    [lambda_cut * (1.0 - 1e-9), lambda_cut * (1.0 + 1e-9)].into_iter().find_map(|l| {
        let n = n_at(model, l).ok()?;
        let t = quantum_angle(BETA, n, HC_EV_NM / l)?;
        let c = double_cone(theta_i, t);
        Some((c.inner, c.outer))
    })
}

fn c3_tangency() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    let silica = DispersionModel::silica();
    let constant = DispersionModel::constant(N_CONST).unwrap();
    let cases = [
        ("silica", &silica, 10.3_f64, quantum_cutoff_wavelength(&silica, BETA, (300.0, 800.0)).unwrap()),
        ("constant n", &constant, 0.1, quantum_cutoff_wavelength(&constant, BETA, (200.0, 800.0)).unwrap()),
    ];
    for (label, model, theta_deg, cut) in cases {
        let Some(cut) = cut else {
            return outcome(false, format!("{label}: no quantum cutoff found"));
        };
        let Some((inner, outer)) = cone_at_cutoff(model, cut, theta_deg.to_radians()) else {
            return outcome(false, format!("{label}: no cone next to the cutoff"));
        };
        let dev = (inner.to_degrees() - theta_deg).abs().max((outer.to_degrees() - theta_deg).abs());
        worst = worst.max(dev);
        notes.push(format!("{label} at {cut:.3} nm: inner {:.6} outer {:.6} deg", inner.to_degrees(), outer.to_degrees()));
    }
    outcome(worst < 0.01, format!("{}; worst deviation {worst:.2e} deg (want < 0.01)", notes.join("; ")))
}

fn c4_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let beta: f64 = rng.random_range(0.1..0.999);
        let n: f64 = rng.random_range(1.0 / beta * (1.0 + 1e-6)..1.0 / beta + 2.0);
        let w = cutoff_energy(beta, n).unwrap();
        match quantum_angle(beta, n, w) {
            Some(t) => worst = worst.max(t),
            None => return outcome(false, format!("quantum angle absent at the cutoff for beta = {beta}, n = {n}")),
        }
    }
    outcome(worst <= 1e-9, format!("max theta at cutoff over 100 pairs = {worst:.3e} rad (want <= 1e-9)"))
}

fn c5_classical_limit() -> Outcome {
    let (beta, n) = (0.75, 1.5);
    let e = energy_from_beta(beta).unwrap();
    let ft = frank_tamm(beta, n).gamma_omega;
    let rel = |w: f64| ((rate_total(e, n, w).unwrap().gamma_omega - ft) / ft).abs();
    let at_1ev = rel(1.0);
    // Log-log slope over 0.01 .. 1 eV.
    let slope = (rel(1.0) / rel(0.01)).log10() / 2.0;
    let linear = (slope - 1.0).abs() < 0.01;
    outcome(
        at_1ev < 1e-8 && linear,
        format!("relative deviation at 1 eV = {at_1ev:.3e} (want < 1e-8); log-log slope over two decades = {slope:.5} (want 1)"),
    )
}

fn c6_discontinuity() -> Outcome {
    let (beta, n, theta_i) = (0.75, 1.5, 10.3_f64.to_radians());
    let e = energy_from_beta(beta).unwrap();
    let w = cutoff_energy(beta, n).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for ch in [RateChannel::Total, RateChannel::FlipAzimuthal] {
        let jump = discontinuity_at_cutoff(e, theta_i, n, ch).unwrap();
        let rate = |w: f64| match ch {
            RateChannel::Total => rate_total(e, n, w).unwrap().gamma_omega,
            _ => rate_flip_azimuthal(e, theta_i, n, w).unwrap().gamma_omega,
        };
        let left = rate(w * (1.0 - 1e-6));
        let right = rate(w * (1.0 + 1e-6));
        let rel = ((left - jump) / jump).abs();
        ok &= rel < 1e-4 && right == 0.0;
        notes.push(format!("{}: left/jump - 1 = {rel:.2e}, right = {right}", ch.name()));
    }
    outcome(ok, format!("beta = 0.75, n = 1.5: {} (want < 1e-4 and exactly 0)", notes.join("; ")))
}

fn c7_oracle() -> Outcome {
    let cases = oracle_suite(24, 6, 7, &OracleOptions::default()).unwrap();
    let interior: Vec<_> = cases.iter().filter(|c| c.formable).collect();
    let worst = interior.iter().map(|c| c.error).fold(0.0, f64::max);
    let worst_ext = cases.iter().filter(|c| !c.formable).map(|c| c.error).fold(0.0, f64::max);
    let pass = cases.iter().all(|c| c.pass) && interior.len() >= 20;
    outcome(
        pass,
        format!(
            "{} interior cases, worst relative error {worst:.2e} (want < 1e-2); {} exterior, worst |oracle|/scale {worst_ext:.2e} (want < 1e-3)",
            interior.len(),
            cases.len() - interior.len()
        ),
    )
}

fn c8_zone_agreement() -> Outcome {
    let beam = CylindricalElectronState::from_beta(BETA, Spin::Up, 0.1_f64.to_radians(), 0).unwrap();
    let model = DispersionModel::constant(N_CONST).unwrap();
    let req = MapRequest {
        beam,
        model,
        channel: ChannelSelection::new(8, false, Polarization::Azimuthal, FlipSign::Plus),
        lambda_range: (200.0, 400.0),
        theta_range: (0.0, 0.4_f64.to_radians()),
        grid: (200, 200),
    };
    let map = amplitude_map(&req).unwrap();
    let mut mismatches = 0;
    let mut permitted = 0;
    for c in &map.cells {
        let kin = kinematic_permits(&beam, N_CONST, HC_EV_NM / c.lambda_nm, c.theta_ph);
        let tri = c.zone.is_permitted();
        permitted += tri as usize;
        mismatches += (kin != tri) as usize;
    }
    outcome(
        mismatches == 0 && permitted > 0,
        format!("{mismatches} mismatching cells of 40000 ({permitted} permitted)"),
    )
}

fn fig3b_beam(nodes: usize) -> GaussianBeam {
    let q = QuadratureSpec { n_theta: nodes, n_energy: nodes, ..Default::default() };
    GaussianBeam::new(energy_from_beta(BETA).unwrap(), 0.5, 0.1_f64.to_radians(), q).unwrap()
}

fn c9a_flip_peak() -> Outcome {
    let model = DispersionModel::constant(N_CONST).unwrap();
    let t = averaged_spectrum_scan(&fig3b_beam(32), &model, (200.0, 400.0), 801, &[RateChannel::FlipAzimuthal]).unwrap();
    let avg: Vec<f64> = t.rows.iter().map(|r| r.averaged[0].unwrap_or(0.0)).collect();
    let maxima: Vec<f64> = (1..avg.len() - 1)
        .filter(|&i| avg[i] > avg[i - 1] && avg[i] >= avg[i + 1])
        .map(|i| t.rows[i].lambda_nm)
        .collect();
    let near = maxima.iter().any(|l| (l - 244.0).abs() <= 2.0);
    outcome(near, format!("local maxima of the averaged flip spectrum at {maxima:?} nm (want one within 2 nm of 244)"))
}

fn c9b_total_continuity() -> Outcome {
    let b = fig3b_beam(32);
    let w = cutoff_energy(BETA, N_CONST).unwrap();
    let left = average_rate(RateChannel::Total, &b, N_CONST, w * (1.0 - 1e-9)).unwrap().gamma_omega;
    let right = average_rate(RateChannel::Total, &b, N_CONST, w * (1.0 + 1e-9)).unwrap().gamma_omega;
    let step = ((left - right) / left).abs();
    outcome(step < 1e-3, format!("step across the cutoff / left limit = {step:.2e} (want < 1e-3)"))
}

fn c9c_convergence() -> Outcome {
    let model = DispersionModel::constant(N_CONST).unwrap();
    let ch = [RateChannel::FlipAzimuthal, RateChannel::Total];
    let a = averaged_spectrum_scan(&fig3b_beam(32), &model, (200.0, 700.0), 501, &ch).unwrap();
    let b = averaged_spectrum_scan(&fig3b_beam(64), &model, (200.0, 700.0), 501, &ch).unwrap();
    let mut worst: f64 = 0.0;
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (x, y) in ra.averaged.iter().zip(&rb.averaged) {
            if let (Some(x), Some(y)) = (x, y) {
                if *x != 0.0 {
                    worst = worst.max(((x - y) / x).abs());
                }
            }
        }
    }
    outcome(worst < 1e-6, format!("max relative change 32 -> 64 nodes = {worst:.2e} (want < 1e-6)"))
}

fn c10_backward_cone() -> Outcome {
    let t = conventional_angle(0.99, 1.5).unwrap();
    let c = double_cone(50_f64.to_radians(), t);
    outcome(c.backward && c.outer > std::f64::consts::FRAC_PI_2, format!("outer cone = {:.4} deg (want > 90)", c.outer.to_degrees()))
}

fn c11_determinism() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in GOLDEN_CONFIGS {
        let mut cfg = ScanConfig::from_path(config_path(name)).unwrap();
        let mut render = |workers: usize| {
            cfg.workers = Workers::Count(workers);
            let r = run_scan(&cfg).unwrap();
            match spectrum_csv(&r) {
                Some(csv) => csv.unwrap(),
                None => {
                    let (cells, bounds) = map_csv(&r).unwrap().unwrap();
                    cells + &bounds
                }
            }
        };
        let (one, eight) = (render(1), render(8));
        ok &= one == eight;
        notes.push(format!("{name} {}", if one == eight { "identical" } else { "DIFFERS" }));
    }
    outcome(ok, format!("workers 1 vs 8: {}", notes.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("1 quantum cutoff", c1_quantum_cutoff),
        ("2 dispersion cutoff", c2_dispersion_cutoff),
        ("3 tangency", c3_tangency),
        ("4 cutoff identity", c4_identity),
        ("5 classical limit", c5_classical_limit),
        ("6 discontinuity", c6_discontinuity),
        ("7 oracle equivalence", c7_oracle),
        ("8 zone agreement", c8_zone_agreement),
        ("9a averaged flip peak", c9a_flip_peak),
        ("9b averaged total continuity", c9b_total_continuity),
        ("9c quadrature convergence", c9c_convergence),
        ("10 backward cone", c10_backward_cone),
        ("11 determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {} [{:.2} s]", o.detail, start.elapsed().as_secs_f64());
        failed += !o.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
