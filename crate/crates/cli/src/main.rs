use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qcherenkov::amplitude::{oracle_suite, OracleOptions};
use qcherenkov::angles::{conventional_angle, cutoff_energy, double_cone, quantum_angle, quantum_cutoff_wavelength};
use qcherenkov::constants::HC_EV_NM;
use qcherenkov::dispersion::{dispersion_cutoff_wavelength, n_at, threshold_beta, DispersionModel};
use qcherenkov::kinematics::{beta_from_energy, energy_from_beta};
use qcherenkov::scan::{run_scan, write_outputs, OutputFormat, ScanConfig, ScanKind, Workers};
use qcherenkov::Error;

#[derive(Parser)]
#[command(name = "qcherenkov", version, about = "Quantum Cherenkov emission by Bessel electron beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conventional and quantum Cherenkov angles and the double cone.
    Angle(AngleArgs),
    /// Quantum and dispersion cutoffs.
    Cutoff(CutoffArgs),
    /// Rate spectrum from a JSON config.
    Spectrum(ScanArgs),
    /// Amplitude map from a JSON config.
    Ampmap(ScanArgs),
    /// Closed-form amplitude against the quadrature oracle on random triangles.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ElectronArgs {
    /// Electron speed v/c.
    #[arg(long, conflicts_with = "energy_ev")]
    beta: Option<f64>,
    /// Total electron energy in eV.
    #[arg(long)]
    energy_ev: Option<f64>,
}

impl ElectronArgs {
    fn beta(&self) -> Result<f64, Error> {
        match (self.beta, self.energy_ev) {
            (Some(b), None) => {
                energy_from_beta(b)?;
                Ok(b)
            }
            (None, Some(e)) => beta_from_energy(e),
            _ => Err(Error::Config("give --beta or --energy-ev".into())),
        }
    }
}

#[derive(Args)]
struct MediumArgs {
    /// Constant refractive index.
    #[arg(long, conflicts_with_all = ["material", "table"])]
    n: Option<f64>,
    /// Named dispersive material (silica).
    #[arg(long, conflicts_with = "table")]
    material: Option<String>,
    /// Two-column CSV of wavelength (nm) and index.
    #[arg(long)]
    table: Option<PathBuf>,
}

impl MediumArgs {
    fn model(&self) -> Result<DispersionModel, Error> {
        match (&self.n, &self.material, &self.table) {
            (Some(n), None, None) => DispersionModel::constant(*n),
            (None, Some(m), None) if m.eq_ignore_ascii_case("silica") => Ok(DispersionModel::silica()),
            (None, Some(m), None) => Err(Error::Config(format!("unknown material {m:?}; known: silica"))),
            (None, None, Some(p)) => DispersionModel::tabulated_from_path(p),
            _ => Err(Error::Config("give one of --n, --material or --table".into())),
        }
    }
}

#[derive(Args)]
struct AngleArgs {
    #[command(flatten)]
    electron: ElectronArgs,
    #[command(flatten)]
    medium: MediumArgs,
    /// Wavelength for dispersive media, nm.
    #[arg(long)]
    lambda: Option<f64>,
    /// Electron spread angle, degrees.
    #[arg(long, default_value_t = 0.0)]
    theta_i: f64,
    /// Photon energy in eV for the quantum angle.
    #[arg(long, conflicts_with = "photon_nm")]
    photon_ev: Option<f64>,
    /// Photon wavelength in nm for the quantum angle.
    #[arg(long)]
    photon_nm: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CutoffArgs {
    #[command(flatten)]
    electron: ElectronArgs,
    #[command(flatten)]
    medium: MediumArgs,
    /// Wavelength bracket for dispersive root finding, nm.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    bracket: Option<Vec<f64>>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// JSON scan config.
    config: PathBuf,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// File stem (overrides output.stem).
    #[arg(long)]
    stem: Option<String>,
    /// Comma-separated formats: csv, json, svg.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<String>>,
    /// Worker threads, or "auto".
    #[arg(long)]
    workers: Option<String>,
    /// Wavelength grid points (overrides scan.points).
    #[arg(long)]
    points: Option<usize>,
    /// Wavelength range in nm (overrides scan.lambda_nm).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    lambda: Option<Vec<f64>>,
}

#[derive(Args)]
struct OracleArgs {
    /// Random interior cases.
    #[arg(long, default_value_t = 20)]
    cases: usize,
    /// Random non-formable cases.
    #[arg(long, default_value_t = 5)]
    exterior: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the comparison table here as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 2,
        _ => 1,
    }
}

fn deg(x: f64) -> f64 {
    x.to_degrees()
}

fn cmd_angle(a: &AngleArgs) -> Result<(), Error> {
    let beta = a.electron.beta()?;
    let model = a.medium.model()?;
    let n = match (model.is_constant(), a.lambda, a.photon_nm) {
        (true, _, _) => n_at(&model, 500.0)?,
        (false, Some(l), _) | (false, None, Some(l)) => n_at(&model, l)?,
        (false, None, None) => return Err(Error::Config("dispersive media need --lambda or --photon-nm".into())),
    };
    let theta_i = a.theta_i.to_radians();
    let photon = a.photon_ev.or(a.photon_nm.map(|l| HC_EV_NM / l));
    let conventional = conventional_angle(beta, n);
    let quantum = photon.map(|w| quantum_angle(beta, n, w));
    let theta_cr = match quantum {
        Some(q) => q,
        None => conventional,
    };
    let cone = theta_cr.map(|t| double_cone(theta_i, t));
    let below = beta * n <= 1.0;
    if a.json {
        let report = json!({
            "beta": beta,
            "n": n,
            "below_threshold": below,
            "beyond_cutoff": !below && matches!(quantum, Some(None)),
            "conventional_deg": conventional.map(deg),
            "conventional_rad": conventional,
            "photon_ev": photon,
            "quantum_deg": quantum.flatten().map(deg),
            "quantum_rad": quantum.flatten(),
            "theta_i_deg": a.theta_i,
            "inner_deg": cone.map(|c| deg(c.inner)),
            "outer_deg": cone.map(|c| deg(c.outer)),
            "backward": cone.map(|c| c.backward),
        });
        println!("{report:#}");
        return Ok(());
    }
    println!("beta = {beta}, n = {n}");
    if below {
        println!("below threshold: beta*n = {:.6} <= 1, no emission", beta * n);
        return Ok(());
    }
    if let Some(c) = conventional {
        println!("conventional angle: {:.6} deg ({c:.9e} rad)", deg(c));
    }
    match (photon, quantum.flatten()) {
        (Some(w), Some(q)) => println!("quantum angle at {w} eV: {:.6} deg ({q:.9e} rad)", deg(q)),
        (Some(w), None) => {
            println!("beyond quantum cutoff at {w} eV: no emission");
            return Ok(());
        }
        _ => {}
    }
    if let Some(c) = cone {
        println!("inner cone: {:.6} deg, outer cone: {:.6} deg", deg(c.inner), deg(c.outer));
        if c.backward {
            println!("outer cone points backward (> 90 deg)");
        }
    }
    Ok(())
}

fn cmd_cutoff(a: &CutoffArgs) -> Result<(), Error> {
    let beta = a.electron.beta()?;
    let model = a.medium.model()?;
    let bracket = match &a.bracket {
        Some(v) => (v[0], v[1]),
        None => {
            let (lo, hi) = model.window();
            (lo.max(200.0), hi.min(2000.0))
        }
    };
    if model.is_constant() {
        let n = n_at(&model, bracket.0)?;
        let cut = cutoff_energy(beta, n);
        if a.json {
            let report = match &cut {
                Ok(w) => json!({"beta": beta, "n": n, "below_threshold": false, "cutoff_ev": w, "cutoff_nm": HC_EV_NM / w}),
                Err(_) => json!({"beta": beta, "n": n, "below_threshold": true, "threshold_beta": threshold_beta(n).ok()}),
            };
            println!("{report:#}");
            return Ok(());
        }
        match cut {
            Ok(w) => println!("quantum cutoff: {w:.6} eV, {:.4} nm", HC_EV_NM / w),
            Err(Error::BelowThreshold { beta_n }) => println!("below threshold: beta*n = {beta_n:.6} <= 1, no emission"),
            Err(e) => return Err(e),
        }
        return Ok(());
    }
    let quantum = quantum_cutoff_wavelength(&model, beta, bracket)?;
    let dispersion = dispersion_cutoff_wavelength(&model, beta, bracket)?;
    if a.json {
        let report = json!({
            "beta": beta,
            "medium": model.label(),
            "bracket_nm": [bracket.0, bracket.1],
            "quantum_cutoff_nm": quantum,
            "quantum_cutoff_ev": quantum.map(|l| HC_EV_NM / l),
            "dispersion_cutoff_nm": dispersion,
        });
        println!("{report:#}");
        return Ok(());
    }
    println!("medium: {}, beta = {beta}, bracket {:?} nm", model.label(), bracket);
    match quantum {
        Some(l) => println!("quantum cutoff: {:.6} eV, {l:.4} nm", HC_EV_NM / l),
        None => println!("quantum cutoff: none in bracket"),
    }
    match dispersion {
        Some(l) => println!("dispersion cutoff (n < 1/beta beyond): {l:.4} nm"),
        None => println!("dispersion cutoff: none in bracket"),
    }
    let (lo, hi) = bracket;
    if n_at(&model, lo)? * beta <= 1.0 && n_at(&model, hi)? * beta <= 1.0 {
        println!("below threshold across the bracket: no emission");
    }
    Ok(())
}

fn apply_overrides(cfg: &mut ScanConfig, a: &ScanArgs) -> Result<(), Error> {
    if let Some(d) = &a.out {
        cfg.output.dir = d.clone();
    } else if cfg.output.dir.is_relative() {
        if let Some(base) = &cfg.base_dir {
            cfg.output.dir = base.join(&cfg.output.dir);
        }
    }
    if let Some(s) = &a.stem {
        cfg.output.stem = s.clone();
    }
    if let Some(f) = &a.format {
        cfg.output.formats = f
            .iter()
            .map(|s| match s.trim() {
                "csv" => Ok(OutputFormat::Csv),
                "json" => Ok(OutputFormat::Json),
                "svg" => Ok(OutputFormat::Svg),
                other => Err(Error::Config(format!("unknown format {other:?}"))),
            })
            .collect::<Result<_, _>>()?;
    }
    if let Some(w) = &a.workers {
        cfg.workers = match w.as_str() {
            "auto" => Workers::default(),
            s => Workers::Count(s.parse().map_err(|_| Error::Config(format!("--workers expects a count or auto, got {s:?}")))?),
        };
    }
    if let Some(p) = a.points {
        cfg.scan.points = p;
    }
    if let Some(l) = &a.lambda {
        cfg.scan.lambda_nm = (l[0], l[1]);
    }
    cfg.validate()
}

fn cmd_scan(a: &ScanArgs, map: bool) -> Result<(), Error> {
    let mut cfg = ScanConfig::from_path(&a.config)?;
    let is_map = cfg.scan.kind == ScanKind::Ampmap;
    if is_map != map {
        return Err(Error::Config(format!(
            "config scan.kind is {:?}; use the {} subcommand",
            cfg.scan.kind.as_str(),
            if is_map { "ampmap" } else { "spectrum" }
        )));
    }
    apply_overrides(&mut cfg, a)?;
    let result = run_scan(&cfg)?;
    for p in write_outputs(&result, &cfg.output)? {
        println!("wrote {}", p.display());
    }
    eprintln!("config hash {} ({:.3} s)", result.metadata.config_hash, result.wall_time_s);
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> Result<bool, Error> {
    let cases = oracle_suite(a.cases, a.exterior, a.seed, &OracleOptions::default())?;
    let mut table = String::from("l_i,l_f,photon_order,s_i,s_f,s_ph,formable,closed_form,oracle,spread,error,pass\n");
    for c in &cases {
        table.push_str(&format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{}\n",
            c.l_i,
            c.l_f,
            c.photon_order,
            c.sides.s_i,
            c.sides.s_f,
            c.sides.s_ph,
            c.formable,
            c.closed_form.map(|v| format!("{v:.16e}")).unwrap_or_default(),
            c.oracle.value,
            c.oracle.spread,
            c.error,
            c.pass
        ));
    }
    if let Some(p) = &a.out {
        std::fs::write(p, &table).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    let passed = cases.iter().all(|c| c.pass);
    if a.json {
        let v = serde_json::to_value(&cases).map_err(|e| Error::Numerical(e.to_string()))?;
        println!("{:#}", json!({"seed": a.seed, "all_pass": passed, "cases": v}));
    } else {
        print!("{table}");
        let worst = cases.iter().filter(|c| c.formable).map(|c| c.error).fold(0.0, f64::max);
        println!(
            "{} of {} cases pass; worst interior relative error {worst:.3e}",
            cases.iter().filter(|c| c.pass).count(),
            cases.len()
        );
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Angle(a) => cmd_angle(a).map(|_| true),
        Command::Cutoff(a) => cmd_cutoff(a).map(|_| true),
        Command::Spectrum(a) => cmd_scan(a, false).map(|_| true),
        Command::Ampmap(a) => cmd_scan(a, true).map(|_| true),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: oracle disagreement beyond tolerance");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
