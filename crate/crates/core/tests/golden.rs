//! Regenerates the bundled figure outputs and checks them against the recorded
//! SHA-256 digests in `configs/golden.sha256`. Set `QCHERENKOV_BLESS=1` to
//! rewrite the digest file (and keep the CSVs under `target/golden`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use qcherenkov::scan::{render, run_scan, OutputFormat, ScanConfig};
use sha2::{Digest, Sha256};

const NAMES: [&str; 6] = ["fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("QCHERENKOV_BLESS").is_some();
    let out_dir = root().join("../../target/golden");
    let mut current = BTreeMap::new();
    for name in NAMES {
        let cfg = ScanConfig::from_path(root().join("configs").join(format!("{name}.json"))).unwrap();
        let result = run_scan(&cfg).unwrap();
        for (suffix, text) in render(&result, OutputFormat::Csv).unwrap() {
            let file = format!("{name}{suffix}");
            if bless {
                std::fs::create_dir_all(&out_dir).unwrap();
                std::fs::write(out_dir.join(&file), &text).unwrap();
            }
            current.insert(file, digest(&text));
        }
    }
    let path = root().join("configs/golden.sha256");
    let rendered: String = current.iter().map(|(f, d)| format!("{d}  {f}\n")).collect();
    if bless {
        std::fs::write(&path, rendered).unwrap();
        return;
    }
    let recorded = std::fs::read_to_string(&path).expect("configs/golden.sha256 exists; run with QCHERENKOV_BLESS=1 to create it");
    assert_eq!(recorded, rendered, "golden digests changed; inspect and re-bless if intended");
}
