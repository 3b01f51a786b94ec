//! Paths to the bundled scan configs shared by the acceptance checks.

use std::path::PathBuf;

pub const GOLDEN_CONFIGS: [&str; 6] = ["fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d"];

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/configs")
        .join(format!("{name}.json"))
}
