use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::persistence::write_diagram_csv;
use crate::rational::Rational;
use crate::transform::{BarcodeSample, TransformError};

pub const MANIFEST_FILE: &str = "manifest.json";

/// A number as both its exact rational rendering and the nearest float.
pub fn exact_number(r: &Rational) -> Value {
    serde_json::to_value(r).expect("rationals serialize")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize)]
struct ManifestEntry {
    basepoint: String,
    file: String,
}

/// File name for a basepoint label; `/` is not allowed in file names.
fn file_name(index: usize, label: &str) -> String {
    format!("{index:04}_{}.csv", label.replace('/', "_"))
}

/// Writes `manifest.json` and one diagram CSV per basepoint into `dir`,
/// creating it if needed. `graph_sha256` identifies the source graph file.
pub fn export_transform(sample: &BarcodeSample, graph_sha256: &str, dir: &Path) -> Result<(), TransformError> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(sample.len());
    for (i, (label, d)) in sample.labels().into_iter().zip(sample.diagrams()).enumerate() {
        let file = file_name(i, &label);
        fs::write(dir.join(&file), write_diagram_csv(d))?;
        entries.push(ManifestEntry { basepoint: label, file });
    }
    let manifest = json!({
        "graph_sha256": graph_sha256,
        "delta": exact_number(sample.delta()),
        "delta_hat": exact_number(sample.covering_radius()),
        "basepoints": entries,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(())
}
