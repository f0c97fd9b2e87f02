//! Shared fixtures for the kernel benchmarks.

use std::path::PathBuf;

/// `(name, source)` for every program in the workspace corpus, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("corpus entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "qdx"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("corpus file"))
        })
        .collect();
    out.sort();
    out
}

/// Expressions used by the enclosure and classification benchmarks.
pub const EXPRESSIONS: &[&str] = &["sqrt(2) + sqrt(3)", "sin_pi(2/5)", "pow(-1, sqrt(2))", "log(3; -1)", "clavius(20)"];
