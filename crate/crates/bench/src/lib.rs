//! Fixtures for the benchmarks.

use std::path::PathBuf;

use keypoly_core::LimitScenario;

/// Loads one of the scenarios shipped under `scenarios/`.
pub fn shipped_scenario(name: &str) -> LimitScenario {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    LimitScenario::load(path).expect("shipped scenario loads")
}
