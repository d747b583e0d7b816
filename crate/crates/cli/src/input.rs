use std::path::{Path, PathBuf};

use eqk_core::json::{self, JsonError};
use eqk_core::spaces::Catalog;
use eqk_core::PrimeSpot;
use serde_json::Value;

/// Exit code 2 territory: anything wrong with what the user handed us.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl InputError {
    pub fn json(source: &str, e: JsonError) -> InputError {
        InputError(format!("{source}: {e}"))
    }
}

/// An argument that is either inline JSON or a path to a JSON file.
pub fn load_json(arg: &str, what: &str) -> Result<Value, InputError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return json::parse(arg).map_err(|e| InputError::json(what, e));
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| InputError(format!("{what}: cannot read {arg}: {e}")))?;
    json::parse(&text).map_err(|e| InputError::json(&format!("{what} ({arg})"), e))
}

pub fn parse_prime(arg: &str) -> Result<PrimeSpot, InputError> {
    arg.parse::<PrimeSpot>()
        .map_err(|e| InputError(format!("--prime {arg}: {e}")))
}

pub const SUITE_DIR_VAR: &str = "KTHEORY_SUITE_DIR";

/// Fixtures from `KTHEORY_SUITE_DIR` if set, otherwise the bundled ones.
pub fn load_catalog() -> Result<(Catalog, Option<PathBuf>), InputError> {
    match std::env::var_os(SUITE_DIR_VAR) {
        Some(dir) if !dir.is_empty() => {
            let dir = PathBuf::from(dir);
            let cat = Catalog::from_dir(Path::new(&dir))
                .map_err(|e| InputError(format!("{SUITE_DIR_VAR}={}: {e}", dir.display())))?;
            Ok((cat, Some(dir)))
        }
        _ => Ok((Catalog::bundled(), None)),
    }
}
