//! The atoms with known 𝕂-invariants, their six-term data, and the mutated
//! fixtures used to check that validation rejects bad input.

use std::path::Path;

use serde_json::{Map, Value};

use crate::json::{self, JsonError};
use crate::kinv::{KInvariant, SixTermData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub kinv: KInvariant,
    pub six_term: SixTermData,
    /// Whether the space is G-free.
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    pub name: String,
    pub kinv: KInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenSixTerm {
    pub name: String,
    pub data: SixTermData,
    pub predicted_spot: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub pt: CatalogEntry,
    pub v: CatalogEntry,
    pub g: CatalogEntry,
    pub g_r: CatalogEntry,
    pub mutants: Vec<Mutant>,
    pub broken: BrokenSixTerm,
}

pub const ENTRY_FILES: [&str; 4] = ["pt.json", "V.json", "G.json", "GxR.json"];
pub const MUTANT_FILES: [&str; 3] = [
    "mutant_scaled_psi.json",
    "mutant_broken_t2.json",
    "mutant_nonlinear_phi.json",
];
pub const BROKEN_FILE: &str = "broken_pt_six_term.json";

const BUNDLED: [(&str, &str); 8] = [
    ("pt.json", include_str!("../../fixtures/pt.json")),
    ("V.json", include_str!("../../fixtures/V.json")),
    ("G.json", include_str!("../../fixtures/G.json")),
    ("GxR.json", include_str!("../../fixtures/GxR.json")),
    (
        "mutant_scaled_psi.json",
        include_str!("../../fixtures/mutant_scaled_psi.json"),
    ),
    (
        "mutant_broken_t2.json",
        include_str!("../../fixtures/mutant_broken_t2.json"),
    ),
    (
        "mutant_nonlinear_phi.json",
        include_str!("../../fixtures/mutant_nonlinear_phi.json"),
    ),
    (
        "broken_pt_six_term.json",
        include_str!("../../fixtures/broken_pt_six_term.json"),
    ),
];

/// A parse failure inside a named fixture file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{file}: {source}")]
pub struct CatalogError {
    pub file: String,
    pub source: JsonError,
}

impl Catalog {
    /// The fixtures compiled into the library.
    pub fn bundled() -> Catalog {
        Self::from_source(|name| {
            BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| JsonError::new("", "missing bundled fixture"))
        })
        .expect("bundled fixtures parse")
    }

    /// Reads the same file names from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Catalog, CatalogError> {
        Self::from_source(|name| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| JsonError::new("", format!("cannot read: {e}")))
        })
    }

    fn from_source(
        mut read: impl FnMut(&str) -> Result<String, JsonError>,
    ) -> Result<Catalog, CatalogError> {
        let mut load = |name: &str| -> Result<Value, CatalogError> {
            let wrap = |source| CatalogError {
                file: name.to_string(),
                source,
            };
            json::parse(&read(name).map_err(wrap)?).map_err(wrap)
        };
        let wrap_at = |name: &str| {
            let name = name.to_string();
            move |source| CatalogError { file: name, source }
        };
        let mut entries = Vec::new();
        for name in ENTRY_FILES {
            entries.push(entry_from_json(&load(name)?).map_err(wrap_at(name))?);
        }
        let mut mutants = Vec::new();
        for name in MUTANT_FILES {
            mutants.push(mutant_from_json(&load(name)?).map_err(wrap_at(name))?);
        }
        let broken = broken_from_json(&load(BROKEN_FILE)?).map_err(wrap_at(BROKEN_FILE))?;
        let [pt, v, g, g_r]: [CatalogEntry; 4] = entries.try_into().expect("four entries");
        Ok(Catalog {
            pt,
            v,
            g,
            g_r,
            mutants,
            broken,
        })
    }

    pub fn entries(&self) -> [&CatalogEntry; 4] {
        [&self.pt, &self.v, &self.g, &self.g_r]
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries().into_iter().find(|e| e.name == name)
    }
}

fn kinv_and_six_term(obj: &Map<String, Value>) -> Result<SixTermData, JsonError> {
    let kinv = json::kinvariant_from_json(json::field(obj, "", "kinvariant")?, "/kinvariant")?;
    json::six_term_from_json(obj, "", kinv)
}

pub fn entry_from_json(v: &Value) -> Result<CatalogEntry, JsonError> {
    let obj = json::object(v, "", &["name", "free", "kinvariant", "K", "f", "boundary"])?;
    let name = json::string(json::field(obj, "", "name")?, "/name")?.to_string();
    let free = json::boolean(json::field(obj, "", "free")?, "/free")?;
    let six_term = kinv_and_six_term(obj)?;
    Ok(CatalogEntry {
        name,
        kinv: six_term.kinv.clone(),
        six_term,
        free,
    })
}

pub fn entry_to_json(e: &CatalogEntry) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::from(e.name.clone()));
    obj.insert("free".into(), Value::Bool(e.free));
    json::six_term_to_json(&e.six_term, &mut obj);
    Value::Object(obj)
}

/// A standalone six-term file: the keys of a catalog entry, with `name`,
/// `free` and `predicted_spot` optional.
pub fn six_term_file_from_json(v: &Value) -> Result<(String, SixTermData), JsonError> {
    let obj = json::object(
        v,
        "",
        &[
            "name",
            "free",
            "predicted_spot",
            "kinvariant",
            "K",
            "f",
            "boundary",
        ],
    )?;
    let name = match obj.get("name") {
        Some(n) => json::string(n, "/name")?.to_string(),
        None => "input".to_string(),
    };
    Ok((name, kinv_and_six_term(obj)?))
}

fn mutant_from_json(v: &Value) -> Result<Mutant, JsonError> {
    let obj = json::object(v, "", &["name", "kinvariant"])?;
    Ok(Mutant {
        name: json::string(json::field(obj, "", "name")?, "/name")?.to_string(),
        kinv: json::kinvariant_from_json(json::field(obj, "", "kinvariant")?, "/kinvariant")?,
    })
}

fn broken_from_json(v: &Value) -> Result<BrokenSixTerm, JsonError> {
    let obj = json::object(
        v,
        "",
        &["name", "predicted_spot", "kinvariant", "K", "f", "boundary"],
    )?;
    Ok(BrokenSixTerm {
        name: json::string(json::field(obj, "", "name")?, "/name")?.to_string(),
        predicted_spot: json::string(json::field(obj, "", "predicted_spot")?, "/predicted_spot")?
            .to_string(),
        data: kinv_and_six_term(obj)?,
    })
}
