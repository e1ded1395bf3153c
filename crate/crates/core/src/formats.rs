//! JSON file formats: groups, cohomology tables, resolution data and window sums.
//!
//! Every file carries a `"format"` tag:
//!
//! ```text
//! {"format":"group-table-v1","names":[...],"table":[[...]]}
//! {"format":"group-perms-v1","degree":k,"generators":[[...]]}
//! {"format":"group-builtin-v1","group":"symmetric(4)"}
//! {"format":"cohomology-v1","dim":n,"groups":{"0":{"rank":1,"torsion":[]}}}
//! {"format":"resolution-v1","n":1,"m":2,"main":<cohomology-v1>,"extras":[{"coeff":-1,"table":<cohomology-v1>}]}
//! {"format":"window-sums-v1","n":2,"sums":{"-2":"Z","0":"Z + Z/2"}}
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{FGAbelian, L0AbElement};
use crate::ekedahl::ResolutionData;
use crate::group::{group_from_permutations, Builtin, FiniteGroup, GroupError};
use crate::hcoh::CohomologyTable;
use crate::kring::{GeneratorSymbol, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("bad format: {0}")]
    BadFormat(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn tag(text: &str) -> Result<(serde_json::Value, String), FormatError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| FormatError::BadFormat(e.to_string()))?;
    let format = value
        .get("format")
        .and_then(|f| f.as_str())
        .ok_or_else(|| FormatError::BadFormat("missing string field `format`".into()))?
        .to_string();
    Ok((value, format))
}

fn fields<T: for<'de> Deserialize<'de>>(
    value: serde_json::Value,
    format: &str,
) -> Result<T, FormatError> {
    serde_json::from_value(value).map_err(|e| FormatError::BadFormat(format!("{format}: {e}")))
}

#[derive(Deserialize)]
struct TableFile {
    #[serde(default)]
    names: Option<Vec<String>>,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct PermsFile {
    degree: usize,
    generators: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct BuiltinFile {
    group: String,
}

/// Parses a group document; `closure_cap` bounds permutation closures.
pub fn parse_group_json(text: &str, closure_cap: usize) -> Result<FiniteGroup, FormatError> {
    let (value, format) = tag(text)?;
    match format.as_str() {
        "group-table-v1" => {
            let f: TableFile = fields(value, &format)?;
            Ok(FiniteGroup::from_table(&f.table, f.names)?)
        }
        "group-perms-v1" => {
            let f: PermsFile = fields(value, &format)?;
            if let Some(i) = f.generators.iter().position(|g| g.len() != f.degree) {
                return Err(FormatError::ValidationFailed(format!(
                    "generators[{i}] has length {}, expected degree {}",
                    f.generators[i].len(),
                    f.degree
                )));
            }
            Ok(group_from_permutations(&f.generators, closure_cap)?)
        }
        "group-builtin-v1" => {
            let f: BuiltinFile = fields(value, &format)?;
            Ok(f.group.parse::<Builtin>()?.build()?)
        }
        other => Err(FormatError::BadFormat(format!(
            "unknown group format `{other}`"
        ))),
    }
}

pub fn parse_group_file(path: &Path, closure_cap: usize) -> Result<FiniteGroup, FormatError> {
    parse_group_json(&read(path)?, closure_cap)
}

/// `group-table-v1` document for a group.
pub fn group_to_json(group: &FiniteGroup) -> serde_json::Value {
    serde_json::json!({
        "format": "group-table-v1",
        "names": group.names(),
        "table": group.table_rows(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupEntry {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CohomologyFile {
    format: String,
    dim: u32,
    groups: BTreeMap<String, GroupEntry>,
}

impl CohomologyFile {
    fn into_table(self) -> Result<CohomologyTable, FormatError> {
        if self.format != "cohomology-v1" {
            return Err(FormatError::BadFormat(format!(
                "expected cohomology-v1, got `{}`",
                self.format
            )));
        }
        let mut table = CohomologyTable::empty(self.dim);
        for (k, entry) in self.groups {
            let degree: u32 = k.parse().map_err(|_| {
                FormatError::BadFormat(format!("degree key `{k}` is not a nonnegative integer"))
            })?;
            if entry.torsion.iter().any(|&t| t < 2) {
                return Err(FormatError::ValidationFailed(format!(
                    "groups.{k}.torsion: factors must be at least 2"
                )));
            }
            table
                .set(degree, FGAbelian::new(entry.rank, &entry.torsion))
                .map_err(|e| FormatError::ValidationFailed(format!("groups.{k}: {e}")))?;
        }
        Ok(table)
    }

    fn from_table(table: &CohomologyTable) -> Self {
        let groups = table
            .groups()
            .map(|(k, g)| {
                let torsion = g.torsion_u64().expect("table torsion fits in u64");
                (
                    k.to_string(),
                    GroupEntry {
                        rank: g.rank(),
                        torsion,
                    },
                )
            })
            .collect();
        CohomologyFile {
            format: "cohomology-v1".into(),
            dim: table.dimension(),
            groups,
        }
    }
}

pub fn parse_cohomology_json(text: &str) -> Result<CohomologyTable, FormatError> {
    let (value, format) = tag(text)?;
    fields::<CohomologyFile>(value, &format)?.into_table()
}

pub fn parse_cohomology_file(path: &Path) -> Result<CohomologyTable, FormatError> {
    parse_cohomology_json(&read(path)?)
}

pub fn cohomology_to_json(table: &CohomologyTable) -> serde_json::Value {
    serde_json::to_value(CohomologyFile::from_table(table)).expect("serializable")
}

/// Symbols named after the `*.json` files of a directory, each a cohomology table.
pub fn load_symbol_tables(dir: &Path) -> Result<SymbolTable, FormatError> {
    let entries = fs::read_dir(dir).map_err(|e| FormatError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut symbols = SymbolTable::new();
    for path in paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let table = parse_cohomology_file(&path)?;
        let symbol = GeneratorSymbol::with_table(&name, table)
            .map_err(|e| FormatError::ValidationFailed(format!("{}: {e}", path.display())))?;
        symbols.insert(symbol);
    }
    Ok(symbols)
}

#[derive(Deserialize)]
struct ExtraEntry {
    coeff: i64,
    table: CohomologyFile,
}

#[derive(Deserialize)]
struct ResolutionFile {
    n: u32,
    m: u32,
    main: CohomologyFile,
    #[serde(default)]
    extras: Vec<ExtraEntry>,
}

pub fn parse_resolution_json(text: &str) -> Result<ResolutionData, FormatError> {
    let (value, format) = tag(text)?;
    if format != "resolution-v1" {
        return Err(FormatError::BadFormat(format!(
            "expected resolution-v1, got `{format}`"
        )));
    }
    let f: ResolutionFile = fields(value, &format)?;
    let main = f.main.into_table()?;
    let extras = f
        .extras
        .into_iter()
        .map(|e| Ok((e.coeff, e.table.into_table()?)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    ResolutionData::new(f.n, f.m, main, extras)
        .map_err(|e| FormatError::ValidationFailed(e.to_string()))
}

pub fn parse_resolution_file(path: &Path) -> Result<ResolutionData, FormatError> {
    parse_resolution_json(&read(path)?)
}

pub fn resolution_to_json(data: &ResolutionData) -> serde_json::Value {
    let extras: Vec<_> = data
        .extras()
        .iter()
        .map(|(c, t)| serde_json::json!({"coeff": c, "table": cohomology_to_json(t)}))
        .collect();
    serde_json::json!({
        "format": "resolution-v1",
        "n": data.rep_dimension(),
        "m": data.copies(),
        "main": cohomology_to_json(data.main()),
        "extras": extras,
    })
}

/// Window sums keyed by `k`, with an optional width recorded in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSums {
    pub n: Option<u32>,
    pub sums: BTreeMap<i64, L0AbElement>,
}

#[derive(Deserialize)]
struct SumsFile {
    #[serde(default)]
    n: Option<u32>,
    sums: BTreeMap<String, String>,
}

pub fn parse_sums_json(text: &str) -> Result<WindowSums, FormatError> {
    let (value, format) = tag(text)?;
    if format != "window-sums-v1" {
        return Err(FormatError::BadFormat(format!(
            "expected window-sums-v1, got `{format}`"
        )));
    }
    let f: SumsFile = fields(value, &format)?;
    let mut sums = BTreeMap::new();
    for (k, v) in f.sums {
        let key: i64 = k
            .parse()
            .map_err(|_| FormatError::BadFormat(format!("sums key `{k}` is not an integer")))?;
        let value = v
            .parse()
            .map_err(|e| FormatError::ValidationFailed(format!("sums.{k}: {e}")))?;
        sums.insert(key, value);
    }
    Ok(WindowSums { n: f.n, sums })
}

pub fn parse_sums_file(path: &Path) -> Result<WindowSums, FormatError> {
    parse_sums_json(&read(path)?)
}

pub fn sums_to_json(sums: &BTreeMap<i64, L0AbElement>, n: Option<u32>) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = sums
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string().into()))
        .collect();
    let mut doc = serde_json::json!({"format": "window-sums-v1", "sums": map});
    if let Some(n) = n {
        doc["n"] = n.into();
    }
    doc
}
