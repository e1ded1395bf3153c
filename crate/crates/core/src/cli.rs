//! Command-line front end. `main.rs` only parses arguments and forwards here.
//!
//! Exit codes: 0 success, 2 usage, 3 validation, 4 computation cap.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::abelian::L0AbElement;
use crate::cache::{cache_key, default_cache_dir, Cache};
use crate::cohomology::{
    bogomolov_multiplier_with, h2_units_with, CohomologyConfig, CohomologyError, DEFAULT_ORDER_CAP,
};
use crate::ekedahl::{
    ekedahl_invariant, solve_from_projective_sums, CatalogAssertions, EkedahlError, EkedahlOptions,
    InvariantResult, Provenance,
};
use crate::formats::{
    cohomology_to_json, load_symbol_tables, parse_group_file, parse_resolution_file,
    parse_sums_file, resolution_to_json, FormatError,
};
use crate::group::{maximal_abelian_subgroups, Builtin, FiniteGroup, GroupError, Origin};
use crate::hcoh::{h_k, HcohError};
use crate::kring::{parse_kring_expr_with, KError, SymbolTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

/// Finite groups, Bogomolov multipliers, Kontsevich classes and Ekedahl invariants.
#[derive(Debug, Clone, Parser)]
#[command(name = "ekedahl", version)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputMode::Text, global = true)]
    pub output: OutputMode,
    /// Largest group order for cohomology computations
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Neither read nor write the result cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum GroupAction {
    /// Order, fingerprint, generators and maximal abelian subgroups
    Show {
        /// Group file, or `builtin:<name>(<params>)`
        group: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Inspect a group
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Bogomolov multiplier B0(G)
    Bogomolov {
        /// Group file, or `builtin:<name>(<params>)`
        group: String,
    },
    /// Ekedahl invariant e_i(G)
    Ekedahl {
        /// Group file, or `builtin:<name>(<params>)`
        group: String,
        /// Degree i of e_i
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        /// resolution-v1 file used above degree 2
        #[arg(long)]
        resolution: Option<PathBuf>,
        /// Assert that the group embeds in GL_3(C)
        #[arg(long)]
        assume_gl3: bool,
    },
    /// Evaluate a ring expression
    Kring {
        /// Expression in L, P^n, GL(n), B(GL(n)), inv(...) and table symbols
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Truncate to Fil^tau with this tau unless the expression sets its own precision
        #[arg(long, allow_negative_numbers = true)]
        prec: Option<i64>,
        /// Directory of cohomology-v1 files, one symbol per file stem
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// H^k of a ring expression in L0(Ab)
    Hcoh {
        /// Expression in L, P^n, GL(n), B(GL(n)), inv(...) and table symbols
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Cohomological degree
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Truncate to Fil^tau with this tau unless the expression sets its own precision
        #[arg(long, allow_negative_numbers = true)]
        prec: Option<i64>,
        /// Directory of cohomology-v1 files, one symbol per file stem
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// Recover e_i from sums over windows of width n
    SolveWindow {
        /// window-sums-v1 file
        #[arg(long)]
        sums: PathBuf,
        /// Window width; defaults to the `n` recorded in the file
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandRequest {
    pub command: Command,
    pub output: OutputMode,
    pub cap: Option<usize>,
    pub use_cache: bool,
    pub cache_dir: Option<PathBuf>,
}

impl From<Cli> for CommandRequest {
    fn from(cli: Cli) -> Self {
        CommandRequest {
            command: cli.command,
            output: cli.output,
            cap: cli.cap,
            use_cache: !cli.no_cache,
            cache_dir: default_cache_dir(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Cap(_) => "cap",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureTooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Group(g) => g.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::CapExceeded { .. } => {
                CliError::Cap(format!("{e}; raise it with --cap"))
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<EkedahlError> for CliError {
    fn from(e: EkedahlError) -> Self {
        match e {
            EkedahlError::Cohomology(c) => c.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<HcohError> for CliError {
    fn from(e: HcohError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// What a command produced, independent of timing.
struct Payload {
    result: Value,
    provenance: Value,
}

fn sha_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn origin_label(origin: &Origin) -> String {
    match origin {
        Origin::Table => "table".into(),
        Origin::Permutations => "permutations".into(),
        Origin::Builtin(b) => format!("builtin:{b}"),
    }
}

/// `builtin:<spec>` or a path to a group file.
pub fn load_group(arg: &str, closure_cap: usize) -> Result<FiniteGroup, CliError> {
    match arg.strip_prefix("builtin:") {
        Some(spec) => Ok(spec.parse::<Builtin>()?.build()?),
        None => Ok(parse_group_file(Path::new(arg), closure_cap)?),
    }
}

fn group_fingerprint(g: &FiniteGroup) -> String {
    format!("{}|{}", g.fingerprint(), origin_label(g.origin()))
}

fn load_tables(dir: Option<&Path>) -> Result<(SymbolTable, String), CliError> {
    let Some(dir) = dir else {
        return Ok((SymbolTable::new(), String::new()));
    };
    let symbols = load_symbol_tables(dir)?;
    // canonical content of every table, so edits invalidate cached results
    let mut canon = String::new();
    let mut entries: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::Validation(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    for p in entries {
        let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        if let Some(s) = symbols.get(name) {
            let table = s.table().expect("loaded with a table");
            let _ = write!(canon, "{name}={};", cohomology_to_json(table));
        }
    }
    Ok((symbols, canon))
}

struct Prepared {
    fingerprint: String,
    command_key: String,
    compute: Box<dyn FnOnce() -> Result<Payload, CliError>>,
}

fn prepare(req: &CommandRequest) -> Result<Prepared, CliError> {
    let cap = req.cap.unwrap_or(DEFAULT_ORDER_CAP);
    let closure_cap = cap.max(DEFAULT_CLOSURE_CAP);
    let config = CohomologyConfig { order_cap: cap };
    Ok(match req.command.clone() {
        Command::Group {
            action: GroupAction::Show { group },
        } => {
            let g = load_group(&group, closure_cap)?;
            Prepared {
                fingerprint: group_fingerprint(&g),
                command_key: "group show".into(),
                compute: Box::new(move || Ok(group_show(&g))),
            }
        }
        Command::Bogomolov { group } => {
            let g = load_group(&group, closure_cap)?;
            Prepared {
                fingerprint: group_fingerprint(&g),
                command_key: format!("bogomolov cap={cap}"),
                compute: Box::new(move || {
                    let h2 = h2_units_with(&g, g.order().max(2) as u64, &config)?.group();
                    let b0 = bogomolov_multiplier_with(&g, &config)?;
                    let subgroups = maximal_abelian_subgroups(&g).len();
                    Ok(Payload {
                        result: b0.to_string().into(),
                        provenance: json!({
                            "kind": "bogomolov_corollary",
                            "h2_units": h2.to_string(),
                            "maximal_abelian_subgroups": subgroups,
                            "modulus": g.order(),
                        }),
                    })
                }),
            }
        }
        Command::Ekedahl {
            group,
            degree,
            resolution,
            assume_gl3,
        } => {
            let g = load_group(&group, closure_cap)?;
            let data = resolution
                .as_deref()
                .map(parse_resolution_file)
                .transpose()?;
            let data_key = data
                .as_ref()
                .map(|d| sha_hex(&[&resolution_to_json(d).to_string()]))
                .unwrap_or_default();
            let options = EkedahlOptions {
                assertions: CatalogAssertions {
                    gl3_embeddable: assume_gl3,
                },
                cohomology: config,
            };
            Prepared {
                fingerprint: group_fingerprint(&g),
                command_key: format!(
                    "ekedahl degree={degree} gl3={assume_gl3} cap={cap} resolution={data_key}"
                ),
                compute: Box::new(move || {
                    let r = ekedahl_invariant(&g, degree, data.as_ref(), &options)?;
                    Ok(invariant_payload(degree, &r))
                }),
            }
        }
        Command::Kring { expr, prec, tables } => {
            let (symbols, canon) = load_tables(tables.as_deref())?;
            Prepared {
                fingerprint: sha_hex(&[&expr, &canon]),
                command_key: format!("kring prec={prec:?}"),
                compute: Box::new(move || {
                    let x = parse_kring_expr_with(&expr, prec, &symbols)?;
                    Ok(Payload {
                        result: x.to_string().into(),
                        provenance: json!({"precision": x.precision(), "fil_degree": x.fil_degree()}),
                    })
                }),
            }
        }
        Command::Hcoh {
            expr,
            k,
            prec,
            tables,
        } => {
            let (symbols, canon) = load_tables(tables.as_deref())?;
            Prepared {
                fingerprint: sha_hex(&[&expr, &canon]),
                command_key: format!("hcoh k={k} prec={prec:?}"),
                compute: Box::new(move || {
                    let x = parse_kring_expr_with(&expr, prec, &symbols)?;
                    let h = h_k(&x, k)?;
                    Ok(Payload {
                        result: h.to_string().into(),
                        provenance: json!({"k": k, "precision": x.precision(), "class": x.to_string()}),
                    })
                }),
            }
        }
        Command::SolveWindow { sums, n } => {
            let file = parse_sums_file(&sums)?;
            let n = n.or(file.n).ok_or_else(|| {
                CliError::Usage("window width missing: pass --n or record n in the file".into())
            })?;
            let canon: String = file.sums.iter().map(|(k, v)| format!("{k}={v};")).collect();
            Prepared {
                fingerprint: sha_hex(&[&canon]),
                command_key: format!("solve-window n={n}"),
                compute: Box::new(move || {
                    let e = solve_from_projective_sums(&file.sums, n)?;
                    let map: serde_json::Map<String, Value> = e
                        .iter()
                        .map(|(i, v)| (i.to_string(), v.to_string().into()))
                        .collect();
                    Ok(Payload {
                        result: Value::Object(map),
                        provenance: json!({"kind": "window_solver", "n": n}),
                    })
                }),
            }
        }
    })
}

fn group_show(g: &FiniteGroup) -> Payload {
    let gens = g.generating_set();
    let maximal: Vec<Vec<usize>> = maximal_abelian_subgroups(g)
        .iter()
        .map(|a| a.members().to_vec())
        .collect();
    Payload {
        result: json!({
            "order": g.order(),
            "fingerprint": g.fingerprint(),
            "abelian": g.is_abelian(),
            "identity": g.identity(),
            "names": g.names(),
            "generators": gens.iter().map(|&x| g.name(x)).collect::<Vec<_>>(),
            "maximal_abelian_subgroups": maximal,
        }),
        provenance: json!({"origin": origin_label(g.origin())}),
    }
}

fn invariant_payload(degree: i64, r: &InvariantResult) -> Payload {
    match r {
        InvariantResult::Known { value, provenance } => Payload {
            result: value.to_string().into(),
            provenance: serde_json::to_value(provenance).expect("serializable"),
        },
        InvariantResult::Unknown { notes } => Payload {
            result: Value::Null,
            provenance: json!({"kind": "unknown", "degree": degree, "notes": notes}),
        },
    }
}

fn provenance_text(p: &Value) -> String {
    let kind = p.get("kind").and_then(Value::as_str).unwrap_or("");
    match kind {
        "catalog" => {
            let entry = serde_json::from_value::<Provenance>(p.clone()).ok();
            match entry {
                Some(Provenance::Catalog { entry }) => format!("catalog, {entry}"),
                _ => "catalog".into(),
            }
        }
        "resolution_formula" => match p.get("bound_gap").and_then(Value::as_u64) {
            Some(gap) => {
                format!("resolution formula (warning: m is {gap} below the stabilization bound)")
            }
            None => "resolution formula".into(),
        },
        "unknown" => {
            let notes: Vec<&str> = p["notes"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_str)
                .collect();
            format!("unknown: {}", notes.join("; "))
        }
        other => other.replace('_', " "),
    }
}

fn render_text(command: &Command, payload: &Payload) -> String {
    let r = &payload.result;
    let mut out = String::new();
    match command {
        Command::Group { .. } => {
            let _ = writeln!(out, "order: {}", r["order"]);
            let _ = writeln!(
                out,
                "fingerprint: {}",
                r["fingerprint"].as_str().unwrap_or_default()
            );
            let _ = writeln!(out, "abelian: {}", r["abelian"]);
            let gens: Vec<&str> = r["generators"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_str)
                .collect();
            let _ = writeln!(out, "generators: {}", gens.join(", "));
            let orders: Vec<String> = r["maximal_abelian_subgroups"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|a| a.as_array().map_or(0, Vec::len).to_string())
                .collect();
            let _ = writeln!(
                out,
                "maximal abelian subgroups: {} (orders {})",
                orders.len(),
                orders.join(", ")
            );
            let _ = writeln!(
                out,
                "origin: {}",
                payload.provenance["origin"].as_str().unwrap_or_default()
            );
        }
        Command::Ekedahl { .. } => {
            let _ = writeln!(out, "{}", r.as_str().unwrap_or("unknown"));
            let _ = writeln!(out, "provenance: {}", provenance_text(&payload.provenance));
        }
        Command::SolveWindow { .. } => {
            let mut rows: Vec<(i64, &str)> = r
                .as_object()
                .into_iter()
                .flatten()
                .filter_map(|(k, v)| Some((k.parse().ok()?, v.as_str()?)))
                .collect();
            rows.sort();
            for (i, v) in rows {
                let _ = writeln!(out, "e_{i} = {v}");
            }
        }
        _ => {
            let _ = writeln!(out, "{}", r.as_str().unwrap_or_default());
        }
    }
    out
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Group { .. } => "group show",
        Command::Bogomolov { .. } => "bogomolov",
        Command::Ekedahl { .. } => "ekedahl",
        Command::Kring { .. } => "kring",
        Command::Hcoh { .. } => "hcoh",
        Command::SolveWindow { .. } => "solve-window",
    }
}

fn execute(req: &CommandRequest) -> Result<Payload, CliError> {
    let prepared = prepare(req)?;
    let cache = req
        .cache_dir
        .as_ref()
        .filter(|_| req.use_cache)
        .map(Cache::new);
    let key = cache_key(&prepared.fingerprint, &prepared.command_key, VERSION);
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        if let (Some(result), Some(provenance)) = (hit.get("result"), hit.get("provenance")) {
            return Ok(Payload {
                result: result.clone(),
                provenance: provenance.clone(),
            });
        }
    }
    let payload = (prepared.compute)()?;
    if let Some(c) = &cache {
        // a failed cache write never fails the command
        let _ = c.put(
            &key,
            &json!({"result": payload.result, "provenance": payload.provenance}),
        );
    }
    Ok(payload)
}

/// Runs one request and renders its output.
pub fn run_command(req: &CommandRequest) -> CommandOutput {
    let start = Instant::now();
    let outcome = execute(req);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let name = command_name(&req.command);
    match (outcome, req.output) {
        (Ok(payload), OutputMode::Json) => {
            let doc = json!({
                "version": VERSION,
                "command": name,
                "result": payload.result,
                "provenance": payload.provenance,
                "timings": {"total_ms": elapsed_ms},
            });
            CommandOutput {
                exit_code: 0,
                stdout: format!("{doc}\n"),
                stderr: String::new(),
            }
        }
        (Ok(payload), OutputMode::Text) => CommandOutput {
            exit_code: 0,
            stdout: render_text(&req.command, &payload),
            stderr: String::new(),
        },
        (Err(e), OutputMode::Json) => {
            let doc = json!({
                "version": VERSION,
                "command": name,
                "error": {"kind": e.kind(), "message": e.message()},
            });
            CommandOutput {
                exit_code: e.exit_code(),
                stdout: format!("{doc}\n"),
                stderr: String::new(),
            }
        }
        (Err(e), OutputMode::Text) => CommandOutput {
            exit_code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli.into()),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                CommandOutput {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutput {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

/// `L0AbElement` values in JSON results are rendered strings; this reads one back.
pub fn parse_l0_result(v: &Value) -> Option<L0AbElement> {
    v.as_str()?.parse().ok()
}
