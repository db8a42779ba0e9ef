//! Command dispatch and report rendering for the `coxsplit` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use coxsplit_core::{
    certify_bp, classify_finite_type, default_witness, enumerate_spherical_subsets, gram_matrix,
    maximal_spherical_subsets, nullity, order_of, parse_coxeter_system, search_quotients, search_quotients_parallel,
    separate_element, separation_evidence, shortlex_normal_form, to_canonical_json, verify_certificate, BPCertificate,
    CoxeterSystem, Error as CoreError, Subset, VerifyError,
};

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "coxsplit",
    version,
    about = "Spherical parabolics, BP certificates and finite quotients of Coxeter groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Coxeter system file (.cox).
    pub system: PathBuf,
    /// Emit canonical JSON instead of the human-readable table.
    #[arg(long)]
    pub json: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spherical and maximal spherical subsets with their types and orders.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Issue a BP certificate for a standard parabolic subgroup.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated generator indices; defaults to the least maximal spherical subset.
        #[arg(long, value_name = "I,J,...")]
        subset: Option<String>,
    },
    /// Re-check a certificate against a system.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Certificate JSON, bare or wrapped in a `certify` report.
        certificate: PathBuf,
    },
    /// ShortLex normal form of a word.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Whitespace-separated generator labels.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Finite permutation quotients in canonical order.
    Quotients {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 20)]
        max_count: usize,
        /// Search subtrees concurrently; the output is identical.
        #[arg(long)]
        parallel: bool,
    },
    /// Find a finite quotient in which a word is not the identity.
    Separate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Analyze { common }
            | Command::Certify { common, .. }
            | Command::Verify { common, .. }
            | Command::Reduce { common, .. }
            | Command::Quotients { common, .. }
            | Command::Separate { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Certify { .. } => "certify",
            Command::Verify { .. } => "verify",
            Command::Reduce { .. } => "reduce",
            Command::Quotients { .. } => "quotients",
            Command::Separate { .. } => "separate",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// Errors from the computation itself; argument-level failures are mapped
/// to usage errors by the caller.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::Parse(_) | CoreError::EnumerationCap { .. } | CoreError::OrderOverflow => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn usage(e: CoreError) -> CliError {
    match e {
        CoreError::Consistency(_) => CliError::Internal(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub system_fingerprint: String,
    pub payload: Value,
    pub tool_version: String,
    pub schema_version: String,
}

impl Report {
    pub fn new(command: &str, sys: &CoxeterSystem, payload: Value) -> Report {
        Report {
            command: command.to_string(),
            system_fingerprint: sys.fingerprint(),
            payload,
            tool_version: TOOL_VERSION.to_string(),
            schema_version: SCHEMA_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Human,
    Json,
}

/// Renders a report; JSON mode is canonical and ends with a newline.
pub fn emit_report(report: &Report, mode: Mode) -> String {
    match mode {
        Mode::Json => {
            let mut text = to_canonical_json(report).expect("reports are plain JSON values");
            text.push('\n');
            text
        }
        Mode::Human => render_human(report),
    }
}

/// Parses argv and runs the command, writing the report to `out` (or the
/// `--output` file) and diagnostics to `err`. Returns the exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match run(&cli.command) {
        Ok(report) => {
            let common = cli.command.common();
            let mode = if common.json { Mode::Json } else { Mode::Human };
            let text = emit_report(&report, mode);
            match &common.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_system(path: &Path) -> Result<CoxeterSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_coxeter_system(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_subset(text: &str, rank: usize) -> Result<Subset, CliError> {
    let members = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid generator index {t:?} in --subset")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Subset::from_indices(members, rank).map_err(usage)
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    let sys = load_system(&command.common().system)?;
    let payload = match command {
        Command::Analyze { .. } => analyze(&sys)?,
        Command::Certify { subset, .. } => {
            let witness = match subset {
                Some(text) => parse_subset(text, sys.rank())?,
                None => default_witness(&sys)?,
            };
            let cert = certify_bp(&sys, &witness).map_err(|e| match e {
                CoreError::Consistency(_) => CliError::Internal(e.to_string()),
                other => CliError::from(other),
            })?;
            serde_json::to_value(&cert).map_err(|e| CliError::Internal(e.to_string()))?
        }
        Command::Verify { certificate, .. } => verify(&sys, certificate)?,
        Command::Reduce { word, .. } => {
            let parsed = sys.parse_word(word).map_err(usage)?;
            let nf = shortlex_normal_form(&sys, &parsed)?;
            json!({
                "input": sys.format_word(parsed.letters()),
                "normal_form": sys.format_word(nf.letters()),
                "letters": nf.letters(),
                "length": nf.length(),
            })
        }
        Command::Quotients {
            max_degree,
            max_count,
            parallel,
            ..
        } => {
            if *max_degree == 0 {
                return Err(CliError::Usage("--max-degree must be at least 1".into()));
            }
            let found = if *parallel {
                search_quotients_parallel(&sys, *max_degree, *max_count)
            } else {
                search_quotients(&sys, *max_degree, *max_count)
            }
            .map_err(usage)?;
            json!({
                "max_degree": max_degree,
                "max_count": max_count,
                "count": found.len(),
                "quotients": found,
            })
        }
        Command::Separate { word, max_degree, .. } => {
            let parsed = sys.parse_word(word).map_err(usage)?;
            match separate_element(&sys, &parsed, *max_degree).map_err(usage)? {
                Some(q) => {
                    let evidence = separation_evidence(&sys, &parsed, &q)?;
                    json!({
                        "word": sys.format_word(parsed.letters()),
                        "max_degree": max_degree,
                        "found": true,
                        "image": q.image_of(&parsed)?.to_string(),
                        "evidence": evidence,
                    })
                }
                None => json!({
                    "word": sys.format_word(parsed.letters()),
                    "max_degree": max_degree,
                    "found": false,
                }),
            }
        }
    };
    Ok(Report::new(command.name(), &sys, payload))
}

fn subset_entry(sys: &CoxeterSystem, subset: &Subset) -> Result<Value, CliError> {
    let decomp = classify_finite_type(sys, subset)?;
    let labels: Vec<&str> = subset.members().iter().map(|&i| sys.labels()[i].as_str()).collect();
    Ok(json!({
        "subset": subset,
        "labels": labels,
        "type": decomp.to_string(),
        "order": order_of(&decomp)?,
    }))
}

fn analyze(sys: &CoxeterSystem) -> Result<Value, CliError> {
    let full = Subset::full(sys.rank());
    let decomp = classify_finite_type(sys, &full)?;
    let kernel = nullity(&gram_matrix(sys, &full)?)?;
    let spherical = enumerate_spherical_subsets(sys)?
        .iter()
        .map(|t| subset_entry(sys, t))
        .collect::<Result<Vec<_>, _>>()?;
    let maximal = maximal_spherical_subsets(sys)?
        .iter()
        .map(|t| subset_entry(sys, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "rank": sys.rank(),
        "labels": sys.labels(),
        "full": {
            "type": decomp.to_string(),
            "spherical": decomp.is_spherical,
            "gram_nullity": kernel,
        },
        "spherical_subsets": spherical,
        "maximal_spherical_subsets": maximal,
    }))
}

/// Accepts a bare certificate or a `certify` report wrapping one.
fn read_certificate(path: &Path) -> Result<BPCertificate, CliError> {
    let bad = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if let Some(payload) = value.get_mut("payload") {
        value = payload.take();
    }
    serde_json::from_value(value).map_err(|e| bad(format!("not a certificate: {e}")))
}

fn verify(sys: &CoxeterSystem, path: &Path) -> Result<Value, CliError> {
    let cert = read_certificate(path)?;
    let outcome = verify_certificate(sys, &cert);
    let reason = match outcome {
        Ok(()) => None,
        Err(e @ VerifyError::FingerprintMismatch { .. }) => return Err(CliError::Input(e.to_string())),
        Err(VerifyError::Compute(e)) => return Err(CliError::from(e)),
        Err(e) => Some(e.to_string()),
    };
    Ok(json!({
        "valid": reason.is_none(),
        "reason": reason,
        "witness": cert.witness,
        "overall": cert.overall,
    }))
}

fn render_human(report: &Report) -> String {
    let mut out = format!(
        "{} (schema {}, coxsplit {})\nsystem  {}\n",
        report.command, report.schema_version, report.tool_version, report.system_fingerprint
    );
    let p = &report.payload;
    match report.command.as_str() {
        "analyze" => {
            out += &format!("rank    {}\n", p["rank"]);
            out += &format!(
                "type    {} (spherical: {}, Gram nullity {})\n",
                str_of(&p["full"]["type"]),
                p["full"]["spherical"],
                p["full"]["gram_nullity"]
            );
            for (title, key) in [
                ("spherical subsets", "spherical_subsets"),
                ("maximal spherical subsets", "maximal_spherical_subsets"),
            ] {
                let rows = p[key].as_array().map(Vec::as_slice).unwrap_or_default();
                out += &format!("\n{title} ({})\n", rows.len());
                out += &format!("  {:<24} {:<20} {}\n", "subset", "type", "order");
                for row in rows {
                    out += &format!(
                        "  {:<24} {:<20} {}\n",
                        subset_text(&row["subset"]),
                        str_of(&row["type"]),
                        row["order"]
                    );
                }
            }
        }
        "certify" => {
            out += &format!("witness {}\n", subset_text(&p["witness"]));
            out += &format!("overall {}\n", str_of(&p["overall"]));
            if let Some(first) = p["checks"]
                .as_array()
                .into_iter()
                .flatten()
                .find(|c| c["verdict"] == "fail")
            {
                out += &format!("first failing condition: {}\n", str_of(&first["condition_id"]));
            }
            out += &format!(
                "\n  {:<20} {:<8} {:<14} {}\n",
                "condition", "verdict", "justification", "citation"
            );
            for c in p["checks"].as_array().into_iter().flatten() {
                out += &format!(
                    "  {:<20} {:<8} {:<14} {}\n",
                    str_of(&c["condition_id"]),
                    str_of(&c["verdict"]),
                    str_of(&c["justification"]),
                    c["citation"].as_str().unwrap_or("-")
                );
            }
        }
        "verify" => {
            out += &format!("witness {}\n", subset_text(&p["witness"]));
            out += &format!("valid   {}\n", p["valid"]);
            if let Some(reason) = p["reason"].as_str() {
                out += &format!("reason  {reason}\n");
            }
        }
        "reduce" => {
            out += &format!("input        {}\n", str_of(&p["input"]));
            out += &format!("normal form  {}\n", str_of(&p["normal_form"]));
            out += &format!("length       {}\n", p["length"]);
        }
        "quotients" => {
            out += &format!(
                "found   {} (max degree {}, max count {})\n\n",
                p["count"], p["max_degree"], p["max_count"]
            );
            out += &format!("  {:<6} {:<8} {}\n", "degree", "order", "images");
            for q in p["quotients"].as_array().into_iter().flatten() {
                out += &format!(
                    "  {:<6} {:<8} {}\n",
                    str_of(&q["degree"]),
                    str_of(&q["image_order"]),
                    images_text(&q["images"])
                );
            }
        }
        "separate" => {
            out += &format!("word    {}\n", str_of(&p["word"]));
            if p["found"] == true {
                let q = &p["evidence"]["quotient"];
                out += &format!("degree  {}\n", q["degree"]);
                out += &format!("images  {}\n", images_text(&q["images"]));
                out += &format!("image   {}\n", str_of(&p["image"]));
            } else {
                out += &format!(
                    "no separating quotient up to degree {} (inconclusive)\n",
                    p["max_degree"]
                );
            }
        }
        _ => out += &format!("{}\n", p),
    }
    out
}

fn str_of(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn subset_text(v: &Value) -> String {
    let members: Vec<String> = v.as_array().into_iter().flatten().map(Value::to_string).collect();
    format!("{{{}}}", members.join(","))
}

fn images_text(v: &Value) -> String {
    let images: Vec<String> = v.as_array().into_iter().flatten().map(str_of).collect();
    images.join("  ")
}
