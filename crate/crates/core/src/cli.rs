//! Command-line front end: `classify`, `witness` and `verify`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classifier::{classify_preorder, classify_submonoid, ClassTag, MonoidClass, PreorderType};
use crate::descriptors::{MonoidDescriptor, PreorderDescriptor};
use crate::suite::{self, ClaimReport, ClaimStatus, RunOptions, Suite};
use crate::verifier::{verify_sandwich, Outcome, VerifyError, DEFAULT_CEILING};
use crate::witnesses::{self, WitnessError, WitnessManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;
pub const EXIT_CEILING: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "omega",
    version,
    about = "Classify submonoids of Self(ω), build sandwich witnesses and verify them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a preorder or monoid descriptor.
    Classify(ClassifyArgs),
    /// Write the manifest of a witness construction.
    Witness(WitnessArgs),
    /// Verify a manifest or run a named suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Budget for group-closure searches.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// JSON file holding a preorder or monoid descriptor.
    pub descriptor: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Construction tag.
    #[arg(long)]
    pub tag: String,
    #[arg(long, default_value_t = 0)]
    pub gamma: u64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    #[arg(long)]
    pub codomain: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Manifest to verify.
    #[arg(long, conflicts_with = "suite", required_unless_present = "suite")]
    pub manifest: Option<PathBuf>,
    /// Bundled suite name, or a path to a suite file.
    #[arg(long)]
    pub suite: Option<String>,
    /// Window for manifest verification; defaults to the recorded one.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: Option<u64>,
    #[arg(long)]
    pub codomain: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CEILING, value_parser = clap::value_parser!(u64).range(1..))]
    pub ceiling: u64,
    #[command(flatten)]
    pub common: Common,
}

/// Either kind of descriptor, optionally wrapped as `{"preorder": ..}` or
/// `{"monoid": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyDescriptor {
    WrappedPreorder { preorder: PreorderDescriptor },
    WrappedMonoid { monoid: MonoidDescriptor },
    Preorder(PreorderDescriptor),
    Monoid(MonoidDescriptor),
}

#[derive(Debug, Serialize)]
pub struct ClassifyOutput {
    #[serde(rename = "type")]
    pub type_tag: Option<String>,
    pub class: String,
    pub condition: Option<String>,
    pub evidence: serde_json::Value,
}

struct Emit {
    code: u8,
    body: String,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

/// Runs a parsed command and returns its exit status.
pub fn run(cli: Cli) -> u8 {
    let (common, emit) = match &cli.command {
        Command::Classify(a) => (&a.common, classify(a)),
        Command::Witness(a) => (&a.common, witness(a)),
        Command::Verify(a) => (&a.common, verify(a)),
    };
    let Emit { code, body } = emit;
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{body}"),
    }
    code
}

fn invalid(msg: impl std::fmt::Display) -> Emit {
    eprintln!("error: {msg}");
    Emit {
        code: EXIT_INVALID,
        body: String::new(),
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        format!(
            "{}: malformed JSON at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn with_budget(m: MonoidDescriptor, budget: Option<u64>) -> MonoidDescriptor {
    match (m, budget) {
        (MonoidDescriptor::GroupClosure { generators, .. }, Some(b)) => MonoidDescriptor::group(generators, b),
        (MonoidDescriptor::Stabilizer { monoid, fixed }, b) => MonoidDescriptor::Stabilizer {
            monoid: Box::new(with_budget(*monoid, b)),
            fixed,
        },
        (m, _) => m,
    }
}

fn classify(a: &ClassifyArgs) -> Emit {
    let value = match read_json(&a.descriptor) {
        Ok(v) => v,
        Err(e) => return invalid(e),
    };
    let desc: AnyDescriptor = match serde_json::from_value(value) {
        Ok(d) => d,
        Err(e) => {
            return invalid(format!(
                "{}: not a preorder or monoid descriptor: {e}",
                a.descriptor.display()
            ))
        }
    };
    let (preorder, monoid) = match desc {
        AnyDescriptor::WrappedPreorder { preorder } | AnyDescriptor::Preorder(preorder) => {
            (Some(preorder.clone()), MonoidDescriptor::preorder(preorder))
        }
        AnyDescriptor::WrappedMonoid { monoid } | AnyDescriptor::Monoid(monoid) => {
            let m = with_budget(monoid, a.common.budget);
            (m.as_preorder(), m)
        }
    };
    let ty: Option<PreorderType> = match preorder.as_ref().map(classify_preorder) {
        None => None,
        Some(Ok(t)) => Some(t),
        Some(Err(e)) => return invalid(e),
    };
    let class: MonoidClass = match classify_submonoid(&monoid) {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let out = ClassifyOutput {
        type_tag: ty.as_ref().map(|t| format!("{:?}", t.tag)),
        class: format!("{:?}", class.tag),
        condition: class.condition.map(|c| c.to_string()),
        evidence: json!({ "type": ty.as_ref().map(|t| &t.evidence), "class": class.evidence }),
    };
    let code = if class.tag == ClassTag::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    let body = match a.common.format {
        Format::Json => format!("{}\n", serde_json::to_string(&out).expect("serializable")),
        Format::Text => {
            let ty = out.type_tag.as_deref().unwrap_or("-");
            let cond = out.condition.as_deref().unwrap_or("-");
            format!("{ty} / {} (condition {cond})\n{}\n", out.class, class.evidence.note)
        }
    };
    Emit { code, body }
}

fn witness(a: &WitnessArgs) -> Emit {
    let w = match witnesses::by_tag(&a.tag, a.gamma) {
        Ok(w) => w,
        Err(e @ WitnessError::UnknownTag(_)) => {
            return invalid(format!("{e}; known tags: {}", witnesses::TAGS.join(", ")))
        }
        Err(e) => return invalid(e),
    };
    let codomain = a.codomain.unwrap_or(a.window);
    let manifest = match w.manifest(a.window, codomain) {
        Ok(m) => m,
        Err(e) => return invalid(e),
    };
    let body = match a.common.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&manifest).expect("serializable")),
        Format::Text => format!(
            "{} ({:?}) window {} codomain {}\nleft:  {:?}\nright: {:?}\n",
            manifest.provenance,
            manifest.relation,
            manifest.window,
            manifest.codomain,
            manifest.window_evals.left,
            manifest.window_evals.right
        ),
    };
    Emit { code: EXIT_OK, body }
}

fn verify(a: &VerifyArgs) -> Emit {
    match (&a.manifest, &a.suite) {
        (Some(path), _) => verify_manifest(a, path),
        (None, Some(name)) => verify_suite(a, name),
        (None, None) => invalid("either --manifest or --suite is required"),
    }
}

fn verify_manifest(a: &VerifyArgs, path: &Path) -> Emit {
    let value = match read_json(path) {
        Ok(v) => v,
        Err(e) => return invalid(e),
    };
    let manifest: WitnessManifest = match serde_json::from_value(value) {
        Ok(m) => m,
        Err(e) => return invalid(format!("{}: not a witness manifest: {e}", path.display())),
    };
    let n = a.window.unwrap_or(manifest.window);
    let c = a.codomain.unwrap_or(manifest.codomain);
    let w = manifest.into_witness();
    let (code, line) = match verify_sandwich(&w, n, c, a.ceiling) {
        Ok(r) => {
            let code = match r.outcome {
                Outcome::Pass => EXIT_OK,
                Outcome::Fail => EXIT_FAIL,
                Outcome::Unknown => EXIT_UNKNOWN,
            };
            (code, serde_json::to_value(&r).expect("serializable"))
        }
        Err(VerifyError::ResourceCeiling { claim, needed, ceiling }) => {
            eprintln!("resource ceiling: claim {claim} needs {needed} steps (ceiling {ceiling})");
            (
                EXIT_CEILING,
                json!({ "claim": claim, "status": "ceiling", "needed": needed, "ceiling": ceiling }),
            )
        }
        Err(e) => return invalid(e),
    };
    let body = match a.common.format {
        Format::Json => format!("{line}\n"),
        Format::Text => {
            let mut s = format!(
                "{}: {} (window {n}, codomain {c})\n",
                line["claim"].as_str().unwrap_or("?"),
                line.get("outcome")
                    .or(line.get("status"))
                    .and_then(|v| v.as_str())
                    .unwrap_or("?")
            );
            if let Some(t) = line.get("counterexample") {
                let _ = writeln!(s, "counterexample: {t}");
            }
            s
        }
    };
    Emit { code, body }
}

fn load_suite(name: &str) -> Result<Suite, String> {
    match suite::bundled(name) {
        Ok(s) => Ok(s),
        Err(suite::SuiteError::UnknownSuite(_)) if Path::new(name).exists() => {
            let v = read_json(Path::new(name))?;
            serde_json::from_value(v).map_err(|e| format!("{name}: malformed suite: {e}"))
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Exit status for a set of claim reports: ceiling refusals dominate,
/// then failures, then unknowns.
pub fn suite_exit_code(reports: &[ClaimReport]) -> u8 {
    let has = |s: ClaimStatus| reports.iter().any(|r| r.status == s);
    if has(ClaimStatus::Ceiling) {
        EXIT_CEILING
    } else if has(ClaimStatus::Error) {
        EXIT_INVALID
    } else if has(ClaimStatus::Fail) {
        EXIT_FAIL
    } else if has(ClaimStatus::Unknown) {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

fn verify_suite(a: &VerifyArgs, name: &str) -> Emit {
    let suite = match load_suite(name) {
        Ok(s) => s,
        Err(e) => return invalid(e),
    };
    let reports = suite::run_suite(
        &suite,
        RunOptions {
            ceiling: a.ceiling,
            budget: a.common.budget,
        },
    );
    for r in reports.iter().filter(|r| r.status == ClaimStatus::Ceiling) {
        eprintln!("resource ceiling: claim {} refused", r.id);
    }
    let body = match a.common.format {
        Format::Json => reports
            .iter()
            .map(|r| format!("{}\n", serde_json::to_string(r).expect("serializable")))
            .collect(),
        Format::Text => summary_table(&suite, &reports),
    };
    Emit {
        code: suite_exit_code(&reports),
        body,
    }
}

fn summary_table(suite: &Suite, reports: &[ClaimReport]) -> String {
    let mut s = format!("suite {} v{}\n", suite.name, suite.version);
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(5);
    let _ = writeln!(s, "{:<width$}  {:<18}  {:<7}  {:>9}", "claim", "check", "status", "ms");
    for r in reports {
        let status = serde_json::to_value(r.status).expect("serializable");
        let _ = writeln!(
            s,
            "{:<width$}  {:<18}  {:<7}  {:>9}",
            r.id,
            r.check,
            status.as_str().unwrap_or("?"),
            r.wall_time.as_millis()
        );
    }
    let passed = reports.iter().filter(|r| r.status == ClaimStatus::Pass).count();
    let _ = writeln!(s, "{passed}/{} claims pass", reports.len());
    s
}
