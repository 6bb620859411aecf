//! The `gforge` command line.
//!
//! Exit status 0 on success, 1 when a theory fails to validate or a
//! verification check fails, 2 for I/O, usage and resource errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::expr::parse_open;
use crate::groupoid::{build_groupoid_with, MStarVariant};
use crate::json::{groupoid_document, open_refs, presentation_document};
use crate::oracle::{ModelSpace, SizeGuard, Suite, VerifyConfig};
use crate::parser::parse_theory;
use crate::presentation::{FramePresentation, IndexSet};
use crate::theory::Theory;

const EXPRESSION_HELP: &str = "\
Open expressions:
  leq1(1,2)        relation in copy 1 at indices 1 and 2
  p                nullary relation
  per1.X(0,0)      partial equivalence of sort X in copy 1
  alpha.X(1)=2     the isomorphism sends index 1 of sort X to class of 2
  a & b, a | b     meet and join; parentheses group; true and false
The environment variable GFORGE_MAX_STRUCTURES overrides the model enumeration limit.";

#[derive(Debug, Parser)]
#[command(name = "gforge", version, about = "Compile geometric theories into localic groupoid presentations", after_help = EXPRESSION_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Objects,
    Arrows,
    Comp,
    Groupoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Laws,
    Adjunction,
    Frobenius,
    Closure,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Laws => vec![Suite::Laws],
            SuiteArg::Adjunction => vec![Suite::Adjunction],
            SuiteArg::Frobenius => vec![Suite::Frobenius],
            SuiteArg::Closure => vec![Suite::Closure],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MStarArg {
    Composite,
    AsPrinted,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Theory file.
    pub file: PathBuf,
    /// Size of the index set.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a theory.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a presentation, or the whole groupoid with its structure maps.
    Emit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Which::Groupoid)]
        which: Which,
        #[arg(long, value_enum, default_value_t = MStarArg::Composite)]
        mstar_variant: MStarArg,
    },
    /// Image of an arrow open under the left adjoint of the source map.
    Adjoint {
        #[command(flatten)]
        common: Common,
        /// Open of the arrow presentation.
        expression: String,
    },
    /// Check the symbolic constructions against enumerated models.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest meet of generators in exhaustive checks.
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// Random pairs in the semantic Frobenius check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Enumerate regardless of size.
        #[arg(long)]
        unsafe_no_guard: bool,
        #[arg(long, value_enum, default_value_t = MStarArg::Composite)]
        mstar_variant: MStarArg,
    },
    /// Count, and optionally list, the indexed models.
    Models {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        unsafe_no_guard: bool,
    },
}

enum Failure {
    Semantic(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Invalid(_) => Failure::Semantic(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Theory, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_theory(&src).map_err(|e| Failure::Semantic(format!("{}:{e}", path.display())))
}

fn index_set(k: usize) -> Result<IndexSet, Failure> {
    Ok(IndexSet::new(k)?)
}

fn guard(unsafe_no_guard: bool) -> SizeGuard {
    if unsafe_no_guard {
        SizeGuard::unlimited()
    } else {
        SizeGuard::from_env()
    }
}

fn variant(v: MStarArg) -> MStarVariant {
    match v {
        MStarArg::Composite => MStarVariant::Composite,
        MStarArg::AsPrinted => MStarVariant::AsPrinted,
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn presentation_text(p: &FramePresentation) -> String {
    let mut s = format!(
        "{} presentation of {} at k = {}\n",
        p.provenance(),
        p.theory_name(),
        p.k()
    );
    s += &format!("generators ({}):\n", p.generators().len());
    for g in p.generators() {
        s += &format!("  {g}\n");
    }
    s += &format!("inequalities ({}):\n", p.inequalities().len());
    for i in p.inequalities() {
        s += &format!("  {i}\n");
    }
    s
}

#[derive(Serialize)]
struct CheckSummary<'a> {
    theory: &'a str,
    sorts: usize,
    relations: usize,
    axioms: usize,
}

#[derive(Serialize)]
struct AdjointOutput {
    input: String,
    image: String,
    refs: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct ModelsOutput {
    theory: String,
    k: usize,
    count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    models: Vec<String>,
}

/// Output and exit status of one invocation.
fn execute(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Check { file, format } => {
            let t = load(&file)?;
            let summary = CheckSummary {
                theory: &t.name,
                sorts: t.sorts.len(),
                relations: t.relations.len(),
                axioms: t.axioms.len(),
            };
            Ok((
                match format {
                    Format::Json => json(&summary),
                    Format::Text => format!(
                        "ok: theory {} with {} sorts, {} relations, {} axioms",
                        if t.name.is_empty() {
                            "(unnamed)"
                        } else {
                            &t.name
                        },
                        summary.sorts,
                        summary.relations,
                        summary.axioms
                    ),
                },
                0,
            ))
        }
        Command::Emit {
            common,
            which,
            mstar_variant,
        } => {
            let t = load(&common.file)?;
            let g = build_groupoid_with(&t, index_set(common.k)?, variant(mstar_variant))?;
            let p = match which {
                Which::Objects => &g.objects,
                Which::Arrows => &g.arrows,
                Which::Comp => &g.comp,
                Which::Groupoid => {
                    return Ok((
                        match common.format {
                            Format::Json => groupoid_document(&g),
                            Format::Text => [&g.objects, &g.arrows, &g.comp]
                                .into_iter()
                                .map(|p| presentation_text(p))
                                .collect::<Vec<_>>()
                                .join("\n"),
                        },
                        0,
                    ))
                }
            };
            Ok((
                match common.format {
                    Format::Json => presentation_document(p),
                    Format::Text => presentation_text(p),
                },
                0,
            ))
        }
        Command::Adjoint { common, expression } => {
            let t = load(&common.file)?;
            let g = build_groupoid_with(&t, index_set(common.k)?, MStarVariant::Composite)?;
            let v = parse_open(&expression, &g.arrows)?;
            let image = g.source_lower_open(&v)?;
            Ok((
                match common.format {
                    Format::Json => json(&AdjointOutput {
                        input: v.to_string(),
                        image: image.to_string(),
                        refs: open_refs(&g.objects, &image),
                    }),
                    Format::Text => image.to_string(),
                },
                0,
            ))
        }
        Command::Verify {
            common,
            suite,
            seed,
            max_arity,
            samples,
            unsafe_no_guard,
            mstar_variant,
        } => {
            let t = load(&common.file)?;
            let config = VerifyConfig {
                seed,
                max_arity,
                samples,
                guard: guard(unsafe_no_guard),
                mstar: variant(mstar_variant),
                ..VerifyConfig::default()
            };
            let report = crate::oracle::verify(&t, index_set(common.k)?, &suite.suites(), &config)?;
            let status = if report.passed { 0 } else { 1 };
            let out = match common.format {
                Format::Json => json(&report),
                Format::Text => {
                    let mut s = format!(
                        "{} at k = {} (seed {}): {} models, {} isomorphisms\n",
                        report.theory, report.k, report.seed, report.models, report.isos
                    );
                    for c in &report.checks {
                        let mark = match (c.skipped, c.passed) {
                            (true, _) => "SKIP",
                            (false, true) => "PASS",
                            (false, false) => "FAIL",
                        };
                        s += &format!(
                            "{mark} {}/{}: {} checked, {} failed\n",
                            c.suite, c.name, c.checked, c.failures
                        );
                        if let Some(note) = &c.note {
                            s += &format!("    note: {note}\n");
                        }
                        for ce in &c.counterexamples {
                            s += &format!("    counterexample: {ce}\n");
                        }
                    }
                    let failed = report.checks.iter().filter(|c| !c.passed).count();
                    s += &format!(
                        "{} of {} checks passed",
                        report.checks.len() - failed,
                        report.checks.len()
                    );
                    s
                }
            };
            Ok((out, status))
        }
        Command::Models {
            common,
            list,
            unsafe_no_guard,
        } => {
            let t = load(&common.file)?;
            let space = ModelSpace::new(&t, index_set(common.k)?)?;
            let models = space.enumerate(guard(unsafe_no_guard))?;
            let descriptions: Vec<String> = if list {
                models.iter().map(|m| space.describe(m)).collect()
            } else {
                Vec::new()
            };
            Ok((
                match common.format {
                    Format::Json => json(&ModelsOutput {
                        theory: t.name.clone(),
                        k: common.k,
                        count: models.len(),
                        models: descriptions,
                    }),
                    Format::Text => {
                        let noun = if models.len() == 1 { "model" } else { "models" };
                        let mut s = format!("{} {noun}", models.len());
                        for (i, d) in descriptions.iter().enumerate() {
                            s += &format!("\n#{i} {d}");
                        }
                        s
                    }
                },
                0,
            ))
        }
    }
}

/// Run with the given arguments (program name first) and return the exit
/// status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(
                if code == 0 {
                    out as &mut dyn Write
                } else {
                    err as &mut dyn Write
                },
                "{}",
                e.render()
            );
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli) {
        Ok((text, status)) => {
            let _ = writeln!(out, "{text}");
            status
        }
        Err(Failure::Semantic(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
