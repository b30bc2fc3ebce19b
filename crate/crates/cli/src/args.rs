use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Grammar-pattern analysis and linting of unit-test method names.
#[derive(Debug, Parser)]
#[command(name = "testlens", version, propagate_version = true)]
pub struct Cli {
    /// TOML configuration file (default: $TESTLENS_CONFIG).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Lexicon JSON whose word classes replace the bundled ones.
    #[arg(long, global = true, value_name = "PATH")]
    pub lexicon: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split identifiers into terms.
    Split(NamesArgs),
    /// Tag each term of an identifier with a part of speech.
    Tag(NamesArgs),
    /// Show grammar patterns and the naming templates they match.
    Pattern(PatternArgs),
    /// Find test files and test methods under files or directories.
    Scan(ScanArgs),
    /// Check that test names agree with their bodies.
    Lint(LintArgs),
    /// Detect and classify method renames.
    #[command(subcommand)]
    Rename(RenameCommand),
    /// Aggregate classified renames into tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct NamesArgs {
    /// Identifiers to analyse.
    #[arg(required = true)]
    pub names: Vec<String>,

    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[command(flatten)]
    pub names: NamesArgs,

    /// Report only the first K tags of each pattern.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    pub prefix: Option<u64>,

    /// Catalog JSON replacing the bundled naming templates.
    #[arg(long, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Java files or directories searched recursively for `*.java`.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LintArgs {
    /// Java files or directories searched recursively for `*.java`.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,

    /// Comma-separated rules to run, e.g. `R1,R3` (default: all).
    #[arg(long, value_name = "IDS")]
    pub rules: Option<String>,

    /// Output format: text or json.
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum RenameCommand {
    /// Detect test-method renames between two versions of a file or tree.
    Detect(DetectArgs),
    /// Classify rename events from a CSV or JSON log.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Old version (file or directory).
    #[arg(long, value_name = "PATH")]
    pub before: PathBuf,

    /// New version (file or directory).
    #[arg(long, value_name = "PATH")]
    pub after: PathBuf,

    /// Minimum body similarity in (0, 1] (default 0.6).
    #[arg(long, value_name = "T")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Rename log: CSV with `old_name,new_name,file,commit` or a JSON array.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Output format: json, csv or md.
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,

    /// Relations JSON added to the bundled word relations.
    #[arg(long, value_name = "PATH")]
    pub relations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Output of `rename classify --format json`, or a raw rename log.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Table: full, pairs, prefix, semantic, terms or catalog.
    #[arg(long, default_value = "full")]
    pub table: String,

    /// Rows per table before the "Others" row.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    /// Prefix lengths for the prefix table, within 2..5.
    #[arg(long, value_name = "RANGE", default_value = "2..5")]
    pub prefix_len: String,

    /// Output format: md, csv or json.
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,

    /// Catalog JSON replacing the bundled naming templates.
    #[arg(long, value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    /// Relations JSON, used when the input is a raw rename log.
    #[arg(long, value_name = "PATH")]
    pub relations: Option<PathBuf>,
}
