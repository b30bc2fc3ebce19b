//! `testlens` command-line tool.
//!
//! Exit codes: 0 on success, 1 when `lint` reports diagnostics, 2 on usage,
//! I/O or parse errors. Data goes to stdout, everything else to stderr.

mod args;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use testlens_core::extraction::{
    extract_methods, imports, is_junit_import, is_test_method, PartialParse, Span,
};
use testlens_core::lint::{lint_all, parse_rule_list};
use testlens_core::patterns::{catalog_match, pattern_of, prefix};
use testlens_core::rename::{load_events, render_classifications};
use testlens_core::renamedetect::{detect_renames, DetectedRename, FileVersionPair};
use testlens_core::report::{parse_prefix_range, render, RenderOptions};
use testlens_core::splitter::{split, split_str};
use testlens_core::tagger::tag;
use testlens_core::{
    Catalog, Config, CorpusStats, Diagnostic, GrammarPattern, LexicalRelations, Lexicon,
    OutputFormat, RenameClassification, RenameClassifier, SourceFile,
};

use args::{
    ClassifyArgs, Cli, Command, DetectArgs, LintArgs, NamesArgs, PatternArgs, RenameCommand,
    ReportArgs, ScanArgs,
};

const CONFIG_ENV: &str = "TESTLENS_CONFIG";

enum Outcome {
    Clean,
    Findings,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Findings) => ExitCode::from(1),
        Err(e) => {
            eprintln!("testlens: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Config file settings with command-line overrides applied on top.
struct Settings {
    config: Config,
}

impl Settings {
    fn load(cli: &Cli) -> Result<Settings> {
        let path = cli
            .config
            .clone()
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let mut config = match path {
            Some(p) => Config::load(&p)?,
            None => Config::default(),
        };
        if let Some(l) = &cli.lexicon {
            config.lexicon = Some(l.clone());
        }
        Ok(Settings { config })
    }

    fn lexicon(&self) -> Result<Lexicon> {
        Ok(self.config.lexicon()?)
    }

    fn catalog(&self, flag: &Option<PathBuf>) -> Result<Catalog> {
        Ok(match flag {
            Some(p) => Catalog::load(p)?,
            None => self.config.catalog()?,
        })
    }

    fn relations(&self, flag: &Option<PathBuf>) -> Result<LexicalRelations> {
        Ok(match flag {
            Some(p) => LexicalRelations::load(p)?,
            None => self.config.relations()?,
        })
    }
}

fn format_arg(
    flag: &Option<String>,
    default: Option<OutputFormat>,
    fallback: OutputFormat,
    allowed: &[OutputFormat],
) -> Result<OutputFormat> {
    let f = match flag {
        Some(s) => s.parse()?,
        None => default.unwrap_or(fallback),
    };
    if !allowed.contains(&f) {
        let names: Vec<String> = allowed.iter().map(|a| a.to_string()).collect();
        bail!(
            "unsupported format {f} here (expected {})",
            names.join(", ")
        );
    }
    Ok(f)
}

fn run(cli: Cli) -> Result<Outcome> {
    let settings = Settings::load(&cli)?;
    let out = match cli.command {
        Command::Split(a) => cmd_split(&a)?,
        Command::Tag(a) => cmd_tag(&a, &settings)?,
        Command::Pattern(a) => cmd_pattern(&a, &settings)?,
        Command::Scan(a) => cmd_scan(&a, &settings)?,
        Command::Lint(a) => return cmd_lint(&a, &settings),
        Command::Rename(RenameCommand::Detect(a)) => cmd_detect(&a, &settings)?,
        Command::Rename(RenameCommand::Classify(a)) => cmd_classify(&a, &settings)?,
        Command::Report(a) => cmd_report(&a, &settings)?,
    };
    emit(&out)?;
    Ok(Outcome::Clean)
}

fn emit(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_split(a: &NamesArgs) -> Result<String> {
    #[derive(Serialize)]
    struct Record<'a> {
        name: &'a str,
        terms: Vec<&'a str>,
    }
    let seqs = a
        .names
        .iter()
        .map(|n| split_str(n))
        .collect::<testlens_core::Result<Vec<_>>>()?;
    if a.json {
        let records: Vec<Record> = seqs
            .iter()
            .map(|s| Record {
                name: s.raw().as_str(),
                terms: s.iter().map(|t| t.text.as_str()).collect(),
            })
            .collect();
        return json(&records);
    }
    Ok(seqs
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect())
}

fn cmd_tag(a: &NamesArgs, settings: &Settings) -> Result<String> {
    #[derive(Serialize)]
    struct Record {
        name: String,
        terms: Vec<String>,
        tags: Vec<String>,
        pattern: GrammarPattern,
    }
    let lexicon = settings.lexicon()?;
    let mut records = Vec::new();
    let mut text = String::new();
    for n in &a.names {
        let tagged = tag(&split_str(n)?, &lexicon);
        text.push_str(&format!("{tagged}\n"));
        records.push(Record {
            name: n.clone(),
            terms: tagged.terms().iter().map(|t| t.text.clone()).collect(),
            tags: tagged.tags().iter().map(|t| t.to_string()).collect(),
            pattern: pattern_of(&tagged),
        });
    }
    if a.json {
        json(&records)
    } else {
        Ok(text)
    }
}

fn cmd_pattern(a: &PatternArgs, settings: &Settings) -> Result<String> {
    #[derive(Serialize)]
    struct Record {
        name: String,
        pattern: GrammarPattern,
        #[serde(skip_serializing_if = "Option::is_none")]
        prefix: Option<GrammarPattern>,
        templates: Vec<String>,
    }
    let lexicon = settings.lexicon()?;
    let catalog = settings.catalog(&a.catalog)?;
    let mut records = Vec::new();
    for n in &a.names.names {
        let pattern = pattern_of(&tag(&split_str(n)?, &lexicon));
        let pre = a.prefix.map(|k| prefix(&pattern, k as usize));
        let shown = pre.as_ref().unwrap_or(&pattern);
        let templates = catalog_match(shown, &catalog)
            .into_iter()
            .map(|e| e.name.clone())
            .collect();
        records.push(Record {
            name: n.clone(),
            pattern,
            prefix: pre,
            templates,
        });
    }
    if a.names.json {
        return json(&records);
    }
    Ok(records
        .iter()
        .map(|r| {
            let shown = r.prefix.as_ref().unwrap_or(&r.pattern);
            if r.templates.is_empty() {
                format!("{}\t{}\n", r.name, shown)
            } else {
                format!("{}\t{}\t{}\n", r.name, shown, r.templates.join("; "))
            }
        })
        .collect())
}

/// Files named on the command line, plus `*.java` files under named
/// directories, sorted and deduplicated.
fn java_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            for entry in WalkDir::new(p).sort_by_file_name() {
                let entry = entry.with_context(|| format!("walking {}", p.display()))?;
                if entry.file_type().is_file()
                    && entry.path().extension().is_some_and(|e| e == "java")
                {
                    out.push(entry.into_path());
                }
            }
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            bail!("{}: no such file or directory", p.display());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A file's methods plus whether it counts as a test file. A partial parse
/// is reported on stderr and its recovered methods are used.
struct Analysed {
    src: SourceFile,
    methods: Vec<testlens_core::TestMethod>,
    is_test_file: bool,
    error: Option<String>,
}

fn analyse(path: &Path) -> Result<Analysed> {
    let src = SourceFile::read(path)?;
    let (methods, error) = match extract_methods(&src) {
        Ok(m) => (m, None),
        Err(e) => {
            let msg = e.to_string();
            (PartialParse::into_recovered(e), Some(msg))
        }
    };
    let is_test_file =
        imports(&src.text).iter().any(|i| is_junit_import(i)) && methods.iter().any(is_test_method);
    Ok(Analysed {
        src,
        methods,
        is_test_file,
        error,
    })
}

fn analyse_all(paths: &[PathBuf]) -> Result<Vec<Analysed>> {
    let files = java_files(paths)?;
    let analysed: Vec<Analysed> = files
        .par_iter()
        .map(|p| analyse(p))
        .collect::<Result<_>>()?;
    for a in &analysed {
        if let Some(e) = &a.error {
            eprintln!("testlens: warning: {e}");
        }
    }
    Ok(analysed)
}

fn cmd_scan(a: &ScanArgs, settings: &Settings) -> Result<String> {
    #[derive(Serialize)]
    struct Method {
        name: String,
        line: usize,
        is_test: bool,
        pattern: GrammarPattern,
        annotations: Vec<String>,
        name_span: Span,
        body_span: Span,
    }
    #[derive(Serialize)]
    struct File {
        file: String,
        is_test_file: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
        methods: Vec<Method>,
    }
    let lexicon = settings.lexicon()?;
    let records: Vec<File> = analyse_all(&a.paths)?
        .into_par_iter()
        .map(|f| File {
            file: f.src.path.clone(),
            is_test_file: f.is_test_file,
            error: f.error,
            methods: f
                .methods
                .iter()
                .map(|m| Method {
                    name: m.name.to_string(),
                    line: m.line,
                    is_test: is_test_method(m),
                    pattern: pattern_of(&tag(&split(&m.name), &lexicon)),
                    annotations: m.annotations.clone(),
                    name_span: m.name_span,
                    body_span: m.body_span,
                })
                .collect(),
        })
        .collect();
    json(&records)
}

fn cmd_lint(a: &LintArgs, settings: &Settings) -> Result<Outcome> {
    let format = format_arg(
        &a.format,
        settings.config.format.lint,
        OutputFormat::Text,
        &[OutputFormat::Text, OutputFormat::Json],
    )?;
    let mut rules = settings.config.rule_set()?;
    if let Some(r) = &a.rules {
        rules.enabled = parse_rule_list(r)?;
    }
    let lexicon = settings.lexicon()?;
    let files = analyse_all(&a.paths)?;
    let mut diagnostics: Vec<Diagnostic> = files
        .par_iter()
        .filter(|f| f.is_test_file)
        .flat_map_iter(|f| lint_all(&f.src.path, &f.methods, &lexicon, &rules))
        .collect();
    diagnostics
        .sort_by(|x, y| (&x.file, x.name_span, x.rule_id).cmp(&(&y.file, y.name_span, y.rule_id)));

    let text = match format {
        OutputFormat::Json => json(&diagnostics)?,
        _ => diagnostics.iter().map(|d| format!("{d}\n")).collect(),
    };
    emit(&text)?;
    let test_files = files.iter().filter(|f| f.is_test_file).count();
    eprintln!(
        "testlens: {} diagnostic(s) in {} test file(s) ({} file(s) scanned)",
        diagnostics.len(),
        test_files,
        files.len()
    );
    Ok(if diagnostics.is_empty() {
        Outcome::Clean
    } else {
        Outcome::Findings
    })
}

fn version_pairs(before: &Path, after: &Path) -> Result<Vec<FileVersionPair>> {
    if before.is_file() && after.is_file() {
        return Ok(vec![FileVersionPair {
            before: SourceFile::read(before)?,
            after: SourceFile::read(after)?,
        }]);
    }
    if !(before.is_dir() && after.is_dir()) {
        bail!(
            "--before and --after must both be files or both be directories ({}, {})",
            before.display(),
            after.display()
        );
    }
    let relative = |root: &Path| -> Result<Vec<PathBuf>> {
        Ok(java_files(&[root.to_path_buf()])?
            .into_iter()
            .filter_map(|p| p.strip_prefix(root).ok().map(Path::to_path_buf))
            .collect())
    };
    let after_files: std::collections::BTreeSet<PathBuf> = relative(after)?.into_iter().collect();
    relative(before)?
        .into_iter()
        .filter(|rel| after_files.contains(rel))
        .map(|rel| {
            let old = SourceFile::read(&before.join(&rel))?;
            let mut new = SourceFile::read(&after.join(&rel))?;
            new.path = rel.display().to_string();
            Ok(FileVersionPair {
                before: old,
                after: new,
            })
        })
        .collect()
}

fn cmd_detect(a: &DetectArgs, settings: &Settings) -> Result<String> {
    let threshold = a.threshold.unwrap_or_else(|| settings.config.threshold());
    let pairs = version_pairs(&a.before, &a.after)?;
    let found: Vec<Vec<DetectedRename>> = pairs
        .par_iter()
        .map(|p| detect_renames(p, threshold))
        .collect::<testlens_core::Result<_>>()?;
    json(&found.concat())
}

fn classify_all(
    events: &[testlens_core::RenameEvent],
    lexicon: &Lexicon,
    relations: &LexicalRelations,
) -> Vec<RenameClassification> {
    let classifier = RenameClassifier::new(lexicon, relations);
    events.par_iter().map(|e| classifier.classify(e)).collect()
}

fn cmd_classify(a: &ClassifyArgs, settings: &Settings) -> Result<String> {
    let format = format_arg(
        &a.format,
        settings.config.format.classify,
        OutputFormat::Json,
        &[OutputFormat::Json, OutputFormat::Csv, OutputFormat::Md],
    )?;
    let events = load_events(&a.input)?;
    let classified = classify_all(
        &events,
        &settings.lexicon()?,
        &settings.relations(&a.relations)?,
    );
    Ok(render_classifications(&classified, format)?)
}

fn cmd_report(a: &ReportArgs, settings: &Settings) -> Result<String> {
    let format = format_arg(
        &a.format,
        settings.config.format.report,
        OutputFormat::Md,
        &[OutputFormat::Md, OutputFormat::Csv, OutputFormat::Json],
    )?;
    let opts = RenderOptions {
        table: a.table.parse()?,
        k: a.k as usize,
        prefix_lengths: parse_prefix_range(&a.prefix_len)?,
    };
    let catalog = settings.catalog(&a.catalog)?;

    let text = std::fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let classified: Vec<RenameClassification> = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(_) => {
            let events = load_events(&a.input)?;
            classify_all(
                &events,
                &settings.lexicon()?,
                &settings.relations(&a.relations)?,
            )
        }
    };
    let stats = classified
        .par_chunks(256)
        .map(|chunk| CorpusStats::from_classifications(chunk, &catalog))
        .reduce(CorpusStats::new, |x, y| x.merge(&y));
    Ok(render(&stats, &catalog, &opts, format)?)
}
