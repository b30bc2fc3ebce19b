//! Corpus statistics over classified renames, and their tabular rendering.
//!
//! [`CorpusStats`] is a bundle of counters. [`CorpusStats::merge`] is a
//! pointwise sum, so shards can be counted in parallel and combined in any
//! order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::{md_cell, OutputFormat};
use crate::patterns::{prefix_pair, Catalog, GrammarPattern};
use crate::rename::{FormCategory, RenameClassification, SemanticCategory};

pub type PatternPair = (GrammarPattern, GrammarPattern);

pub const PREFIX_LENGTHS: RangeInclusive<usize> = 2..=5;

/// Instances of a catalog entry among renames (old or new name matches) and
/// how many of those match on both sides.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CatalogTally {
    pub instances: u64,
    pub preserved_after_rename: u64,
}

/// Maps with composite keys serialize as `[[key, count], ...]`.
fn as_entries<K: Serialize, V: Serialize, S: Serializer>(
    m: &BTreeMap<K, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub events: u64,
    pub full_pattern_counts_old: BTreeMap<GrammarPattern, u64>,
    pub full_pattern_counts_new: BTreeMap<GrammarPattern, u64>,
    #[serde(serialize_with = "as_entries")]
    pub pattern_pair_counts: BTreeMap<PatternPair, u64>,
    #[serde(serialize_with = "as_entries")]
    pub prefix_pair_counts: BTreeMap<(usize, PatternPair), u64>,
    pub form_counts: BTreeMap<FormCategory, u64>,
    pub semantic_counts: BTreeMap<SemanticCategory, u64>,
    #[serde(serialize_with = "as_entries")]
    pub semantic_by_pattern_pair: BTreeMap<(PatternPair, SemanticCategory), u64>,
    /// `(added, removed)` term pairs; pairs involving digits are skipped.
    #[serde(serialize_with = "as_entries")]
    pub term_pair_counts: BTreeMap<(String, String), u64>,
    pub catalog_tally: BTreeMap<String, CatalogTally>,
}

fn bump<K: Ord>(m: &mut BTreeMap<K, u64>, k: K, by: u64) {
    *m.entry(k).or_default() += by;
}

fn sum_into<K: Ord + Clone>(into: &mut BTreeMap<K, u64>, from: &BTreeMap<K, u64>) {
    for (k, &v) in from {
        bump(into, k.clone(), v);
    }
}

impl CorpusStats {
    pub fn new() -> Self {
        CorpusStats::default()
    }

    /// Counts one classified rename. Every per-event map grows by exactly
    /// one; `term_pair_counts` grows by one per digit-free term pair.
    pub fn accumulate(&mut self, c: &RenameClassification, catalog: &Catalog) {
        let (old, new) = (&c.old_pattern, &c.new_pattern);
        self.events += 1;
        bump(&mut self.full_pattern_counts_old, old.clone(), 1);
        bump(&mut self.full_pattern_counts_new, new.clone(), 1);
        bump(&mut self.pattern_pair_counts, (old.clone(), new.clone()), 1);
        for k in PREFIX_LENGTHS {
            bump(
                &mut self.prefix_pair_counts,
                (k, prefix_pair(old, new, k)),
                1,
            );
        }
        bump(&mut self.form_counts, c.form, 1);
        bump(&mut self.semantic_counts, c.semantics, 1);
        bump(
            &mut self.semantic_by_pattern_pair,
            ((old.clone(), new.clone()), c.semantics),
            1,
        );
        let has_digit = |s: &str| s.chars().any(|ch| ch.is_ascii_digit());
        for p in &c.pairs {
            if !has_digit(&p.added) && !has_digit(&p.removed) {
                bump(
                    &mut self.term_pair_counts,
                    (p.added.clone(), p.removed.clone()),
                    1,
                );
            }
        }
        for entry in catalog.iter() {
            let (in_old, in_new) = (entry.template.matches(old), entry.template.matches(new));
            if in_old || in_new {
                let t = self.catalog_tally.entry(entry.name.clone()).or_default();
                t.instances += 1;
                if in_old && in_new {
                    t.preserved_after_rename += 1;
                }
            }
        }
    }

    pub fn from_classifications<'a>(
        items: impl IntoIterator<Item = &'a RenameClassification>,
        catalog: &Catalog,
    ) -> Self {
        let mut s = CorpusStats::new();
        for c in items {
            s.accumulate(c, catalog);
        }
        s
    }

    /// Pointwise sum.
    pub fn merge(mut self, other: &CorpusStats) -> CorpusStats {
        self.events += other.events;
        sum_into(
            &mut self.full_pattern_counts_old,
            &other.full_pattern_counts_old,
        );
        sum_into(
            &mut self.full_pattern_counts_new,
            &other.full_pattern_counts_new,
        );
        sum_into(&mut self.pattern_pair_counts, &other.pattern_pair_counts);
        sum_into(&mut self.prefix_pair_counts, &other.prefix_pair_counts);
        sum_into(&mut self.form_counts, &other.form_counts);
        sum_into(&mut self.semantic_counts, &other.semantic_counts);
        sum_into(
            &mut self.semantic_by_pattern_pair,
            &other.semantic_by_pattern_pair,
        );
        sum_into(&mut self.term_pair_counts, &other.term_pair_counts);
        for (k, t) in &other.catalog_tally {
            let mine = self.catalog_tally.entry(k.clone()).or_default();
            mine.instances += t.instances;
            mine.preserved_after_rename += t.preserved_after_rename;
        }
        self
    }

    /// Prefix-pair counts for one prefix length.
    pub fn prefix_pairs(&self, k: usize) -> BTreeMap<PatternPair, u64> {
        self.prefix_pair_counts
            .iter()
            .filter(|((len, _), _)| *len == k)
            .map(|((_, pair), &n)| (pair.clone(), n))
            .collect()
    }

    /// Pattern-pair counts within one semantic category.
    pub fn pattern_pairs_for(&self, category: SemanticCategory) -> BTreeMap<PatternPair, u64> {
        self.semantic_by_pattern_pair
            .iter()
            .filter(|((_, s), _)| *s == category)
            .map(|((pair, _), &n)| (pair.clone(), n))
            .collect()
    }
}

/// Result of [`top_k`]: the leading entries and the summed remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopK<K> {
    pub rows: Vec<(K, u64)>,
    /// Number of entries folded into `others`.
    pub others_entries: usize,
    pub others: u64,
}

/// The `k` largest entries by count, ties broken by ascending key.
///
/// # Panics
/// If `k` is zero.
pub fn top_k<K: Ord + Clone>(m: &BTreeMap<K, u64>, k: usize) -> TopK<K> {
    assert!(k >= 1, "k must be positive");
    let mut all: Vec<(K, u64)> = m.iter().map(|(key, &n)| (key.clone(), n)).collect();
    // BTreeMap iteration is already key-ordered, and the sort is stable
    all.sort_by_key(|e| std::cmp::Reverse(e.1));
    let rest = all.split_off(k.min(all.len()));
    TopK {
        rows: all,
        others_entries: rest.len(),
        others: rest.iter().map(|(_, n)| n).sum(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    Full,
    Pairs,
    Prefix,
    Semantic,
    Terms,
    Catalog,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => TableKind::Full,
            "pairs" => TableKind::Pairs,
            "prefix" => TableKind::Prefix,
            "semantic" => TableKind::Semantic,
            "terms" => TableKind::Terms,
            "catalog" => TableKind::Catalog,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown table {s:?} (expected full, pairs, prefix, semantic, terms or catalog)"
                )))
            }
        })
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::Full => "full",
            TableKind::Pairs => "pairs",
            TableKind::Prefix => "prefix",
            TableKind::Semantic => "semantic",
            TableKind::Terms => "terms",
            TableKind::Catalog => "catalog",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub table: TableKind,
    pub k: usize,
    pub prefix_lengths: RangeInclusive<usize>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            table: TableKind::Full,
            k: 5,
            prefix_lengths: PREFIX_LENGTHS,
        }
    }
}

/// Parses `2..5`, `2..=5` or a single length such as `3`.
pub fn parse_prefix_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::InvalidInput(format!("bad prefix range {s:?} (expected e.g. 2..5)"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo > hi || lo < *PREFIX_LENGTHS.start() || hi > *PREFIX_LENGTHS.end() {
        return Err(Error::InvalidInput(format!(
            "prefix range {s:?} must lie within 2..5"
        )));
    }
    Ok(lo..=hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub key: Vec<String>,
    pub count: u64,
    /// Denominator of `percentage`.
    pub base: u64,
    pub percentage: f64,
}

impl Row {
    fn new(key: Vec<String>, count: u64, base: u64) -> Row {
        let percentage = if base == 0 {
            0.0
        } else {
            count as f64 * 100.0 / base as f64
        };
        Row {
            key,
            count,
            base,
            percentage,
        }
    }
}

/// One rendered section. Catalog sections show the per-row base as an
/// extra column; the others share the section total.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub total: u64,
    #[serde(skip)]
    pub base_column: Option<String>,
    pub rows: Vec<Row>,
}

const OTHERS: &str = "Others";

fn section<K: Ord + Clone>(
    title: String,
    columns: &[&str],
    m: &BTreeMap<K, u64>,
    k: usize,
    key: impl Fn(&K) -> Vec<String>,
) -> Section {
    let total: u64 = m.values().sum();
    // ties break on the rendered key text
    let keyed: BTreeMap<Vec<String>, u64> = m.iter().map(|(kk, &n)| (key(kk), n)).collect();
    let top = top_k(&keyed, k);
    let mut rows: Vec<Row> = top
        .rows
        .into_iter()
        .map(|(kk, n)| Row::new(kk, n, total))
        .collect();
    if top.others_entries > 0 {
        let mut key = vec![OTHERS.to_string()];
        key.resize(columns.len(), String::new());
        rows.push(Row::new(key, top.others, total));
    }
    Section {
        title,
        columns: columns.iter().map(|c| c.to_string()).collect(),
        total,
        base_column: None,
        rows,
    }
}

fn pair_key((a, b): &PatternPair) -> Vec<String> {
    vec![a.to_string(), b.to_string()]
}

/// Builds the sections for one table kind.
pub fn sections(stats: &CorpusStats, catalog: &Catalog, opts: &RenderOptions) -> Vec<Section> {
    let k = opts.k;
    match opts.table {
        TableKind::Full => vec![
            section(
                "Old Names".into(),
                &["Grammar Pattern"],
                &stats.full_pattern_counts_old,
                k,
                |p| vec![p.to_string()],
            ),
            section(
                "New Names".into(),
                &["Grammar Pattern"],
                &stats.full_pattern_counts_new,
                k,
                |p| vec![p.to_string()],
            ),
        ],
        TableKind::Pairs => vec![section(
            "Full Pattern Pairs".into(),
            &["Old Pattern", "New Pattern"],
            &stats.pattern_pair_counts,
            k,
            pair_key,
        )],
        TableKind::Prefix => opts
            .prefix_lengths
            .clone()
            .map(|len| {
                section(
                    format!("Prefix Pairs (length {len})"),
                    &["Old Prefix", "New Prefix"],
                    &stats.prefix_pairs(len),
                    k,
                    pair_key,
                )
            })
            .collect(),
        TableKind::Semantic => {
            let mut out = vec![section(
                "Semantic Categories".into(),
                &["Category"],
                &stats.semantic_counts,
                SemanticCategory::ALL.len(),
                |c| vec![c.to_string()],
            )];
            for (cat, _) in top_k(&stats.semantic_counts, SemanticCategory::ALL.len()).rows {
                out.push(section(
                    format!("{cat} Pattern Pairs"),
                    &["Old Pattern", "New Pattern"],
                    &stats.pattern_pairs_for(cat),
                    k,
                    pair_key,
                ));
            }
            out
        }
        TableKind::Terms => vec![section(
            "Term Pairs".into(),
            &["Added", "Removed"],
            &stats.term_pair_counts,
            k,
            |(a, r)| vec![a.clone(), r.clone()],
        )],
        TableKind::Catalog => {
            let rows = catalog
                .iter()
                .map(|e| {
                    let t = stats
                        .catalog_tally
                        .get(&e.name)
                        .copied()
                        .unwrap_or_default();
                    Row::new(
                        vec![e.name.clone(), e.template.to_string()],
                        t.preserved_after_rename,
                        t.instances,
                    )
                })
                .collect();
            vec![Section {
                title: "Naming Templates".into(),
                columns: vec!["Template Name".into(), "Grammar Pattern".into()],
                total: stats.events,
                base_column: Some("Instances".into()),
                rows,
            }]
        }
    }
}

fn count_header(s: &Section) -> &'static str {
    if s.base_column.is_some() {
        "Preserved"
    } else {
        "Count"
    }
}

/// Renders a table as markdown, CSV or JSON. Percentages carry two decimals.
pub fn render(
    stats: &CorpusStats,
    catalog: &Catalog,
    opts: &RenderOptions,
    format: OutputFormat,
) -> Result<String> {
    if opts.k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let secs = sections(stats, catalog, opts);
    match format {
        OutputFormat::Md => Ok(render_md(&secs)),
        OutputFormat::Csv => render_csv(&secs),
        OutputFormat::Json => render_json(&secs),
        other => Err(Error::UnsupportedFormat(other.to_string())),
    }
}

fn pct(p: f64) -> String {
    format!("{p:.2}")
}

fn render_md(secs: &[Section]) -> String {
    let mut out = String::new();
    for (i, s) in secs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("### {}\n\n", s.title));
        let mut header: Vec<String> = s.columns.clone();
        header.extend(s.base_column.clone());
        header.push(count_header(s).into());
        header.push("Percentage".into());
        out.push_str(&format!("| {} |\n", header.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
        for r in &s.rows {
            let mut cells: Vec<String> = r.key.iter().map(|c| md_cell(c)).collect();
            if s.base_column.is_some() {
                cells.push(r.base.to_string());
            }
            cells.push(r.count.to_string());
            cells.push(format!("{}%", pct(r.percentage)));
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
    }
    out
}

fn render_csv(secs: &[Section]) -> Result<String> {
    let width = secs.iter().map(|s| s.columns.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["section".to_string()];
    header.extend((1..=width).map(|i| format!("key{i}")));
    header.extend(["count", "base", "percentage"].map(String::from));
    w.write_record(&header)?;
    for s in secs {
        for r in &s.rows {
            let mut rec = vec![s.title.clone()];
            rec.extend(r.key.iter().cloned());
            rec.resize(1 + width, String::new());
            rec.push(r.count.to_string());
            rec.push(r.base.to_string());
            rec.push(pct(r.percentage));
            w.write_record(&rec)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 input gives utf-8 output"))
}

fn render_json(secs: &[Section]) -> Result<String> {
    #[derive(Serialize)]
    struct JsonRow<'a> {
        key: &'a [String],
        count: u64,
        base: u64,
        percentage: String,
    }
    #[derive(Serialize)]
    struct JsonSection<'a> {
        title: &'a str,
        columns: &'a [String],
        total: u64,
        rows: Vec<JsonRow<'a>>,
    }
    let doc: Vec<JsonSection> = secs
        .iter()
        .map(|s| JsonSection {
            title: &s.title,
            columns: &s.columns,
            total: s.total,
            rows: s
                .rows
                .iter()
                .map(|r| JsonRow {
                    key: &r.key,
                    count: r.count,
                    base: r.base,
                    percentage: pct(r.percentage),
                })
                .collect(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
