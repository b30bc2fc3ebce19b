//! Rename classification: form, semantic category and the lexical relation
//! between swapped terms.
//!
//! Form categories:
//! - `Formatting`: the letter terms are unchanged in order; only case,
//!   separators or digits differ (`test_13` -> `test13`).
//! - `Reordering`: the same letter terms in a different order.
//! - `Simple`: at most one letter term added and at most one removed.
//! - `Complex`: anything else.
//!
//! The semantic category follows the form: formatting and reordering
//! preserve meaning, as does a one-to-one replacement by synonyms or
//! same-stem words. Pure additions narrow the name when every added term sits
//! in front of a preserved head noun (otherwise they add meaning); pure
//! removals broaden it when only modifiers or leading verbs in front of a
//! preserved head noun are dropped (otherwise they remove meaning). Mixed
//! edits narrow on specialization, broaden on generalization and otherwise
//! change meaning. The head-noun rules are a heuristic.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{md_cell, OutputFormat};
use crate::lexicon::Lexicon;
use crate::patterns::{pattern_of, GrammarPattern};
use crate::relations::{comparative_bases, WordRelationProvider};
use crate::splitter::{split, RawIdentifier, TermSequence};
use crate::stem::stem;
use crate::tagger::{tag, TaggedName};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EventRecord")]
pub struct RenameEvent {
    pub old_name: RawIdentifier,
    pub new_name: RawIdentifier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commit: Option<String>,
}

/// Unvalidated wire form shared by the CSV and JSON readers.
#[derive(Deserialize)]
struct EventRecord {
    old_name: String,
    new_name: String,
    #[serde(default)]
    file: Option<String>,
    #[serde(default)]
    commit: Option<String>,
}

impl TryFrom<EventRecord> for RenameEvent {
    type Error = Error;

    fn try_from(r: EventRecord) -> Result<Self> {
        let non_empty = |s: Option<String>| s.filter(|s| !s.trim().is_empty());
        let mut event = RenameEvent::new(r.old_name.parse()?, r.new_name.parse()?)?;
        event.file = non_empty(r.file);
        event.commit = non_empty(r.commit);
        Ok(event)
    }
}

impl RenameEvent {
    pub fn new(old_name: RawIdentifier, new_name: RawIdentifier) -> Result<Self> {
        if old_name == new_name {
            return Err(Error::InvalidInput(format!(
                "rename of {old_name} to itself"
            )));
        }
        Ok(RenameEvent {
            old_name,
            new_name,
            file: None,
            commit: None,
        })
    }

    /// Parses both names; convenient in tests and fixtures.
    pub fn parse(old_name: &str, new_name: &str) -> Result<Self> {
        RenameEvent::new(old_name.parse()?, new_name.parse()?)
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormCategory {
    Formatting,
    Reordering,
    Simple,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SemanticCategory {
    Preserve,
    Change,
    Narrow,
    Broaden,
    Add,
    Remove,
}

impl SemanticCategory {
    pub const ALL: [SemanticCategory; 6] = [
        SemanticCategory::Preserve,
        SemanticCategory::Change,
        SemanticCategory::Narrow,
        SemanticCategory::Broaden,
        SemanticCategory::Add,
        SemanticCategory::Remove,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermRelation {
    Synonym,
    Antonym,
    Specialization,
    Generalization,
    SameStem,
    TenseChange,
    PluralityChange,
    SpellingFix,
    Unrelated,
}

macro_rules! display_as_debug {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
display_as_debug!(FormCategory, SemanticCategory, TermRelation);

/// Multiset difference over normalized terms. Each list keeps source order:
/// `added` in new-name order, `removed` and `preserved` in old-name order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermDiff {
    pub added: Vec<String>,
    pub removed: Vec<String>,
    pub preserved: Vec<String>,
}

/// Positions (term indices) behind a [`TermDiff`].
#[derive(Clone, Debug, Default)]
struct DiffPositions {
    added: Vec<usize>,
    removed: Vec<usize>,
}

fn diff_with_positions(old: &[String], new: &[String]) -> (TermDiff, DiffPositions) {
    let mut available: BTreeMap<&str, usize> = BTreeMap::new();
    for w in new {
        *available.entry(w).or_default() += 1;
    }
    let mut diff = TermDiff::default();
    let mut pos = DiffPositions::default();
    for (i, w) in old.iter().enumerate() {
        match available.get_mut(w.as_str()) {
            Some(n) if *n > 0 => {
                *n -= 1;
                diff.preserved.push(w.clone());
            }
            _ => {
                diff.removed.push(w.clone());
                pos.removed.push(i);
            }
        }
    }
    let mut available: BTreeMap<&str, usize> = BTreeMap::new();
    for w in old {
        *available.entry(w).or_default() += 1;
    }
    for (i, w) in new.iter().enumerate() {
        match available.get_mut(w.as_str()) {
            Some(n) if *n > 0 => *n -= 1,
            _ => {
                diff.added.push(w.clone());
                pos.added.push(i);
            }
        }
    }
    (diff, pos)
}

pub fn diff_terms(old: &TermSequence, new: &TermSequence) -> TermDiff {
    diff_with_positions(&old.normalized(), &new.normalized()).0
}

fn letter_terms(seq: &TermSequence) -> Vec<String> {
    seq.iter()
        .filter(|t| !t.is_numeric())
        .map(|t| t.normalized())
        .collect()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

pub fn classify_form(event: &RenameEvent) -> FormCategory {
    let old = letter_terms(&split(&event.old_name));
    let new = letter_terms(&split(&event.new_name));
    if old == new {
        return FormCategory::Formatting;
    }
    if sorted(old.clone()) == sorted(new.clone()) {
        return FormCategory::Reordering;
    }
    let (diff, _) = diff_with_positions(&old, &new);
    if diff.added.len() <= 1 && diff.removed.len() <= 1 {
        FormCategory::Simple
    } else {
        FormCategory::Complex
    }
}

/// `(added, removed)` for every added/removed term combination, ordered by
/// added position then removed position.
pub fn term_pairs(event: &RenameEvent) -> Vec<(String, String)> {
    let diff = diff_terms(&split(&event.old_name), &split(&event.new_name));
    diff.added
        .iter()
        .flat_map(|a| diff.removed.iter().map(move |r| (a.clone(), r.clone())))
        .collect()
}

/// Levenshtein distance over chars.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = (diag + usize::from(ca != cb))
                .min(above + 1)
                .min(row[j] + 1);
            diag = above;
        }
    }
    row[b.len()]
}

fn phrase_stem(s: &str) -> String {
    s.split_whitespace().map(stem).collect::<Vec<_>>().join(" ")
}

fn differs_by_suffix(a: &str, b: &str, suffixes: &[&str]) -> bool {
    let check = |long: &str, short: &str| {
        suffixes
            .iter()
            .any(|s| long.strip_suffix(s).is_some_and(|rest| rest == short))
    };
    check(a, b) || check(b, a)
}

fn plural_pair(a: &str, b: &str) -> bool {
    let y_ies = |x: &str, y: &str| {
        x.strip_suffix("ies")
            .zip(y.strip_suffix('y'))
            .is_some_and(|(p, q)| p == q)
    };
    differs_by_suffix(a, b, &["s", "es"]) || y_ies(a, b) || y_ies(b, a)
}

/// Relation between a removed term and the term that replaced it; first
/// match wins in the order spelling fix, shared stem (refined to plurality or
/// tense), synonym, antonym, specialization, generalization.
pub fn relate(removed: &str, added: &str, provider: &dyn WordRelationProvider) -> TermRelation {
    let removed = removed.to_lowercase();
    let added = added.to_lowercase();

    if edit_distance(&removed, &added) <= 2
        && provider.in_dictionary(&removed) != provider.in_dictionary(&added)
    {
        return TermRelation::SpellingFix;
    }
    let comparative = |a: &str, b: &str| comparative_bases(a).iter().any(|x| x == b);
    if phrase_stem(&removed) == phrase_stem(&added)
        || comparative(&removed, &added)
        || comparative(&added, &removed)
    {
        if plural_pair(&removed, &added) {
            return TermRelation::PluralityChange;
        }
        if differs_by_suffix(&removed, &added, &["ed", "d"]) {
            return TermRelation::TenseChange;
        }
        return TermRelation::SameStem;
    }
    if provider.synonyms(&removed).contains(&added) {
        return TermRelation::Synonym;
    }
    if provider.antonyms(&removed).contains(&added) {
        return TermRelation::Antonym;
    }
    if provider.all_hypernyms(&added).contains(&removed) {
        return TermRelation::Specialization;
    }
    if provider.all_hypernyms(&removed).contains(&added) {
        return TermRelation::Generalization;
    }
    TermRelation::Unrelated
}

fn preserves_meaning(r: TermRelation) -> bool {
    matches!(
        r,
        TermRelation::Synonym
            | TermRelation::SameStem
            | TermRelation::PluralityChange
            | TermRelation::TenseChange
            | TermRelation::SpellingFix
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermPair {
    pub added: String,
    pub removed: String,
    pub relation: TermRelation,
}

/// Full analysis of one rename event.
///
/// `added`/`removed` are the diff units after multi-word phrases have been
/// merged; `pairs` is their cross product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameClassification {
    #[serde(flatten)]
    pub event: RenameEvent,
    pub form: FormCategory,
    pub semantics: SemanticCategory,
    pub old_pattern: GrammarPattern,
    pub new_pattern: GrammarPattern,
    pub added: Vec<String>,
    pub removed: Vec<String>,
    pub pairs: Vec<TermPair>,
}

/// A diff unit: a single term or a merged phrase, with its first position.
#[derive(Clone, Debug)]
struct Unit {
    text: String,
    position: usize,
}

fn merge_phrases(terms: &[String], positions: &[usize], phrases: &[Vec<String>]) -> Vec<Unit> {
    let mut by_len: Vec<&Vec<String>> = phrases.iter().filter(|p| p.len() >= 2).collect();
    by_len.sort_by_key(|p| std::cmp::Reverse(p.len()));

    let mut units = Vec::new();
    let mut k = 0;
    while k < positions.len() {
        let start = positions[k];
        let found = by_len.iter().find(|phrase| {
            let n = phrase.len();
            k + n <= positions.len()
                && (0..n).all(|j| positions[k + j] == start + j && terms[start + j] == phrase[j])
        });
        match found {
            Some(phrase) => {
                units.push(Unit {
                    text: phrase.join(" "),
                    position: start,
                });
                k += phrase.len();
            }
            None => {
                units.push(Unit {
                    text: terms[start].clone(),
                    position: start,
                });
                k += 1;
            }
        }
    }
    units
}

/// One-to-one matching of removed to added units using only
/// meaning-preserving relations (Kuhn's augmenting paths).
fn perfect_preserving_matching(pairs: &[TermPair], added: &[Unit], removed: &[Unit]) -> bool {
    if added.len() != removed.len() || added.is_empty() {
        return false;
    }
    let n = added.len();
    // pairs are ordered added-major: index = a * |removed| + r
    let ok = |r: usize, a: usize| preserves_meaning(pairs[a * n + r].relation);

    fn augment(
        r: usize,
        n: usize,
        ok: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for a in 0..n {
            if ok(r, a) && !seen[a] {
                seen[a] = true;
                if owner[a].is_none_or(|other| augment(other, n, ok, seen, owner)) {
                    owner[a] = Some(r);
                    return true;
                }
            }
        }
        false
    }

    let mut owner = vec![None; n];
    (0..n).all(|r| {
        let mut seen = vec![false; n];
        augment(r, n, &ok, &mut seen, &mut owner)
    })
}

/// Classifies rename events against a lexicon and a relation provider.
pub struct RenameClassifier<'a> {
    lexicon: &'a Lexicon,
    provider: &'a dyn WordRelationProvider,
}

impl<'a> RenameClassifier<'a> {
    pub fn new(lexicon: &'a Lexicon, provider: &'a dyn WordRelationProvider) -> Self {
        RenameClassifier { lexicon, provider }
    }

    pub fn classify(&self, event: &RenameEvent) -> RenameClassification {
        let old_seq = split(&event.old_name);
        let new_seq = split(&event.new_name);
        let old_tagged = tag(&old_seq, self.lexicon);
        let new_tagged = tag(&new_seq, self.lexicon);

        let form = classify_form(event);
        let old_terms = old_seq.normalized();
        let new_terms = new_seq.normalized();
        let (_, pos) = diff_with_positions(&old_terms, &new_terms);
        let phrases = self.provider.phrases();
        let added = merge_phrases(&new_terms, &pos.added, &phrases);
        let removed = merge_phrases(&old_terms, &pos.removed, &phrases);

        let pairs: Vec<TermPair> = added
            .iter()
            .flat_map(|a| {
                removed.iter().map(move |r| TermPair {
                    added: a.text.clone(),
                    removed: r.text.clone(),
                    relation: TermRelation::Unrelated,
                })
            })
            .map(|mut p| {
                let has_digit = |s: &str| s.chars().any(|c| c.is_ascii_digit());
                if !has_digit(&p.added) && !has_digit(&p.removed) {
                    p.relation = relate(&p.removed, &p.added, self.provider);
                }
                p
            })
            .collect();

        let semantics = semantics_of(form, &pairs, &added, &removed, &old_tagged, &new_tagged);

        RenameClassification {
            event: event.clone(),
            form,
            semantics,
            old_pattern: pattern_of(&old_tagged),
            new_pattern: pattern_of(&new_tagged),
            added: added.into_iter().map(|u| u.text).collect(),
            removed: removed.into_iter().map(|u| u.text).collect(),
            pairs,
        }
    }

    pub fn classify_semantics(&self, event: &RenameEvent) -> SemanticCategory {
        self.classify(event).semantics
    }
}

/// Free-function form of [`RenameClassifier::classify_semantics`].
pub fn classify_semantics(
    event: &RenameEvent,
    lexicon: &Lexicon,
    provider: &dyn WordRelationProvider,
) -> SemanticCategory {
    RenameClassifier::new(lexicon, provider).classify_semantics(event)
}

fn semantics_of(
    form: FormCategory,
    pairs: &[TermPair],
    added: &[Unit],
    removed: &[Unit],
    old: &TaggedName,
    new: &TaggedName,
) -> SemanticCategory {
    use SemanticCategory::*;

    if matches!(form, FormCategory::Formatting | FormCategory::Reordering) {
        return Preserve;
    }
    if perfect_preserving_matching(pairs, added, removed) {
        return Preserve;
    }
    let in_front_of_kept_head = |units: &[Unit], name: &TaggedName| {
        name.head_noun().is_some_and(|head| {
            units.iter().all(|u| u.position < head) && !units.iter().any(|u| u.position == head)
        })
    };
    match (added.is_empty(), removed.is_empty()) {
        (false, true) => {
            if in_front_of_kept_head(added, new) {
                Narrow
            } else {
                Add
            }
        }
        (true, false) => {
            if in_front_of_kept_head(removed, old) {
                Broaden
            } else {
                Remove
            }
        }
        (false, false) => {
            let has = |r| pairs.iter().any(|p| p.relation == r);
            match (
                has(TermRelation::Specialization),
                has(TermRelation::Generalization),
            ) {
                (true, false) => Narrow,
                (false, true) => Broaden,
                _ => Change,
            }
        }
        // only digit or separator edits, already caught as Formatting
        (true, true) => Preserve,
    }
}

/// Reads rename events from CSV (header `old_name,new_name,file,commit`,
/// the last two may be empty) or a JSON array of objects with those keys.
/// The format is chosen from the file extension, falling back to sniffing
/// for a leading `[`.
pub fn load_events(path: &Path) -> Result<Vec<RenameEvent>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let is_json = match ext.as_deref() {
        Some("json") => true,
        Some("csv") => false,
        _ => text.trim_start().starts_with('['),
    };
    if is_json {
        read_events_json(&text)
    } else {
        read_events_csv(text.as_bytes())
    }
}

pub fn read_events_json(text: &str) -> Result<Vec<RenameEvent>> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_events_csv(reader: impl Read) -> Result<Vec<RenameEvent>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    for required in ["old_name", "new_name"] {
        if !headers.iter().any(|h| h == required) {
            return Err(Error::InvalidInput(format!(
                "CSV header lacks {required:?}"
            )));
        }
    }
    let mut events = Vec::new();
    for (i, row) in rdr.deserialize::<EventRecord>().enumerate() {
        let event = RenameEvent::try_from(row?)
            .map_err(|e| Error::InvalidInput(format!("CSV row {}: {e}", i + 2)))?;
        events.push(event);
    }
    Ok(events)
}

pub fn write_events_csv(events: &[RenameEvent]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["old_name", "new_name", "file", "commit"])?;
    for e in events {
        w.write_record([
            e.old_name.as_str(),
            e.new_name.as_str(),
            e.file.as_deref().unwrap_or(""),
            e.commit.as_deref().unwrap_or(""),
        ])?;
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer produces utf-8 from utf-8 input"))
}

fn pairs_cell(pairs: &[TermPair]) -> String {
    pairs
        .iter()
        .map(|p| format!("{}<-{}:{}", p.added, p.removed, p.relation))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Renders classifications as a JSON array, CSV table or markdown table.
pub fn render_classifications(
    records: &[RenameClassification],
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "old_name",
                "new_name",
                "file",
                "commit",
                "form",
                "semantics",
                "old_pattern",
                "new_pattern",
                "pairs",
            ])?;
            for r in records {
                w.write_record([
                    r.event.old_name.as_str(),
                    r.event.new_name.as_str(),
                    r.event.file.as_deref().unwrap_or(""),
                    r.event.commit.as_deref().unwrap_or(""),
                    &r.form.to_string(),
                    &r.semantics.to_string(),
                    &r.old_pattern.to_string(),
                    &r.new_pattern.to_string(),
                    &pairs_cell(&r.pairs),
                ])?;
            }
            csv_string(w)
        }
        OutputFormat::Md => {
            let mut out = String::from(
                "| Old Name | New Name | Form | Semantics | Old Pattern | New Pattern | Term Pairs |\n\
                 |---|---|---|---|---|---|---|\n",
            );
            for r in records {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} |\n",
                    md_cell(r.event.old_name.as_str()),
                    md_cell(r.event.new_name.as_str()),
                    r.form,
                    r.semantics,
                    r.old_pattern,
                    r.new_pattern,
                    md_cell(&pairs_cell(&r.pairs)),
                ));
            }
            Ok(out)
        }
        other => Err(Error::UnsupportedFormat(other.to_string())),
    }
}
