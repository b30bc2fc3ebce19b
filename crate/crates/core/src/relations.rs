//! Lexical relations between words (synonymy, antonymy, hypernymy) and a
//! dictionary check, behind a pluggable provider trait.
//!
//! Relation files are JSON objects with optional keys `synonyms`,
//! `antonyms` (arrays of two-word pairs, order irrelevant), `hypernyms`
//! (arrays of `[word, hypernym]`) and `dictionary` (extra known words).
//! Entries may be multi-word phrases such as `"all of"`. A loaded file is
//! added on top of the bundled table.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::stem::stem;
use crate::vocab;

const BUNDLED: &str = include_str!("../data/relations.json");

pub trait WordRelationProvider: Send + Sync {
    fn synonyms(&self, word: &str) -> BTreeSet<String>;
    fn antonyms(&self, word: &str) -> BTreeSet<String>;
    /// Direct hypernyms only.
    fn hypernyms(&self, word: &str) -> BTreeSet<String>;
    fn in_dictionary(&self, word: &str) -> bool;

    /// Multi-word phrases the provider knows, each split into lowercase words.
    fn phrases(&self) -> Vec<Vec<String>> {
        Vec::new()
    }

    /// Transitive closure of [`hypernyms`](Self::hypernyms).
    fn all_hypernyms(&self, word: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<String> = self.hypernyms(word).into_iter().collect();
        while let Some(w) = queue.pop_front() {
            if seen.insert(w.clone()) {
                queue.extend(self.hypernyms(&w));
            }
        }
        seen
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationsFile {
    #[serde(default)]
    synonyms: Vec<[String; 2]>,
    #[serde(default)]
    antonyms: Vec<[String; 2]>,
    #[serde(default)]
    hypernyms: Vec<[String; 2]>,
    #[serde(default)]
    dictionary: Vec<String>,
}

/// Table-backed provider. Synonymy and antonymy are stored symmetrically.
#[derive(Clone, Debug, Default)]
pub struct LexicalRelations {
    synonyms: BTreeMap<String, BTreeSet<String>>,
    antonyms: BTreeMap<String, BTreeSet<String>>,
    hypernyms: BTreeMap<String, BTreeSet<String>>,
    dictionary: BTreeSet<String>,
    dictionary_stems: BTreeSet<String>,
}

impl LexicalRelations {
    pub fn bundled() -> LexicalRelations {
        let mut rel = LexicalRelations::default();
        rel.add_words(vocab::words().map(str::to_string));
        rel.extend_from_json(BUNDLED)
            .expect("bundled relations are valid");
        rel
    }

    /// Bundled table plus the relations in the file at `path`.
    pub fn load(path: &Path) -> Result<LexicalRelations> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut rel = LexicalRelations::bundled();
        rel.extend_from_json(&text)
            .map_err(|e| Error::Relations(format!("{}: {e}", path.display())))?;
        Ok(rel)
    }

    pub fn extend_from_json(&mut self, json: &str) -> Result<()> {
        let file: RelationsFile =
            serde_json::from_str(json).map_err(|e| Error::Relations(e.to_string()))?;
        let all = file
            .synonyms
            .iter()
            .chain(&file.antonyms)
            .chain(&file.hypernyms)
            .flatten()
            .chain(&file.dictionary);
        for w in all {
            if w.trim().is_empty() || w.chars().any(char::is_uppercase) {
                return Err(Error::Relations(format!("{w:?} is not a lowercase word")));
            }
        }
        let mut next = self.clone();
        for [a, b] in file.synonyms {
            insert_symmetric(&mut next.synonyms, &a, &b);
        }
        for [a, b] in file.antonyms {
            insert_symmetric(&mut next.antonyms, &a, &b);
        }
        for [word, hyper] in &file.hypernyms {
            next.hypernyms
                .entry(word.clone())
                .or_default()
                .insert(hyper.clone());
        }
        let mentioned: Vec<String> = next
            .synonyms
            .keys()
            .chain(next.antonyms.keys())
            .chain(next.hypernyms.keys())
            .chain(next.hypernyms.values().flatten())
            .filter(|w| !w.contains(' '))
            .cloned()
            .collect();
        next.add_words(mentioned);
        next.add_words(file.dictionary);
        if let Some(w) = next.hypernym_cycle() {
            return Err(Error::Relations(format!("hypernym cycle through {w:?}")));
        }
        *self = next;
        Ok(())
    }

    fn add_words(&mut self, words: impl IntoIterator<Item = String>) {
        for w in words {
            self.dictionary_stems.insert(stem(&w));
            self.dictionary.insert(w);
        }
    }

    fn hypernym_cycle(&self) -> Option<&str> {
        self.hypernyms
            .keys()
            .find(|w| self.all_hypernyms(w).contains(*w))
            .map(String::as_str)
    }
}

fn insert_symmetric(map: &mut BTreeMap<String, BTreeSet<String>>, a: &str, b: &str) {
    map.entry(a.to_string()).or_default().insert(b.to_string());
    map.entry(b.to_string()).or_default().insert(a.to_string());
}

impl WordRelationProvider for LexicalRelations {
    fn synonyms(&self, word: &str) -> BTreeSet<String> {
        self.synonyms.get(word).cloned().unwrap_or_default()
    }

    fn antonyms(&self, word: &str) -> BTreeSet<String> {
        self.antonyms.get(word).cloned().unwrap_or_default()
    }

    fn hypernyms(&self, word: &str) -> BTreeSet<String> {
        self.hypernyms.get(word).cloned().unwrap_or_default()
    }

    /// Known if the word or its stem matches a dictionary entry's stem, or
    /// the word is a comparative/superlative of a dictionary word.
    fn in_dictionary(&self, word: &str) -> bool {
        self.dictionary.contains(word)
            || self.dictionary_stems.contains(&stem(word))
            || comparative_bases(word)
                .iter()
                .any(|b| self.dictionary.contains(b))
    }

    fn phrases(&self) -> Vec<Vec<String>> {
        let mut out: BTreeSet<Vec<String>> = BTreeSet::new();
        let keys = self
            .synonyms
            .keys()
            .chain(self.antonyms.keys())
            .chain(self.hypernyms.keys())
            .chain(self.hypernyms.values().flatten());
        for k in keys.filter(|k| k.contains(' ')) {
            out.insert(k.split_whitespace().map(str::to_string).collect());
        }
        out.into_iter().collect()
    }
}

/// Candidate base forms if `word` looks like an `-er`/`-est` adjective form:
/// `larger` -> `large`, `bigger` -> `big`, `easiest` -> `easy`.
pub fn comparative_bases(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    for suffix in ["er", "est"] {
        let Some(base) = word.strip_suffix(suffix) else {
            continue;
        };
        if base.len() < 2 {
            continue;
        }
        out.push(base.to_string());
        out.push(format!("{base}e"));
        if let Some(b) = base.strip_suffix('i') {
            out.push(format!("{b}y"));
        }
        let bytes = base.as_bytes();
        if bytes.len() >= 3 && bytes[bytes.len() - 1] == bytes[bytes.len() - 2] {
            out.push(base[..base.len() - 1].to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_relations_are_symmetric() {
        let rel = LexicalRelations::bundled();
        for (a, bs) in &rel.synonyms {
            for b in bs {
                assert!(rel.synonyms(b).contains(a), "{a} ~ {b}");
            }
        }
        for (a, bs) in &rel.antonyms {
            for b in bs {
                assert!(rel.antonyms(b).contains(a), "{a} !~ {b}");
            }
        }
    }

    #[test]
    fn transitive_hypernyms() {
        let rel = LexicalRelations::bundled();
        let up = rel.all_hypernyms("list");
        assert!(up.contains("collection"));
        assert!(up.contains("container"));
    }

    #[test]
    fn dictionary_uses_stems() {
        let rel = LexicalRelations::bundled();
        assert!(rel.in_dictionary("invoked"));
        assert!(rel.in_dictionary("jobs"));
        assert!(rel.in_dictionary("uploader"));
        assert!(!rel.in_dictionary("inkvoked"));
    }

    #[test]
    fn phrases_are_listed() {
        let rel = LexicalRelations::bundled();
        let phrases = rel.phrases();
        assert!(phrases.contains(&vec!["all".to_string(), "of".to_string()]));
        assert!(phrases.contains(&vec!["at".to_string(), "least".to_string()]));
    }

    #[test]
    fn rejects_cycles_and_uppercase() {
        let mut rel = LexicalRelations::bundled();
        assert!(rel
            .extend_from_json(r#"{"hypernyms": [["container", "list"]]}"#)
            .is_err());
        assert!(rel
            .extend_from_json(r#"{"synonyms": [["Foo", "bar"]]}"#)
            .is_err());
        // failed extensions leave the table untouched
        assert!(!rel.all_hypernyms("container").contains("list"));
        rel.extend_from_json(r#"{"synonyms": [["foo", "bar"]]}"#)
            .unwrap();
        assert!(rel.synonyms("bar").contains("foo"));
    }
}
