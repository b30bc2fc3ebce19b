//! Word lists backing the tagger.
//!
//! The on-disk format is a JSON object with the optional keys
//! `prepositions`, `determiners`, `conjunctions`, `pronouns`, `adverbs`,
//! `verbs` and `known_nouns`, each an array of lowercase words. A key present
//! in an override file replaces the bundled list for that class; absent keys
//! keep the bundled list. Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../data/lexicon.json");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prepositions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determiners: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjunctions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pronouns: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adverbs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verbs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_nouns: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub prepositions: BTreeSet<String>,
    pub determiners: BTreeSet<String>,
    pub conjunctions: BTreeSet<String>,
    pub pronouns: BTreeSet<String>,
    pub adverbs: BTreeSet<String>,
    pub verbs: BTreeSet<String>,
    pub known_nouns: BTreeSet<String>,
}

/// How a word relates to the verb list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerbForm {
    Base(String),
    /// Third-person `-s` form of the base.
    ThirdPerson(String),
    /// `-ed` or `-ing` form of the base.
    Participle(String),
}

impl Lexicon {
    pub fn bundled() -> Lexicon {
        let file: LexiconFile =
            serde_json::from_str(BUNDLED).expect("bundled lexicon is valid JSON");
        let lex = Lexicon::empty().with_overrides(file);
        lex.validate()
            .expect("bundled lexicon satisfies its invariants");
        lex
    }

    fn empty() -> Lexicon {
        Lexicon {
            prepositions: BTreeSet::new(),
            determiners: BTreeSet::new(),
            conjunctions: BTreeSet::new(),
            pronouns: BTreeSet::new(),
            adverbs: BTreeSet::new(),
            verbs: BTreeSet::new(),
            known_nouns: BTreeSet::new(),
        }
    }

    /// Bundled lexicon with the classes present in `json` replaced.
    pub fn from_override_json(json: &str) -> Result<Lexicon> {
        let file: LexiconFile =
            serde_json::from_str(json).map_err(|e| Error::Lexicon(e.to_string()))?;
        let lex = Lexicon::bundled().with_overrides(file);
        lex.validate()?;
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::from_override_json(&text)
            .map_err(|e| Error::Lexicon(format!("{}: {e}", path.display())))
    }

    fn with_overrides(mut self, file: LexiconFile) -> Lexicon {
        fn set(target: &mut BTreeSet<String>, words: Option<Vec<String>>) {
            if let Some(words) = words {
                *target = words.into_iter().collect();
            }
        }
        set(&mut self.prepositions, file.prepositions);
        set(&mut self.determiners, file.determiners);
        set(&mut self.conjunctions, file.conjunctions);
        set(&mut self.pronouns, file.pronouns);
        set(&mut self.adverbs, file.adverbs);
        set(&mut self.verbs, file.verbs);
        set(&mut self.known_nouns, file.known_nouns);
        self
    }

    pub fn to_file(&self) -> LexiconFile {
        let list = |s: &BTreeSet<String>| Some(s.iter().cloned().collect());
        LexiconFile {
            prepositions: list(&self.prepositions),
            determiners: list(&self.determiners),
            conjunctions: list(&self.conjunctions),
            pronouns: list(&self.pronouns),
            adverbs: list(&self.adverbs),
            verbs: list(&self.verbs),
            known_nouns: list(&self.known_nouns),
        }
    }

    fn classes(&self) -> [(&'static str, &BTreeSet<String>); 7] {
        [
            ("prepositions", &self.prepositions),
            ("determiners", &self.determiners),
            ("conjunctions", &self.conjunctions),
            ("pronouns", &self.pronouns),
            ("adverbs", &self.adverbs),
            ("verbs", &self.verbs),
            ("known_nouns", &self.known_nouns),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, words) in self.classes() {
            if let Some(bad) = words
                .iter()
                .find(|w| w.is_empty() || w.chars().any(|c| c.is_uppercase()))
            {
                return Err(Error::Lexicon(format!(
                    "{name}: entry {bad:?} is not a lowercase word"
                )));
            }
        }
        let closed = &self.classes()[..4];
        for (i, (a_name, a)) in closed.iter().enumerate() {
            for (b_name, b) in &closed[i + 1..] {
                if let Some(w) = a.intersection(b).next() {
                    return Err(Error::Lexicon(format!(
                        "{w:?} appears in both {a_name} and {b_name}"
                    )));
                }
            }
        }
        for required in ["not", "when", "exactly"] {
            if !self.adverbs.contains(required) {
                return Err(Error::Lexicon(format!("adverbs must contain {required:?}")));
            }
        }
        for required in ["the", "no", "all"] {
            if !self.determiners.contains(required) {
                return Err(Error::Lexicon(format!(
                    "determiners must contain {required:?}"
                )));
            }
        }
        Ok(())
    }

    /// Every word in any class.
    pub fn all_words(&self) -> impl Iterator<Item = &str> {
        self.classes()
            .into_iter()
            .flat_map(|(_, words)| words.iter().map(String::as_str))
    }

    /// Resolves `word` (lowercase) against the verb list, accepting regular
    /// `-s`, `-ed` and `-ing` inflections of a listed base.
    pub fn verb_form(&self, word: &str) -> Option<VerbForm> {
        if self.verbs.contains(word) {
            return Some(VerbForm::Base(word.to_string()));
        }
        let find =
            |candidates: Vec<String>| candidates.into_iter().find(|c| self.verbs.contains(c));

        if let Some(stem) = word.strip_suffix("ing").filter(|s| s.len() >= 2) {
            if let Some(base) = find(participle_bases(stem)) {
                return Some(VerbForm::Participle(base));
            }
        }
        if let Some(stem) = word.strip_suffix("ed").filter(|s| s.len() >= 2) {
            let mut candidates = participle_bases(stem);
            if let Some(i) = stem.strip_suffix('i') {
                candidates.push(format!("{i}y"));
            }
            if let Some(base) = find(candidates) {
                return Some(VerbForm::Participle(base));
            }
        }
        if word.len() > 2 && word.ends_with('s') && !word.ends_with("ss") {
            let mut candidates = vec![word[..word.len() - 1].to_string()];
            if let Some(stem) = word.strip_suffix("es") {
                candidates.push(stem.to_string());
            }
            if let Some(stem) = word.strip_suffix("ies") {
                candidates.push(format!("{stem}y"));
            }
            if let Some(base) = find(candidates) {
                return Some(VerbForm::ThirdPerson(base));
            }
        }
        None
    }
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::bundled()
    }
}

fn participle_bases(stem: &str) -> Vec<String> {
    let mut out = vec![stem.to_string(), format!("{stem}e")];
    let bytes = stem.as_bytes();
    if bytes.len() >= 2 && bytes[bytes.len() - 1] == bytes[bytes.len() - 2] {
        out.push(stem[..stem.len() - 1].to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicon_is_valid() {
        let lex = Lexicon::bundled();
        lex.validate().unwrap();
        assert!(lex.adverbs.contains("exactly"));
        assert!(lex.determiners.contains("no"));
    }

    #[test]
    fn inflected_verbs() {
        let lex = Lexicon::bundled();
        assert_eq!(
            lex.verb_form("closed"),
            Some(VerbForm::Participle("close".into()))
        );
        assert_eq!(
            lex.verb_form("existing"),
            Some(VerbForm::Participle("exist".into()))
        );
        assert_eq!(
            lex.verb_form("stopped"),
            Some(VerbForm::Participle("stop".into()))
        );
        assert_eq!(
            lex.verb_form("exists"),
            Some(VerbForm::ThirdPerson("exist".into()))
        );
        assert_eq!(
            lex.verb_form("matches"),
            Some(VerbForm::ThirdPerson("match".into()))
        );
        assert_eq!(
            lex.verb_form("applied"),
            Some(VerbForm::Participle("apply".into()))
        );
        assert_eq!(lex.verb_form("actions"), None);
        assert_eq!(lex.verb_form("class"), None);
    }

    #[test]
    fn override_replaces_only_present_classes() {
        let lex = Lexicon::from_override_json(r#"{"verbs": ["frobnicate"]}"#).unwrap();
        assert!(lex.verbs.contains("frobnicate"));
        assert!(!lex.verbs.contains("test"));
        assert!(lex.prepositions.contains("from"));
    }

    #[test]
    fn override_rejects_broken_invariants() {
        assert!(Lexicon::from_override_json(r#"{"adverbs": ["never"]}"#).is_err());
        assert!(Lexicon::from_override_json(r#"{"pronouns": ["with"]}"#).is_err());
        assert!(Lexicon::from_override_json(r#"{"verbs": ["Test"]}"#).is_err());
        assert!(Lexicon::from_override_json(r#"{"nouns": []}"#).is_err());
    }
}
