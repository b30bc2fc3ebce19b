//! Bundled English/programming vocabulary.

use std::collections::BTreeSet;

use once_cell::sync::Lazy;

const DICTIONARY: &str = include_str!("../data/dictionary.txt");

static WORDS: Lazy<BTreeSet<&'static str>> = Lazy::new(|| {
    DICTIONARY
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
});

/// The bundled word list, lowercase.
pub fn words() -> impl Iterator<Item = &'static str> {
    WORDS.iter().copied()
}

/// Exact lookup of an already-lowercased word.
pub fn contains(word: &str) -> bool {
    WORDS.contains(word)
}
