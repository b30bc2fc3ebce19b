//! Identifier splitting.
//!
//! Boundaries are placed at `_`/`$` separators (dropped), lower-to-upper case
//! transitions, letter/digit transitions and at the end of an acronym run. For
//! an acronym run followed by lowercase letters the last capital normally
//! starts the next term (`HTTPSServer` -> `HTTPS`, `Server`). When the
//! lowercase continuation is a known word on its own and is not one with the
//! capital prepended, the whole capital run is kept instead
//! (`IGNOREtest` -> `IGNORE`, `test`). Same-case runs are never split.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vocab;

/// A syntactically valid identifier: letters, ASCII digits, `_` and `$`, not
/// starting with a digit and containing at least one letter or digit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RawIdentifier(String);

impl RawIdentifier {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        let invalid = |reason| Error::InvalidIdentifier {
            text: text.clone(),
            reason,
        };
        let Some(first) = text.chars().next() else {
            return Err(invalid("empty identifier"));
        };
        if first.is_ascii_digit() {
            return Err(invalid("identifier starts with a digit"));
        }
        if !text.chars().all(is_ident_char) {
            return Err(invalid(
                "identifier contains a character other than letters, digits, '_' or '$'",
            ));
        }
        if !text.chars().any(|c| !is_separator(c)) {
            return Err(invalid("identifier has no letters or digits"));
        }
        Ok(RawIdentifier(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RawIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for RawIdentifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RawIdentifier::new(s)
    }
}

impl TryFrom<String> for RawIdentifier {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        RawIdentifier::new(s)
    }
}

impl From<RawIdentifier> for String {
    fn from(id: RawIdentifier) -> String {
        id.0
    }
}

/// One term of a split identifier. `start..end` is a byte range into the raw text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

impl Term {
    pub fn is_numeric(&self) -> bool {
        self.text.bytes().all(|b| b.is_ascii_digit())
    }

    pub fn normalized(&self) -> String {
        normalize(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TermSequence {
    raw: RawIdentifier,
    terms: Vec<Term>,
}

impl TermSequence {
    pub fn raw(&self) -> &RawIdentifier {
        &self.raw
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.terms.iter()
    }

    /// Lowercased surface forms, in order.
    pub fn normalized(&self) -> Vec<String> {
        self.terms.iter().map(Term::normalized).collect()
    }

    /// Separator characters dropped by the split, with their byte offsets.
    pub fn separators(&self) -> Vec<(usize, char)> {
        let mut out = Vec::new();
        let mut terms = self.terms.iter().peekable();
        for (pos, c) in self.raw.as_str().char_indices() {
            while terms.peek().is_some_and(|t| t.end <= pos) {
                terms.next();
            }
            let covered = terms.peek().is_some_and(|t| t.start <= pos && pos < t.end);
            if !covered {
                out.push((pos, c));
            }
        }
        out
    }
}

impl<'a> IntoIterator for &'a TermSequence {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Lowercased lookup form of a term. Digits pass through unchanged.
pub fn normalize(term: &str) -> String {
    term.to_lowercase()
}

fn is_separator(c: char) -> bool {
    c == '_' || c == '$'
}

fn is_ident_char(c: char) -> bool {
    is_separator(c) || c.is_ascii_digit() || c.is_alphabetic()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    Upper,
    Lower,
    Digit,
}

fn class_of(c: char) -> Class {
    if c.is_ascii_digit() {
        Class::Digit
    } else if c.is_uppercase() {
        Class::Upper
    } else {
        // lowercase and caseless letters
        Class::Lower
    }
}

pub fn split(name: &RawIdentifier) -> TermSequence {
    let text = name.as_str();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut terms = Vec::new();

    let mut i = 0;
    while i < chars.len() {
        if is_separator(chars[i].1) {
            i += 1;
            continue;
        }
        let seg_start = i;
        while i < chars.len() && !is_separator(chars[i].1) {
            i += 1;
        }
        split_segment(text, &chars[seg_start..i], &mut terms);
    }

    TermSequence {
        raw: name.clone(),
        terms,
    }
}

/// Convenience wrapper validating `text` first.
pub fn split_str(text: &str) -> Result<TermSequence> {
    Ok(split(&RawIdentifier::new(text)?))
}

fn split_segment(text: &str, seg: &[(usize, char)], out: &mut Vec<Term>) {
    let classes: Vec<Class> = seg.iter().map(|&(_, c)| class_of(c)).collect();
    let mut cuts = Vec::new();

    for i in 1..seg.len() {
        let (prev, cur) = (classes[i - 1], classes[i]);
        let digit_edge = (prev == Class::Digit) != (cur == Class::Digit);
        if digit_edge || (prev == Class::Lower && cur == Class::Upper) {
            cuts.push(i);
        } else if prev == Class::Upper && cur == Class::Lower {
            let run_start = (0..i)
                .rev()
                .take_while(|&j| classes[j] == Class::Upper)
                .last()
                .unwrap_or(i - 1);
            if i - run_start >= 2 {
                let lower_end = (i..seg.len())
                    .find(|&j| classes[j] != Class::Lower)
                    .unwrap_or(seg.len());
                if keeps_whole_run(text, seg, i, lower_end) {
                    cuts.push(i);
                } else {
                    cuts.push(i - 1);
                }
            }
        }
    }

    let mut start = 0;
    for cut in cuts.into_iter().chain(std::iter::once(seg.len())) {
        if cut > start {
            out.push(make_term(text, seg, start, cut));
        }
        start = cut;
    }
}

fn keeps_whole_run(
    text: &str,
    seg: &[(usize, char)],
    lower_start: usize,
    lower_end: usize,
) -> bool {
    let lower = &text[seg[lower_start].0..byte_end(seg, lower_end)];
    let with_cap = &text[seg[lower_start - 1].0..byte_end(seg, lower_end)];
    vocab::contains(&normalize(lower)) && !vocab::contains(&normalize(with_cap))
}

fn byte_end(seg: &[(usize, char)], idx: usize) -> usize {
    if idx < seg.len() {
        seg[idx].0
    } else {
        let (pos, c) = seg[seg.len() - 1];
        pos + c.len_utf8()
    }
}

fn make_term(text: &str, seg: &[(usize, char)], from: usize, to: usize) -> Term {
    let start = seg[from].0;
    let end = byte_end(seg, to);
    Term {
        text: text[start..end].to_string(),
        start,
        end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(name: &str) -> Vec<String> {
        split_str(name)
            .unwrap()
            .iter()
            .map(|t| t.text.clone())
            .collect()
    }

    #[test]
    fn camel_case_method_name() {
        assert_eq!(
            surfaces("testStringEncryption"),
            ["test", "String", "Encryption"]
        );
    }

    #[test]
    fn single_term() {
        assert_eq!(surfaces("x"), ["x"]);
    }

    #[test]
    fn digits_and_underscores() {
        assert_eq!(surfaces("test15_6_5"), ["test", "15", "6", "5"]);
        assert_eq!(surfaces("test_13"), ["test", "13"]);
        assert_eq!(surfaces("test13"), ["test", "13"]);
    }

    #[test]
    fn acronym_runs() {
        assert_eq!(surfaces("HTTPSServer"), ["HTTPS", "Server"]);
        assert_eq!(surfaces("XMLParser"), ["XML", "Parser"]);
        assert_eq!(
            surfaces("IGNOREtestHttpsCheckOut"),
            ["IGNORE", "test", "Https", "Check", "Out"]
        );
        assert_eq!(surfaces("parseURL"), ["parse", "URL"]);
    }

    #[test]
    fn same_case_runs_stay_whole() {
        assert_eq!(
            surfaces("deleteindexNotExists"),
            ["deleteindex", "Not", "Exists"]
        );
    }

    #[test]
    fn dollar_and_repeated_underscores() {
        assert_eq!(surfaces("a$b__c"), ["a", "b", "c"]);
        let seq = split_str("__init__").unwrap();
        assert_eq!(seq.normalized(), ["init"]);
        assert_eq!(seq.separators(), [(0, '_'), (1, '_'), (6, '_'), (7, '_')]);
    }

    #[test]
    fn spans_point_into_raw_text() {
        let seq = split_str("test_get_NotExisting").unwrap();
        for t in &seq {
            assert_eq!(&seq.raw().as_str()[t.start..t.end], t.text);
        }
    }

    #[test]
    fn normalize_lowercases() {
        assert_eq!(normalize("String"), "string");
        assert_eq!(normalize("15"), "15");
        assert_eq!(normalize("IGNORE"), "ignore");
    }

    #[test]
    fn rejects_malformed() {
        assert!(RawIdentifier::new("").is_err());
        assert!(RawIdentifier::new("foo-bar").is_err());
        assert!(RawIdentifier::new("9lives").is_err());
        assert!(RawIdentifier::new("__").is_err());
        assert!(RawIdentifier::new("with space").is_err());
    }

    fn identifier() -> impl Strategy<Value = String> {
        "[A-Za-z_$][A-Za-z0-9_$]{0,24}".prop_filter("needs a letter or digit", |s| {
            s.chars().any(|c| c.is_ascii_alphanumeric())
        })
    }

    proptest! {
        #[test]
        fn reconstruction(name in identifier()) {
            let seq = split_str(&name).unwrap();
            let mut pieces: Vec<(usize, String)> = seq
                .iter()
                .map(|t| (t.start, t.text.clone()))
                .chain(seq.separators().into_iter().map(|(p, c)| (p, c.to_string())))
                .collect();
            pieces.sort();
            let rebuilt: String = pieces.into_iter().map(|(_, s)| s).collect();
            prop_assert_eq!(rebuilt, name);
        }

        #[test]
        fn terms_are_well_formed(name in identifier()) {
            let seq = split_str(&name).unwrap();
            let mut last_end = 0;
            for t in &seq {
                prop_assert!(!t.text.is_empty());
                prop_assert!(t.start >= last_end && t.start < t.end);
                last_end = t.end;
                let digits = t.text.chars().filter(|c| c.is_ascii_digit()).count();
                prop_assert!(digits == 0 || digits == t.text.chars().count());
            }
        }

        #[test]
        fn resplitting_a_term_is_identity(name in identifier()) {
            let seq = split_str(&name).unwrap();
            for t in &seq {
                if t.text.starts_with(|c: char| c.is_ascii_digit()) {
                    continue;
                }
                let again = split_str(&t.text).unwrap();
                prop_assert_eq!(again.len(), 1);
                prop_assert_eq!(&again.terms()[0].text, &t.text);
            }
        }

        #[test]
        fn deterministic(name in identifier()) {
            prop_assert_eq!(split_str(&name).unwrap(), split_str(&name).unwrap());
        }
    }
}
