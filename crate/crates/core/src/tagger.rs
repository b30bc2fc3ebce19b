//! Part-of-speech tagging of split identifiers.
//!
//! Tags are assigned by a fixed rule cascade, first match wins:
//!
//! 1. all-digit term -> `D`
//! 2. closed-class lexicon hit -> `P`, `DT`, `CJ` or `PR`
//! 3. adverb lexicon -> `VM`
//! 4. verb lexicon (with regular inflections) -> `V`; a word that is also a
//!    known noun is read as a noun when it directly follows a preposition or
//!    determiner
//! 5. plural-looking word (`-s`, not `-ss`/`-us`/`-is`) -> `NPL`
//! 6. anything else -> `N`
//!
//! Finally every noun run is rewritten so that only its rightmost member (the
//! head noun) keeps `N`/`NPL`; the others become `NM`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lexicon::{Lexicon, VerbForm};
use crate::splitter::TermSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PosTag {
    N,
    DT,
    CJ,
    P,
    NPL,
    NM,
    V,
    VM,
    PR,
    D,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::N,
        PosTag::DT,
        PosTag::CJ,
        PosTag::P,
        PosTag::NPL,
        PosTag::NM,
        PosTag::V,
        PosTag::VM,
        PosTag::PR,
        PosTag::D,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::N => "N",
            PosTag::DT => "DT",
            PosTag::CJ => "CJ",
            PosTag::P => "P",
            PosTag::NPL => "NPL",
            PosTag::NM => "NM",
            PosTag::V => "V",
            PosTag::VM => "VM",
            PosTag::PR => "PR",
            PosTag::D => "D",
        }
    }

    pub fn is_noun(self) -> bool {
        matches!(self, PosTag::N | PosTag::NPL)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown POS tag {s:?}")))
    }
}

/// Terms of an identifier aligned one-to-one with their tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedName {
    terms: TermSequence,
    tags: Vec<PosTag>,
}

impl TaggedName {
    pub fn terms(&self) -> &TermSequence {
        &self.terms
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// `(normalized term, tag)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (String, PosTag)> + '_ {
        self.terms
            .iter()
            .map(|t| t.normalized())
            .zip(self.tags.iter().copied())
    }

    /// Index of the head noun: the last `N`/`NPL` tag.
    pub fn head_noun(&self) -> Option<usize> {
        self.tags.iter().rposition(|t| t.is_noun())
    }
}

/// Renders as `test/V Parser/N`.
impl fmt::Display for TaggedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (term, tag)) in self.terms.iter().zip(&self.tags).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}/{}", term.text, tag)?;
        }
        Ok(())
    }
}

pub fn tag(terms: &TermSequence, lexicon: &Lexicon) -> TaggedName {
    let mut tags: Vec<PosTag> = Vec::with_capacity(terms.len());
    for term in terms {
        let word = term.normalized();
        let prev = tags.last().copied();
        tags.push(tag_word(&word, term.is_numeric(), prev, lexicon));
    }
    TaggedName {
        terms: terms.clone(),
        tags: noun_run_rewrite(&tags),
    }
}

fn tag_word(word: &str, numeric: bool, prev: Option<PosTag>, lex: &Lexicon) -> PosTag {
    if numeric {
        return PosTag::D;
    }
    if lex.prepositions.contains(word) {
        return PosTag::P;
    }
    if lex.determiners.contains(word) {
        return PosTag::DT;
    }
    if lex.conjunctions.contains(word) {
        return PosTag::CJ;
    }
    if lex.pronouns.contains(word) {
        return PosTag::PR;
    }
    if lex.adverbs.contains(word) {
        return PosTag::VM;
    }
    if let Some(form) = lex.verb_form(word) {
        let also_noun = match &form {
            VerbForm::Base(_) => lex.known_nouns.contains(word),
            VerbForm::ThirdPerson(base) => lex.known_nouns.contains(base),
            VerbForm::Participle(_) => false,
        };
        let after_function_word = matches!(prev, Some(PosTag::P | PosTag::DT));
        if !(also_noun && after_function_word) {
            return PosTag::V;
        }
    }
    if looks_plural(word) && !lex.known_nouns.contains(word) {
        PosTag::NPL
    } else {
        PosTag::N
    }
}

fn looks_plural(word: &str) -> bool {
    word.len() >= 3
        && word.ends_with('s')
        && !["ss", "us", "is"]
            .iter()
            .any(|suffix| word.ends_with(suffix))
}

/// Within each maximal run of `N`/`NPL` tags, rewrites all but the last to `NM`.
pub fn noun_run_rewrite(tags: &[PosTag]) -> Vec<PosTag> {
    let mut out = tags.to_vec();
    for i in 0..out.len() {
        let next_is_noun = tags.get(i + 1).is_some_and(|t| t.is_noun());
        if tags[i].is_noun() && next_is_noun {
            out[i] = PosTag::NM;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitter::split_str;
    use proptest::prelude::*;
    use PosTag::*;

    fn tags_of(name: &str) -> Vec<PosTag> {
        tag(&split_str(name).unwrap(), &Lexicon::bundled())
            .tags()
            .to_vec()
    }

    #[test]
    fn annotated_names() {
        assert_eq!(tags_of("testStringEncryption"), [V, NM, N]);
        assert_eq!(tags_of("testParser"), [V, N]);
        assert_eq!(tags_of("setup"), [V]);
        assert_eq!(tags_of("main"), [N]);
        assert_eq!(tags_of("projectClosed"), [N, V]);
        assert_eq!(tags_of("testReadFileFromClasspath"), [V, V, N, P, N]);
        assert_eq!(tags_of("frobnicate"), [N]);
    }

    #[test]
    fn adverbs_and_determiners() {
        assert_eq!(tags_of("test_get_NotExisting")[2], VM);
        assert_eq!(tags_of("findAllWithGivenIds")[1], DT);
        assert_eq!(tags_of("deleteindexNotExists"), [N, VM, V]);
    }

    #[test]
    fn verb_noun_ambiguity_is_positional() {
        // "test" is both a verb and a known noun
        assert_eq!(tags_of("testRunsAllTests"), [V, V, DT, NPL]);
        assert_eq!(tags_of("checkTheTest"), [V, DT, N]);
    }

    #[test]
    fn digits_are_d() {
        assert_eq!(tags_of("test15_6_5"), [V, D, D, D]);
    }

    #[test]
    fn noun_runs() {
        assert_eq!(noun_run_rewrite(&[V, N, N, N]), [V, NM, NM, N]);
        assert_eq!(noun_run_rewrite(&[V, N]), [V, N]);
        assert_eq!(noun_run_rewrite(&[N, P, N]), [N, P, N]);
        assert_eq!(noun_run_rewrite(&[N, NPL]), [NM, NPL]);
    }

    #[test]
    fn display() {
        let tagged = tag(&split_str("testParser").unwrap(), &Lexicon::bundled());
        assert_eq!(tagged.to_string(), "test/V Parser/N");
    }

    #[test]
    fn tag_names_round_trip() {
        for t in PosTag::ALL {
            assert_eq!(t.as_str().parse::<PosTag>().unwrap(), t);
        }
    }

    proptest! {
        #[test]
        fn tagging_invariants(name in "[a-z][A-Za-z0-9_]{0,30}") {
            let lex = Lexicon::bundled();
            let terms = split_str(&name).unwrap();
            let tagged = tag(&terms, &lex);
            prop_assert_eq!(tagged.len(), terms.len());
            for (term, t) in terms.iter().zip(tagged.tags()) {
                prop_assert_eq!(term.is_numeric(), *t == D);
                let w = term.normalized();
                if lex.prepositions.contains(&w) { prop_assert_eq!(*t, P); }
                if lex.determiners.contains(&w) { prop_assert_eq!(*t, DT); }
                if lex.conjunctions.contains(&w) { prop_assert_eq!(*t, CJ); }
                if lex.pronouns.contains(&w) { prop_assert_eq!(*t, PR); }
            }
            for w in tagged.tags().windows(2) {
                prop_assert!(!(w[0].is_noun() && w[1].is_noun()));
            }
            prop_assert_eq!(tag(&terms, &lex), tagged);
        }
    }
}
