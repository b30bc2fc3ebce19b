//! Name/body consistency rules for test methods.
//!
//! Each rule pairs a trigger on the tagged method name with an expectation
//! on the method body. A diagnostic is reported when the trigger fires and
//! the expectation fails.
//!
//! | id | trigger | expectation |
//! |----|---------|-------------|
//! | R1 | a term stemming like `fail`/`failure` | a `fail(` call |
//! | R2 | the term `true` / `false` | `assertTrue` / `assertFalse` |
//! | R3 | `not` tagged as adverb | `assertNull` or `assertNotNull` |
//! | R4 | `all` tagged as determiner, or `all of` / `at least` | a collection type or array brackets |
//! | R5 | a term stemming like `exception` | `expected` in an annotation, or an assertion/`fail(` inside a `catch` block |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::{Span, TestMethod, Token, TokenKind, TokenStream};
use crate::splitter::split_str;
use crate::stem::stem;
use crate::tagger::{PosTag, TaggedName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl RuleId {
    pub const ALL: [RuleId; 5] = [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown rule {s:?} (expected R1..R5)")))
    }
}

/// Parses a comma-separated rule list such as `R1,R3`.
pub fn parse_rule_list(s: &str) -> Result<BTreeSet<RuleId>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// Static description of a rule.
#[derive(Clone, Copy, Debug)]
pub struct Rule {
    pub id: RuleId,
    pub severity: Severity,
    pub message: &'static str,
}

pub const RULES: [Rule; 5] = [
    Rule {
        id: RuleId::R1,
        severity: Severity::Warning,
        message: "name mentions failure but the body never calls fail(...)",
    },
    Rule {
        id: RuleId::R2,
        severity: Severity::Warning,
        message: "name mentions {terms} but the body lacks {asserts}",
    },
    Rule {
        id: RuleId::R3,
        severity: Severity::Warning,
        message: "name says 'not' but the body has no assertNull/assertNotNull",
    },
    Rule {
        id: RuleId::R4,
        severity: Severity::Warning,
        message: "name quantifies over a collection but the body uses no collection type",
    },
    Rule {
        id: RuleId::R5,
        severity: Severity::Warning,
        message: "name mentions an exception but neither an expected= parameter nor an assertion in a catch block is present",
    },
];

pub fn rule(id: RuleId) -> &'static Rule {
    &RULES[id as usize]
}

pub const DEFAULT_COLLECTION_VOCABULARY: [&str; 6] =
    ["List", "Map", "Set", "Collection", "Iterable", "[]"];

/// Enabled rules and their tunables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub enabled: BTreeSet<RuleId>,
    /// Collection type names matched case-sensitively against the terms of
    /// body identifiers (`ArrayList` matches `List`); `[]` stands for array
    /// brackets.
    pub collection_vocabulary: Vec<String>,
    /// Also accept `assertFalse` as satisfying R3.
    pub not_allows_assert_false: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            enabled: RuleId::ALL.into_iter().collect(),
            collection_vocabulary: DEFAULT_COLLECTION_VOCABULARY
                .iter()
                .map(|s| s.to_string())
                .collect(),
            not_allows_assert_false: false,
        }
    }
}

impl RuleSet {
    pub fn only(rules: impl IntoIterator<Item = RuleId>) -> Self {
        RuleSet {
            enabled: rules.into_iter().collect(),
            ..RuleSet::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file: String,
    pub line: usize,
    pub name_span: Span,
    pub method: String,
    pub rule_id: RuleId,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} [{}] {}: {}",
            self.file, self.line, self.severity, self.rule_id, self.method, self.message
        )
    }
}

fn terms_with_tags(name: &TaggedName) -> impl Iterator<Item = (String, PosTag)> + '_ {
    name.pairs().map(|(t, tag)| (t.to_lowercase(), tag))
}

fn has_phrase(terms: &[String], phrase: &[&str]) -> bool {
    terms
        .windows(phrase.len())
        .any(|w| w.iter().zip(phrase).all(|(a, b)| a == b))
}

/// Boolean terms (`true`, `false`) present in the name, in that order.
fn bool_terms(name: &TaggedName) -> Vec<&'static str> {
    let terms: BTreeSet<String> = terms_with_tags(name).map(|(t, _)| t).collect();
    ["true", "false"]
        .into_iter()
        .filter(|b| terms.contains(*b))
        .collect()
}

/// Whether `id`'s trigger fires on `name`. Depends on the name alone.
pub fn triggers(id: RuleId, name: &TaggedName) -> bool {
    match id {
        RuleId::R1 => {
            let fail = [stem("fail"), stem("failure")];
            terms_with_tags(name).any(|(t, _)| fail.contains(&stem(&t)))
        }
        RuleId::R2 => !bool_terms(name).is_empty(),
        RuleId::R3 => terms_with_tags(name).any(|(t, tag)| t == "not" && tag == PosTag::VM),
        RuleId::R4 => {
            let terms: Vec<String> = terms_with_tags(name).map(|(t, _)| t).collect();
            terms_with_tags(name).any(|(t, tag)| t == "all" && tag == PosTag::DT)
                || has_phrase(&terms, &["all", "of"])
                || has_phrase(&terms, &["at", "least"])
        }
        RuleId::R5 => {
            let exception = stem("exception");
            terms_with_tags(name).any(|(t, _)| stem(&t) == exception)
        }
    }
}

fn mentions_collection(body: &TokenStream, vocabulary: &[String]) -> bool {
    let brackets = vocabulary.iter().any(|v| v == "[]" || v == "[");
    body.iter().any(|t| match t.kind {
        TokenKind::Punctuation => brackets && t.text == "[",
        TokenKind::Word => split_str(&t.text).is_ok_and(|seq| {
            seq.iter()
                .any(|term| vocabulary.iter().any(|v| v == &term.text))
        }),
        _ => false,
    })
}

fn is_assertion_or_fail(tokens: &[Token], k: usize) -> bool {
    let t = &tokens[k];
    t.kind == TokenKind::Word
        && (t.text.starts_with("assert") || t.text == "fail")
        && tokens.get(k + 1).is_some_and(|n| n.is_punct("("))
}

fn closing(tokens: &[Token], open: usize, l: &str, r: &str) -> usize {
    let mut depth = 0usize;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.is_punct(l) {
            depth += 1;
        } else if t.is_punct(r) {
            depth = depth.saturating_sub(1);
            if depth == 0 {
                return k;
            }
        }
    }
    tokens.len()
}

fn asserts_in_catch(body: &TokenStream) -> bool {
    let tokens = body.tokens();
    tokens.iter().enumerate().any(|(k, t)| {
        if !t.is_word("catch") || !tokens.get(k + 1).is_some_and(|n| n.is_punct("(")) {
            return false;
        }
        let params_end = closing(tokens, k + 1, "(", ")");
        let open = params_end + 1;
        if !tokens.get(open).is_some_and(|n| n.is_punct("{")) {
            return false;
        }
        let end = closing(tokens, open, "{", "}");
        (open + 1..end).any(|j| is_assertion_or_fail(tokens, j))
    })
}

/// Whether `method` meets `id`'s expectation for this `name`. Rules whose
/// trigger does not fire are vacuously satisfied.
pub fn satisfied(id: RuleId, method: &TestMethod, name: &TaggedName, rules: &RuleSet) -> bool {
    missing(id, method, name, rules).is_none()
}

/// `None` when satisfied, otherwise the diagnostic message.
fn missing(id: RuleId, method: &TestMethod, name: &TaggedName, rules: &RuleSet) -> Option<String> {
    if !triggers(id, name) {
        return None;
    }
    let body = &method.body_tokens;
    let ok = match id {
        RuleId::R1 => body.has_call("fail"),
        RuleId::R2 => {
            let lacking: Vec<(&str, String)> = bool_terms(name)
                .into_iter()
                .map(|b| (b, format!("assert{}{}", b[..1].to_uppercase(), &b[1..])))
                .filter(|(_, a)| !body.has_word(a))
                .collect();
            if lacking.is_empty() {
                true
            } else {
                let terms: Vec<String> = lacking.iter().map(|(b, _)| format!("'{b}'")).collect();
                let asserts: Vec<&str> = lacking.iter().map(|(_, a)| a.as_str()).collect();
                return Some(
                    rule(id)
                        .message
                        .replace("{terms}", &terms.join(" and "))
                        .replace("{asserts}", &asserts.join(" and ")),
                );
            }
        }
        RuleId::R3 => {
            body.has_word("assertNull")
                || body.has_word("assertNotNull")
                || (rules.not_allows_assert_false && body.has_word("assertFalse"))
        }
        RuleId::R4 => mentions_collection(body, &rules.collection_vocabulary),
        RuleId::R5 => {
            method.annotations.iter().any(|a| a.contains("expected")) || asserts_in_catch(body)
        }
    };
    (!ok).then(|| rule(id).message.to_string())
}

/// Diagnostics for one method. `file` is left empty; [`lint_all`] fills it.
pub fn lint(method: &TestMethod, name: &TaggedName, rules: &RuleSet) -> Vec<Diagnostic> {
    rules
        .enabled
        .iter()
        .filter_map(|&id| {
            missing(id, method, name, rules).map(|message| Diagnostic {
                file: String::new(),
                line: method.line,
                name_span: method.name_span,
                method: method.name.to_string(),
                rule_id: id,
                severity: rule(id).severity,
                message,
            })
        })
        .collect()
}

/// Lints every test method of a file, tagging names with `lexicon`.
pub fn lint_all(
    file: &str,
    methods: &[TestMethod],
    lexicon: &crate::lexicon::Lexicon,
    rules: &RuleSet,
) -> Vec<Diagnostic> {
    methods
        .iter()
        .filter(|m| crate::extraction::is_test_method(m))
        .flat_map(|m| {
            let name = crate::tagger::tag(&crate::splitter::split(&m.name), lexicon);
            lint(m, &name, rules).into_iter().map(|mut d| {
                d.file = file.to_string();
                d
            })
        })
        .collect()
}
