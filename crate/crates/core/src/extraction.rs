//! Lexical extraction of test methods from Java-like source text.
//!
//! There is no parser here: a tokenizer that understands comments and
//! literals feeds a signature heuristic (`name ( ... ) [throws ...] {`
//! preceded by a type) and a brace matcher. That is enough for the
//! token-level checks in [`crate::lint`] and tolerates snapshots that would
//! not compile.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::splitter::RawIdentifier;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile {
            path: path.into(),
            text: text.into(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(SourceFile::new(path.display().to_string(), text))
    }

    /// 1-based line number of a byte offset.
    pub fn line_of(&self, offset: usize) -> usize {
        line_of(&self.text, offset)
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

/// Half-open byte range.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn contains(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn shifted(self, by: usize) -> Span {
        Span::new(self.start + by, self.end + by)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Punctuation,
    /// String, text-block and char literals, quotes included.
    StringLiteral,
    Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_word(&self, w: &str) -> bool {
        self.kind == TokenKind::Word && self.text == w
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuation && self.text == p
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenStream {
    tokens: Vec<Token>,
}

impl TokenStream {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.text.as_str())
    }

    /// Any word token equal to `w`.
    pub fn has_word(&self, w: &str) -> bool {
        self.tokens.iter().any(|t| t.is_word(w))
    }

    /// A word token `w` directly followed by `(`.
    pub fn has_call(&self, w: &str) -> bool {
        self.tokens
            .windows(2)
            .any(|p| p[0].is_word(w) && p[1].is_punct("("))
    }
}

impl From<Vec<Token>> for TokenStream {
    fn from(tokens: Vec<Token>) -> Self {
        TokenStream { tokens }
    }
}

impl<'a> IntoIterator for &'a TokenStream {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit() || c.is_alphanumeric()
}

/// Splits `text` into tokens, dropping whitespace and comments. Unterminated
/// comments and literals run to end of input.
pub fn tokenize(text: &str) -> TokenStream {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();

    let find_from = |from: usize, pat: &str| text[from..].find(pat).map(|i| from + i);
    // end offset of a quoted literal starting at `start` (after the opening quote)
    let scan_quoted = |start: usize, quote: u8| {
        let mut i = start;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => i += 2,
                b if b == quote => return i + 1,
                b'\n' if quote == b'\'' => return i,
                _ => i += 1,
            }
        }
        bytes.len()
    };

    while let Some(&(i, c)) = chars.peek() {
        let (kind, end) = if c.is_whitespace() {
            chars.next();
            continue;
        } else if text[i..].starts_with("//") {
            let end = find_from(i, "\n").unwrap_or(text.len());
            skip_to(&mut chars, end);
            continue;
        } else if text[i..].starts_with("/*") {
            let end = find_from(i + 2, "*/").map_or(text.len(), |e| e + 2);
            skip_to(&mut chars, end);
            continue;
        } else if text[i..].starts_with("\"\"\"") {
            let end = find_text_block_end(text, i + 3);
            (TokenKind::StringLiteral, end)
        } else if c == '"' {
            (TokenKind::StringLiteral, scan_quoted(i + 1, b'"'))
        } else if c == '\'' {
            (TokenKind::StringLiteral, scan_quoted(i + 1, b'\''))
        } else if c.is_ascii_digit() {
            let mut end = i;
            let mut prev = '\0';
            for (j, d) in text[i..].char_indices() {
                let sign_in_exponent = (d == '+' || d == '-')
                    && matches!(prev, 'e' | 'E')
                    && !text[i..].starts_with("0x");
                if d.is_ascii_alphanumeric() || d == '.' || d == '_' || sign_in_exponent {
                    end = i + j + d.len_utf8();
                    prev = d;
                } else {
                    break;
                }
            }
            (TokenKind::Number, end)
        } else if is_ident_start(c) {
            let end = text[i..]
                .char_indices()
                .find(|&(_, d)| !is_ident_char(d))
                .map_or(text.len(), |(j, _)| i + j);
            (TokenKind::Word, end)
        } else {
            (TokenKind::Punctuation, i + c.len_utf8())
        };
        let end = ceil_boundary(text, end);
        tokens.push(Token {
            kind,
            text: text[i..end].to_string(),
            span: Span::new(i, end),
        });
        skip_to(&mut chars, end);
    }
    TokenStream { tokens }
}

fn ceil_boundary(text: &str, mut i: usize) -> usize {
    i = i.min(text.len());
    while !text.is_char_boundary(i) {
        i += 1;
    }
    i
}

fn find_text_block_end(text: &str, from: usize) -> usize {
    let bytes = text.as_bytes();
    let mut i = from;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            i += 2;
        } else if bytes[i..].starts_with(b"\"\"\"") {
            return i + 3;
        } else {
            i += 1;
        }
    }
    text.len()
}

fn skip_to(chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>, end: usize) {
    while chars.peek().is_some_and(|&(j, _)| j < end) {
        chars.next();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestMethod {
    pub name: RawIdentifier,
    /// Raw annotation text including arguments, e.g. `@Test(expected = X.class)`.
    pub annotations: Vec<String>,
    pub body_tokens: TokenStream,
    pub name_span: Span,
    /// From the opening to the closing brace, both included.
    pub body_span: Span,
    /// 1-based line of the name.
    pub line: usize,
}

impl TestMethod {
    /// Simple name of each annotation, without `@`, package or arguments.
    pub fn annotation_names(&self) -> impl Iterator<Item = &str> {
        self.annotations.iter().map(|a| annotation_name(a))
    }

    fn shifted(mut self, by: usize, lines: usize) -> TestMethod {
        self.name_span = self.name_span.shifted(by);
        self.body_span = self.body_span.shifted(by);
        self.line += lines;
        for t in &mut self.body_tokens.tokens {
            t.span = t.span.shifted(by);
        }
        self
    }
}

fn annotation_name(annotation: &str) -> &str {
    let head = annotation
        .trim_start_matches('@')
        .split('(')
        .next()
        .unwrap_or("")
        .trim();
    head.rsplit('.').next().unwrap_or(head).trim()
}

/// Extraction stopped at unbalanced braces; the complete methods seen before
/// that point are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialParse {
    pub path: String,
    pub message: String,
    pub recovered: Vec<TestMethod>,
}

impl fmt::Display for PartialParse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} method(s) recovered)",
            self.path,
            self.message,
            self.recovered.len()
        )
    }
}

impl std::error::Error for PartialParse {}

impl PartialParse {
    pub fn into_recovered(self) -> Vec<TestMethod> {
        self.recovered
    }
}

const NOT_METHOD_NAMES: &[&str] = &[
    "if",
    "for",
    "while",
    "switch",
    "catch",
    "synchronized",
    "return",
    "new",
    "else",
    "try",
    "do",
    "super",
    "this",
    "throw",
    "assert",
    "case",
    "finally",
];

/// Index of the token closing the bracket opened at `open`.
fn matching(tokens: &[Token], open: usize, l: &str, r: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.is_punct(l) {
            depth += 1;
        } else if t.is_punct(r) {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}

/// Parses an annotation at `at` (the `@` token). Returns the index after it.
fn annotation_end(tokens: &[Token], at: usize) -> usize {
    let mut k = at + 1;
    if tokens.get(k).is_none_or(|t| t.kind != TokenKind::Word) {
        return at + 1;
    }
    k += 1;
    while tokens.get(k).is_some_and(|t| t.is_punct("."))
        && tokens.get(k + 1).is_some_and(|t| t.kind == TokenKind::Word)
    {
        k += 2;
    }
    if tokens.get(k).is_some_and(|t| t.is_punct("(")) {
        if let Some(close) = matching(tokens, k, "(", ")") {
            return close + 1;
        }
    }
    k
}

/// If a method body starts after the parameter list closing at `close`,
/// returns the index of its `{`.
fn body_open(tokens: &[Token], close: usize) -> Option<usize> {
    let mut k = close + 1;
    if tokens.get(k).is_some_and(|t| t.is_word("throws")) {
        k += 1;
        while tokens
            .get(k)
            .is_some_and(|t| t.kind == TokenKind::Word || t.is_punct(".") || t.is_punct(","))
        {
            k += 1;
        }
    }
    tokens.get(k).filter(|t| t.is_punct("{")).map(|_| k)
}

fn declares_method(tokens: &[Token], k: usize) -> bool {
    let name = &tokens[k];
    if name.kind != TokenKind::Word || NOT_METHOD_NAMES.contains(&name.text.as_str()) {
        return false;
    }
    if !tokens.get(k + 1).is_some_and(|t| t.is_punct("(")) {
        return false;
    }
    // the previous token must end a type (or be a modifier, for constructors)
    match k.checked_sub(1).map(|p| &tokens[p]) {
        Some(prev) if prev.kind == TokenKind::Word => !matches!(
            prev.text.as_str(),
            "new" | "return" | "throw" | "else" | "case"
        ),
        Some(prev) => prev.is_punct(">") || prev.is_punct("]"),
        None => false,
    }
}

/// Extracts every method declaration with its annotations and body.
/// Methods in nested and anonymous classes are included. Unbalanced braces
/// yield a [`PartialParse`] carrying the methods recovered so far.
pub fn extract_methods(src: &SourceFile) -> Result<Vec<TestMethod>, PartialParse> {
    let stream = tokenize(&src.text);
    let tokens = stream.tokens();
    let mut methods = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut depth: i64 = 0;
    let mut k = 0;

    let partial = |message: String, methods: Vec<TestMethod>| PartialParse {
        path: src.path.clone(),
        message,
        recovered: methods,
    };

    while k < tokens.len() {
        let t = &tokens[k];
        if t.is_punct("@") && !tokens.get(k + 1).is_some_and(|n| n.is_word("interface")) {
            let end = annotation_end(tokens, k);
            let span = Span::new(t.span.start, tokens[end - 1].span.end);
            pending.push(src.text[span.start..span.end].to_string());
            k = end;
            continue;
        }
        if declares_method(tokens, k) {
            if let Some(close) = matching(tokens, k + 1, "(", ")") {
                if let Some(open) = body_open(tokens, close) {
                    let Some(end) = matching(tokens, open, "{", "}") else {
                        let line = src.line_of(tokens[open].span.start);
                        return Err(partial(
                            format!("unclosed body of {} at line {line}", t.text),
                            methods,
                        ));
                    };
                    if let Ok(name) = RawIdentifier::new(t.text.clone()) {
                        methods.push(TestMethod {
                            name,
                            annotations: std::mem::take(&mut pending),
                            body_tokens: tokens[open + 1..end].to_vec().into(),
                            name_span: t.span,
                            body_span: Span::new(tokens[open].span.start, tokens[end].span.end),
                            line: src.line_of(t.span.start),
                        });
                    }
                    pending.clear();
                    // continue inside the body to pick up nested methods
                    depth += 1;
                    k = open + 1;
                    continue;
                }
            }
        }
        if t.is_punct("{") {
            depth += 1;
            pending.clear();
        } else if t.is_punct("}") {
            depth -= 1;
            pending.clear();
            if depth < 0 {
                let line = src.line_of(t.span.start);
                return Err(partial(format!("unmatched '}}' at line {line}"), methods));
            }
        } else if t.is_punct(";") || t.is_punct("=") {
            pending.clear();
        }
        k += 1;
    }
    if depth != 0 {
        return Err(partial(
            format!("{depth} unclosed brace(s) at end of input"),
            methods,
        ));
    }
    Ok(methods)
}

/// Concatenation helper used by tests and callers that stitch sources:
/// results of the second file are shifted by the length of the first.
pub fn shift_methods(methods: Vec<TestMethod>, text_before: &str) -> Vec<TestMethod> {
    let lines = text_before.bytes().filter(|&b| b == b'\n').count();
    methods
        .into_iter()
        .map(|m| m.shifted(text_before.len(), lines))
        .collect()
}

/// Qualified names imported by `import` statements (static imports
/// included, without the `static` keyword).
pub fn imports(text: &str) -> Vec<String> {
    let stream = tokenize(text);
    let tokens = stream.tokens();
    let mut out = Vec::new();
    for (k, t) in tokens.iter().enumerate() {
        if !t.is_word("import") {
            continue;
        }
        let mut j = k + 1;
        if tokens.get(j).is_some_and(|t| t.is_word("static")) {
            j += 1;
        }
        let mut name = String::new();
        while let Some(t) = tokens.get(j) {
            if t.kind == TokenKind::Word || t.is_punct(".") || t.is_punct("*") {
                name.push_str(&t.text);
                j += 1;
            } else {
                break;
            }
        }
        if tokens.get(j).is_some_and(|t| t.is_punct(";")) && !name.is_empty() {
            out.push(name);
        }
    }
    out
}

/// `org.junit...` (JUnit 5's `org.junit.jupiter` included) or `junit....`.
pub fn is_junit_import(name: &str) -> bool {
    name == "org.junit" || name.starts_with("org.junit.") || name.starts_with("junit.")
}

pub fn is_test_method(m: &TestMethod) -> bool {
    m.annotation_names().any(|n| n == "Test") || m.name.as_str().to_lowercase().starts_with("test")
}

/// A JUnit import plus at least one test method. Methods recovered from a
/// partial parse count.
pub fn is_test_file(src: &SourceFile) -> bool {
    if !imports(&src.text).iter().any(|i| is_junit_import(i)) {
        return false;
    }
    let methods = extract_methods(src).unwrap_or_else(PartialParse::into_recovered);
    methods.iter().any(is_test_method)
}
