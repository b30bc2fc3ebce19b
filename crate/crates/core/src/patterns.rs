//! Grammar patterns, prefix patterns and the naming-template catalog.
//!
//! Templates use `+` for wildcards: `V V+` allows any (possibly empty) tail,
//! `+V` any head, and `+VM+` matches wherever `VM` occurs contiguously.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tagger::{PosTag, TaggedName};

const BUNDLED_CATALOG: &str = include_str!("../data/catalog.json");

/// A non-empty tag sequence rendered as space-joined tag names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GrammarPattern(Vec<PosTag>);

impl GrammarPattern {
    pub fn new(tags: Vec<PosTag>) -> Result<Self> {
        if tags.is_empty() {
            return Err(Error::InvalidInput(
                "grammar pattern must not be empty".into(),
            ));
        }
        Ok(GrammarPattern(tags))
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GrammarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tags(f, &self.0)
    }
}

fn write_tags(f: &mut fmt::Formatter<'_>, tags: &[PosTag]) -> fmt::Result {
    for (i, t) in tags.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(t.as_str())?;
    }
    Ok(())
}

impl FromStr for GrammarPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tags = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<PosTag>>>()?;
        GrammarPattern::new(tags)
    }
}

impl TryFrom<String> for GrammarPattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GrammarPattern> for String {
    fn from(p: GrammarPattern) -> String {
        p.to_string()
    }
}

pub fn pattern_of(name: &TaggedName) -> GrammarPattern {
    GrammarPattern(name.tags().to_vec())
}

/// First `min(k, len)` tags of `p`. `k` must be at least 1.
pub fn prefix(p: &GrammarPattern, k: usize) -> GrammarPattern {
    assert!(k >= 1, "prefix length must be positive");
    GrammarPattern(p.0[..k.min(p.len())].to_vec())
}

pub fn prefix_pair(
    old: &GrammarPattern,
    new: &GrammarPattern,
    k: usize,
) -> (GrammarPattern, GrammarPattern) {
    (prefix(old, k), prefix(new, k))
}

pub fn pattern_preserved(old: &GrammarPattern, new: &GrammarPattern) -> bool {
    old == new
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternTemplate {
    tags: Vec<PosTag>,
    leading_wildcard: bool,
    trailing_wildcard: bool,
    containment: bool,
}

impl PatternTemplate {
    pub fn new(
        tags: Vec<PosTag>,
        leading_wildcard: bool,
        trailing_wildcard: bool,
        containment: bool,
    ) -> Result<Self> {
        if tags.is_empty() {
            return Err(Error::Catalog(
                "template needs at least one concrete tag".into(),
            ));
        }
        if containment && !(leading_wildcard && trailing_wildcard) {
            return Err(Error::Catalog(
                "containment templates must carry both wildcards".into(),
            ));
        }
        Ok(PatternTemplate {
            tags,
            leading_wildcard,
            trailing_wildcard,
            containment,
        })
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.tags
    }

    pub fn leading_wildcard(&self) -> bool {
        self.leading_wildcard
    }

    pub fn trailing_wildcard(&self) -> bool {
        self.trailing_wildcard
    }

    pub fn containment(&self) -> bool {
        self.containment
    }

    /// Number of concrete tags.
    pub fn specificity(&self) -> usize {
        self.tags.len()
    }

    pub fn matches(&self, p: &GrammarPattern) -> bool {
        let (t, p) = (self.tags.as_slice(), p.tags());
        match (self.leading_wildcard, self.trailing_wildcard) {
            (false, false) => p == t,
            (false, true) => p.starts_with(t),
            (true, false) => p.ends_with(t),
            (true, true) => p.windows(t.len()).any(|w| w == t),
        }
    }
}

/// Parses the `+` notation: `V V+`, `+VM+`, `N`.
impl FromStr for PatternTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let leading = s.starts_with('+');
        let trailing = s.ends_with('+') && s.len() > 1;
        let inner = s.trim_start_matches('+').trim_end_matches('+');
        let tags = inner
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<PosTag>>>()
            .map_err(|e| Error::Catalog(format!("template {s:?}: {e}")))?;
        PatternTemplate::new(tags, leading, trailing, leading && trailing)
    }
}

impl fmt::Display for PatternTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.leading_wildcard {
            f.write_str("+")?;
        }
        write_tags(f, &self.tags)?;
        if self.trailing_wildcard {
            f.write_str("+")?;
        }
        Ok(())
    }
}

pub fn matches(t: &PatternTemplate, p: &GrammarPattern) -> bool {
    t.matches(p)
}

/// Where a template comes from: clause-style naming conventions, or patterns
/// observed in test names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Clause,
    Observed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogEntry {
    pub name: String,
    pub template: PatternTemplate,
    pub origin: Origin,
}

/// JSON form of a catalog entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    name: String,
    template: String,
    origin: Origin,
    #[serde(default)]
    containment: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Catalog> {
        if entries.is_empty() {
            return Err(Error::Catalog("catalog is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.name.as_str()) {
                return Err(Error::Catalog(format!("duplicate entry name {:?}", e.name)));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn bundled() -> Catalog {
        Catalog::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    /// Reads a JSON array of `{name, template, origin, containment?}` objects,
    /// where `template` uses the `+` notation.
    pub fn from_json(json: &str) -> Result<Catalog> {
        let records: Vec<EntryRecord> =
            serde_json::from_str(json).map_err(|e| Error::Catalog(e.to_string()))?;
        let entries = records
            .into_iter()
            .map(|r| {
                let parsed: PatternTemplate = r.template.parse()?;
                let template = PatternTemplate::new(
                    parsed.tags,
                    parsed.leading_wildcard,
                    parsed.trailing_wildcard,
                    r.containment,
                )?;
                Ok(CatalogEntry {
                    name: r.name,
                    template,
                    origin: r.origin,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Catalog::new(entries)
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Catalog::from_json(&text).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CatalogEntry> {
        self.entries.iter()
    }
}

/// Entries whose template matches `p`, most specific first, then by name.
pub fn catalog_match<'c>(p: &GrammarPattern, catalog: &'c Catalog) -> Vec<&'c CatalogEntry> {
    let mut hits: Vec<&CatalogEntry> = catalog.iter().filter(|e| e.template.matches(p)).collect();
    hits.sort_by(|a, b| {
        (Reverse(a.template.specificity()), &a.name)
            .cmp(&(Reverse(b.template.specificity()), &b.name))
    });
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use crate::splitter::split_str;
    use crate::tagger::tag;
    use proptest::prelude::*;

    fn pat(s: &str) -> GrammarPattern {
        s.parse().unwrap()
    }

    fn tmpl(s: &str) -> PatternTemplate {
        s.parse().unwrap()
    }

    fn pattern_of_name(name: &str) -> GrammarPattern {
        pattern_of(&tag(&split_str(name).unwrap(), &Lexicon::bundled()))
    }

    #[test]
    fn patterns_of_named_methods() {
        assert_eq!(pattern_of_name("testStringEncryption"), pat("V NM N"));
        assert_eq!(pattern_of_name("setup"), pat("V"));
        assert_eq!(pattern_of_name("main"), pat("N"));
    }

    #[test]
    fn prefixes() {
        assert_eq!(prefix(&pat("V NM NM N"), 2), pat("V NM"));
        assert_eq!(prefix(&pat("V V NM N P"), 5), pat("V V NM N P"));
        assert_eq!(prefix(&pat("V"), 3), pat("V"));
    }

    #[test]
    fn prefix_pairs() {
        assert_eq!(
            prefix_pair(&pat("V V NM N"), &pat("V V NM N"), 2),
            (pat("V V"), pat("V V"))
        );
        assert_eq!(
            prefix_pair(&pat("V V NM NM N"), &pat("V NM NM N"), 5),
            (pat("V V NM NM N"), pat("V NM NM N"))
        );
        assert_eq!(
            prefix_pair(&pat("V"), &pat("V N"), 3),
            (pat("V"), pat("V N"))
        );
    }

    #[test]
    fn template_matching() {
        assert!(matches(&tmpl("V V+"), &pat("V V")));
        assert!(matches(&tmpl("V V N+"), &pat("V V N P N")));
        assert!(matches(&tmpl("+VM+"), &pat("V V VM V")));
        assert!(!matches(&tmpl("V N V N+"), &pat("V NM N")));
        assert!(matches(&tmpl("+N"), &pat("V NM N")));
        assert!(!matches(&tmpl("N"), &pat("N N")));
    }

    #[test]
    fn template_notation_round_trips() {
        for s in ["V V+", "+VM+", "N", "+N", "V V N P+"] {
            assert_eq!(tmpl(s).to_string(), s);
        }
        assert!(tmpl("+DT+").containment());
        assert!("+".parse::<PatternTemplate>().is_err());
        assert!("V X+".parse::<PatternTemplate>().is_err());
    }

    #[test]
    fn preserved() {
        assert!(pattern_preserved(&pat("V NM N"), &pat("V NM N")));
        assert!(!pattern_preserved(&pat("V NM N"), &pat("V NM NM N")));
        assert!(pattern_preserved(&pat("V"), &pat("V")));
    }

    #[test]
    fn catalog_lookup() {
        let catalog = Catalog::bundled();
        let names = |p: &str| -> Vec<String> {
            catalog_match(&pat(p), &catalog)
                .into_iter()
                .map(|e| e.name.clone())
                .collect()
        };
        assert_eq!(names("V V"), ["Is and Past Principle Phrase"]);
        // V V+ also covers V V N P N under the tail-wildcard reading
        assert_eq!(
            names("V V N P N"),
            [
                "V V N P+",
                "Dual Verb Phrase",
                "Is and Past Principle Phrase"
            ]
        );
        assert!(names("D").is_empty());
        assert_eq!(names("N"), ["Noun Phrase"]);
        assert_eq!(names("V NM NM N"), ["Verb With Multiple Nouns Phrase"]);
    }

    #[test]
    fn every_catalog_template_covers_a_named_method() {
        let fixtures = [
            "testGetActions",
            "testFindResourceByName",
            "testFormUploadLargerFile",
            "testUidFetchBodyPeek",
            "main",
            "testEmployeeLastName",
            "testReadFileFromClasspath",
            "projectClosed",
            "test_get_NotExisting",
            "findAllWithGivenIds",
        ];
        let patterns: Vec<GrammarPattern> = fixtures.iter().map(|n| pattern_of_name(n)).collect();
        for entry in Catalog::bundled().iter() {
            assert!(
                patterns.iter().any(|p| entry.template.matches(p)),
                "{} matches no fixture",
                entry.name
            );
        }
    }

    #[test]
    fn catalog_rejects_duplicates_and_bad_templates() {
        let dup = r#"[{"name":"a","template":"V","origin":"clause"},
                      {"name":"a","template":"N","origin":"clause"}]"#;
        assert!(Catalog::from_json(dup).is_err());
        let bad = r#"[{"name":"a","template":"V+","origin":"clause","containment":true}]"#;
        assert!(Catalog::from_json(bad).is_err());
        assert!(Catalog::from_json("[]").is_err());
    }

    fn pattern_strategy() -> impl Strategy<Value = GrammarPattern> {
        prop::collection::vec(prop::sample::select(PosTag::ALL.to_vec()), 1..8)
            .prop_map(|tags| GrammarPattern::new(tags).unwrap())
    }

    proptest! {
        #[test]
        fn prefix_is_a_prefix(p in pattern_strategy(), k in 1usize..10) {
            let q = prefix(&p, k);
            prop_assert_eq!(q.len(), k.min(p.len()));
            prop_assert!(p.tags().starts_with(q.tags()));
        }

        #[test]
        fn catalog_order_is_deterministic(p in pattern_strategy()) {
            let catalog = Catalog::bundled();
            let a = catalog_match(&p, &catalog);
            let b = catalog_match(&p, &catalog);
            prop_assert_eq!(&a, &b);
            for w in a.windows(2) {
                prop_assert!(w[0].template.specificity() >= w[1].template.specificity());
            }
        }

        #[test]
        fn pattern_text_round_trips(p in pattern_strategy()) {
            prop_assert_eq!(p.to_string().parse::<GrammarPattern>().unwrap(), p);
        }
    }
}
