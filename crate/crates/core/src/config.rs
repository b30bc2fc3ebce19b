//! TOML configuration.
//!
//! ```toml
//! lexicon = "my-lexicon.json"       # replaces the listed word classes
//! catalog = "my-catalog.json"       # replaces the bundled catalog
//! relations = "my-relations.json"   # extends the bundled relations
//! rules = ["R1", "R3"]              # default: all
//! collection_vocabulary = ["List", "Map", "Set", "Collection", "Iterable", "[]"]
//! not_allows_assert_false = false
//! threshold = 0.6
//!
//! [format]
//! lint = "text"       # text | json
//! classify = "json"   # json | csv | md
//! report = "md"       # md | csv | json
//! ```
//!
//! Relative paths resolve against the directory holding the config file.
//! Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::format::OutputFormat;
use crate::lexicon::Lexicon;
use crate::lint::{RuleId, RuleSet};
use crate::patterns::Catalog;
use crate::relations::LexicalRelations;
use crate::renamedetect::DEFAULT_THRESHOLD;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormatDefaults {
    pub lint: Option<OutputFormat>,
    pub classify: Option<OutputFormat>,
    pub report: Option<OutputFormat>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub lexicon: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub relations: Option<PathBuf>,
    pub rules: Option<Vec<String>>,
    pub collection_vocabulary: Option<Vec<String>>,
    pub not_allows_assert_false: Option<bool>,
    pub threshold: Option<f64>,
    #[serde(default)]
    pub format: FormatDefaults,
}

impl Config {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Config> {
        let mut cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for p in [&mut cfg.lexicon, &mut cfg.catalog, &mut cfg.relations]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::from_toml(&text, base)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn validate(&self) -> Result<()> {
        if let Some(t) = self.threshold {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Config(format!("threshold {t} must be in (0, 1]")));
            }
        }
        self.rule_ids()?;
        Ok(())
    }

    fn rule_ids(&self) -> Result<Option<BTreeSet<RuleId>>> {
        self.rules
            .as_ref()
            .map(|rs| rs.iter().map(|r| r.parse()).collect())
            .transpose()
            .map_err(|e: Error| Error::Config(e.to_string()))
    }

    pub fn lexicon(&self) -> Result<Lexicon> {
        match &self.lexicon {
            Some(p) => Lexicon::load(p),
            None => Ok(Lexicon::bundled()),
        }
    }

    pub fn catalog(&self) -> Result<Catalog> {
        match &self.catalog {
            Some(p) => Catalog::load(p),
            None => Ok(Catalog::bundled()),
        }
    }

    pub fn relations(&self) -> Result<LexicalRelations> {
        match &self.relations {
            Some(p) => LexicalRelations::load(p),
            None => Ok(LexicalRelations::bundled()),
        }
    }

    pub fn rule_set(&self) -> Result<RuleSet> {
        let mut rules = RuleSet::default();
        if let Some(ids) = self.rule_ids()? {
            rules.enabled = ids;
        }
        if let Some(v) = &self.collection_vocabulary {
            rules.collection_vocabulary = v.clone();
        }
        if let Some(b) = self.not_allows_assert_false {
            rules.not_allows_assert_false = b;
        }
        Ok(rules)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(DEFAULT_THRESHOLD)
    }
}
