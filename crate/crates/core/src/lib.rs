//! Grammar-pattern analysis of unit-test method names.
//!
//! The pipeline splits identifiers into terms ([`splitter`]), tags each term
//! with a part of speech ([`tagger`]), derives grammar patterns and matches
//! them against a naming-template catalog ([`patterns`]). Around that core
//! sit rename classification ([`rename`]), Java test-method extraction
//! ([`extraction`]), name/body consistency rules ([`lint`]), rename
//! detection between two file versions ([`renamedetect`]) and corpus
//! reporting ([`report`]).

pub mod config;
pub mod error;
pub mod extraction;
pub mod format;
pub mod lexicon;
pub mod lint;
pub mod patterns;
pub mod relations;
pub mod rename;
pub mod renamedetect;
pub mod report;
pub mod splitter;
pub mod stem;
pub mod tagger;
pub mod vocab;

pub use config::Config;
pub use error::{Error, Result};
pub use extraction::{SourceFile, TestMethod, TokenStream};
pub use format::OutputFormat;
pub use lexicon::Lexicon;
pub use lint::{Diagnostic, RuleId, RuleSet};
pub use patterns::{Catalog, CatalogEntry, GrammarPattern, PatternTemplate};
pub use relations::{LexicalRelations, WordRelationProvider};
pub use rename::{
    FormCategory, RenameClassification, RenameClassifier, RenameEvent, SemanticCategory,
    TermRelation,
};
pub use report::CorpusStats;
pub use splitter::{RawIdentifier, Term, TermSequence};
pub use tagger::{PosTag, TaggedName};
