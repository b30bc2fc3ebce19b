//! Test-method rename detection between two versions of a file.
//!
//! Methods present only in the old version are paired with methods present
//! only in the new one by the Dice coefficient of their body-token bigrams,
//! greedily from the most similar pair down.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::{
    extract_methods, is_test_method, PartialParse, SourceFile, TestMethod, TokenStream,
};
use crate::rename::RenameEvent;

pub const DEFAULT_THRESHOLD: f64 = 0.6;

/// Bodies whose bigram multisets coincide but whose token sequences differ
/// score just below 1, so a threshold of 1 only accepts identical bodies.
const NEAR_ONE: f64 = 1.0 - 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileVersionPair {
    pub before: SourceFile,
    pub after: SourceFile,
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(SimilarityScore(value))
        } else {
            Err(Error::InvalidInput(format!(
                "similarity {value} outside [0, 1]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn bigrams(ts: &TokenStream) -> BTreeMap<(&str, &str), usize> {
    let mut out = BTreeMap::new();
    for w in ts.tokens().windows(2) {
        *out.entry((w[0].text.as_str(), w[1].text.as_str()))
            .or_default() += 1;
    }
    out
}

fn same_tokens(a: &TokenStream, b: &TokenStream) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.kind == y.kind && x.text == y.text)
}

/// Dice coefficient over token-bigram multisets, `2|A∩B| / (|A|+|B|)`.
/// Two bodies without bigrams score 1 when their tokens agree, else 0.
pub fn body_similarity(a: &TokenStream, b: &TokenStream) -> SimilarityScore {
    let (ba, bb) = (bigrams(a), bigrams(b));
    let (na, nb): (usize, usize) = (ba.values().sum(), bb.values().sum());
    if na + nb == 0 {
        return SimilarityScore(if same_tokens(a, b) { 1.0 } else { 0.0 });
    }
    let shared: usize = ba
        .iter()
        .map(|(k, &n)| n.min(bb.get(k).copied().unwrap_or(0)))
        .sum();
    let dice = 2.0 * shared as f64 / (na + nb) as f64;
    if dice >= 1.0 && !same_tokens(a, b) {
        return SimilarityScore(NEAR_ONE);
    }
    SimilarityScore(dice)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectedRename {
    #[serde(flatten)]
    pub event: RenameEvent,
    pub score: SimilarityScore,
}

fn test_methods(src: &SourceFile) -> Vec<TestMethod> {
    extract_methods(src)
        .unwrap_or_else(PartialParse::into_recovered)
        .into_iter()
        .filter(is_test_method)
        .collect()
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "threshold {threshold} must be in (0, 1]"
        )))
    }
}

/// Greedy one-to-one matching of `(removed, added)` index pairs from a score
/// matrix, keeping pairs scoring at least `threshold`. Ties go to the
/// earlier removed, then earlier added, method.
pub fn greedy_match(scores: &[Vec<f64>], threshold: f64) -> Vec<(usize, usize, f64)> {
    let mut candidates: Vec<(usize, usize, f64)> = scores
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().map(move |(a, &s)| (r, a, s)))
        .filter(|&(_, _, s)| s >= threshold)
        .collect();
    candidates.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1)));

    let (mut used_r, mut used_a) = (BTreeSet::new(), BTreeSet::new());
    let mut out = Vec::new();
    for (r, a, s) in candidates {
        if !used_r.contains(&r) && !used_a.contains(&a) {
            used_r.insert(r);
            used_a.insert(a);
            out.push((r, a, s));
        }
    }
    out
}

/// Renames of test methods between the two versions. Methods are compared by
/// exact name; parameters are ignored. A partial parse on either side uses
/// the methods recovered from it. Results follow the old version's order.
pub fn detect_renames(pair: &FileVersionPair, threshold: f64) -> Result<Vec<DetectedRename>> {
    check_threshold(threshold)?;
    let before = test_methods(&pair.before);
    let after = test_methods(&pair.after);
    let before_names: BTreeSet<&str> = before.iter().map(|m| m.name.as_str()).collect();
    let after_names: BTreeSet<&str> = after.iter().map(|m| m.name.as_str()).collect();

    let removed: Vec<&TestMethod> = before
        .iter()
        .filter(|m| !after_names.contains(m.name.as_str()))
        .collect();
    let added: Vec<&TestMethod> = after
        .iter()
        .filter(|m| !before_names.contains(m.name.as_str()))
        .collect();

    let scores: Vec<Vec<f64>> = removed
        .iter()
        .map(|r| {
            added
                .iter()
                .map(|a| body_similarity(&r.body_tokens, &a.body_tokens).value())
                .collect()
        })
        .collect();

    let file = (!pair.after.path.is_empty()).then(|| pair.after.path.clone());
    let mut matched = greedy_match(&scores, threshold);
    matched.sort_by_key(|&(r, _, _)| r);
    let mut out = Vec::new();
    for (r, a, s) in matched {
        let (old, new) = (&removed[r].name, &added[a].name);
        if old == new {
            continue;
        }
        let mut event = RenameEvent::new(old.clone(), new.clone())?;
        event.file = file.clone();
        out.push(DetectedRename {
            event,
            score: SimilarityScore(s),
        });
    }
    Ok(out)
}
