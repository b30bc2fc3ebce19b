//! Naive recount of corpus statistics, written independently of the report
//! module: string keys, linear-scan counters, prefixes cut from the rendered
//! pattern text.

use testlens_core::rename::RenameClassification;
use testlens_core::report::CorpusStats;
use testlens_core::Catalog;

pub type Counts = Vec<(String, u64)>;

fn inc(v: &mut Counts, key: String) {
    for entry in v.iter_mut() {
        if entry.0 == key {
            entry.1 += 1;
            return;
        }
    }
    v.push((key, 1));
}

fn sorted(mut v: Counts) -> Counts {
    v.sort();
    v
}

fn cut(pattern: &str, k: usize) -> String {
    pattern.split(' ').take(k).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, PartialEq, Eq)]
pub struct Recount {
    pub events: u64,
    pub old: Counts,
    pub new: Counts,
    pub pairs: Counts,
    pub prefix: Counts,
    pub forms: Counts,
    pub semantics: Counts,
    pub semantic_pairs: Counts,
    pub terms: Counts,
    pub catalog: Counts,
}

pub fn recount(cs: &[RenameClassification], catalog: &Catalog) -> Recount {
    let mut r = Recount {
        events: 0,
        old: vec![],
        new: vec![],
        pairs: vec![],
        prefix: vec![],
        forms: vec![],
        semantics: vec![],
        semantic_pairs: vec![],
        terms: vec![],
        catalog: vec![],
    };
    for c in cs {
        let (o, n) = (c.old_pattern.to_string(), c.new_pattern.to_string());
        r.events += 1;
        inc(&mut r.old, o.clone());
        inc(&mut r.new, n.clone());
        inc(&mut r.pairs, format!("{o} -> {n}"));
        for k in 2..=5 {
            inc(
                &mut r.prefix,
                format!("{k}: {} -> {}", cut(&o, k), cut(&n, k)),
            );
        }
        inc(&mut r.forms, format!("{:?}", c.form));
        inc(&mut r.semantics, format!("{:?}", c.semantics));
        inc(
            &mut r.semantic_pairs,
            format!("{o} -> {n} / {:?}", c.semantics),
        );
        for p in &c.pairs {
            let digits = |s: &str| s.bytes().any(|b| b.is_ascii_digit());
            if !digits(&p.added) && !digits(&p.removed) {
                inc(&mut r.terms, format!("{} <- {}", p.added, p.removed));
            }
        }
        for e in catalog.iter() {
            let a = e.template.matches(&c.old_pattern);
            let b = e.template.matches(&c.new_pattern);
            if a || b {
                inc(&mut r.catalog, format!("{} / instances", e.name));
            }
            if a && b {
                inc(&mut r.catalog, format!("{} / preserved", e.name));
            }
        }
    }
    Recount {
        events: r.events,
        old: sorted(r.old),
        new: sorted(r.new),
        pairs: sorted(r.pairs),
        prefix: sorted(r.prefix),
        forms: sorted(r.forms),
        semantics: sorted(r.semantics),
        semantic_pairs: sorted(r.semantic_pairs),
        terms: sorted(r.terms),
        catalog: sorted(r.catalog),
    }
}

/// The same shape, read off a [`CorpusStats`].
pub fn flatten(s: &CorpusStats) -> Recount {
    let mut catalog = vec![];
    for (name, t) in &s.catalog_tally {
        if t.instances > 0 {
            catalog.push((format!("{name} / instances"), t.instances));
        }
        if t.preserved_after_rename > 0 {
            catalog.push((format!("{name} / preserved"), t.preserved_after_rename));
        }
    }
    Recount {
        events: s.events,
        old: sorted(
            s.full_pattern_counts_old
                .iter()
                .map(|(k, &v)| (k.to_string(), v))
                .collect(),
        ),
        new: sorted(
            s.full_pattern_counts_new
                .iter()
                .map(|(k, &v)| (k.to_string(), v))
                .collect(),
        ),
        pairs: sorted(
            s.pattern_pair_counts
                .iter()
                .map(|((o, n), &v)| (format!("{o} -> {n}"), v))
                .collect(),
        ),
        prefix: sorted(
            s.prefix_pair_counts
                .iter()
                .map(|((k, (o, n)), &v)| (format!("{k}: {o} -> {n}"), v))
                .collect(),
        ),
        forms: sorted(
            s.form_counts
                .iter()
                .map(|(k, &v)| (format!("{k:?}"), v))
                .collect(),
        ),
        semantics: sorted(
            s.semantic_counts
                .iter()
                .map(|(k, &v)| (format!("{k:?}"), v))
                .collect(),
        ),
        semantic_pairs: sorted(
            s.semantic_by_pattern_pair
                .iter()
                .map(|(((o, n), c), &v)| (format!("{o} -> {n} / {c:?}"), v))
                .collect(),
        ),
        terms: sorted(
            s.term_pair_counts
                .iter()
                .map(|((a, r), &v)| (format!("{a} <- {r}"), v))
                .collect(),
        ),
        catalog: sorted(catalog),
    }
}
