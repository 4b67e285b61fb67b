//! Rule extraction from lexicon-entry pairs.
//!
//! The suffix operator with mutation length `n` takes a main word, cuts its
//! last `n` characters off as the mutation `M`, and checks whether the other
//! word starts with what remains. If so, the rest of the other word is the
//! affix `S`:
//!
//! ```text
//! [advisable (JJ VBD VBN)] with [advise (NN VB)], n = 1
//!   M = "e", stem = "advis", S = "able"  ->  [able (NN VB) (JJ VBD VBN) e]
//! ```
//!
//! Extraction applies the operator to every ordered pair of distinct entries
//! and counts how many pairs produced each rule. Instead of trying all V²
//! pairs, the main word's stem is used as a range key into the sorted
//! lexicon, which visits exactly the pairs that can produce a rule.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, LexiconEntry, DEFAULT_MIN_LEN};
use crate::rule::{GuessingRule, RuleKind, RuleSet};
use crate::tags::TagSet;

/// Default raw-frequency threshold.
pub const DEFAULT_THETA_F: u64 = 3;
/// Default longest ending considered for ending rules.
pub const DEFAULT_MAX_ENDING_LEN: usize = 5;

/// Byte offset where the last `n` characters of `word` begin, or `None` when
/// `word` has `n` characters or fewer.
fn split_last_chars(word: &str, n: usize) -> Option<usize> {
    if n == 0 {
        return if word.is_empty() {
            None
        } else {
            Some(word.len())
        };
    }
    let (idx, _) = word.char_indices().rev().nth(n - 1)?;
    (idx > 0).then_some(idx)
}

/// Suffix operator. `shorter` is the main word whose last `n` characters
/// become the mutation.
pub fn nabla_suffix(
    longer: &LexiconEntry,
    shorter: &LexiconEntry,
    n: usize,
) -> Option<GuessingRule> {
    if longer.word == shorter.word {
        return None;
    }
    let cut = split_last_chars(&shorter.word, n)?;
    let (stem, mutation) = shorter.word.split_at(cut);
    let affix = longer.word.strip_prefix(stem)?;
    if affix.is_empty() {
        return None;
    }
    GuessingRule::suffix(affix, shorter.pos.clone(), longer.pos.clone(), mutation).ok()
}

/// Prefix operator: `longer` must end with the whole of `shorter`.
pub fn nabla_prefix(longer: &LexiconEntry, shorter: &LexiconEntry) -> Option<GuessingRule> {
    if longer.word == shorter.word {
        return None;
    }
    let affix = longer.word.strip_suffix(shorter.word.as_str())?;
    if affix.is_empty() {
        return None;
    }
    GuessingRule::prefix(affix, shorter.pos.clone(), longer.pos.clone()).ok()
}

/// Dense ids for the distinct POS-classes of a lexicon.
struct ClassIds<'a> {
    ids: HashMap<&'a TagSet, u32>,
    classes: Vec<&'a TagSet>,
}

impl<'a> ClassIds<'a> {
    fn new(lexicon: &'a Lexicon) -> Self {
        let mut ids = HashMap::new();
        let mut classes = Vec::new();
        for (_, pos) in lexicon.iter() {
            ids.entry(pos).or_insert_with(|| {
                classes.push(pos);
                (classes.len() - 1) as u32
            });
        }
        ClassIds { ids, classes }
    }

    fn id(&self, pos: &TagSet) -> u32 {
        self.ids[pos]
    }
}

/// Identity of a candidate morphological rule: (S, M, I, R).
type MorphKey<'a> = (&'a str, &'a str, u32, u32);

fn merge_counts<K: std::hash::Hash + Eq>(
    mut a: HashMap<K, u64>,
    b: HashMap<K, u64>,
) -> HashMap<K, u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Extracts prefix or suffix rules from all ordered entry pairs, keeping
/// those witnessed by at least `theta_f` pairs.
pub fn extract_morph_rules(
    lexicon: &Lexicon,
    kind: RuleKind,
    n: usize,
    theta_f: u64,
) -> Result<RuleSet> {
    if theta_f < 1 {
        return Err(Error::invalid("theta_f must be >= 1"));
    }
    match kind {
        RuleKind::Suffix => {}
        RuleKind::Prefix if n == 0 => {}
        RuleKind::Prefix => return Err(Error::invalid("prefix rules carry no mutation")),
        RuleKind::Ending => {
            return Err(Error::invalid("use extract_ending_rules for ending rules"))
        }
    }

    let classes = ClassIds::new(lexicon);
    let entries: Vec<(&str, u32)> = lexicon.iter().map(|(w, p)| (w, classes.id(p))).collect();

    let counts: HashMap<MorphKey<'_>, u64> = match kind {
        RuleKind::Suffix => entries
            .par_iter()
            .fold(HashMap::new, |mut acc, &(main, main_class)| {
                let Some(cut) = split_last_chars(main, n) else {
                    return acc;
                };
                let (stem, mutation) = main.split_at(cut);
                for (other, other_pos) in lexicon.with_prefix(stem) {
                    if other == main || other.len() == stem.len() {
                        continue;
                    }
                    let key = (
                        &other[stem.len()..],
                        mutation,
                        main_class,
                        classes.id(other_pos),
                    );
                    *acc.entry(key).or_insert(0) += 1;
                }
                acc
            })
            .reduce(HashMap::new, merge_counts),
        _ => {
            // Words sorted by their character-reversed form, so that all words
            // ending with a given string form one contiguous run.
            let mut reversed: Vec<(String, &str, u32)> = entries
                .iter()
                .map(|&(w, c)| (w.chars().rev().collect(), w, c))
                .collect();
            reversed.sort_unstable();
            reversed
                .par_iter()
                .fold(HashMap::new, |mut acc, (rev_main, main, main_class)| {
                    let start =
                        reversed.partition_point(|(r, _, _)| r.as_str() < rev_main.as_str());
                    for (rev_other, other, other_class) in &reversed[start..] {
                        if !rev_other.starts_with(rev_main.as_str()) {
                            break;
                        }
                        if rev_other.len() == rev_main.len() {
                            continue;
                        }
                        let affix = &other[..other.len() - main.len()];
                        let key = (affix, "", *main_class, *other_class);
                        *acc.entry(key).or_insert(0) += 1;
                    }
                    acc
                })
                .reduce(HashMap::new, merge_counts)
        }
    };

    let rules = counts
        .into_iter()
        .filter(|&(_, f)| f >= theta_f)
        .map(|((affix, mutation, i, r), f)| GuessingRule {
            kind,
            affix: affix.to_string(),
            mutation: mutation.to_string(),
            i_class: Some(classes.classes[i as usize].clone()),
            r_class: classes.classes[r as usize].clone(),
            freq: f,
            stats: None,
        })
        .collect();
    RuleSet::new(kind, n, rules)
}

/// Ending rules from eval-target words (at least [`DEFAULT_MIN_LEN`]
/// characters, open-class).
pub fn extract_ending_rules(lexicon: &Lexicon, max_len: usize, theta_f: u64) -> Result<RuleSet> {
    extract_ending_rules_with_min_len(lexicon, max_len, theta_f, DEFAULT_MIN_LEN)
}

/// Every ending of length 1..=`max_len` (shorter than the word itself) of
/// every eval-target word is a candidate `[ending - R]`; identical (ending,
/// R) pairs are merged and counted.
pub fn extract_ending_rules_with_min_len(
    lexicon: &Lexicon,
    max_len: usize,
    theta_f: u64,
    min_len: usize,
) -> Result<RuleSet> {
    if max_len < 1 {
        return Err(Error::invalid("max_len must be >= 1"));
    }
    if theta_f < 1 {
        return Err(Error::invalid("theta_f must be >= 1"));
    }
    let classes = ClassIds::new(lexicon);
    let targets: Vec<(&str, u32)> = lexicon
        .eval_targets(min_len)
        .map(|(w, p)| (w, classes.id(p)))
        .collect();

    let counts: HashMap<(&str, u32), u64> = targets
        .par_iter()
        .fold(HashMap::new, |mut acc, &(word, class)| {
            for len in 1..=max_len {
                match split_last_chars(word, len) {
                    Some(cut) => *acc.entry((&word[cut..], class)).or_insert(0) += 1,
                    None => break,
                }
            }
            acc
        })
        .reduce(HashMap::new, merge_counts);

    let rules = counts
        .into_iter()
        .filter(|&(_, f)| f >= theta_f)
        .map(|((ending, r), f)| GuessingRule {
            kind: RuleKind::Ending,
            affix: ending.to_string(),
            mutation: String::new(),
            i_class: None,
            r_class: classes.classes[r as usize].clone(),
            freq: f,
            stats: None,
        })
        .collect();
    RuleSet::new(RuleKind::Ending, 0, rules)
}
