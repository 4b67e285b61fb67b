//! Cascading application of rule-sets to unknown words.
//!
//! Stages are tried in order and the first stage with a firing rule decides
//! the guess. Inside a stage the first firing rule in canonical order wins,
//! so longer affixes take precedence over shorter ones. Words no stage can
//! guess become common nouns, or proper nouns when capitalized.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lexicon::{Lexicon, StemLookup};
use crate::rule::{GuessingRule, RuleSet};
use crate::scoring::{fires, AffixIndex};
use crate::tags::{Tag, TagSet};

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    pub stages: Vec<RuleSet>,
    pub fallback_common: Tag,
    pub fallback_proper: Tag,
    pub lowercase_input: bool,
}

impl CascadeConfig {
    pub fn new(stages: Vec<RuleSet>) -> Self {
        CascadeConfig {
            stages,
            fallback_common: Tag::new("NN").unwrap(),
            fallback_proper: Tag::new("NP").unwrap(),
            lowercase_input: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Rule {
        stage: usize,
        rule: GuessingRule,
        /// The lexicon word the rule looked up; `None` for ending rules.
        stem: Option<String>,
    },
    FallbackCommon,
    FallbackProper,
}

impl Provenance {
    pub fn is_fallback(&self) -> bool {
        !matches!(self, Provenance::Rule { .. })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Rule { stage, .. } => write!(f, "rule@{stage}"),
            Provenance::FallbackCommon => f.write_str("fallback-common"),
            Provenance::FallbackProper => f.write_str("fallback-proper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuessResult {
    pub pos: TagSet,
    pub provenance: Provenance,
}

/// Serializable view of a guess, one per output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessRecord {
    pub word: String,
    pub tags: String,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

impl GuessResult {
    pub fn record(&self, word: &str, explain: bool) -> GuessRecord {
        let (rule, stem) = match (&self.provenance, explain) {
            (Provenance::Rule { rule, stem, .. }, true) => (
                Some(rule.to_string()),
                Some(stem.clone().unwrap_or_else(|| "-".into())),
            ),
            (_, true) => (Some("-".into()), Some("-".into())),
            _ => (None, None),
        };
        GuessRecord {
            word: word.to_string(),
            tags: self.pos.to_whitespace_string(),
            provenance: self.provenance.to_string(),
            rule,
            stem,
        }
    }
}

/// Reference matcher: scans `rs` in canonical order and returns the first
/// rule that fires.
pub fn guess_with_ruleset<'r, L: StemLookup + ?Sized>(
    word: &str,
    rs: &'r RuleSet,
    lexicon: &L,
) -> Option<(&'r TagSet, &'r GuessingRule)> {
    rs.iter()
        .find_map(|rule| fires(rule, word, lexicon).map(|pos| (pos, rule)))
}

/// A cascade with per-stage affix indexes, for guessing many words.
pub struct Guesser<'a> {
    cfg: &'a CascadeConfig,
    indexes: Vec<AffixIndex<'a>>,
}

impl<'a> Guesser<'a> {
    pub fn new(cfg: &'a CascadeConfig) -> Self {
        Guesser {
            cfg,
            indexes: cfg.stages.iter().map(AffixIndex::new).collect(),
        }
    }

    pub fn config(&self) -> &CascadeConfig {
        self.cfg
    }

    /// Same result as [`guess_with_ruleset`] on stage `stage`, using the
    /// affix index.
    pub fn guess_stage<L: StemLookup + ?Sized>(
        &self,
        stage: usize,
        word: &str,
        lexicon: &L,
    ) -> Option<(&'a TagSet, &'a GuessingRule)> {
        let rs = &self.cfg.stages[stage];
        self.indexes[stage].candidates(word).find_map(|i| {
            let rule = &rs.rules()[i];
            fires(rule, word, lexicon).map(|pos| (pos, rule))
        })
    }

    pub fn guess<L: StemLookup + ?Sized>(
        &self,
        word: &str,
        is_capitalized: bool,
        lexicon: &L,
    ) -> GuessResult {
        let lowered;
        let word = if self.cfg.lowercase_input {
            lowered = word.to_lowercase();
            lowered.as_str()
        } else {
            word
        };
        for stage in 0..self.cfg.stages.len() {
            if let Some((pos, rule)) = self.guess_stage(stage, word, lexicon) {
                return GuessResult {
                    pos: pos.clone(),
                    provenance: Provenance::Rule {
                        stage,
                        rule: rule.clone(),
                        stem: rule.stem_for(word),
                    },
                };
            }
        }
        if is_capitalized {
            GuessResult {
                pos: TagSet::single(self.cfg.fallback_proper.clone()),
                provenance: Provenance::FallbackProper,
            }
        } else {
            GuessResult {
                pos: TagSet::single(self.cfg.fallback_common.clone()),
                provenance: Provenance::FallbackCommon,
            }
        }
    }
}

pub fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

pub fn cascade_guess(
    word: &str,
    is_capitalized: bool,
    cfg: &CascadeConfig,
    lexicon: &Lexicon,
) -> GuessResult {
    Guesser::new(cfg).guess(word, is_capitalized, lexicon)
}

/// Guesses every word; output order matches input order.
pub fn batch_guess<S: AsRef<str> + Sync>(
    words: &[(S, bool)],
    cfg: &CascadeConfig,
    lexicon: &Lexicon,
) -> Vec<GuessResult> {
    let guesser = Guesser::new(cfg);
    words
        .par_iter()
        .map(|(w, cap)| guesser.guess(w.as_ref(), *cap, lexicon))
        .collect()
}
