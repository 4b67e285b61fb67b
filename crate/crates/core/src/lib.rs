//! Unsupervised acquisition of word-POS guessing rules.
//!
//! Rules are learned from a lexicon (word to POS-class) plus corpus word
//! frequencies, with no annotated training text:
//!
//! 1. [`induction`] extracts prefix rules, suffix rules with an optional
//!    mutation of the last letters of the main word, and ending rules.
//! 2. [`scoring`] replays each rule over corpus tokens, scores it, and
//!    sweeps score thresholds.
//! 3. [`guesser`] applies thresholded rule-sets as a cascade.
//! 4. [`eval`] measures precision, recall and coverage of a cascade.
//!
//! ```
//! use morphguess::{extract_morph_rules, parse_lexicon, RuleKind};
//!
//! let lexicon = parse_lexicon("deny\tNN VB\ndenied\tJJ VBD VBN\n").unwrap();
//! let rules = extract_morph_rules(&lexicon, RuleKind::Suffix, 1, 1).unwrap();
//! assert_eq!(rules.rules()[0].to_string(), "[ied (NN VB) (JJ VBD VBN) y]");
//! ```

pub mod error;
pub mod eval;
pub mod guesser;
pub mod induction;
pub mod lexicon;
pub mod rule;
pub mod scoring;
pub mod tags;

pub use error::{Error, Result};
pub use eval::{
    evaluate_corpus, evaluate_lexicon, evaluate_words, pr_of_guess, tagging_scores, EvalReport,
    EvalSummary, Metrics, TaggingCounts, TaggingScore, Weighting,
};
pub use guesser::{
    batch_guess, cascade_guess, guess_with_ruleset, CascadeConfig, GuessResult, Guesser, Provenance,
};
pub use induction::{
    extract_ending_rules, extract_ending_rules_with_min_len, extract_morph_rules, nabla_prefix,
    nabla_suffix, DEFAULT_MAX_ENDING_LEN, DEFAULT_THETA_F,
};
pub use lexicon::{
    parse_frequencies, parse_lexicon, FrequencyTable, Lexicon, LexiconEntry, Masked, StemLookup,
    DEFAULT_MIN_LEN,
};
pub use rule::{GuessingRule, RuleKind, RuleSet, RuleStats};
pub use scoring::{
    fires, rule_outcomes, score, score_ruleset, sweep_thresholds, threshold_filter, RuleOutcome,
    SweepReport, SweepRow,
};
pub use tags::{Tag, TagSet};
