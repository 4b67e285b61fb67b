//! Training lexicon and corpus frequency table.
//!
//! Both are read from line-oriented UTF-8 TSV:
//!
//! ```text
//! # lexicon: word<TAB>tag tag ...
//! book<TAB>NN VB
//! booked<TAB>JJ VBD VBN
//!
//! # frequencies: word<TAB>count
//! book<TAB>10
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tags::{Tag, TagSet};

/// Words shorter than this are excluded from evaluation and from ending-rule
/// acquisition.
pub const DEFAULT_MIN_LEN: usize = 5;

/// Default closed-class tags: determiners, prepositions, conjunctions,
/// pronouns, modals and punctuation, in both Brown and Penn spellings.
#[rustfmt::skip]
pub const DEFAULT_CLOSED_CLASS_TAGS: &[&str] = &[
    // determiners and articles
    "AT", "ABN", "ABX", "AP", "DT", "DTI", "DTS", "DTX", "PDT", "WDT",
    // prepositions, particles
    "IN", "TO", "RP",
    // conjunctions
    "CC", "CS",
    // pronouns
    "EX", "PN", "PN$", "PP$", "PP$$", "PPL", "PPLS", "PPO", "PPS", "PPSS", "PRP", "PRP$", "WP",
    "WP$", "WPO", "WPS", "WQL", "WRB",
    // modals
    "MD",
    // punctuation
    ".", ",", ":", ";", "(", ")", "--", "'", "''", "``", "`", "\"", "#", "$", "-LRB-", "-RRB-",
];

pub fn default_closed_class_tags() -> BTreeSet<Tag> {
    DEFAULT_CLOSED_CLASS_TAGS
        .iter()
        .map(|t| Tag::new(*t).expect("valid default tag"))
        .collect()
}

/// A word paired with its POS-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    pub pos: TagSet,
}

impl LexiconEntry {
    pub fn new(word: impl Into<String>, pos: TagSet) -> Result<Self> {
        let word = word.into();
        validate_word(&word)?;
        if pos.is_empty() {
            return Err(Error::invalid(format!("empty POS-class for {word:?}")));
        }
        Ok(LexiconEntry { word, pos })
    }
}

fn validate_word(word: &str) -> Result<()> {
    if word.is_empty() {
        return Err(Error::invalid("empty word"));
    }
    if word.chars().any(char::is_whitespace) {
        return Err(Error::invalid(format!("word {word:?} contains whitespace")));
    }
    if word.starts_with('#') {
        return Err(Error::invalid(format!(
            "word {word:?} starts with the comment marker"
        )));
    }
    Ok(())
}

/// Anything that can resolve a candidate stem to its POS-class.
///
/// Implemented by [`Lexicon`] and by [`Masked`], which hides one word so it
/// can be guessed as if it were unknown.
pub trait StemLookup {
    fn lookup(&self, word: &str) -> Option<&TagSet>;
}

/// Map from word to POS-class, plus the closed-class tag configuration.
///
/// Entries are kept sorted by word, which makes iteration deterministic and
/// lets induction enumerate all words sharing a prefix with a range scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, TagSet>,
    closed_class: BTreeSet<Tag>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            entries: BTreeMap::new(),
            closed_class: default_closed_class_tags(),
        }
    }
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a lexicon from entries, merging duplicates by union.
    pub fn from_entries(entries: impl IntoIterator<Item = LexiconEntry>) -> Self {
        let mut lex = Lexicon::new();
        for e in entries {
            lex.insert_entry(e);
        }
        lex
    }

    pub fn with_closed_class(mut self, tags: impl IntoIterator<Item = Tag>) -> Self {
        self.closed_class = tags.into_iter().collect();
        self
    }

    pub fn closed_class_tags(&self) -> &BTreeSet<Tag> {
        &self.closed_class
    }

    pub fn insert(&mut self, word: impl Into<String>, pos: TagSet) -> Result<()> {
        let entry = LexiconEntry::new(word, pos)?;
        self.insert_entry(entry);
        Ok(())
    }

    fn insert_entry(&mut self, entry: LexiconEntry) {
        match self.entries.get_mut(&entry.word) {
            Some(existing) => *existing = existing.union(&entry.pos),
            None => {
                self.entries.insert(entry.word, entry.pos);
            }
        }
    }

    pub fn get(&self, word: &str) -> Option<&TagSet> {
        self.entries.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in word order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &TagSet)> + '_ {
        self.entries.iter().map(|(w, p)| (w.as_str(), p))
    }

    /// All entries whose word starts with `prefix`, in word order.
    pub fn with_prefix<'a>(
        &'a self,
        prefix: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a TagSet)> + 'a {
        self.entries
            .range::<str, _>((
                std::ops::Bound::Included(prefix),
                std::ops::Bound::Unbounded,
            ))
            .take_while(move |(w, _)| w.starts_with(prefix))
            .map(|(w, p)| (w.as_str(), p))
    }

    pub fn is_closed_class(&self, pos: &TagSet) -> bool {
        pos.iter().any(|t| self.closed_class.contains(t))
    }

    /// Whether `word` takes part in evaluation: at least `min_len` characters
    /// long and carrying no closed-class tag.
    pub fn is_eval_target(&self, word: &str, min_len: usize) -> Result<bool> {
        let pos = self
            .get(word)
            .ok_or_else(|| Error::NotInLexicon(word.to_string()))?;
        Ok(self.is_target_entry(word, pos, min_len))
    }

    pub(crate) fn is_target_entry(&self, word: &str, pos: &TagSet, min_len: usize) -> bool {
        word.chars().count() >= min_len && !self.is_closed_class(pos)
    }

    /// Eval-target entries in word order.
    pub fn eval_targets(&self, min_len: usize) -> impl Iterator<Item = (&str, &TagSet)> + '_ {
        self.iter()
            .filter(move |(w, p)| self.is_target_entry(w, p, min_len))
    }

    /// Serializes to the lexicon TSV format, one entry per line in word order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (w, p) in self.iter() {
            let _ = writeln!(out, "{w}\t{}", p.to_whitespace_string());
        }
        out
    }
}

impl StemLookup for Lexicon {
    fn lookup(&self, word: &str) -> Option<&TagSet> {
        self.get(word)
    }
}

/// A lexicon view with one word hidden.
#[derive(Debug, Clone, Copy)]
pub struct Masked<'a> {
    pub lexicon: &'a Lexicon,
    pub hidden: &'a str,
}

impl StemLookup for Masked<'_> {
    fn lookup(&self, word: &str) -> Option<&TagSet> {
        if word == self.hidden {
            None
        } else {
            self.lexicon.get(word)
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Parses lexicon TSV with the default closed-class tags.
pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    let mut lex = Lexicon::new();
    for (line_no, line) in content_lines(text) {
        let (word, tags) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected word<TAB>tags"))?;
        let pos =
            TagSet::parse_whitespace(tags).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if pos.is_empty() {
            return Err(Error::parse(line_no, "empty tag list"));
        }
        lex.insert(word, pos)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    if lex.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    Ok(lex)
}

/// Corpus counts per word type. Every count is at least 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` occurrences of `word`; duplicates accumulate.
    pub fn add(&mut self, word: impl Into<String>, count: u64) -> Result<()> {
        let word = word.into();
        if count == 0 {
            return Err(Error::invalid("count must be >= 1"));
        }
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!("invalid word {word:?}")));
        }
        *self.counts.entry(word).or_insert(0) += count;
        self.total_tokens += count;
        Ok(())
    }

    /// Count for `word`, 0 when absent.
    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.counts.iter().map(|(w, c)| (w.as_str(), *c))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (w, c) in self.iter() {
            let _ = writeln!(out, "{w}\t{c}");
        }
        out
    }
}

pub fn parse_frequencies(text: &str) -> Result<FrequencyTable> {
    let mut table = FrequencyTable::new();
    for (line_no, line) in content_lines(text) {
        let (word, count) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected word<TAB>count"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid count {count:?}")))?;
        if count == 0 {
            return Err(Error::parse(line_no, "count must be >= 1"));
        }
        table
            .add(word, count)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    Ok(table)
}
