//! Rule scoring, score-threshold filtering and threshold sweeps.
//!
//! Each rule is replayed over every corpus token of a lexicon word. A firing
//! is a success when the guessed class equals the word's lexicon class
//! exactly. With `x` successes out of `n` firings the rule gets
//!
//! ```text
//! p = (x + 0.5) / (n + 1)
//! score = p - 1.65 * sqrt(p * (1 - p) / n) / (1 + ln |S|)
//! ```
//!
//! i.e. the lower end of a one-sided 95% interval on the smoothed success
//! rate, with the interval shrunk for longer affixes.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{evaluate_words, Metrics};
use crate::guesser::CascadeConfig;
use crate::lexicon::{FrequencyTable, Lexicon, StemLookup};
use crate::rule::{GuessingRule, RuleKind, RuleSet, RuleStats};
use crate::tags::TagSet;

/// Critical value of the one-sided 95% normal interval.
const Z_95: f64 = 1.65;

/// Default threshold grid: 0.50, 0.55, ..., 0.95.
pub fn default_grid() -> Vec<f64> {
    (10..=19).map(|i| f64::from(i * 5) / 100.0).collect()
}

/// The class `rule` assigns to `word`, if it fires.
pub fn fires<'r, L: StemLookup + ?Sized>(
    rule: &'r GuessingRule,
    word: &str,
    lexicon: &L,
) -> Option<&'r TagSet> {
    match rule.kind {
        RuleKind::Ending => (word.ends_with(rule.affix.as_str()) && word.len() > rule.affix.len())
            .then_some(&rule.r_class),
        RuleKind::Suffix | RuleKind::Prefix => {
            let stem = rule.stem_for(word)?;
            if stem.is_empty() {
                return None;
            }
            let found = lexicon.lookup(&stem)?;
            (Some(found) == rule.i_class.as_ref()).then_some(&rule.r_class)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub x: f64,
    pub n: f64,
    pub p_hat: f64,
    pub score: f64,
}

impl RuleOutcome {
    fn from_counts(x: u64, n: u64, affix_len: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NeverFires);
        }
        let (x, n) = (x as f64, n as f64);
        Ok(RuleOutcome {
            x,
            n,
            p_hat: smoothed_p(x, n),
            score: score(x, n, affix_len)?,
        })
    }

    pub fn stats(&self) -> RuleStats {
        RuleStats {
            x: self.x,
            n: self.n,
            score: self.score,
        }
    }
}

pub fn smoothed_p(x: f64, n: f64) -> f64 {
    (x + 0.5) / (n + 1.0)
}

/// Reliability score of a rule with `x` successes in `n` firings and an
/// affix of `affix_len` characters.
pub fn score(x: f64, n: f64, affix_len: usize) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::invalid(format!("n must be positive, got {n}")));
    }
    if !(0.0..=n).contains(&x) {
        return Err(Error::invalid(format!("x must lie in [0, n], got {x}")));
    }
    if affix_len < 1 {
        return Err(Error::invalid("affix length must be >= 1"));
    }
    let p = smoothed_p(x, n);
    let spread = Z_95 * (p * (1.0 - p) / n).sqrt();
    Ok(p - spread / (1.0 + (affix_len as f64).ln()))
}

/// Token-weighted outcome of one rule over all frequency-bearing lexicon
/// words. Words where the rule abstains do not count.
pub fn rule_outcomes(
    rule: &GuessingRule,
    lexicon: &Lexicon,
    freqs: &FrequencyTable,
) -> Result<RuleOutcome> {
    let (mut x, mut n) = (0u64, 0u64);
    for (word, count) in freqs.iter() {
        let Some(truth) = lexicon.get(word) else {
            continue;
        };
        if let Some(guess) = fires(rule, word, lexicon) {
            n += count;
            if guess == truth {
                x += count;
            }
        }
    }
    RuleOutcome::from_counts(x, n, rule.affix_len())
}

/// Rules of one set grouped by affix, in canonical order within each group,
/// with the distinct affix lengths (in characters) longest first.
pub(crate) struct AffixIndex<'a> {
    pub(crate) kind: RuleKind,
    pub(crate) by_affix: HashMap<&'a str, Vec<usize>>,
    pub(crate) lengths: Vec<usize>,
}

impl<'a> AffixIndex<'a> {
    pub(crate) fn new(rs: &'a RuleSet) -> Self {
        let mut by_affix: HashMap<&str, Vec<usize>> = HashMap::new();
        let mut lengths = Vec::new();
        for (i, r) in rs.iter().enumerate() {
            by_affix.entry(r.affix.as_str()).or_default().push(i);
            lengths.push(r.affix_len());
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths.dedup();
        AffixIndex {
            kind: rs.kind(),
            by_affix,
            lengths,
        }
    }

    /// Indices of rules whose affix matches `word`, longest affix first and
    /// canonical order within each affix.
    pub(crate) fn candidates<'w>(&'w self, word: &'w str) -> impl Iterator<Item = usize> + 'w {
        let bounds: Vec<usize> = word
            .char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(word.len()))
            .collect();
        let chars = bounds.len() - 1;
        self.lengths
            .iter()
            .filter(move |&&len| len <= chars)
            .filter_map(move |&len| {
                let part = match self.kind {
                    RuleKind::Prefix => &word[..bounds[len]],
                    _ => &word[bounds[chars - len]..],
                };
                self.by_affix.get(part)
            })
            .flatten()
            .copied()
    }
}

/// Scores every rule of `rs`, drops rules that never fire, and re-sorts.
pub fn score_ruleset(rs: &RuleSet, lexicon: &Lexicon, freqs: &FrequencyTable) -> RuleSet {
    let index = AffixIndex::new(rs);
    let words: Vec<(&str, u64, &TagSet)> = freqs
        .iter()
        .filter_map(|(w, c)| lexicon.get(w).map(|t| (w, c, t)))
        .collect();

    // (rule, tokens, success) per firing, gathered in word order
    let events: Vec<Vec<(usize, u64, bool)>> = words
        .par_chunks(256)
        .map(|chunk| {
            let mut out = Vec::new();
            for &(word, count, truth) in chunk {
                for i in index.candidates(word) {
                    if let Some(guess) = fires(&rs.rules()[i], word, lexicon) {
                        out.push((i, count, guess == truth));
                    }
                }
            }
            out
        })
        .collect();

    let mut tallies = vec![(0u64, 0u64); rs.len()];
    for (i, count, success) in events.into_iter().flatten() {
        tallies[i].1 += count;
        if success {
            tallies[i].0 += count;
        }
    }

    let scored = rs
        .iter()
        .zip(tallies)
        .filter_map(|(rule, (x, n))| {
            let outcome = RuleOutcome::from_counts(x, n, rule.affix_len()).ok()?;
            let mut rule = rule.clone();
            rule.stats = Some(outcome.stats());
            Some(rule)
        })
        .collect();
    RuleSet::new(rs.kind(), rs.mutation_len(), scored).expect("rules already validated")
}

/// Keeps the rules scoring strictly above `theta_s`.
pub fn threshold_filter(rs: &RuleSet, theta_s: f64) -> Result<RuleSet> {
    if let Some(r) = rs.iter().find(|r| r.stats.is_none()) {
        return Err(Error::Unscored(r.to_string()));
    }
    Ok(rs.retain(|r| r.score().is_some_and(|s| s > theta_s)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_s: f64,
    pub lexicon: Metrics,
    pub corpus: Metrics,
    pub rule_count: usize,
}

impl SweepRow {
    /// F1(precision, recall) x coverage, summed over lexicon and corpus.
    pub fn aggregate(&self) -> f64 {
        self.lexicon.f1_coverage() + self.corpus.f1_coverage()
    }

    /// Name of the thresholded set, e.g. `S60` or `A80`.
    pub fn label(&self, variant: char) -> String {
        format!("{variant}{}", (self.theta_s * 100.0).round() as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Row with the highest aggregate; the earliest one on ties.
    pub best: Option<usize>,
}

pub const SWEEP_HEADER: &str = "theta\tlexP\tlexR\tlexC\tcorP\tcorR\tcorC\trules";

impl SweepReport {
    fn from_rows(rows: Vec<SweepRow>) -> Self {
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate() {
            if best.is_none_or(|b| row.aggregate() > rows[b].aggregate()) {
                best = Some(i);
            }
        }
        SweepReport { rows, best }
    }

    pub fn best_row(&self) -> Option<&SweepRow> {
        self.best.map(|i| &self.rows[i])
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(SWEEP_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.theta_s,
                r.lexicon.precision,
                r.lexicon.recall,
                r.lexicon.coverage,
                r.corpus.precision,
                r.corpus.recall,
                r.corpus.coverage,
                r.rule_count
            );
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.is_empty() || line == SWEEP_HEADER {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 8 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 8 fields, found {}", f.len()),
                ));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid number {s:?}")))
            };
            rows.push(SweepRow {
                theta_s: num(f[0])?,
                lexicon: Metrics {
                    precision: num(f[1])?,
                    recall: num(f[2])?,
                    coverage: num(f[3])?,
                },
                corpus: Metrics {
                    precision: num(f[4])?,
                    recall: num(f[5])?,
                    coverage: num(f[6])?,
                },
                rule_count: f[7]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid count {:?}", f[7])))?,
            });
        }
        Ok(SweepReport::from_rows(rows))
    }
}

/// Evaluates `threshold_filter(rs, theta)` for each `theta` in `grid`, at
/// lexicon level and corpus-weighted, and picks the best row.
///
/// `rs` must be scored; the grid must be non-empty and ascending.
pub fn sweep_thresholds(
    rs: &RuleSet,
    lexicon: &Lexicon,
    freqs: &FrequencyTable,
    grid: &[f64],
    min_len: usize,
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::invalid("empty threshold grid"));
    }
    if grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::invalid("threshold grid must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &theta in grid {
        let filtered = threshold_filter(rs, theta)?;
        let rule_count = filtered.len();
        let cfg = CascadeConfig::new(vec![filtered]);
        let words = evaluate_words(&cfg, lexicon, min_len);
        rows.push(SweepRow {
            theta_s: theta,
            lexicon: words.lexicon_report().metrics(),
            corpus: words.corpus_report(freqs).metrics(),
            rule_count,
        });
    }
    Ok(SweepReport::from_rows(rows))
}
