//! Guessing metrics and tagging scores.
//!
//! Every eval-target lexicon word is guessed as if it were unknown: its own
//! entry is hidden while the rest of the lexicon stays available for stem
//! lookup. For a covered word (one with a non-fallback guess `G` against the
//! true class `T`):
//!
//! ```text
//! precision = |G ∩ T| / |G|      recall = |G ∩ T| / |T|
//! ```
//!
//! Precision and recall are averaged over covered words only; coverage is
//! the covered fraction of all targets. The corpus-level report weights
//! every word by its corpus frequency.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guesser::{is_capitalized, CascadeConfig, Guesser};
use crate::lexicon::{FrequencyTable, Lexicon, Masked};
use crate::tags::{Tag, TagSet};

pub fn pr_of_guess(guessed: &TagSet, truth: &TagSet) -> Result<(f64, f64)> {
    if guessed.is_empty() || truth.is_empty() {
        return Err(Error::invalid("precision/recall need non-empty tag sets"));
    }
    let hit = guessed.intersection_len(truth) as f64;
    Ok((hit / guessed.len() as f64, hit / truth.len() as f64))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub coverage: f64,
}

impl Metrics {
    pub fn f1(&self) -> f64 {
        let s = self.precision + self.recall;
        if s > 0.0 {
            2.0 * self.precision * self.recall / s
        } else {
            0.0
        }
    }

    pub fn f1_coverage(&self) -> f64 {
        self.f1() * self.coverage
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    TypeLevel,
    TokenWeighted,
}

impl Weighting {
    fn level(self) -> &'static str {
        match self {
            Weighting::TypeLevel => "lexicon",
            Weighting::TokenWeighted => "corpus",
        }
    }
}

/// For [`Weighting::TokenWeighted`] reports, `words_total` and
/// `words_covered` count corpus tokens rather than word types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub coverage: f64,
    pub words_total: u64,
    pub words_covered: u64,
    pub weighting: Weighting,
    /// Set when a denominator was zero and the affected metrics were
    /// reported as 0.
    pub degenerate: bool,
}

impl EvalReport {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            precision: self.precision,
            recall: self.recall,
            coverage: self.coverage,
        }
    }

    fn from_sums(
        weighting: Weighting,
        total: u64,
        covered: u64,
        precision_sum: f64,
        recall_sum: f64,
    ) -> Self {
        let ratio = |num: f64, den: u64| if den > 0 { num / den as f64 } else { 0.0 };
        EvalReport {
            precision: ratio(precision_sum, covered),
            recall: ratio(recall_sum, covered),
            coverage: ratio(covered as f64, total),
            words_total: total,
            words_covered: covered,
            weighting,
            degenerate: total == 0 || covered == 0,
        }
    }
}

/// Per-word outcome of guessing one eval-target word.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEval {
    pub word: String,
    /// `Some((precision, recall))` when a rule fired.
    pub guess: Option<(f64, f64)>,
}

/// Per-word outcomes, in lexicon order, from which both reports derive.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEvals {
    pub words: Vec<WordEval>,
}

impl WordEvals {
    pub fn lexicon_report(&self) -> EvalReport {
        let mut covered = 0u64;
        let (mut p, mut r) = (0.0, 0.0);
        for w in &self.words {
            if let Some((wp, wr)) = w.guess {
                covered += 1;
                p += wp;
                r += wr;
            }
        }
        EvalReport::from_sums(Weighting::TypeLevel, self.words.len() as u64, covered, p, r)
    }

    pub fn corpus_report(&self, freqs: &FrequencyTable) -> EvalReport {
        let (mut total, mut covered) = (0u64, 0u64);
        let (mut p, mut r) = (0.0, 0.0);
        for w in &self.words {
            let c = freqs.count(&w.word);
            if c == 0 {
                continue;
            }
            total += c;
            if let Some((wp, wr)) = w.guess {
                covered += c;
                p += c as f64 * wp;
                r += c as f64 * wr;
            }
        }
        EvalReport::from_sums(Weighting::TokenWeighted, total, covered, p, r)
    }
}

/// Guesses every eval-target word of `lexicon` with its own entry masked.
pub fn evaluate_words(cfg: &CascadeConfig, lexicon: &Lexicon, min_len: usize) -> WordEvals {
    let guesser = Guesser::new(cfg);
    let targets: Vec<(&str, &TagSet)> = lexicon.eval_targets(min_len).collect();
    let words = targets
        .par_iter()
        .map(|&(word, truth)| {
            let masked = Masked {
                lexicon,
                hidden: word,
            };
            let g = guesser.guess(word, is_capitalized(word), &masked);
            let guess = if g.provenance.is_fallback() {
                None
            } else {
                Some(pr_of_guess(&g.pos, truth).expect("non-empty classes"))
            };
            WordEval {
                word: word.to_string(),
                guess,
            }
        })
        .collect();
    WordEvals { words }
}

pub fn evaluate_lexicon(cfg: &CascadeConfig, lexicon: &Lexicon, min_len: usize) -> EvalReport {
    evaluate_words(cfg, lexicon, min_len).lexicon_report()
}

pub fn evaluate_corpus(
    cfg: &CascadeConfig,
    lexicon: &Lexicon,
    freqs: &FrequencyTable,
    min_len: usize,
) -> EvalReport {
    evaluate_words(cfg, lexicon, min_len).corpus_report(freqs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggingCounts {
    pub total_words: u64,
    pub unknown_words: u64,
    pub total_mistagged: u64,
    pub unknown_mistagged: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggingScore {
    pub total_score: f64,
    pub unknown_score: f64,
    pub counts: TaggingCounts,
}

impl TaggingScore {
    pub fn from_counts(counts: TaggingCounts) -> Result<Self> {
        let c = counts;
        if c.unknown_words > c.total_words
            || c.total_mistagged > c.total_words
            || c.unknown_mistagged > c.unknown_words
            || c.unknown_mistagged > c.total_mistagged
        {
            return Err(Error::invalid(format!("inconsistent tagging counts {c:?}")));
        }
        let score = |wrong: u64, all: u64| {
            if all == 0 {
                0.0
            } else {
                1.0 - wrong as f64 / all as f64
            }
        };
        Ok(TaggingScore {
            total_score: score(c.total_mistagged, c.total_words),
            unknown_score: score(c.unknown_mistagged, c.unknown_words),
            counts,
        })
    }
}

/// Tagging accuracy overall and on unknown tokens.
pub fn tagging_scores<S: AsRef<str>>(
    gold: &[(S, Tag)],
    predicted: &[Tag],
    unknown_mask: &[bool],
) -> Result<TaggingScore> {
    if gold.len() != predicted.len() || gold.len() != unknown_mask.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} gold, {} predicted, {} mask",
            gold.len(),
            predicted.len(),
            unknown_mask.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::invalid("no tokens to score"));
    }
    let mut counts = TaggingCounts {
        total_words: gold.len() as u64,
        unknown_words: 0,
        total_mistagged: 0,
        unknown_mistagged: 0,
    };
    for (((_, g), p), &unknown) in gold.iter().zip(predicted).zip(unknown_mask) {
        let wrong = g != p;
        counts.total_mistagged += u64::from(wrong);
        if unknown {
            counts.unknown_words += 1;
            counts.unknown_mistagged += u64::from(wrong);
        }
    }
    TaggingScore::from_counts(counts)
}

/// Everything `eval` reports in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub lexicon: EvalReport,
    pub corpus: Option<EvalReport>,
    pub tagging: Option<TaggingScore>,
}

pub const REPORT_HEADER: &str = "level\tprecision\trecall\tcoverage\tcovered\ttotal\tdegenerate";
pub const TAGGING_HEADER: &str =
    "tagging\ttotal_words\tunknown_words\ttotal_mistagged\tunknown_mistagged\ttotal_score\tunknown_score";

impl EvalSummary {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for r in std::iter::once(&self.lexicon).chain(self.corpus.as_ref()) {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.weighting.level(),
                r.precision,
                r.recall,
                r.coverage,
                r.words_covered,
                r.words_total,
                u8::from(r.degenerate)
            );
        }
        if let Some(t) = &self.tagging {
            out.push_str(TAGGING_HEADER);
            out.push('\n');
            let c = t.counts;
            let _ = writeln!(
                out,
                "tagging\t{}\t{}\t{}\t{}\t{}\t{}",
                c.total_words,
                c.unknown_words,
                c.total_mistagged,
                c.unknown_mistagged,
                t.total_score,
                t.unknown_score
            );
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lexicon = None;
        let mut corpus = None;
        let mut tagging = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.is_empty() || line == REPORT_HEADER || line == TAGGING_HEADER {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let float = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid number {s:?}")))
            };
            let int = |s: &str| -> Result<u64> {
                s.parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid count {s:?}")))
            };
            match (f[0], f.len()) {
                ("lexicon" | "corpus", 7) => {
                    let weighting = if f[0] == "lexicon" {
                        Weighting::TypeLevel
                    } else {
                        Weighting::TokenWeighted
                    };
                    let report = EvalReport {
                        precision: float(f[1])?,
                        recall: float(f[2])?,
                        coverage: float(f[3])?,
                        words_covered: int(f[4])?,
                        words_total: int(f[5])?,
                        weighting,
                        degenerate: match f[6] {
                            "0" => false,
                            "1" => true,
                            other => {
                                return Err(Error::parse(
                                    line_no,
                                    format!("invalid flag {other:?}"),
                                ))
                            }
                        },
                    };
                    match weighting {
                        Weighting::TypeLevel => lexicon = Some(report),
                        Weighting::TokenWeighted => corpus = Some(report),
                    }
                }
                ("tagging", 7) => {
                    tagging = Some(TaggingScore {
                        counts: TaggingCounts {
                            total_words: int(f[1])?,
                            unknown_words: int(f[2])?,
                            total_mistagged: int(f[3])?,
                            unknown_mistagged: int(f[4])?,
                        },
                        total_score: float(f[5])?,
                        unknown_score: float(f[6])?,
                    });
                }
                _ => return Err(Error::parse(line_no, "unrecognised report line")),
            }
        }
        Ok(EvalSummary {
            lexicon: lexicon.ok_or_else(|| Error::parse(0, "missing lexicon report"))?,
            corpus,
            tagging,
        })
    }
}

/// Human-readable table.
impl fmt::Display for EvalSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:>9} {:>9} {:>9} {:>10} {:>10}",
            "level", "precision", "recall", "coverage", "covered", "total"
        )?;
        for r in std::iter::once(&self.lexicon).chain(self.corpus.as_ref()) {
            writeln!(
                f,
                "{:<8} {:>9.6} {:>9.6} {:>9.6} {:>10} {:>10}{}",
                r.weighting.level(),
                r.precision,
                r.recall,
                r.coverage,
                r.words_covered,
                r.words_total,
                if r.degenerate {
                    "  (zero denominator)"
                } else {
                    ""
                }
            )?;
        }
        if let Some(t) = &self.tagging {
            let c = t.counts;
            writeln!(f)?;
            writeln!(
                f,
                "tagging: {} words, {} unknown, {} mistagged, {} unknown mistagged",
                c.total_words, c.unknown_words, c.total_mistagged, c.unknown_mistagged
            )?;
            writeln!(
                f,
                "TotalScore {:.2}%  UnknownScore {:.2}%",
                t.total_score * 100.0,
                t.unknown_score * 100.0
            )?;
        }
        Ok(())
    }
}
