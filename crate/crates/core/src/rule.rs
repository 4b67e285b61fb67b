//! Guessing rules, rule-sets and the rule file format.
//!
//! A morphological rule `[S I R M]` reads: strip affix `S` from an unknown
//! word, append `M`, and if the result is in the lexicon with class `I`,
//! the unknown word has class `R`. Ending rules have no `I` and no lookup.
//!
//! Rule files hold one rule per line:
//!
//! ```text
//! kind<TAB>S<TAB>M<TAB>I<TAB>R<TAB>f<TAB>x<TAB>n<TAB>score
//! S<TAB>ied<TAB>y<TAB>NN,VB<TAB>JJ,VBD,VBN<TAB>4<TAB>-<TAB>-<TAB>-
//! ```
//!
//! `kind` is `P`, `S` or `E`. An empty `M` and an absent `I` are written
//! `-`, as are the statistics of an unscored rule.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tags::TagSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Prefix,
    Suffix,
    Ending,
}

impl RuleKind {
    pub fn code(self) -> char {
        match self {
            RuleKind::Prefix => 'P',
            RuleKind::Suffix => 'S',
            RuleKind::Ending => 'E',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "P" => Some(RuleKind::Prefix),
            "S" => Some(RuleKind::Suffix),
            "E" => Some(RuleKind::Ending),
            _ => None,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Prefix => "prefix",
            RuleKind::Suffix => "suffix",
            RuleKind::Ending => "ending",
        })
    }
}

/// Token-weighted outcome statistics attached to a scored rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleStats {
    /// Successful firings.
    pub x: f64,
    /// All firings.
    pub n: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessingRule {
    pub kind: RuleKind,
    pub affix: String,
    pub mutation: String,
    pub i_class: Option<TagSet>,
    pub r_class: TagSet,
    pub freq: u64,
    pub stats: Option<RuleStats>,
}

/// The part of a rule that determines its identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleKey<'a> {
    pub kind: RuleKind,
    pub affix: &'a str,
    pub mutation: &'a str,
    pub i_class: Option<&'a TagSet>,
    pub r_class: &'a TagSet,
}

impl GuessingRule {
    pub fn suffix(affix: &str, i_class: TagSet, r_class: TagSet, mutation: &str) -> Result<Self> {
        Self::build(RuleKind::Suffix, affix, mutation, Some(i_class), r_class)
    }

    pub fn prefix(affix: &str, i_class: TagSet, r_class: TagSet) -> Result<Self> {
        Self::build(RuleKind::Prefix, affix, "", Some(i_class), r_class)
    }

    pub fn ending(affix: &str, r_class: TagSet) -> Result<Self> {
        Self::build(RuleKind::Ending, affix, "", None, r_class)
    }

    fn build(
        kind: RuleKind,
        affix: &str,
        mutation: &str,
        i_class: Option<TagSet>,
        r_class: TagSet,
    ) -> Result<Self> {
        let rule = GuessingRule {
            kind,
            affix: affix.to_string(),
            mutation: mutation.to_string(),
            i_class,
            r_class,
            freq: 1,
            stats: None,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn with_freq(mut self, freq: u64) -> Self {
        self.freq = freq;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.affix.is_empty() {
            return Err(Error::invalid("empty affix"));
        }
        if self.kind != RuleKind::Suffix && !self.mutation.is_empty() {
            return Err(Error::invalid(format!(
                "{} rule with a mutation",
                self.kind
            )));
        }
        match (&self.i_class, self.kind) {
            (None, RuleKind::Ending) => {}
            (Some(_), RuleKind::Ending) => {
                return Err(Error::invalid("ending rule with an I-class"));
            }
            (None, _) => return Err(Error::invalid("morphological rule without an I-class")),
            (Some(i), _) if i.is_empty() => return Err(Error::invalid("empty I-class")),
            _ => {}
        }
        if self.r_class.is_empty() {
            return Err(Error::invalid("empty R-class"));
        }
        if self.freq == 0 {
            return Err(Error::invalid("rule frequency must be >= 1"));
        }
        Ok(())
    }

    pub fn key(&self) -> RuleKey<'_> {
        RuleKey {
            kind: self.kind,
            affix: &self.affix,
            mutation: &self.mutation,
            i_class: self.i_class.as_ref(),
            r_class: &self.r_class,
        }
    }

    pub fn affix_len(&self) -> usize {
        self.affix.chars().count()
    }

    pub fn score(&self) -> Option<f64> {
        self.stats.map(|s| s.score)
    }

    /// The stem this rule would look up for `word`, if its affix matches.
    /// Ending rules never look anything up.
    pub fn stem_for(&self, word: &str) -> Option<String> {
        match self.kind {
            RuleKind::Suffix => word.strip_suffix(self.affix.as_str()).map(|rest| {
                let mut stem = String::with_capacity(rest.len() + self.mutation.len());
                stem.push_str(rest);
                stem.push_str(&self.mutation);
                stem
            }),
            RuleKind::Prefix => word.strip_prefix(self.affix.as_str()).map(str::to_string),
            RuleKind::Ending => None,
        }
    }
}

/// Short form: `[ied (NN VB) (JJ VBD VBN) y]`, `[un (VBD VBN) (JJ)]`,
/// `[ing - (JJ NN VBG)]`.
impl fmt::Display for GuessingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, &self.i_class) {
            (RuleKind::Suffix, Some(i)) => {
                if self.mutation.is_empty() {
                    write!(f, "[{} {} {} \"\"]", self.affix, i, self.r_class)
                } else {
                    write!(
                        f,
                        "[{} {} {} {}]",
                        self.affix, i, self.r_class, self.mutation
                    )
                }
            }
            (_, Some(i)) => write!(f, "[{} {} {}]", self.affix, i, self.r_class),
            (_, None) => write!(f, "[{} - {}]", self.affix, self.r_class),
        }
    }
}

/// Canonical rule order: longer affix first, then higher score, then affix,
/// mutation, I, R, and higher frequency. Unscored rules follow scored ones.
pub fn canonical_cmp(a: &GuessingRule, b: &GuessingRule) -> Ordering {
    b.affix_len()
        .cmp(&a.affix_len())
        .then_with(|| match (a.score(), b.score()) {
            (Some(x), Some(y)) => y.total_cmp(&x),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then_with(|| a.affix.cmp(&b.affix))
        .then_with(|| a.mutation.cmp(&b.mutation))
        .then_with(|| a.i_class.cmp(&b.i_class))
        .then_with(|| a.r_class.cmp(&b.r_class))
        .then_with(|| b.freq.cmp(&a.freq))
}

/// Rules of a single kind held in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    kind: RuleKind,
    mutation_len: usize,
    rules: Vec<GuessingRule>,
}

impl RuleSet {
    pub fn new(kind: RuleKind, mutation_len: usize, mut rules: Vec<GuessingRule>) -> Result<Self> {
        for r in &rules {
            if r.kind != kind {
                return Err(Error::invalid(format!(
                    "{} rule in a {} rule-set",
                    r.kind, kind
                )));
            }
            r.validate()?;
        }
        rules.sort_by(canonical_cmp);
        Ok(RuleSet {
            kind,
            mutation_len,
            rules,
        })
    }

    pub fn empty(kind: RuleKind) -> Self {
        RuleSet {
            kind,
            mutation_len: 0,
            rules: Vec::new(),
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn mutation_len(&self) -> usize {
        self.mutation_len
    }

    pub fn rules(&self) -> &[GuessingRule] {
        &self.rules
    }

    pub fn into_rules(self) -> Vec<GuessingRule> {
        self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GuessingRule> {
        self.rules.iter()
    }

    /// Short name used for rule-set variants: `P`, `S` (plain suffix),
    /// `A` (suffix with alterations) or `E`.
    pub fn variant_letter(&self) -> char {
        match self.kind {
            RuleKind::Suffix if self.mutation_len > 0 => 'A',
            k => k.code(),
        }
    }

    /// Keeps the rules matching `keep`, preserving order.
    pub fn retain(&self, mut keep: impl FnMut(&GuessingRule) -> bool) -> RuleSet {
        RuleSet {
            kind: self.kind,
            mutation_len: self.mutation_len,
            rules: self.rules.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }

    pub fn to_rule_file(&self) -> String {
        let mut out = format!(
            "# kind={} mutation={}\n",
            self.kind.code(),
            self.mutation_len
        );
        for r in &self.rules {
            out.push_str(&format_rule_line(r));
            out.push('\n');
        }
        out
    }

    /// Parses a rule file. All rules must share one kind. The kind and
    /// mutation length come from the `# kind=.. mutation=..` header when
    /// present, otherwise from the rules themselves.
    pub fn from_rule_file(text: &str) -> Result<RuleSet> {
        let mut rules = Vec::new();
        let mut header: Option<(RuleKind, usize)> = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if let Some(comment) = line.strip_prefix('#') {
                if header.is_none() && rules.is_empty() {
                    header = parse_header(comment);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            rules.push(parse_rule_line(line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(i + 1, message),
                other => Error::parse(i + 1, other.to_string()),
            })?);
        }
        if let Some((kind, mutation_len)) = header {
            return RuleSet::new(kind, mutation_len, rules);
        }
        let Some(kind) = rules.first().map(|r| r.kind) else {
            return Ok(RuleSet::empty(RuleKind::Suffix));
        };
        let mutation_len = rules
            .iter()
            .map(|r| r.mutation.chars().count())
            .max()
            .unwrap_or(0);
        RuleSet::new(kind, mutation_len, rules)
    }
}

fn parse_header(comment: &str) -> Option<(RuleKind, usize)> {
    let mut kind = None;
    let mut mutation = None;
    for part in comment.split_whitespace() {
        if let Some(k) = part.strip_prefix("kind=") {
            kind = RuleKind::from_code(k);
        } else if let Some(m) = part.strip_prefix("mutation=") {
            mutation = m.parse().ok();
        }
    }
    Some((kind?, mutation?))
}

impl<'a> IntoIterator for &'a RuleSet {
    type Item = &'a GuessingRule;
    type IntoIter = std::slice::Iter<'a, GuessingRule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

fn escape_field(s: &str) -> String {
    if s.is_empty() {
        "-".to_string()
    } else if s == "-" || s.starts_with('\\') {
        format!("\\{s}")
    } else {
        s.to_string()
    }
}

fn unescape_field(s: &str) -> String {
    if s == "-" {
        String::new()
    } else if let Some(rest) = s.strip_prefix('\\') {
        rest.to_string()
    } else {
        s.to_string()
    }
}

fn format_float(v: f64) -> String {
    format!("{v}")
}

pub fn format_rule_line(r: &GuessingRule) -> String {
    let mut line = String::new();
    let i = r
        .i_class
        .as_ref()
        .map_or_else(|| "-".to_string(), TagSet::to_comma_string);
    let _ = write!(
        line,
        "{}\t{}\t{}\t{}\t{}\t{}",
        r.kind.code(),
        escape_field(&r.affix),
        escape_field(&r.mutation),
        i,
        r.r_class.to_comma_string(),
        r.freq
    );
    match r.stats {
        Some(s) => {
            let _ = write!(
                line,
                "\t{}\t{}\t{}",
                format_float(s.x),
                format_float(s.n),
                format_float(s.score)
            );
        }
        None => line.push_str("\t-\t-\t-"),
    }
    line
}

pub fn parse_rule_line(line: &str) -> Result<GuessingRule> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 9 {
        return Err(Error::parse(
            0,
            format!("expected 9 fields, found {}", fields.len()),
        ));
    }
    let kind = RuleKind::from_code(fields[0])
        .ok_or_else(|| Error::parse(0, format!("unknown rule kind {:?}", fields[0])))?;
    let affix = unescape_field(fields[1]);
    let mutation = unescape_field(fields[2]);
    let i_class = match kind {
        RuleKind::Ending if fields[3] == "-" => None,
        _ => Some(TagSet::parse_comma(fields[3])?),
    };
    let r_class = TagSet::parse_comma(fields[4])?;
    let freq: u64 = fields[5]
        .parse()
        .map_err(|_| Error::parse(0, format!("invalid frequency {:?}", fields[5])))?;
    let stats = match (fields[6], fields[7], fields[8]) {
        ("-", "-", "-") => None,
        (x, n, s) => {
            let num = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|_| Error::parse(0, format!("invalid number {v:?}")))
            };
            Some(RuleStats {
                x: num(x)?,
                n: num(n)?,
                score: num(s)?,
            })
        }
    };
    let rule = GuessingRule {
        kind,
        affix,
        mutation,
        i_class,
        r_class,
        freq,
        stats,
    };
    rule.validate()?;
    Ok(rule)
}
