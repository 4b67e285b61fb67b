//! Part-of-speech tags and POS-classes.
//!
//! A POS-class is the full set of tags a word can take on, e.g. `(NN VB)`
//! for a word that is either a noun or a verb. Classes compare as sets: the
//! order in which tags were written is irrelevant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single POS tag such as `NN` or `VBD`. Compared case-sensitively.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tag(String);

impl Tag {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        if symbol.is_empty() {
            return Err(Error::invalid("empty tag"));
        }
        if symbol.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!(
                "tag {symbol:?} contains whitespace"
            )));
        }
        Ok(Tag(symbol))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tag::new(s)
    }
}

impl TryFrom<String> for Tag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Tag::new(s)
    }
}

impl From<Tag> for String {
    fn from(tag: Tag) -> String {
        tag.0
    }
}

impl AsRef<str> for Tag {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A set of tags stored in canonical (sorted, deduplicated) order.
///
/// `TagSet` may be empty as a value, but every rule class and every lexicon
/// entry requires a non-empty one.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TagSet(Vec<Tag>);

impl TagSet {
    pub fn new(tags: impl IntoIterator<Item = Tag>) -> Self {
        let mut tags: Vec<Tag> = tags.into_iter().collect();
        tags.sort();
        tags.dedup();
        TagSet(tags)
    }

    /// Builds a set from whitespace-separated tag symbols, e.g. `"NN VB"`.
    pub fn parse_whitespace(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(Tag::new)
            .collect::<Result<Vec<_>>>()
            .map(TagSet::new)
    }

    /// Convenience constructor for literals. Panics on an invalid symbol.
    pub fn of(symbols: &[&str]) -> Self {
        TagSet::new(
            symbols
                .iter()
                .map(|s| Tag::new(*s).expect("invalid tag literal")),
        )
    }

    pub fn single(tag: Tag) -> Self {
        TagSet(vec![tag])
    }

    pub fn tags(&self) -> &[Tag] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tag> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.0.binary_search(tag).is_ok()
    }

    pub fn union(&self, other: &TagSet) -> TagSet {
        TagSet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn intersection_len(&self, other: &TagSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn is_subset(&self, other: &TagSet) -> bool {
        self.intersection_len(other) == self.len()
    }

    /// Space-separated form used in lexicon files and guess output.
    pub fn to_whitespace_string(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t.as_str());
        }
        out
    }

    /// Comma-separated form used in rule files. Commas and backslashes inside
    /// a tag are escaped with a backslash.
    pub fn to_comma_string(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            for c in t.as_str().chars() {
                if c == ',' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
        }
        out
    }

    /// Inverse of [`TagSet::to_comma_string`].
    pub fn parse_comma(s: &str) -> Result<Self> {
        let mut tags = Vec::new();
        let mut cur = String::new();
        let mut chars = s.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(e) => cur.push(e),
                    None => return Err(Error::invalid("dangling escape in tag list")),
                },
                ',' => tags.push(Tag::new(std::mem::take(&mut cur))?),
                _ => cur.push(c),
            }
        }
        tags.push(Tag::new(cur)?);
        Ok(TagSet::new(tags))
    }
}

/// Parenthesised form, `(JJ VBD VBN)`.
impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_whitespace_string())
    }
}

impl FromIterator<Tag> for TagSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        TagSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a TagSet {
    type Item = &'a Tag;
    type IntoIter = std::slice::Iter<'a, Tag>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
