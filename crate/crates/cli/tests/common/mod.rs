#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use morphguess::{FrequencyTable, GuessingRule, Lexicon, RuleKind, RuleSet, TagSet};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn tutorial(name: &str) -> String {
    fixture("tutorial").join(name).to_str().unwrap().to_string()
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphguess"))
        .args(args)
        .output()
        .expect("spawn morphguess")
}

pub fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_morphguess"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn morphguess");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

/// Runs the binary and returns stdout, panicking with stderr on failure.
pub fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "morphguess {args:?} failed ({:?}): {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub type RuleKey = (char, String, String, Option<Vec<String>>, Vec<String>);

fn tags(t: &TagSet) -> Vec<String> {
    t.iter().map(|t| t.as_str().to_string()).collect()
}

pub fn rule_multiset(rs: &RuleSet) -> BTreeMap<RuleKey, u64> {
    rs.iter().map(|r| (key(r), r.freq)).collect()
}

fn key(r: &GuessingRule) -> RuleKey {
    (
        r.kind.code(),
        r.affix.clone(),
        r.mutation.clone(),
        r.i_class.as_ref().map(tags),
        tags(&r.r_class),
    )
}

/// Quadratic reference induction over every ordered pair of entries.
pub fn naive_morph(lex: &Lexicon, kind: RuleKind, n: usize, theta: u64) -> BTreeMap<RuleKey, u64> {
    let entries: Vec<(Vec<char>, Vec<String>)> = lex
        .iter()
        .map(|(w, p)| (w.chars().collect(), tags(p)))
        .collect();
    let mut counts: BTreeMap<RuleKey, u64> = BTreeMap::new();
    for (a, a_pos) in &entries {
        for (b, b_pos) in &entries {
            if a == b {
                continue;
            }
            let produced = match kind {
                RuleKind::Suffix => {
                    if b.len() <= n {
                        continue;
                    }
                    let stem = &b[..b.len() - n];
                    let m: String = b[b.len() - n..].iter().collect();
                    (a.len() > stem.len() && a[..stem.len()] == *stem)
                        .then(|| (a[stem.len()..].iter().collect::<String>(), m))
                }
                RuleKind::Prefix => (a.len() > b.len() && a[a.len() - b.len()..] == b[..])
                    .then(|| (a[..a.len() - b.len()].iter().collect(), String::new())),
                RuleKind::Ending => unreachable!(),
            };
            if let Some((s, m)) = produced {
                let key = (kind.code(), s, m, Some(b_pos.clone()), a_pos.clone());
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    counts.retain(|_, f| *f >= theta);
    counts
}

/// Small random lexicon over a narrow alphabet, so that affix pairs are common.
pub fn random_lexicon(rng: &mut ChaCha8Rng, max_entries: usize) -> Lexicon {
    const CLASSES: [&str; 6] = ["NN", "VB", "JJ", "VBD", "NNS", "VBG"];
    let mut lex = Lexicon::new();
    let n = rng.random_range(0..=max_entries);
    for _ in 0..n {
        let len = rng.random_range(1..=7);
        let word: String = (0..len)
            .map(|_| *b"abcde".choose(rng).unwrap() as char)
            .collect();
        let k = rng.random_range(1..=3);
        let class: Vec<&str> = CLASSES.choose_multiple(rng, k).copied().collect();
        lex.insert(word, TagSet::of(&class)).unwrap();
    }
    lex
}

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "j", "l", "m", "n", "p", "r", "s", "t", "v", "w", "br", "cl",
    "dr", "fl", "gr", "pl", "pr", "sh", "st", "tr",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "oo"];
const CODAS: &[&str] = &[
    "", "", "", "k", "l", "m", "n", "r", "t", "st", "nd", "rk", "sh",
];

fn stem(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut s = String::new();
    for _ in 0..syllables {
        s.push_str(ONSETS.choose(rng).unwrap());
        s.push_str(VOWELS.choose(rng).unwrap());
        s.push_str(CODAS.choose(rng).unwrap());
    }
    s
}

/// Consonant-final stem, so that `-ed` attaches without spelling changes.
fn closed_stem(rng: &mut ChaCha8Rng) -> String {
    loop {
        let syl = rng.random_range(1..=2);
        let s = stem(rng, syl);
        if !s.ends_with(['a', 'e', 'i', 'o', 'u', 'y']) && s.len() >= 3 {
            return s;
        }
    }
}

/// Lexicon with `n_ed` regular `-ed` paradigms, `n_ied` `y -> ied`
/// paradigms and a sprinkling of nouns and adjectives. A few `-ed` words
/// carry an adjective-only class, so precision is not trivially 1.
pub fn ed_ied_lexicon(seed: u64, n_ed: usize, n_ied: usize) -> Lexicon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lex = Lexicon::new();
    let mut used = BTreeSet::new();
    let mut fresh = |rng: &mut ChaCha8Rng| loop {
        let s = closed_stem(rng);
        if used.insert(s.clone()) {
            return s;
        }
    };
    for i in 0..n_ed {
        let s = fresh(&mut rng);
        lex.insert(s.clone(), TagSet::of(&["NN", "VB"])).unwrap();
        let past = if i % 7 == 6 {
            vec!["JJ"]
        } else {
            vec!["JJ", "VBD", "VBN"]
        };
        lex.insert(format!("{s}ed"), TagSet::of(&past)).unwrap();
    }
    for _ in 0..n_ied {
        let s = fresh(&mut rng);
        lex.insert(format!("{s}y"), TagSet::of(&["NN", "VB"]))
            .unwrap();
        lex.insert(format!("{s}ied"), TagSet::of(&["JJ", "VBD", "VBN"]))
            .unwrap();
    }
    for _ in 0..(n_ed + n_ied) / 2 {
        let s = fresh(&mut rng);
        lex.insert(s.clone(), TagSet::of(&["NN"])).unwrap();
        lex.insert(format!("{s}s"), TagSet::of(&["NNS"])).unwrap();
    }
    lex
}

/// Desk-scale lexicon of roughly `entries` words built from inflectional
/// paradigms, and a frequency table with `freq_entries` distinct words
/// (every lexicon word plus unseen ones).
pub fn synthetic(seed: u64, entries: usize, freq_entries: usize) -> (Lexicon, FrequencyTable) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lex = Lexicon::new();
    let mut used = BTreeSet::new();
    while lex.len() < entries {
        let syl = rng.random_range(1..=3);
        let s = stem(&mut rng, syl);
        if s.len() < 3 || !used.insert(s.clone()) {
            continue;
        }
        let mut forms: Vec<(String, &[&str])> = Vec::new();
        match rng.random_range(0..100) {
            0..=34 => {
                let base = if s.ends_with('e') {
                    s[..s.len() - 1].to_string()
                } else {
                    s.clone()
                };
                forms.push((s.clone(), &["NN", "VB"]));
                forms.push((format!("{base}ed"), &["JJ", "VBD", "VBN"]));
                forms.push((format!("{base}ing"), &["JJ", "NN", "VBG"]));
                forms.push((format!("{s}s"), &["NNS", "VBZ"]));
                if rng.random_bool(0.15) {
                    forms.push((format!("un{base}ed"), &["JJ"]));
                }
                if rng.random_bool(0.2) {
                    forms.push((format!("{base}able"), &["JJ"]));
                }
            }
            35..=44 => {
                forms.push((format!("{s}y"), &["NN", "VB"]));
                forms.push((format!("{s}ied"), &["JJ", "VBD", "VBN"]));
                forms.push((format!("{s}ies"), &["NNS", "VBZ"]));
                forms.push((format!("{s}ying"), &["JJ", "NN", "VBG"]));
            }
            45..=74 => {
                forms.push((s.clone(), &["NN"]));
                forms.push((format!("{s}s"), &["NNS"]));
            }
            75..=89 => {
                forms.push((s.clone(), &["JJ"]));
                forms.push((format!("{s}ly"), &["RB"]));
                if rng.random_bool(0.3) {
                    forms.push((format!("{s}ness"), &["NN"]));
                }
            }
            _ => {
                let class = *[&["NN"][..], &["VB"], &["JJ"], &["RB"], &["NN", "JJ"]]
                    .choose(&mut rng)
                    .unwrap();
                forms.push((s.clone(), class));
            }
        }
        for (w, c) in forms {
            if rng.random_bool(0.9) || lex.is_empty() {
                lex.insert(w, TagSet::of(c)).unwrap();
            }
        }
    }
    let mut freqs = FrequencyTable::new();
    for (w, _) in lex.iter() {
        freqs.add(w, zipf_count(&mut rng)).unwrap();
    }
    while freqs.len() < freq_entries {
        let syl = rng.random_range(2..=4);
        let w = stem(&mut rng, syl);
        if freqs.count(&w) == 0 {
            freqs.add(w, zipf_count(&mut rng)).unwrap();
        }
    }
    (lex, freqs)
}

fn zipf_count(rng: &mut ChaCha8Rng) -> u64 {
    let u: f64 = rng.random_range(0.0..1.0);
    (1.0 / (1.0 - u).max(1e-4)).floor() as u64
}
