//! Library results checked against naive reference implementations that
//! share no code with the indexed paths: quadratic pair enumeration for
//! induction, per-token replay for scoring, and per-word replay with a
//! physically reduced lexicon for evaluation.

use std::collections::{BTreeMap, BTreeSet};

use morphguess::{
    evaluate_words, extract_ending_rules, extract_morph_rules, guess_with_ruleset,
    parse_frequencies, score_ruleset, CascadeConfig, FrequencyTable, Guesser, GuessingRule,
    Lexicon, RuleKind, RuleSet, TagSet,
};
use proptest::prelude::*;

type Key = (char, String, String, Option<Vec<String>>, Vec<String>);

fn tags(t: &TagSet) -> Vec<String> {
    t.iter().map(|t| t.as_str().to_string()).collect()
}

fn rule_multiset(rs: &RuleSet) -> BTreeMap<Key, u64> {
    rs.iter()
        .map(|r| {
            (
                (
                    r.kind.code(),
                    r.affix.clone(),
                    r.mutation.clone(),
                    r.i_class.as_ref().map(tags),
                    tags(&r.r_class),
                ),
                r.freq,
            )
        })
        .collect()
}

/// Quadratic reference: every ordered pair, plain char-vector slicing.
fn naive_morph(lex: &Lexicon, kind: RuleKind, n: usize, theta: u64) -> BTreeMap<Key, u64> {
    let entries: Vec<(Vec<char>, Vec<String>)> = lex
        .iter()
        .map(|(w, p)| (w.chars().collect(), tags(p)))
        .collect();
    let mut counts: BTreeMap<Key, u64> = BTreeMap::new();
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
                    if a.len() > stem.len() && a[..stem.len()] == *stem {
                        Some((a[stem.len()..].iter().collect::<String>(), m))
                    } else {
                        None
                    }
                }
                RuleKind::Prefix => {
                    if a.len() > b.len() && a[a.len() - b.len()..] == b[..] {
                        Some((a[..a.len() - b.len()].iter().collect(), String::new()))
                    } else {
                        None
                    }
                }
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

fn naive_endings(lex: &Lexicon, max_len: usize, theta: u64) -> BTreeMap<Key, u64> {
    let mut counts: BTreeMap<Key, u64> = BTreeMap::new();
    for (w, p) in lex.iter() {
        let chars: Vec<char> = w.chars().collect();
        if chars.len() < 5 || p.iter().any(|t| lex.closed_class_tags().contains(t)) {
            continue;
        }
        for l in 1..=max_len.min(chars.len() - 1) {
            let s: String = chars[chars.len() - l..].iter().collect();
            *counts
                .entry(('E', s, String::new(), None, tags(p)))
                .or_insert(0) += 1;
        }
    }
    counts.retain(|_, f| *f >= theta);
    counts
}

/// Independent firing check against a plain map.
fn naive_fire(
    rule: &GuessingRule,
    word: &str,
    lex: &BTreeMap<String, Vec<String>>,
) -> Option<Vec<String>> {
    let w: Vec<char> = word.chars().collect();
    let s: Vec<char> = rule.affix.chars().collect();
    match rule.kind {
        RuleKind::Ending => {
            (w.len() > s.len() && w[w.len() - s.len()..] == s[..]).then(|| tags(&rule.r_class))
        }
        RuleKind::Suffix | RuleKind::Prefix => {
            if w.len() < s.len() {
                return None;
            }
            let stem: String = if rule.kind == RuleKind::Suffix {
                if w[w.len() - s.len()..] != s[..] {
                    return None;
                }
                w[..w.len() - s.len()].iter().collect::<String>() + &rule.mutation
            } else {
                if w[..s.len()] != s[..] {
                    return None;
                }
                w[s.len()..].iter().collect()
            };
            if stem.is_empty() {
                return None;
            }
            let found = lex.get(&stem)?;
            (Some(found) == rule.i_class.as_ref().map(tags).as_ref()).then(|| tags(&rule.r_class))
        }
    }
}

fn plain_map(lex: &Lexicon) -> BTreeMap<String, Vec<String>> {
    lex.iter().map(|(w, p)| (w.to_string(), tags(p))).collect()
}

fn lexicon_strategy(max: usize) -> impl Strategy<Value = Lexicon> {
    let word = "[abcd]{1,6}";
    let class = prop::sample::subsequence(vec!["NN", "VB", "JJ", "VBD", "NNS"], 1..=3);
    prop::collection::vec((word, class), 0..max).prop_map(|entries| {
        let mut lex = Lexicon::new();
        for (w, c) in entries {
            lex.insert(w, TagSet::of(&c)).unwrap();
        }
        lex
    })
}

fn freq_strategy(lex: &Lexicon) -> impl Strategy<Value = FrequencyTable> {
    let words: Vec<String> = lex.iter().map(|(w, _)| w.to_string()).collect();
    prop::collection::vec(prop::option::of(1u64..6), words.len()).prop_map(move |counts| {
        let mut f = FrequencyTable::new();
        for (w, c) in words.iter().zip(counts) {
            if let Some(c) = c {
                f.add(w.clone(), c).unwrap();
            }
        }
        f.add("zzzz", 3).unwrap();
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn suffix_extraction_matches_naive(lex in lexicon_strategy(60), n in 0usize..=2, theta in 1u64..=3) {
        let rs = extract_morph_rules(&lex, RuleKind::Suffix, n, theta).unwrap();
        prop_assert_eq!(rule_multiset(&rs), naive_morph(&lex, RuleKind::Suffix, n, theta));
        prop_assert!(rs.iter().all(|r| r.freq >= theta));
        if n == 0 {
            prop_assert!(rs.iter().all(|r| r.mutation.is_empty()));
        }
    }

    #[test]
    fn prefix_extraction_matches_naive(lex in lexicon_strategy(60), theta in 1u64..=3) {
        let rs = extract_morph_rules(&lex, RuleKind::Prefix, 0, theta).unwrap();
        prop_assert_eq!(rule_multiset(&rs), naive_morph(&lex, RuleKind::Prefix, 0, theta));
    }

    #[test]
    fn ending_extraction_matches_naive(lex in lexicon_strategy(60), max_len in 1usize..=5, theta in 1u64..=3) {
        let rs = extract_ending_rules(&lex, max_len, theta).unwrap();
        prop_assert_eq!(rule_multiset(&rs), naive_endings(&lex, max_len, theta));
    }

    #[test]
    fn scoring_matches_token_replay((lex, freqs) in lexicon_strategy(40)
        .prop_flat_map(|lex| { let f = freq_strategy(&lex); (Just(lex), f) }))
    {
        let mut rules = extract_morph_rules(&lex, RuleKind::Suffix, 1, 1).unwrap().into_rules();
        rules.extend(extract_morph_rules(&lex, RuleKind::Suffix, 0, 1).unwrap().into_rules());
        let rs = RuleSet::new(RuleKind::Suffix, 1, rules).unwrap();
        let scored = score_ruleset(&rs, &lex, &freqs);
        let map = plain_map(&lex);

        let mut expected = BTreeMap::new();
        for rule in rs.iter() {
            let (mut x, mut n) = (0u64, 0u64);
            for (word, count) in freqs.iter() {
                for _token in 0..count {
                    let Some(truth) = map.get(word) else { continue };
                    if let Some(guess) = naive_fire(rule, word, &map) {
                        n += 1;
                        x += u64::from(&guess == truth);
                    }
                }
            }
            if n > 0 {
                expected.insert(rule.to_string(), (x as f64, n as f64));
            }
        }
        let got: BTreeMap<String, (f64, f64)> = scored
            .iter()
            .map(|r| (r.to_string(), (r.stats.unwrap().x, r.stats.unwrap().n)))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn indexed_guessing_matches_linear_scan(lex in lexicon_strategy(40), probes in prop::collection::vec("[abcd]{1,8}", 1..30)) {
        let stages = vec![
            extract_morph_rules(&lex, RuleKind::Prefix, 0, 1).unwrap(),
            extract_morph_rules(&lex, RuleKind::Suffix, 1, 1).unwrap(),
            extract_morph_rules(&lex, RuleKind::Suffix, 0, 1).unwrap(),
            extract_ending_rules(&lex, 3, 1).unwrap(),
        ];
        let cfg = CascadeConfig::new(stages);
        let guesser = Guesser::new(&cfg);
        for w in &probes {
            for (i, rs) in cfg.stages.iter().enumerate() {
                let linear = guess_with_ruleset(w, rs, &lex);
                let indexed = guesser.guess_stage(i, w, &lex);
                prop_assert_eq!(linear, indexed);
            }
        }
    }

    #[test]
    fn evaluation_matches_per_word_replay(lex in lexicon_strategy(40)) {
        let stages = vec![
            extract_morph_rules(&lex, RuleKind::Suffix, 1, 1).unwrap(),
            extract_morph_rules(&lex, RuleKind::Suffix, 0, 1).unwrap(),
            extract_ending_rules(&lex, 2, 2).unwrap(),
        ];
        let cfg = CascadeConfig::new(stages);
        let evals = evaluate_words(&cfg, &lex, 5);
        let report = evals.lexicon_report();

        let mut total = 0usize;
        let mut covered = 0usize;
        let (mut p_sum, mut r_sum) = (0.0, 0.0);
        for (word, truth) in lex.iter() {
            if word.chars().count() < 5 {
                continue;
            }
            total += 1;
            let mut reduced = plain_map(&lex);
            reduced.remove(word);
            let guess = cfg.stages.iter().find_map(|rs| {
                rs.iter().find_map(|rule| naive_fire(rule, word, &reduced))
            });
            if let Some(g) = guess {
                covered += 1;
                let truth = tags(truth);
                let hit = g.iter().filter(|t| truth.contains(t)).count() as f64;
                p_sum += hit / g.len() as f64;
                r_sum += hit / truth.len() as f64;
            }
        }
        prop_assert_eq!(report.words_total as usize, total);
        prop_assert_eq!(report.words_covered as usize, covered);
        let cov = if total > 0 { covered as f64 / total as f64 } else { 0.0 };
        prop_assert!((report.coverage - cov).abs() < 1e-12);
        if covered > 0 {
            prop_assert!((report.precision - p_sum / covered as f64).abs() < 1e-12);
            prop_assert!((report.recall - r_sum / covered as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn six_entry_paradigm_by_enumeration() {
    let lex = morphguess::parse_lexicon(
        "book\tNN VB\nbooked\tJJ VBD VBN\nwater\tNN VB\nwatered\tJJ VBD VBN\nplay\tNN VB\nplayed\tJJ VBD VBN\n",
    )
    .unwrap();
    let naive = naive_morph(&lex, RuleKind::Suffix, 0, 3);
    let got = rule_multiset(&extract_morph_rules(&lex, RuleKind::Suffix, 0, 3).unwrap());
    assert_eq!(got, naive);
    assert_eq!(got.len(), 1);
    assert_eq!(got.values().copied().collect::<Vec<_>>(), [3]);
}

#[test]
fn tutorial_scores_match_token_replay() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/tutorial");
    let lex =
        morphguess::parse_lexicon(&std::fs::read_to_string(format!("{root}/lexicon.tsv")).unwrap())
            .unwrap();
    let freqs =
        parse_frequencies(&std::fs::read_to_string(format!("{root}/freqs.tsv")).unwrap()).unwrap();
    let rs = extract_morph_rules(&lex, RuleKind::Suffix, 1, 2).unwrap();
    let scored = score_ruleset(&rs, &lex, &freqs);
    let map = plain_map(&lex);
    let mut seen = BTreeSet::new();
    for rule in scored.iter() {
        let (mut x, mut n) = (0u64, 0u64);
        for (word, count) in freqs.iter() {
            for _ in 0..count {
                if let (Some(truth), Some(g)) = (map.get(word), naive_fire(rule, word, &map)) {
                    n += 1;
                    x += u64::from(&g == truth);
                }
            }
        }
        let stats = rule.stats.unwrap();
        assert_eq!((stats.x, stats.n), (x as f64, n as f64), "{rule}");
        seen.insert(rule.to_string());
    }
    assert!(seen.contains("[ied (NN VB) (JJ VBD VBN) y]"));
}
