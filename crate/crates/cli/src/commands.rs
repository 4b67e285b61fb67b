use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use morphguess::guesser::is_capitalized;
use morphguess::scoring::threshold_filter;
use morphguess::{
    batch_guess, evaluate_words, extract_ending_rules_with_min_len, extract_morph_rules,
    parse_frequencies, parse_lexicon, score_ruleset, sweep_thresholds, tagging_scores,
    CascadeConfig, EvalSummary, FrequencyTable, Lexicon, RuleKind, RuleSet, Tag,
};

use crate::config::RunConfig;
use crate::Command;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<()> {
    match cmd {
        Command::Induce(a) => induce(cfg, a.out.as_deref()),
        Command::Score(a) => score(cfg, a.out.as_deref()),
        Command::Sweep(a) => sweep(
            cfg,
            a.out.as_deref(),
            a.scored_out.as_deref(),
            a.sets_dir.as_deref(),
        ),
        Command::Guess(a) => guess(cfg, a.input.as_deref(), a.explain, a.out.as_deref()),
        Command::Explain(a) => {
            let out = guess_lines(cfg, &a.words, true)?;
            emit(None, &out)
        }
        Command::Eval(a) => eval(cfg, a),
    }
}

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {what} {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load_lexicon(cfg: &RunConfig) -> Result<Lexicon> {
    let path = cfg.require_lexicon()?;
    let lex = parse_lexicon(&read(path, "lexicon")?)
        .with_context(|| format!("in lexicon {}", path.display()))?;
    let closed = cfg
        .closed_class
        .iter()
        .map(|t| Tag::new(t.as_str()))
        .collect::<morphguess::Result<Vec<_>>>()
        .context("invalid closed-class tag")?;
    Ok(lex.with_closed_class(closed))
}

fn load_freqs(path: &Path) -> Result<FrequencyTable> {
    parse_frequencies(&read(path, "frequency table")?)
        .with_context(|| format!("in frequency table {}", path.display()))
}

fn load_rules(path: &Path) -> Result<RuleSet> {
    RuleSet::from_rule_file(&read(path, "rule file")?)
        .with_context(|| format!("in rule file {}", path.display()))
}

fn induce(cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let lex = load_lexicon(cfg)?;
    let kind = RuleKind::from(cfg.kind);
    let candidates = match kind {
        RuleKind::Ending => extract_ending_rules_with_min_len(&lex, cfg.max_len, 1, cfg.min_len)?,
        _ => extract_morph_rules(&lex, kind, cfg.mutation, 1)?,
    };
    let kept = candidates.retain(|r| r.freq >= cfg.theta_f);
    eprintln!(
        "{} candidate rules, {} kept at theta-f {}",
        candidates.len(),
        kept.len(),
        cfg.theta_f
    );
    emit(out, &kept.to_rule_file())
}

fn score(cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let lex = load_lexicon(cfg)?;
    let freqs = load_freqs(cfg.require_freqs()?)?;
    let rules = load_rules(cfg.require_rules()?)?;
    let mut scored = score_ruleset(&rules, &lex, &freqs);
    if let Some(theta) = cfg.theta_s {
        scored = threshold_filter(&scored, theta)?;
        eprintln!(
            "{} of {} rules score above {theta}",
            scored.len(),
            rules.len()
        );
    }
    emit(out, &scored.to_rule_file())
}

fn sweep(
    cfg: &RunConfig,
    out: Option<&Path>,
    scored_out: Option<&Path>,
    sets_dir: Option<&Path>,
) -> Result<()> {
    let lex = load_lexicon(cfg)?;
    let freqs = load_freqs(cfg.require_freqs()?)?;
    let mut rules = load_rules(cfg.require_rules()?)?;
    if rules.iter().any(|r| r.stats.is_none()) {
        rules = score_ruleset(&rules, &lex, &freqs);
    }
    let report = sweep_thresholds(&rules, &lex, &freqs, &cfg.grid, cfg.min_len)?;
    let variant = rules.variant_letter();
    if let Some(p) = scored_out {
        emit(Some(p), &rules.to_rule_file())?;
    }
    if let Some(dir) = sets_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for row in &report.rows {
            let set = threshold_filter(&rules, row.theta_s)?;
            let path = dir.join(format!("{}.rules", row.label(variant)));
            emit(Some(&path), &set.to_rule_file())?;
        }
    }
    if let Some(best) = report.best_row() {
        eprintln!(
            "selected theta-s {} ({}), aggregate {:.6}, {} rules",
            best.theta_s,
            best.label(variant),
            best.aggregate(),
            best.rule_count
        );
    }
    emit(out, &report.to_tsv())
}

fn cascade(cfg: &RunConfig) -> Result<CascadeConfig> {
    let stages = cfg
        .stages
        .iter()
        .map(|p| load_rules(p))
        .collect::<Result<Vec<_>>>()?;
    let mut c = CascadeConfig::new(stages);
    c.fallback_common = Tag::new(cfg.fallback_common.as_str()).context("invalid fallback tag")?;
    c.fallback_proper = Tag::new(cfg.fallback_proper.as_str()).context("invalid fallback tag")?;
    c.lowercase_input = cfg.lowercase;
    Ok(c)
}

fn guess_lines<S: AsRef<str> + Sync>(
    cfg: &RunConfig,
    words: &[S],
    explain: bool,
) -> Result<String> {
    let lex = load_lexicon(cfg)?;
    let casc = cascade(cfg)?;
    let input: Vec<(&str, bool)> = words
        .iter()
        .map(|w| (w.as_ref(), is_capitalized(w.as_ref())))
        .collect();
    let results = batch_guess(&input, &casc, &lex);
    let mut out = String::new();
    for ((word, _), g) in input.iter().zip(&results) {
        let rec = g.record(word, explain);
        out.push_str(&rec.word);
        out.push('\t');
        out.push_str(&rec.tags);
        out.push('\t');
        out.push_str(&rec.provenance);
        if let (Some(rule), Some(stem)) = (&rec.rule, &rec.stem) {
            out.push('\t');
            out.push_str(rule);
            out.push('\t');
            out.push_str(stem);
        }
        out.push('\n');
    }
    Ok(out)
}

fn guess(cfg: &RunConfig, input: Option<&Path>, explain: bool, out: Option<&Path>) -> Result<()> {
    let text = match input {
        Some(p) => read(p, "input")?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("cannot read stdin")?;
            s
        }
    };
    let words: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .collect();
    emit(out, &guess_lines(cfg, &words, explain)?)
}

/// Reads `token<TAB>tag` lines; with `tag_only`, a bare `tag` is accepted too.
fn read_tagged(path: &Path, tag_only: bool) -> Result<Vec<(Option<String>, Tag)>> {
    let text = read(path, "tagged text")?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (token, tag) = match fields.as_slice() {
            [tok, tag] => (Some(tok.to_string()), *tag),
            [tag] if tag_only => (None, *tag),
            _ => bail!("{}:{}: expected token<TAB>tag", path.display(), i + 1),
        };
        let tag = Tag::new(tag.trim())
            .with_context(|| format!("{}:{}: invalid tag", path.display(), i + 1))?;
        rows.push((token, tag));
    }
    Ok(rows)
}

fn eval(cfg: &RunConfig, args: &crate::EvalArgs) -> Result<()> {
    let lex = load_lexicon(cfg)?;
    let casc = cascade(cfg)?;
    let words = evaluate_words(&casc, &lex, cfg.min_len);
    let corpus = match &cfg.freqs {
        Some(p) => Some(words.corpus_report(&load_freqs(p)?)),
        None => None,
    };
    let tagging = match (&args.gold, &args.pred) {
        (Some(g), Some(p)) => {
            let gold = read_tagged(g, false)?;
            let pred = read_tagged(p, true)?;
            if gold.len() != pred.len() {
                bail!(
                    "{} has {} tokens but {} has {}",
                    g.display(),
                    gold.len(),
                    p.display(),
                    pred.len()
                );
            }
            for (k, ((gt, _), (pt, _))) in gold.iter().zip(&pred).enumerate() {
                if let (Some(gt), Some(pt)) = (gt, pt) {
                    if gt != pt {
                        bail!(
                            "token {} differs: {gt:?} in gold, {pt:?} in prediction",
                            k + 1
                        );
                    }
                }
            }
            let mask: Vec<bool> = gold
                .iter()
                .map(|(t, _)| {
                    let t = t.as_deref().unwrap_or_default();
                    !lex.contains(t) && !lex.contains(&t.to_lowercase())
                })
                .collect();
            let gold: Vec<(String, Tag)> = gold
                .into_iter()
                .map(|(t, tag)| (t.unwrap_or_default(), tag))
                .collect();
            let pred: Vec<Tag> = pred.into_iter().map(|(_, t)| t).collect();
            Some(tagging_scores(&gold, &pred, &mask)?)
        }
        _ => None,
    };
    let summary = EvalSummary {
        lexicon: words.lexicon_report(),
        corpus,
        tagging,
    };
    let text = if args.json {
        serde_json::to_string_pretty(&summary)? + "\n"
    } else if args.tsv {
        summary.to_tsv()
    } else {
        summary.to_string()
    };
    emit(args.out.as_deref(), &text)
}
