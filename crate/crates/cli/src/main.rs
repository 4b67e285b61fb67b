mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{KindArg, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "morphguess",
    version,
    about = "Induce and apply unknown-word POS guessing rules"
)]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Print the effective configuration as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Report wall-clock time on stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract rules from a lexicon.
    Induce(InduceArgs),
    /// Attach statistics to a rule file.
    Score(ScoreArgs),
    /// Evaluate a scored rule set over a grid of thresholds.
    Sweep(SweepArgs),
    /// Guess classes for words read from a file or stdin.
    Guess(GuessArgs),
    /// Like `guess --explain`, for words given on the command line.
    Explain(ExplainArgs),
    /// Evaluate a cascade against the lexicon and optionally a tagged text.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct LexiconArgs {
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Comma-separated closed-class tags, replacing the default list.
    #[arg(long, value_name = "TAGS", value_delimiter = ',')]
    closed_class: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct InduceArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Characters cut from the main word (suffix rules only).
    #[arg(long)]
    mutation: Option<usize>,
    /// Minimum number of witnessing pairs.
    #[arg(long)]
    theta_f: Option<u64>,
    /// Longest ending considered (ending rules only).
    #[arg(long)]
    max_len: Option<usize>,
    /// Shortest word used for ending rules.
    #[arg(long)]
    min_len: Option<usize>,
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    freqs: Option<PathBuf>,
    /// Keep only rules scoring above this value.
    #[arg(long)]
    theta_s: Option<f64>,
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    freqs: Option<PathBuf>,
    /// Comma-separated ascending thresholds.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long)]
    min_len: Option<usize>,
    /// Sweep table destination.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the scored rule set here.
    #[arg(long, value_name = "FILE")]
    scored_out: Option<PathBuf>,
    /// Write one thresholded rule file per grid point into this directory.
    #[arg(long, value_name = "DIR")]
    sets_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CascadeArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Rule file for one cascade stage; repeat in application order.
    #[arg(long = "stage", value_name = "FILE")]
    stages: Vec<PathBuf>,
    #[arg(long)]
    fallback_common: Option<String>,
    #[arg(long)]
    fallback_proper: Option<String>,
    /// Match words as given instead of lowercasing them.
    #[arg(long)]
    no_lowercase: bool,
}

#[derive(Args, Debug)]
struct GuessArgs {
    #[command(flatten)]
    cascade: CascadeArgs,
    /// One word per line; stdin when omitted.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Add the rule and stem behind each guess.
    #[arg(long)]
    explain: bool,
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExplainArgs {
    #[command(flatten)]
    cascade: CascadeArgs,
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    cascade: CascadeArgs,
    #[arg(long, value_name = "FILE")]
    freqs: Option<PathBuf>,
    #[arg(long)]
    min_len: Option<usize>,
    /// Tab-separated report instead of a table.
    #[arg(long, conflicts_with = "json")]
    tsv: bool,
    #[arg(long)]
    json: bool,
    /// Gold-standard tagged text, `token<TAB>tag` per line.
    #[arg(long, value_name = "FILE", requires = "pred")]
    gold: Option<PathBuf>,
    /// Tagger output aligned with --gold: `token<TAB>tag` or `tag` per line.
    #[arg(long, value_name = "FILE", requires = "gold")]
    pred: Option<PathBuf>,
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl LexiconArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(p) = &self.lexicon {
            cfg.lexicon = Some(p.clone());
        }
        if let Some(t) = &self.closed_class {
            cfg.closed_class = t.clone();
        }
    }
}

impl CascadeArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        self.lex.apply(cfg);
        if !self.stages.is_empty() {
            cfg.stages = self.stages.clone();
        }
        if let Some(t) = &self.fallback_common {
            cfg.fallback_common = t.clone();
        }
        if let Some(t) = &self.fallback_proper {
            cfg.fallback_proper = t.clone();
        }
        if self.no_lowercase {
            cfg.lowercase = false;
        }
    }
}

fn set<T: Clone>(slot: &mut T, flag: &Option<T>) {
    if let Some(v) = flag {
        *slot = v.clone();
    }
}

impl Command {
    fn apply(&self, cfg: &mut RunConfig) {
        match self {
            Command::Induce(a) => {
                a.lex.apply(cfg);
                set(&mut cfg.kind, &a.kind);
                set(&mut cfg.mutation, &a.mutation);
                set(&mut cfg.theta_f, &a.theta_f);
                set(&mut cfg.max_len, &a.max_len);
                set(&mut cfg.min_len, &a.min_len);
            }
            Command::Score(a) => {
                a.lex.apply(cfg);
                if a.rules.is_some() {
                    cfg.rules = a.rules.clone();
                }
                if a.freqs.is_some() {
                    cfg.freqs = a.freqs.clone();
                }
                if a.theta_s.is_some() {
                    cfg.theta_s = a.theta_s;
                }
            }
            Command::Sweep(a) => {
                a.lex.apply(cfg);
                if a.rules.is_some() {
                    cfg.rules = a.rules.clone();
                }
                if a.freqs.is_some() {
                    cfg.freqs = a.freqs.clone();
                }
                set(&mut cfg.grid, &a.grid);
                set(&mut cfg.min_len, &a.min_len);
            }
            Command::Guess(a) => a.cascade.apply(cfg),
            Command::Explain(a) => a.cascade.apply(cfg),
            Command::Eval(a) => {
                a.cascade.apply(cfg);
                if a.freqs.is_some() {
                    cfg.freqs = a.freqs.clone();
                }
                set(&mut cfg.min_len, &a.min_len);
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    cli.command.apply(&mut cfg);
    if cli.dump_config {
        print!("{}", cfg.to_toml()?);
        return Ok(());
    }
    cfg.validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()?;
    let start = Instant::now();
    let result = pool.install(|| commands::dispatch(&cli.command, &cfg));
    if cli.timing {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    result
}

fn main() -> ExitCode {
    match std::panic::catch_unwind(|| run(Cli::parse())) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(1),
    }
}
