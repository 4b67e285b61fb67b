//! Effective run configuration: built-in defaults, overlaid by an optional
//! TOML config file, overlaid by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use morphguess::lexicon::DEFAULT_CLOSED_CLASS_TAGS;
use morphguess::scoring::default_grid;
use morphguess::{RuleKind, DEFAULT_MAX_ENDING_LEN, DEFAULT_MIN_LEN, DEFAULT_THETA_F};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Prefix,
    Suffix,
    Ending,
}

impl From<KindArg> for RuleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Prefix => RuleKind::Prefix,
            KindArg::Suffix => RuleKind::Suffix,
            KindArg::Ending => RuleKind::Ending,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub freqs: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    /// Cascade stages, in application order.
    pub stages: Vec<PathBuf>,
    pub kind: KindArg,
    pub mutation: usize,
    pub theta_f: u64,
    pub theta_s: Option<f64>,
    pub grid: Vec<f64>,
    pub max_len: usize,
    pub min_len: usize,
    pub fallback_common: String,
    pub fallback_proper: String,
    pub lowercase: bool,
    pub closed_class: Vec<String>,
    /// Worker threads; 0 lets the runtime decide.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lexicon: None,
            freqs: None,
            rules: None,
            stages: Vec::new(),
            kind: KindArg::Suffix,
            mutation: 0,
            theta_f: DEFAULT_THETA_F,
            theta_s: None,
            grid: default_grid(),
            max_len: DEFAULT_MAX_ENDING_LEN,
            min_len: DEFAULT_MIN_LEN,
            fallback_common: "NN".into(),
            fallback_proper: "NP".into(),
            lowercase: true,
            closed_class: DEFAULT_CLOSED_CLASS_TAGS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            jobs: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_f < 1 {
            bail!("theta-f must be >= 1");
        }
        if self.min_len < 1 {
            bail!("min-len must be >= 1");
        }
        if self.max_len < 1 {
            bail!("max-len must be >= 1");
        }
        if self.grid.is_empty() {
            bail!("threshold grid is empty");
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            bail!("threshold grid contains a non-finite value");
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            bail!("threshold grid must be strictly ascending");
        }
        if self.kind != KindArg::Suffix && self.mutation != 0 {
            bail!("--mutation applies to suffix rules only");
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn require_lexicon(&self) -> Result<&Path> {
        self.lexicon
            .as_deref()
            .context("no lexicon given (use --lexicon)")
    }

    pub fn require_freqs(&self) -> Result<&Path> {
        self.freqs
            .as_deref()
            .context("no frequency table given (use --freqs)")
    }

    pub fn require_rules(&self) -> Result<&Path> {
        self.rules
            .as_deref()
            .context("no rule file given (use --rules)")
    }
}
