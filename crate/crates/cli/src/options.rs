//! Shared options. Every field can come from a flag or from the `--config`
//! JSON file; flags win, then the file, then built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use groundchain::trainer::Kernel;
use groundchain::{AblationFlags, Error, ScorerKind};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerArg {
    Bm25,
    Unification,
}

impl From<ScorerArg> for ScorerKind {
    fn from(s: ScorerArg) -> Self {
        match s {
            ScorerArg::Bm25 => ScorerKind::Bm25,
            ScorerArg::Unification => ScorerKind::Unification,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelArg {
    Matern52,
    SquaredExponential,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Matern52 => Kernel::Matern52,
            KernelArg::SquaredExponential => Kernel::SquaredExponential,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// JSON file with defaults for any of these options
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Grounding facts (TSV `id<TAB>text` or JSONL)
    #[arg(long, global = true)]
    pub grounding_kb: Option<PathBuf>,
    /// Abstract facts (TSV or JSONL)
    #[arg(long, global = true)]
    pub abstract_kb: Option<PathBuf>,
    /// Questions JSONL
    #[arg(long, global = true)]
    pub questions: Option<PathBuf>,
    /// Questions with gold explanations for the unification scorer
    #[arg(long, global = true)]
    pub train_questions: Option<PathBuf>,
    /// Directory holding prebuilt indexes from `index`
    #[arg(long, global = true)]
    pub index: Option<PathBuf>,
    /// Weight parameters JSON (defaults to the sign pattern)
    #[arg(long, global = true)]
    pub theta: Option<PathBuf>,
    /// Stopword, lemma and lexicon configuration
    #[arg(long, global = true)]
    pub term_config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Facts retrieved per candidate, split evenly
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Grounding facts per candidate (overrides k)
    #[arg(long, global = true)]
    pub l: Option<usize>,
    /// Abstract facts per candidate (overrides k)
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Cap on abstract facts in an explanation
    #[arg(long = "big-k", global = true)]
    pub big_k: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub scorer: Option<ScorerArg>,
    /// Comma list, e.g. `no-overlap,no-tuning`
    #[arg(long, global = true)]
    pub ablation: Option<String>,
    #[arg(long, global = true)]
    pub k1: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_mix: Option<f64>,
    #[arg(long, global = true)]
    pub top_j: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[arg(long, global = true)]
    pub n_initial: Option<usize>,
    #[arg(long, global = true)]
    pub n_iterations: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub kernel: Option<KernelArg>,
    #[arg(long, global = true)]
    pub length_scale: Option<f64>,
    #[arg(long, global = true)]
    pub noise: Option<f64>,
    #[arg(long, global = true)]
    pub acq_samples: Option<usize>,
    #[arg(long, global = true)]
    pub acq_restarts: Option<usize>,
}

const PATH_FIELDS: [&str; 8] =
    ["grounding_kb", "abstract_kb", "questions", "train_questions", "index", "theta", "term_config", "out"];

impl Options {
    /// Overlays the flags on the config file, if any.
    pub fn resolve(self) -> anyhow::Result<Options> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
        let mut file: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Value::Object(map) = &mut file {
            for key in PATH_FIELDS {
                if let Some(Value::String(p)) = map.get_mut(key) {
                    if Path::new(p.as_str()).is_relative() {
                        *p = base.join(&*p).to_string_lossy().into_owned();
                    }
                }
            }
        }
        let Value::Object(mut merged) = file else {
            return Err(Error::Config(format!("{}: expected a JSON object", path.display())).into());
        };
        if let Value::Object(flags) = serde_json::to_value(&self)? {
            for (key, value) in flags {
                if !value.is_null() {
                    merged.insert(key, value);
                }
            }
        }
        let mut out: Options = serde_json::from_value(Value::Object(merged))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        out.config = Some(path);
        Ok(out)
    }

    pub fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
        value
            .as_deref()
            .ok_or_else(|| Error::Config(format!("missing --{flag}")).into())
    }

    pub fn ablation(&self) -> anyhow::Result<AblationFlags> {
        Ok(self.ablation.as_deref().unwrap_or("").parse()?)
    }

    pub fn out_dir(&self) -> anyhow::Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }
}
