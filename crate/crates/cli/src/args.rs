use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use mfdfa_core::ingest::BONN_DATASET_ENV;
use mfdfa_core::pipeline::{ClassifierKind, PipelineConfig};
use mfdfa_core::FeatureConvention;

#[derive(Debug, Parser)]
#[command(name = "mfdfa", version, about = "Multifractal EEG analysis and seizure classification")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(flatten)]
    pub config: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of the defaults (or of `--config`).
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON file with pipeline settings; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Root of the five-set EEG archive.
    #[arg(long, global = true, env = BONN_DATASET_ENV, value_name = "DIR")]
    pub dataset_root: Option<PathBuf>,

    /// Smallest moment order [default: -5]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q_min: Option<f64>,
    /// Largest moment order [default: 5]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub q_max: Option<f64>,
    /// Spacing of the q grid [default: 0.1]
    #[arg(long, global = true)]
    pub q_step: Option<f64>,

    /// Smallest segment length [default: 16]
    #[arg(long, global = true)]
    pub scale_min: Option<usize>,
    /// Largest segment length [default: 1024]
    #[arg(long, global = true)]
    pub scale_max: Option<usize>,
    /// Number of logarithmic intervals between the extreme scales [default: 19]
    #[arg(long, global = true)]
    pub scale_intervals: Option<usize>,
    /// Order of the local detrending polynomial [default: 1]
    #[arg(long, global = true)]
    pub detrend_order: Option<usize>,
    /// Fewest scales a q-row may be regressed on [default: 4]
    #[arg(long, global = true)]
    pub min_fit_scales: Option<usize>,

    /// Cross-validation folds [default: 10]
    #[arg(long, global = true)]
    pub cv_folds: Option<usize>,
    /// Seed for fold assignment and synthetic signals [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sign convention of the peak-to-edge features f7 and f8 [default: literal]
    #[arg(long, global = true, value_parser = ["literal", "table-consistent"])]
    pub feature_convention: Option<String>,
    /// Classifier used in selection and evaluation [default: svm]
    #[arg(long, global = true, value_parser = ["svm", "knn"])]
    pub classifier: Option<String>,

    /// Directory for all outputs and the manifest [default: out]
    #[arg(short, long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    /// Comma-separated SVM penalties.
    #[arg(long, global = true, value_delimiter = ',')]
    pub c_grid: Option<Vec<f64>>,
    /// Comma-separated RBF widths.
    #[arg(long, global = true, value_delimiter = ',')]
    pub gamma_grid: Option<Vec<f64>>,
    /// Comma-separated odd neighbour counts.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,
}

impl ConfigArgs {
    pub fn apply(&self, mut c: PipelineConfig) -> PipelineConfig {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field {
                    c.$field = v.clone();
                })*
            };
        }
        set!(
            q_min,
            q_max,
            q_step,
            scale_min,
            scale_max,
            scale_intervals,
            detrend_order,
            min_fit_scales,
            cv_folds,
            seed,
            output_dir,
            c_grid,
            gamma_grid,
            k_grid
        );
        if let Some(root) = &self.dataset_root {
            c.dataset_root = Some(root.clone());
        }
        if let Some(conv) = &self.feature_convention {
            c.feature_convention = conv.parse::<FeatureConvention>().expect("validated by clap");
        }
        if let Some(kind) = &self.classifier {
            c.classifier = kind.parse::<ClassifierKind>().expect("validated by clap");
        }
        c
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Write h(q), tau(q) and f(alpha) curves for signal files or set folders.
    Analyze(AnalyzeArgs),
    /// Extract the 14 spectrum features of every signal in the archive.
    Features(FeaturesArgs),
    /// Rank features by two-sample t-test for classification problems.
    Rank(ProblemArgs),
    /// Full pipeline: features, ranking, forward selection, cross-validation.
    Run(ProblemArgs),
    /// Generate a synthetic signal in the archive's text format.
    Synth(SynthArgs),
    /// Re-run a command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    /// Signal files or folders of signal files. Defaults to every set under
    /// the dataset root.
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FeaturesArgs {
    /// Sets to process, e.g. `A,E`. Defaults to every set found.
    #[arg(long, value_delimiter = ',')]
    pub sets: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ProblemArgs {
    /// Problems I..VIII, comma-separated, or `all`.
    #[arg(long = "problem", short = 'p', value_delimiter = ',', default_value = "all")]
    pub problems: Vec<String>,

    /// Read features from this CSV instead of analyzing the archive.
    #[arg(long, value_name = "CSV")]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    White,
    Fgn,
    Cascade,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    pub kind: SynthKind,

    /// Number of samples (white noise and fGn).
    #[arg(short, long, default_value_t = 16384)]
    pub n: usize,

    /// Hurst exponent of the fGn.
    #[arg(long, default_value_t = 0.7)]
    pub hurst: f64,

    /// Cascade depth; the signal has 2^levels samples.
    #[arg(short = 'k', long, default_value_t = 16)]
    pub levels: u32,

    /// Cascade multiplier in (0.5, 1).
    #[arg(short = 'a', long, default_value_t = 0.6)]
    pub multiplier: f64,

    /// Keep every cascade split in the same orientation.
    #[arg(long)]
    pub no_shuffle: bool,

    /// Output file. Defaults to `<output-dir>/<kind>.txt`.
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,

    /// Write outputs here instead of the recorded directory.
    #[arg(long, value_name = "DIR")]
    pub into: Option<PathBuf>,
}
