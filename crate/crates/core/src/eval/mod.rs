//! Metrics, corruption and the experiment harness.

mod corrupt;
mod experiment;
mod metrics;
mod report;
mod text;

use std::path::PathBuf;

pub use corrupt::{flip_count, inject_bit_errors, token_rng, Corruption, MAX_REDRAWS};
pub use experiment::{
    default_error_percents, default_noise_specs, percent_label, recognize_pages, run_experiment_a, run_experiment_b,
    Correctors, ExperimentAConfig, ExperimentBConfig, NoiseKind, NoiseSpec, DEFAULT_LINES_PER_PAGE, DEFAULT_SEED,
    PLAIN_CONDITION,
};
pub use metrics::{avg_levenshtein, char_error, dict_coverage, hit_rate, levenshtein, word_error, Metrics};
pub use report::{Method, Report, ReportMetadata, ReportRow, CSV_HEADER};
pub use text::{layout_pages, load_corpus_dir, tokenize, Document, Page, TokenSpan};

use crate::braille::BrailleError;
use crate::imaging::ImagingError;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("token lists differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("error percent must be in (0, 100], got {0}")]
    InvalidPercent(f64),
    #[error("no valid corruption of {word:?} at {percent}%")]
    CorruptionInfeasible { word: String, percent: f64 },
    #[error("invalid noise specification {0:?}")]
    InvalidNoise(String),
    #[error("no .txt files in {}", .0.display())]
    EmptyCorpus(PathBuf),
    #[error(transparent)]
    Braille(#[from] BrailleError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing report: {0}")]
    Csv(#[from] csv::Error),
}
