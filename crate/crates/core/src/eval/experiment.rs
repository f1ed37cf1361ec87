//! The two evaluation protocols: random dot flips on words (A) and noisy
//! page images run through recognition (B).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::braille::CodeTable;
use crate::corrector::{BaselineCorrector, HammingCorrector, DEFAULT_MAX_DISTANCE};
use crate::dictionary::Lexicon;
use crate::imaging::{gaussian_blur, recognize_with, render, spread_noise, GrayImage, RecognizeConfig, RenderConfig};

use super::corrupt::{inject_bit_errors, token_rng};
use super::metrics::Metrics;
use super::report::{Method, Report, ReportMetadata, ReportRow};
use super::text::{layout_pages, Page};
use super::EvalError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LINES_PER_PAGE: usize = 25;
pub const PLAIN_CONDITION: &str = "plain";

/// 2.5, 5.0, ..., 30.0
pub fn default_error_percents() -> Vec<f64> {
    (1..=12).map(|i| f64::from(i) * 2.5).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentAConfig {
    pub error_percents: Vec<f64>,
    pub seed: u64,
    /// Tokenized texts.
    pub texts: Vec<Vec<String>>,
    pub max_distance: usize,
}

impl ExperimentAConfig {
    pub fn new(texts: Vec<Vec<String>>) -> Self {
        ExperimentAConfig {
            error_percents: default_error_percents(),
            seed: DEFAULT_SEED,
            texts,
            max_distance: DEFAULT_MAX_DISTANCE,
        }
    }
}

/// Both correctors over the same lexicon.
pub struct Correctors<'a> {
    pub ours: HammingCorrector<'a>,
    pub baseline: BaselineCorrector,
}

impl<'a> Correctors<'a> {
    pub fn new(lex: &Lexicon, table: &'a CodeTable, max_distance: usize) -> Self {
        Correctors {
            ours: HammingCorrector::new(lex, table),
            baseline: BaselineCorrector::new(lex, max_distance),
        }
    }

    pub fn correct(&self, method: Method, token: &str) -> String {
        match method {
            Method::Ours => self
                .ours
                .revise_token(token)
                .map_or_else(|| token.to_string(), |r| r.corrected),
            Method::Baseline => self.baseline.correct(token),
        }
    }

    /// One row per method for a condition.
    fn rows(
        &self,
        experiment: &str,
        condition: &str,
        seed: u64,
        input: &[String],
        truth: &[String],
        lex: &Lexicon,
    ) -> Result<Vec<ReportRow>, EvalError> {
        Method::ALL
            .iter()
            .map(|&method| {
                let corrected: Vec<String> = input.par_iter().map(|t| self.correct(method, t)).collect();
                Ok(ReportRow {
                    experiment: experiment.to_string(),
                    condition: condition.to_string(),
                    method,
                    seed,
                    words: truth.len(),
                    metrics: Metrics::compute(&corrected, input, truth, lex)?,
                })
            })
            .collect()
    }
}

pub fn percent_label(percent: f64) -> String {
    format!("{percent}%")
}

/// Corrupts every token at each error percent and scores both correctors.
/// Tokens whose corruption is infeasible are left out of that condition.
pub fn run_experiment_a(cfg: &ExperimentAConfig, lex: &Lexicon, table: &CodeTable) -> Result<Report, EvalError> {
    if let Some(&bad) = cfg.error_percents.iter().find(|&&p| !(p > 0.0 && p <= 100.0)) {
        return Err(EvalError::InvalidPercent(bad));
    }
    let mut report = Report {
        rows: Vec::new(),
        metadata: ReportMetadata {
            seed: cfg.seed,
            ..ReportMetadata::default()
        },
    };
    if cfg.error_percents.is_empty() {
        return Ok(report);
    }
    let correctors = Correctors::new(lex, table, cfg.max_distance);
    let tokens: Vec<(usize, usize, &str)> = cfg
        .texts
        .iter()
        .enumerate()
        .flat_map(|(t, text)| text.iter().enumerate().map(move |(i, w)| (t, i, w.as_str())))
        .collect();

    for &percent in &cfg.error_percents {
        let corrupted: Vec<Option<(String, String)>> = tokens
            .par_iter()
            .map(|&(t, i, word)| {
                let mut rng = token_rng(cfg.seed, percent.to_bits(), t, i);
                match inject_bit_errors(word, percent, &mut rng, table) {
                    Ok(c) => Some((word.to_string(), c.word)),
                    Err(err) => {
                        log::warn!("skipping {word:?} at {percent}%: {err}");
                        None
                    }
                }
            })
            .collect();
        let (truth, input): (Vec<String>, Vec<String>) = corrupted.into_iter().flatten().unzip();
        report.rows.extend(correctors.rows(
            "a",
            &percent_label(percent),
            cfg.seed,
            &input,
            &truth,
            lex,
        )?);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    Blur,
    Spread,
}

/// An image degradation: Gaussian blur with sigma `parameter`, or pixel
/// spread by up to `parameter` pixels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub parameter: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn blur(sigma: f64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Blur,
            parameter: sigma,
            seed: DEFAULT_SEED,
        }
    }

    pub fn spread(amount: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Spread,
            parameter: amount,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let ok = match self.kind {
            NoiseKind::Blur => self.parameter > 0.0 && self.parameter.is_finite(),
            NoiseKind::Spread => self.parameter >= 0.0 && self.parameter.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(EvalError::InvalidNoise(self.to_string()))
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Applies the degradation; `page` varies the spread pattern between pages.
    pub fn apply(&self, img: &GrayImage, page: usize) -> Result<GrayImage, EvalError> {
        self.validate()?;
        Ok(match self.kind {
            NoiseKind::Blur => gaussian_blur(img, self.parameter)?,
            NoiseKind::Spread => {
                let seed = self.seed ^ (page as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                spread_noise(img, self.parameter.round() as usize, seed)
            }
        })
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            NoiseKind::Blur => "blur",
            NoiseKind::Spread => "spread",
        };
        write!(f, "{kind} {}", self.parameter)
    }
}

/// Parses `blur:3.0` or `spread:10`; the seed defaults to [`DEFAULT_SEED`].
impl FromStr for NoiseSpec {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || EvalError::InvalidNoise(s.to_string());
        let (kind, value) = s.split_once([':', '=']).ok_or_else(invalid)?;
        let parameter: f64 = value.trim().parse().map_err(|_| invalid())?;
        let kind = match kind.trim() {
            "blur" => NoiseKind::Blur,
            "spread" => NoiseKind::Spread,
            _ => return Err(invalid()),
        };
        let spec = NoiseSpec {
            kind,
            parameter,
            seed: DEFAULT_SEED,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Blur 3 and 5, spread 10 and 20.
pub fn default_noise_specs(seed: u64) -> Vec<NoiseSpec> {
    vec![
        NoiseSpec { seed, ..NoiseSpec::blur(3.0) },
        NoiseSpec { seed, ..NoiseSpec::blur(5.0) },
        NoiseSpec::spread(10.0, seed),
        NoiseSpec::spread(20.0, seed),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentBConfig {
    pub noise_specs: Vec<NoiseSpec>,
    pub render: RenderConfig,
    pub recognize: RecognizeConfig,
    pub lines_per_page: usize,
    pub seed: u64,
    pub texts: Vec<Vec<String>>,
    pub max_distance: usize,
}

impl ExperimentBConfig {
    pub fn new(texts: Vec<Vec<String>>) -> Self {
        let render = RenderConfig::default();
        ExperimentBConfig {
            noise_specs: default_noise_specs(DEFAULT_SEED),
            render,
            recognize: RecognizeConfig::for_render(render),
            lines_per_page: DEFAULT_LINES_PER_PAGE,
            seed: DEFAULT_SEED,
            texts,
            max_distance: DEFAULT_MAX_DISTANCE,
        }
    }

    pub fn pages(&self) -> Vec<Page> {
        self.texts
            .iter()
            .flat_map(|tokens| layout_pages(tokens, self.render.max_cells_per_line, self.lines_per_page))
            .collect()
    }
}

/// Recognized tokens of every page under one condition, in page order.
pub fn recognize_pages(
    pages: &[Page],
    clean: &[GrayImage],
    noise: Option<&NoiseSpec>,
    table: &CodeTable,
    cfg: &RecognizeConfig,
) -> Result<Vec<String>, EvalError> {
    let per_page: Vec<Vec<String>> = pages
        .par_iter()
        .zip(clean)
        .enumerate()
        .map(|(index, (page, img))| {
            let noisy;
            let img = match noise {
                Some(spec) => {
                    noisy = spec.apply(img, index)?;
                    &noisy
                }
                None => img,
            };
            let out = recognize_with(img, table, cfg);
            log::debug!(
                "page {index}: {} lines, {} cells, {} unreadable",
                out.text.len(),
                out.cells_total,
                out.cells_failed
            );
            Ok(page.extract_tokens(&out.text, cfg.fallback))
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(per_page.into_iter().flatten().collect())
}

/// Renders the texts, degrades the pages per condition, recognizes them and
/// scores both correctors on the recognized tokens. The first condition is
/// always the undegraded page.
pub fn run_experiment_b(cfg: &ExperimentBConfig, lex: &Lexicon, table: &CodeTable) -> Result<Report, EvalError> {
    for spec in &cfg.noise_specs {
        spec.validate()?;
    }
    let pages = cfg.pages();
    let clean: Vec<GrayImage> = pages
        .par_iter()
        .map(|p| render(&p.lines, table, &cfg.render))
        .collect::<Result<_, _>>()?;
    let truth: Vec<String> = pages.iter().flat_map(|p| p.tokens.iter().cloned()).collect();
    let correctors = Correctors::new(lex, table, cfg.max_distance);

    let mut report = Report {
        rows: Vec::new(),
        metadata: ReportMetadata {
            seed: cfg.seed,
            ..ReportMetadata::default()
        },
    };
    let conditions = std::iter::once(None).chain(cfg.noise_specs.iter().map(Some));
    for noise in conditions {
        let label = noise.map_or_else(|| PLAIN_CONDITION.to_string(), NoiseSpec::label);
        let seed = noise.map_or(cfg.seed, |n| n.seed);
        let input = recognize_pages(&pages, &clean, noise, table, &cfg.recognize)?;
        report.rows.extend(correctors.rows("b", &label, seed, &input, &truth, lex)?);
    }
    Ok(report)
}
