//! `braillecheck`: render, degrade, transcribe and revise braille pages, and
//! run the correction experiments.

mod config;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use braillecheck_core::braille::CodeTable;
use braillecheck_core::corrector::{BaselineCorrector, HammingCorrector, DEFAULT_MAX_DISTANCE};
use braillecheck_core::dictionary::{Lexicon, DICT_ENV};
use braillecheck_core::eval::{
    default_error_percents, default_noise_specs, layout_pages, load_corpus_dir, run_experiment_a, run_experiment_b,
    tokenize, EvalError, ExperimentAConfig, ExperimentBConfig, Method, NoiseSpec, Report, DEFAULT_LINES_PER_PAGE,
    DEFAULT_SEED,
};
use braillecheck_core::imaging::{recognize_with, render, GrayImage, ImagingError, RecognizeConfig, RenderConfig};
use braillecheck_core::BrailleError;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigFile, Invalid};

const EXIT_IO: u8 = 1;
const EXIT_NO_LINES: u8 = 2;
const EXIT_INVALID: u8 = 3;

const DEFAULT_DICT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/pt_br_freq.txt.gz");

#[derive(Debug, Parser)]
#[command(name = "braillecheck", version, about = "Braille page recognition and dot-distance spelling correction")]
struct Cli {
    /// Code table file (defaults to the built-in Portuguese table).
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// `key = value` file with default parameters; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct GeometryArgs {
    #[arg(long)]
    dot_radius: Option<usize>,
    #[arg(long)]
    dot_pitch: Option<usize>,
    #[arg(long)]
    cell_pitch_x: Option<usize>,
    #[arg(long)]
    cell_pitch_y: Option<usize>,
    #[arg(long)]
    margin: Option<usize>,
    /// Longest line, in cells.
    #[arg(long)]
    max_cells: Option<usize>,
}

impl GeometryArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<RenderConfig> {
        let d = RenderConfig::default();
        let geometry = RenderConfig {
            dot_radius: cfg.pick(self.dot_radius, "dot_radius", d.dot_radius)?,
            dot_pitch: cfg.pick(self.dot_pitch, "dot_pitch", d.dot_pitch)?,
            cell_pitch_x: cfg.pick(self.cell_pitch_x, "cell_pitch_x", d.cell_pitch_x)?,
            cell_pitch_y: cfg.pick(self.cell_pitch_y, "cell_pitch_y", d.cell_pitch_y)?,
            margin: cfg.pick(self.margin, "margin", d.margin)?,
            max_cells_per_line: cfg.pick(self.max_cells, "max_cells_per_line", d.max_cells_per_line)?,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    fn recognize_config(&self, cfg: &ConfigFile, dot_threshold: Option<f64>) -> Result<RecognizeConfig> {
        let mut rc = RecognizeConfig::for_render(self.resolve(cfg)?);
        rc.dot_threshold = cfg.pick(dot_threshold, "dot_threshold", rc.dot_threshold)?;
        if !(0.0..1.0).contains(&rc.dot_threshold) {
            return Err(Invalid(format!("dot threshold must be in [0, 1), got {}", rc.dot_threshold)).into());
        }
        Ok(rc)
    }
}

#[derive(Debug, Args)]
struct DictArgs {
    /// Word frequency list (`word count` per line, optionally gzipped).
    #[arg(long, env = DICT_ENV)]
    dict: Option<PathBuf>,
}

impl DictArgs {
    fn path(&self) -> PathBuf {
        self.dict.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_DICT))
    }

    fn load(&self) -> Result<(Lexicon, PathBuf)> {
        let path = self.path();
        let lex = Lexicon::from_file(&path).with_context(|| format!("cannot load dictionary {}", path.display()))?;
        log::info!("{} words from {} ({} filtered out)", lex.len(), path.display(), lex.removed_count());
        Ok((lex, path))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    A,
    B,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recognize a page image and write the text.
    Transcribe {
        /// PGM or PNG image, `-` for PGM on stdin.
        image: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot_threshold: Option<f64>,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Correct every word of a text file against the dictionary.
    Revise {
        /// Text file, `-` for stdin.
        text: PathBuf,
        #[command(flatten)]
        dict: DictArgs,
        #[arg(long)]
        method: Option<Method>,
        /// Edit-distance threshold of the baseline.
        #[arg(long)]
        max_distance: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a text file as a braille page.
    Render {
        text: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Tokenize and word-wrap the text instead of rendering lines as given.
        #[arg(long)]
        wrap: bool,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Apply blur or spread noise to a page image.
    Corrupt {
        image: PathBuf,
        /// `blur:SIGMA` or `spread:PIXELS`; repeat to chain.
        #[arg(long)]
        noise: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run experiment a (random dot flips) or b (noisy page images).
    Experiment {
        which: Which,
        /// Directory of UTF-8 `.txt` files.
        corpus: PathBuf,
        #[command(flatten)]
        dict: DictArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Error percents for experiment a.
        #[arg(long, value_delimiter = ',')]
        percents: Vec<f64>,
        /// Noise conditions for experiment b.
        #[arg(long)]
        noise: Vec<String>,
        #[arg(long)]
        lines_per_page: Option<usize>,
        #[arg(long)]
        max_distance: Option<usize>,
        #[arg(long)]
        dot_threshold: Option<f64>,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// CSV report path; without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct NoLines;

impl std::fmt::Display for NoLines {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("no text lines found in the image")
    }
}

impl std::error::Error for NoLines {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<NoLines>() {
            return EXIT_NO_LINES;
        }
        if cause.is::<Invalid>() {
            return EXIT_INVALID;
        }
        if let Some(e) = cause.downcast_ref::<ImagingError>() {
            return match e {
                ImagingError::NoLinesFound => EXIT_NO_LINES,
                ImagingError::InvalidParameter(_)
                | ImagingError::UnmappedCharacter { .. }
                | ImagingError::LineTooLong { .. } => EXIT_INVALID,
                _ => EXIT_IO,
            };
        }
        if let Some(e) = cause.downcast_ref::<EvalError>() {
            return match e {
                EvalError::InvalidPercent(_) | EvalError::InvalidNoise(_) => EXIT_INVALID,
                EvalError::Imaging(ImagingError::InvalidParameter(_)) => EXIT_INVALID,
                _ => EXIT_IO,
            };
        }
        if let Some(BrailleError::UnmappedCharacter { .. }) = cause.downcast_ref::<BrailleError>() {
            return EXIT_INVALID;
        }
    }
    EXIT_IO
}

fn is_std(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_text(path: &Path) -> Result<String> {
    if is_std(path) {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_bytes(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) if !is_std(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn load_image(path: &Path) -> Result<GrayImage> {
    if is_std(path) {
        return GrayImage::read_pgm(std::io::stdin().lock()).context("cannot read image from stdin");
    }
    GrayImage::load(path).with_context(|| format!("cannot load image {}", path.display()))
}

fn save_image(img: &GrayImage, path: &Path) -> Result<()> {
    if is_std(path) {
        return write_bytes(None, &img.to_pgm_bytes());
    }
    img.save(path).with_context(|| format!("cannot write image {}", path.display()))
}

fn parse_noise(specs: &[String], cfg: &ConfigFile, seed: u64) -> Result<Vec<NoiseSpec>> {
    let specs: Vec<String> = if specs.is_empty() { cfg.list("noise") } else { specs.to_vec() };
    specs
        .iter()
        .map(|s| {
            let spec: NoiseSpec = s.parse()?;
            Ok(NoiseSpec { seed, ..spec })
        })
        .collect()
}

fn transcribe(image: &Path, out: Option<&Path>, rc: &RecognizeConfig, table: &CodeTable) -> Result<()> {
    let img = load_image(image)?;
    let result = recognize_with(&img, table, rc);
    if result.text.is_empty() {
        return Err(NoLines.into());
    }
    eprintln!("cells: {} total, {} unreadable", result.cells_total, result.cells_failed);
    let mut text = result.text.join("\n");
    text.push('\n');
    write_bytes(out, text.as_bytes())
}

/// Revises each space-separated word, keeping line structure.
fn revise(text: &str, correct: impl Fn(&str) -> String) -> (String, usize, usize) {
    let mut changed = 0;
    let mut total = 0;
    let lines: Vec<String> = text
        .lines()
        .map(|line| {
            line.split(' ')
                .map(|word| {
                    if word.is_empty() {
                        return String::new();
                    }
                    total += 1;
                    let fixed = correct(word);
                    if fixed != word {
                        changed += 1;
                    }
                    fixed
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let mut out = lines.join("\n");
    if text.ends_with('\n') {
        out.push('\n');
    }
    (out, changed, total)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let table = match &cli.table {
        Some(path) => CodeTable::from_file(path).with_context(|| format!("cannot load code table {}", path.display()))?,
        None => CodeTable::portuguese(),
    };

    match cli.command {
        Command::Transcribe {
            image,
            out,
            dot_threshold,
            geometry,
        } => {
            let rc = geometry.recognize_config(&cfg, dot_threshold)?;
            transcribe(&image, out.as_deref(), &rc, &table)
        }
        Command::Revise {
            text,
            dict,
            method,
            max_distance,
            out,
        } => {
            let method = cfg.pick(method, "method", Method::Ours)?;
            let max_distance = cfg.pick(max_distance, "max_distance", DEFAULT_MAX_DISTANCE)?;
            let input = read_text(&text)?;
            let (lex, _) = dict.load()?;
            let (output, changed, total) = match method {
                Method::Ours => {
                    let ours = HammingCorrector::new(&lex, &table);
                    revise(&input, |w| ours.revise_token(w).map_or_else(|| w.to_string(), |r| r.corrected))
                }
                Method::Baseline => {
                    let baseline = BaselineCorrector::new(&lex, max_distance);
                    revise(&input, |w| baseline.correct(w))
                }
            };
            eprintln!("{method}: changed {changed} of {total} words");
            write_bytes(out.as_deref(), output.as_bytes())
        }
        Command::Render {
            text,
            out,
            wrap,
            geometry,
        } => {
            let rc = geometry.resolve(&cfg)?;
            let input = read_text(&text)?;
            let lines: Vec<String> = if wrap {
                let tokens = tokenize(&input, &table);
                layout_pages(&tokens, rc.max_cells_per_line, usize::MAX)
                    .into_iter()
                    .flat_map(|p| p.lines)
                    .collect()
            } else {
                input.lines().map(|l| l.trim_end_matches('\r').to_string()).collect()
            };
            let img = render(&lines, &table, &rc)?;
            save_image(&img, &out)
        }
        Command::Corrupt { image, noise, seed, out } => {
            let seed = cfg.pick(seed, "seed", DEFAULT_SEED)?;
            let specs = parse_noise(&noise, &cfg, seed)?;
            let mut img = load_image(&image)?;
            for spec in &specs {
                img = spec.apply(&img, 0)?;
            }
            save_image(&img, &out)
        }
        Command::Experiment {
            which,
            corpus,
            dict,
            seed,
            percents,
            noise,
            lines_per_page,
            max_distance,
            dot_threshold,
            geometry,
            out,
        } => {
            let seed = cfg.pick(seed, "seed", DEFAULT_SEED)?;
            let max_distance = cfg.pick(max_distance, "max_distance", DEFAULT_MAX_DISTANCE)?;
            let docs = load_corpus_dir(&corpus)?;
            let texts: Vec<Vec<String>> = docs.iter().map(|d| tokenize(&d.text, &table)).collect();
            let (lex, dict_path) = dict.load()?;

            let mut report: Report = match which {
                Which::A => {
                    let error_percents = if !percents.is_empty() {
                        percents
                    } else if cfg.raw("percents").is_some() {
                        cfg.list("percents")
                            .iter()
                            .map(|p| p.parse().map_err(|_| Invalid(format!("bad percent {p:?}"))))
                            .collect::<Result<_, _>>()?
                    } else {
                        default_error_percents()
                    };
                    let ecfg = ExperimentAConfig {
                        error_percents,
                        seed,
                        texts,
                        max_distance,
                    };
                    run_experiment_a(&ecfg, &lex, &table)?
                }
                Which::B => {
                    let mut specs = parse_noise(&noise, &cfg, seed)?;
                    if specs.is_empty() {
                        specs = default_noise_specs(seed);
                    }
                    let lines_per_page = cfg.pick(lines_per_page, "lines_per_page", DEFAULT_LINES_PER_PAGE)?;
                    if lines_per_page == 0 {
                        return Err(Invalid("lines per page must be positive".into()).into());
                    }
                    let recognize = geometry.recognize_config(&cfg, dot_threshold)?;
                    let ecfg = ExperimentBConfig {
                        noise_specs: specs,
                        render: recognize.geometry,
                        recognize,
                        lines_per_page,
                        seed,
                        texts,
                        max_distance,
                    };
                    run_experiment_b(&ecfg, &lex, &table)?
                }
            };
            report.metadata.dictionary = dict_path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            report.metadata.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());

            let csv = report.to_csv_string();
            let summary = format!(
                "experiment {}: seed {}, dictionary {} ({} words), {} documents, run at {} (unix)\n{}",
                match which {
                    Which::A => "a",
                    Which::B => "b",
                },
                seed,
                dict_path.display(),
                lex.len(),
                docs.len(),
                report.metadata.timestamp.unwrap_or_default(),
                report
            );
            match out {
                Some(path) if !is_std(&path) => {
                    write_bytes(Some(&path), csv.as_bytes())?;
                    print!("{summary}");
                }
                _ => {
                    eprint!("{summary}");
                    write_bytes(None, csv.as_bytes())?;
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
