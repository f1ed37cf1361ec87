//! Shared fixtures for the benchmarks.

use std::path::{Path, PathBuf};

use braillecheck_core::eval::{inject_bit_errors, layout_pages, load_corpus_dir, token_rng, tokenize, Page};
use braillecheck_core::{CodeTable, Lexicon};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn lexicon() -> Lexicon {
    Lexicon::from_file(data_dir().join("pt_br_freq.txt.gz")).expect("dictionary loads")
}

/// Tokens of the first corpus document.
pub fn corpus_tokens(table: &CodeTable) -> Vec<String> {
    let docs = load_corpus_dir(data_dir().join("corpus")).expect("corpus loads");
    tokenize(&docs[0].text, table)
}

/// First `n` corpus tokens with `percent` of their dots flipped.
pub fn corrupted_tokens(table: &CodeTable, n: usize, percent: f64) -> Vec<String> {
    corpus_tokens(table)
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, t)| {
            let mut rng = token_rng(7, 0, 0, i);
            inject_bit_errors(t, percent, &mut rng, table).map_or_else(|_| t.clone(), |c| c.word)
        })
        .collect()
}

/// A full page laid out at `max_cells` cells per line.
pub fn sample_page(table: &CodeTable, max_cells: usize, lines: usize) -> Page {
    layout_pages(&corpus_tokens(table), max_cells, lines).swap_remove(0)
}
