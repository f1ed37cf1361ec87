//! Corpus loading, tokenization and page layout.

use std::path::{Path, PathBuf};

use crate::braille::{normalize_char, CodeTable};

use super::EvalError;

/// A named plain-text document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: String,
    pub text: String,
}

/// Reads every `.txt` file in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<Document>, EvalError> {
    let dir = dir.as_ref();
    let io = |path: &Path, source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(EvalError::EmptyCorpus(dir.to_path_buf()));
    }
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).map_err(|e| io(&path, e))?;
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok(Document { name, text })
        })
        .collect()
}

fn is_kept_punctuation(c: char) -> bool {
    c == '-' || c == '\''
}

/// Lowercases, drops digits, splits on whitespace and trims leading and
/// trailing punctuation other than hyphen and apostrophe. Tokens that still
/// contain characters outside the table are dropped.
pub fn tokenize(text: &str, table: &CodeTable) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let token: String = raw
                .chars()
                .flat_map(char::to_lowercase)
                .map(normalize_char)
                .filter(|c| !c.is_ascii_digit())
                .collect();
            let token = token.trim_matches(|c: char| !c.is_alphanumeric() && !is_kept_punctuation(c));
            if token.is_empty() {
                return None;
            }
            if !token.chars().all(|c| table.contains_char(c)) {
                log::debug!("dropping unencodable token {token:?}");
                return None;
            }
            Some(token.to_string())
        })
        .collect()
}

/// Position of a token inside a laid-out page.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TokenSpan {
    pub line: usize,
    /// Character offset within the line.
    pub start: usize,
    pub len: usize,
}

/// Tokens laid out as lines of at most `max_cells` characters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Page {
    pub lines: Vec<String>,
    pub tokens: Vec<String>,
    pub spans: Vec<TokenSpan>,
}

impl Page {
    /// Slices the tokens back out of recognized lines. Missing characters
    /// are filled with `fill` so every token keeps its length.
    pub fn extract_tokens<S: AsRef<str>>(&self, lines: &[S], fill: char) -> Vec<String> {
        let lines: Vec<Vec<char>> = lines.iter().map(|l| l.as_ref().chars().collect()).collect();
        self.spans
            .iter()
            .map(|span| {
                (span.start..span.start + span.len)
                    .map(|i| lines.get(span.line).and_then(|l| l.get(i)).copied().unwrap_or(fill))
                    .collect()
            })
            .collect()
    }
}

/// Greedy word wrap followed by pagination. Tokens longer than
/// `max_cells` cannot be placed and are skipped.
pub fn layout_pages<S: AsRef<str>>(tokens: &[S], max_cells: usize, lines_per_page: usize) -> Vec<Page> {
    let mut pages = Vec::new();
    let mut page = Page::default();
    let mut line = String::new();
    let mut line_len = 0;

    let flush_line = |page: &mut Page, line: &mut String, line_len: &mut usize, pages: &mut Vec<Page>| {
        page.lines.push(std::mem::take(line));
        *line_len = 0;
        if page.lines.len() == lines_per_page {
            pages.push(std::mem::take(page));
        }
    };

    for token in tokens {
        let token = token.as_ref();
        let len = token.chars().count();
        if len > max_cells {
            log::warn!("token {token:?} is longer than a line and is skipped");
            continue;
        }
        if line_len > 0 && line_len + 1 + len > max_cells {
            flush_line(&mut page, &mut line, &mut line_len, &mut pages);
        }
        if line_len > 0 {
            line.push(' ');
            line_len += 1;
        }
        page.spans.push(TokenSpan {
            line: page.lines.len(),
            start: line_len,
            len,
        });
        page.tokens.push(token.to_string());
        line.push_str(token);
        line_len += len;
    }
    if line_len > 0 {
        flush_line(&mut page, &mut line, &mut line_len, &mut pages);
    }
    if !page.lines.is_empty() {
        pages.push(page);
    }
    pages
}
