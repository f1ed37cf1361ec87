//! Dictionary revision of transcribed words.
//!
//! [`HammingCorrector`] replaces each word with the same-length lexicon entry
//! whose braille encoding differs in the fewest dots. [`BaselineCorrector`]
//! is the usual frequency-ranked edit-distance speller, kept for comparison.

mod baseline;

pub use baseline::{baseline_correct, osa_distance, BaselineCorrector, DEFAULT_MAX_DISTANCE};

use rayon::prelude::*;

use crate::braille::{beta, BrailleCell, BrailleError, CodeTable};
use crate::dictionary::Lexicon;

/// Character the recognizer emits for cells with no table entry.
pub const UNKNOWN_CELL: char = '?';

/// Outcome of revising one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevisionResult {
    pub original: String,
    pub corrected: String,
    pub changed: bool,
    /// Dot distance to `corrected`; `None` when no same-length word exists.
    pub braille_distance: Option<u32>,
    pub candidate_count: usize,
}

impl RevisionResult {
    fn unchanged(word: &str) -> Self {
        RevisionResult {
            original: word.to_string(),
            corrected: word.to_string(),
            changed: false,
            braille_distance: None,
            candidate_count: 0,
        }
    }
}

/// Revised token stream; `results[i]` is `None` when token `i` was passed through.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextRevision {
    pub tokens: Vec<String>,
    pub results: Vec<Option<RevisionResult>>,
}

impl TextRevision {
    pub fn changed_count(&self) -> usize {
        self.results.iter().flatten().filter(|r| r.changed).count()
    }
}

/// Sum of absolute differences between the two words' dot vectors.
pub fn compare(p_t: &str, p_d: &str, table: &CodeTable) -> Result<u32, BrailleError> {
    let left = p_t.chars().count();
    let right = p_d.chars().count();
    if left != right {
        return Err(BrailleError::LengthMismatch { left, right });
    }
    let a = beta(p_t, table)?;
    let b = beta(p_d, table)?;
    Ok(a.hamming(&b).expect("equal lengths"))
}

/// Straight scan of the same-length bucket. Slower than
/// [`HammingCorrector::revise`] but shares none of its packing code.
pub fn revise_word(p_t: &str, lex: &Lexicon, table: &CodeTable) -> Result<RevisionResult, BrailleError> {
    let query = beta(p_t, table)?;
    let bucket = lex.words_of_length(p_t.chars().count());
    let mut best: Option<(u32, &String)> = None;
    for word in bucket {
        let Ok(candidate) = beta(word, table) else {
            continue;
        };
        let diff = query.hamming(&candidate).expect("same bucket length");
        if best.map_or(true, |(min, _)| diff < min) {
            best = Some((diff, word));
        }
    }
    Ok(match best {
        Some((distance, word)) => RevisionResult {
            original: p_t.to_string(),
            corrected: word.clone(),
            changed: word != p_t,
            braille_distance: Some(distance),
            candidate_count: bucket.len(),
        },
        None => RevisionResult::unchanged(p_t),
    })
}

/// Revises every token; see [`HammingCorrector::revise_tokens`].
pub fn revise_text<S: AsRef<str> + Sync>(tokens: &[S], lex: &Lexicon, table: &CodeTable) -> TextRevision {
    HammingCorrector::new(lex, table).revise_tokens(tokens)
}

/// Cells packed one per byte, eight per `u64`.
fn pack_cells(cells: impl Iterator<Item = Option<BrailleCell>>, stride: usize) -> (Vec<u64>, Vec<u64>) {
    let mut code = vec![0u64; stride];
    let mut mask = vec![0u64; stride];
    for (i, cell) in cells.enumerate() {
        if let Some(cell) = cell {
            code[i / 8] |= u64::from(cell.bits()) << (8 * (i % 8));
            mask[i / 8] |= 0x3F << (8 * (i % 8));
        }
    }
    (code, mask)
}

#[derive(Debug, Default)]
struct PackedBucket {
    stride: usize,
    codes: Vec<u64>,
    words: Vec<String>,
}

/// Same-length nearest-neighbour search in braille dot space.
///
/// Dot vectors of every lexicon word are packed at construction; a query
/// costs one XOR/popcount pass over its length bucket.
#[derive(Debug)]
pub struct HammingCorrector<'a> {
    table: &'a CodeTable,
    buckets: Vec<PackedBucket>,
}

impl<'a> HammingCorrector<'a> {
    pub fn new(lex: &Lexicon, table: &'a CodeTable) -> Self {
        let max_len = lex.buckets().map(|(n, _)| n).max().unwrap_or(0);
        let mut buckets: Vec<PackedBucket> = (0..=max_len).map(|_| PackedBucket::default()).collect();
        for (n, bucket) in lex.buckets() {
            let stride = n.div_ceil(8);
            let packed = &mut buckets[n];
            packed.stride = stride;
            packed.codes.reserve(stride * bucket.len());
            for word in bucket.words() {
                let cells: Option<Vec<_>> = word.chars().map(|c| table.cell_for(c)).collect();
                match cells {
                    Some(cells) => {
                        let (code, _) = pack_cells(cells.into_iter().map(Some), stride);
                        packed.codes.extend_from_slice(&code);
                        packed.words.push(word.clone());
                    }
                    None => log::debug!("lexicon word {word:?} is not encodable, skipped"),
                }
            }
        }
        HammingCorrector { table, buckets }
    }

    pub fn table(&self) -> &CodeTable {
        self.table
    }

    /// Picks the same-length word at minimum dot distance. Ties go to the
    /// earlier bucket entry (higher frequency, then lexicographic).
    pub fn revise(&self, p_t: &str) -> Result<RevisionResult, BrailleError> {
        let cells = beta(p_t, self.table)?.into_cells();
        Ok(self.search(p_t, cells.into_iter().map(Some).collect()))
    }

    /// Like [`revise`](Self::revise), but cells written as [`UNKNOWN_CELL`]
    /// add nothing to any candidate's distance.
    pub fn revise_partial(&self, p_t: &str) -> Result<RevisionResult, BrailleError> {
        let cells = p_t
            .chars()
            .enumerate()
            .map(|(index, ch)| match self.table.cell_for(ch) {
                Some(cell) => Ok(Some(cell)),
                None if ch == UNKNOWN_CELL => Ok(None),
                None => Err(BrailleError::UnmappedCharacter { ch, index }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.search(p_t, cells))
    }

    fn search(&self, p_t: &str, cells: Vec<Option<BrailleCell>>) -> RevisionResult {
        let n = cells.len();
        let Some(bucket) = self.buckets.get(n).filter(|b| !b.words.is_empty()) else {
            return RevisionResult::unchanged(p_t);
        };
        let stride = bucket.stride;
        let (query, mask) = pack_cells(cells.into_iter(), stride);

        let mut best_idx = 0;
        let mut best = u32::MAX;
        for (idx, code) in bucket.codes.chunks_exact(stride).enumerate() {
            let diff: u32 = code
                .iter()
                .zip(&query)
                .zip(&mask)
                .map(|((c, q), m)| ((c ^ q) & m).count_ones())
                .sum();
            if diff < best {
                best = diff;
                best_idx = idx;
                if diff == 0 {
                    break;
                }
            }
        }
        let corrected = bucket.words[best_idx].clone();
        RevisionResult {
            changed: corrected != p_t,
            original: p_t.to_string(),
            corrected,
            braille_distance: Some(best),
            candidate_count: bucket.words.len(),
        }
    }

    /// Revises one token of running text. Tokens with unknown cells are
    /// matched on their known cells; any other unencodable token is `None`.
    pub fn revise_token(&self, token: &str) -> Option<RevisionResult> {
        if token.is_empty() {
            return None;
        }
        let result = if token.contains(UNKNOWN_CELL) {
            if token.chars().all(|c| c == UNKNOWN_CELL) {
                return None;
            }
            self.revise_partial(token)
        } else {
            self.revise(token)
        };
        match result {
            Ok(r) => Some(r),
            Err(err) => {
                log::debug!("token {token:?} passed through: {err}");
                None
            }
        }
    }

    /// Element-wise revision, in parallel, preserving order.
    pub fn revise_tokens<S: AsRef<str> + Sync>(&self, tokens: &[S]) -> TextRevision {
        let results: Vec<Option<RevisionResult>> = tokens
            .par_iter()
            .map(|t| self.revise_token(t.as_ref()))
            .collect();
        let tokens = tokens
            .iter()
            .zip(&results)
            .map(|(t, r)| r.as_ref().map_or_else(|| t.as_ref().to_string(), |r| r.corrected.clone()))
            .collect();
        TextRevision { tokens, results }
    }
}
