//! Word-frequency list ingestion and the length-bucketed lexicon.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;
use thiserror::Error;

use crate::braille::normalize_char;

/// Environment variable naming the default frequency list.
pub const DICT_ENV: &str = "BRAILLECHECK_DICT";

/// Characters kept by the default filter: a-z, Portuguese accented letters,
/// hyphen and apostrophe (backtick is folded into apostrophe on ingest).
pub const PORTUGUESE_ALLOWED: &str = "abcdefghijklmnopqrstuvwxyzáàâãéêíóôõúç-'`";

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("line {line}: expected `word frequency`")]
    MalformedLine { line: usize },
    #[error("line {line}: frequency {value:?} is not a non-negative integer")]
    NonNumericFrequency { line: usize, value: String },
    #[error("cannot read frequency list: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntry {
    pub word: String,
    pub frequency: u64,
}

/// Reads `word count` lines. Blank lines are skipped, a repeated word keeps
/// its first frequency.
pub fn load_frequency_list<R: BufRead>(source: R) -> Result<Vec<RawEntry>, DictionaryError> {
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (word, freq) = match (fields.next(), fields.next(), fields.next()) {
            (Some(w), Some(f), None) => (w, f),
            _ => return Err(DictionaryError::MalformedLine { line: line_no }),
        };
        let frequency = freq
            .parse::<u64>()
            .map_err(|_| DictionaryError::NonNumericFrequency {
                line: line_no,
                value: freq.to_string(),
            })?;
        if seen.insert(word.to_string()) {
            entries.push(RawEntry {
                word: word.to_string(),
                frequency,
            });
        }
    }
    Ok(entries)
}

/// Opens a frequency list from disk; `.gz` files are decompressed on the fly.
pub fn load_frequency_file(path: impl AsRef<Path>) -> Result<Vec<RawEntry>, DictionaryError> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(GzDecoder::new(file))
    } else {
        Box::new(file)
    };
    load_frequency_list(BufReader::with_capacity(1 << 16, reader))
}

/// Set of characters a lexicon word may contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowedChars(HashSet<char>);

impl AllowedChars {
    pub fn portuguese() -> Self {
        Self::from_chars(PORTUGUESE_ALLOWED.chars())
    }

    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> Self {
        AllowedChars(chars.into_iter().map(normalize_char).collect())
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&normalize_char(c))
    }

    pub fn admits(&self, word: &str) -> bool {
        word.chars().all(|c| self.contains(c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for AllowedChars {
    fn default() -> Self {
        Self::portuguese()
    }
}

/// Lowercases and folds backtick into apostrophe.
pub fn normalize_word(word: &str) -> String {
    word.chars()
        .flat_map(char::to_lowercase)
        .map(normalize_char)
        .collect()
}

/// Words of one length, ordered by descending frequency then lexicographically.
#[derive(Clone, Debug, Default)]
pub struct Bucket {
    words: Vec<String>,
    frequencies: Vec<u64>,
}

impl Bucket {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Filtered, deduplicated dictionary with per-length buckets.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: HashMap<String, u64>,
    buckets: BTreeMap<usize, Bucket>,
    removed: usize,
}

impl Lexicon {
    /// Lowercases every word, drops those with a character outside `allowed`,
    /// and keeps the first frequency seen for each surviving word.
    pub fn build(entries: &[RawEntry], allowed: &AllowedChars) -> Self {
        let mut kept: HashMap<String, u64> = HashMap::with_capacity(entries.len());
        let mut removed = 0;
        for entry in entries {
            let word = normalize_word(&entry.word);
            if word.is_empty() || !allowed.admits(&word) {
                removed += 1;
                continue;
            }
            kept.entry(word).or_insert(entry.frequency);
        }

        let mut grouped: BTreeMap<usize, Vec<(&String, u64)>> = BTreeMap::new();
        for (word, &freq) in &kept {
            grouped.entry(word.chars().count()).or_default().push((word, freq));
        }
        let buckets = grouped
            .into_iter()
            .map(|(len, mut words)| {
                words.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
                let bucket = Bucket {
                    frequencies: words.iter().map(|w| w.1).collect(),
                    words: words.into_iter().map(|w| w.0.clone()).collect(),
                };
                (len, bucket)
            })
            .collect();

        Lexicon {
            entries: kept,
            buckets,
            removed,
        }
    }

    /// Loads and filters a frequency file with the Portuguese character set.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, DictionaryError> {
        Ok(Self::build(&load_frequency_file(path)?, &AllowedChars::portuguese()))
    }

    /// Words of exactly `n` characters, in bucket order.
    pub fn words_of_length(&self, n: usize) -> &[String] {
        self.buckets.get(&n).map_or(&[], |b| b.words())
    }

    pub fn bucket(&self, n: usize) -> Option<&Bucket> {
        self.buckets.get(&n)
    }

    pub fn buckets(&self) -> impl Iterator<Item = (usize, &Bucket)> {
        self.buckets.iter().map(|(n, b)| (*n, b))
    }

    /// Frequency of `word` after case normalization.
    pub fn frequency(&self, word: &str) -> Option<u64> {
        match self.entries.get(word) {
            Some(f) => Some(*f),
            None => self.entries.get(&normalize_word(word)).copied(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.frequency(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of raw entries rejected by the character filter during `build`.
    pub fn removed_count(&self) -> usize {
        self.removed
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.buckets.values().flat_map(|b| b.words.iter().map(String::as_str))
    }

    /// Word/frequency pairs in bucket order, usable as input to `build`.
    pub fn raw_entries(&self) -> Vec<RawEntry> {
        self.buckets
            .values()
            .flat_map(|b| {
                b.words.iter().zip(&b.frequencies).map(|(w, f)| RawEntry {
                    word: w.clone(),
                    frequency: *f,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entries(pairs: &[(&str, u64)]) -> Vec<RawEntry> {
        pairs
            .iter()
            .map(|(w, f)| RawEntry {
                word: w.to_string(),
                frequency: *f,
            })
            .collect()
    }

    #[test]
    fn load_examples() {
        let list = load_frequency_list("de 5389006\nque 4520490".as_bytes()).unwrap();
        assert_eq!(list, entries(&[("de", 5389006), ("que", 4520490)]));
        assert!(load_frequency_list("".as_bytes()).unwrap().is_empty());
        assert!(matches!(
            load_frequency_list("de 1\ncasa".as_bytes()),
            Err(DictionaryError::MalformedLine { line: 2 })
        ));
        assert!(matches!(
            load_frequency_list("casa muitas".as_bytes()),
            Err(DictionaryError::NonNumericFrequency { line: 1, .. })
        ));
        assert!(matches!(
            load_frequency_list("casa -3".as_bytes()),
            Err(DictionaryError::NonNumericFrequency { .. })
        ));
    }

    #[test]
    fn load_keeps_first_duplicate() {
        let list = load_frequency_list("de 9\neu 5\nde 3\n\n".as_bytes()).unwrap();
        assert_eq!(list, entries(&[("de", 9), ("eu", 5)]));
    }

    #[test]
    fn filter_examples() {
        let allowed = AllowedChars::portuguese();
        let lex = Lexicon::build(&entries(&[("pé", 10), ("x@y", 5)]), &allowed);
        assert_eq!(lex.words().collect::<Vec<_>>(), vec!["pé"]);
        assert_eq!(lex.removed_count(), 1);

        let lex = Lexicon::build(&entries(&[("pé-de-meia", 3)]), &allowed);
        assert!(lex.contains("pé-de-meia"));

        let lex = Lexicon::build(&[], &allowed);
        assert!(lex.is_empty());
        assert!(!lex.contains("casa"));
    }

    #[test]
    fn backtick_folds_into_apostrophe() {
        let lex = Lexicon::build(&entries(&[("d`água", 4)]), &AllowedChars::portuguese());
        assert!(lex.contains("d'água"));
        assert!(lex.contains("d`água"));
    }

    #[test]
    fn buckets_dedup_and_order() {
        let lex = Lexicon::build(
            &entries(&[("de", 1), ("eu", 1), ("de", 7), ("casa", 3), ("vaca", 9), ("bola", 3)]),
            &AllowedChars::portuguese(),
        );
        assert_eq!(lex.words_of_length(2), ["de", "eu"]);
        assert_eq!(lex.words_of_length(4), ["vaca", "bola", "casa"]);
        assert!(lex.words_of_length(3).is_empty());
        assert_eq!(lex.frequency("de"), Some(1));
    }

    #[test]
    fn lookup_is_case_normalized() {
        let lex = Lexicon::build(&entries(&[("Casa", 2)]), &AllowedChars::portuguese());
        assert!(lex.contains("casa"));
        assert!(lex.contains("Casa"));
        assert!(lex.contains("CASA"));
    }

    fn raw_strategy() -> impl Strategy<Value = Vec<RawEntry>> {
        let word = proptest::string::string_regex("[a-eáç@1A-C-]{1,6}").unwrap();
        proptest::collection::vec((word, 0u64..50), 0..40).prop_map(|v| {
            v.into_iter()
                .map(|(word, frequency)| RawEntry { word, frequency })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn filter_and_partition_invariants(raw in raw_strategy()) {
            let allowed = AllowedChars::portuguese();
            let lex = Lexicon::build(&raw, &allowed);
            let mut union = HashSet::new();
            for (n, bucket) in lex.buckets() {
                for (i, w) in bucket.words().iter().enumerate() {
                    prop_assert!(allowed.admits(w));
                    prop_assert_eq!(w.chars().count(), n);
                    prop_assert!(union.insert(w.clone()), "word in two buckets");
                    if i > 0 {
                        let (pw, pf) = (&bucket.words()[i - 1], bucket.frequencies()[i - 1]);
                        let f = bucket.frequencies()[i];
                        prop_assert!(pf > f || (pf == f && pw < w));
                    }
                }
            }
            prop_assert_eq!(union.len(), lex.len());

            let rebuilt = Lexicon::build(&lex.raw_entries(), &allowed);
            let a: HashSet<_> = lex.words().collect();
            let b: HashSet<_> = rebuilt.words().collect();
            prop_assert_eq!(a, b);
            prop_assert_eq!(rebuilt.removed_count(), 0);
        }
    }
}
