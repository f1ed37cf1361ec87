//! Word- and character-level accuracy measures.

use crate::dictionary::Lexicon;

use super::EvalError;

/// Edit distance with unit-cost insertions, deletions and substitutions.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let next = (diag + usize::from(ca != cb)).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

fn check_lengths<A, B>(predicted: &[A], truth: &[B]) -> Result<(), EvalError> {
    if predicted.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    Ok(())
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Percentage of positions where the prediction equals the truth. An empty
/// pair of lists scores 100.
pub fn hit_rate<A: AsRef<str>, B: AsRef<str>>(predicted: &[A], truth: &[B]) -> Result<f64, EvalError> {
    check_lengths(predicted, truth)?;
    if truth.is_empty() {
        return Ok(100.0);
    }
    let hits = predicted
        .iter()
        .zip(truth)
        .filter(|(p, t)| p.as_ref() == t.as_ref())
        .count();
    Ok(percent(hits, truth.len()))
}

/// Mean edit distance per word.
pub fn avg_levenshtein<A: AsRef<str>, B: AsRef<str>>(predicted: &[A], truth: &[B]) -> Result<f64, EvalError> {
    check_lengths(predicted, truth)?;
    if truth.is_empty() {
        return Ok(0.0);
    }
    let total: usize = predicted
        .iter()
        .zip(truth)
        .map(|(p, t)| levenshtein(p.as_ref(), t.as_ref()))
        .sum();
    Ok(total as f64 / truth.len() as f64)
}

/// Percentage of truth characters not reproduced at the same position of
/// the aligned recognized word.
pub fn char_error<A: AsRef<str>, B: AsRef<str>>(recognized: &[A], truth: &[B]) -> Result<f64, EvalError> {
    check_lengths(recognized, truth)?;
    let mut total = 0;
    let mut wrong = 0;
    for (r, t) in recognized.iter().zip(truth) {
        let mut r = r.as_ref().chars();
        for tc in t.as_ref().chars() {
            total += 1;
            if r.next() != Some(tc) {
                wrong += 1;
            }
        }
    }
    Ok(percent(wrong, total))
}

/// Percentage of words not reproduced exactly.
pub fn word_error<A: AsRef<str>, B: AsRef<str>>(recognized: &[A], truth: &[B]) -> Result<f64, EvalError> {
    check_lengths(recognized, truth)?;
    let wrong = recognized
        .iter()
        .zip(truth)
        .filter(|(r, t)| r.as_ref() != t.as_ref())
        .count();
    Ok(percent(wrong, truth.len()))
}

/// Percentage of truth tokens found in the lexicon.
pub fn dict_coverage<S: AsRef<str>>(truth: &[S], lex: &Lexicon) -> f64 {
    let known = truth.iter().filter(|t| lex.contains(t.as_ref())).count();
    percent(known, truth.len())
}

/// Aggregate scores for one experimental condition and method.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metrics {
    pub avg_levenshtein: f64,
    pub hit_rate: f64,
    /// Character error of the corrector's input against the truth.
    pub char_error: f64,
    /// Word error of the corrector's input against the truth.
    pub word_error: f64,
    pub dict_coverage: f64,
}

impl Metrics {
    /// Scores `corrected` and `input` (the corrector's input) against `truth`.
    pub fn compute<S: AsRef<str>>(corrected: &[S], input: &[S], truth: &[S], lex: &Lexicon) -> Result<Self, EvalError> {
        Ok(Metrics {
            avg_levenshtein: avg_levenshtein(corrected, truth)?,
            hit_rate: hit_rate(corrected, truth)?,
            char_error: char_error(input, truth)?,
            word_error: word_error(input, truth)?,
            dict_coverage: dict_coverage(truth, lex),
        })
    }
}
