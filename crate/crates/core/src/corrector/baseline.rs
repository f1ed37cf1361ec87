//! Frequency-ranked edit-distance correction.
//!
//! Mirrors the common word-frequency speller: a known word is returned as-is;
//! otherwise the most frequent word among the closest tier of candidates
//! (one edit, then two) wins, and a word with no candidate is left alone.
//! Edits are deletion, insertion, substitution and adjacent transposition.

use crate::dictionary::Lexicon;

pub const DEFAULT_MAX_DISTANCE: usize = 2;

/// Optimal-string-alignment distance (Levenshtein plus adjacent transposition).
pub fn osa_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut v = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                v = v.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = v;
        }
    }
    d[n][m]
}

/// Best of `(word, distance, frequency)` candidates: closest tier first, then
/// highest frequency, then lexicographically smallest.
fn pick<'a>(candidates: impl Iterator<Item = (&'a str, usize, u64)>) -> Option<&'a str> {
    candidates
        .min_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)).then(a.0.cmp(b.0)))
        .map(|c| c.0)
}

/// Reference implementation: scans the whole lexicon.
pub fn baseline_correct(word: &str, lex: &Lexicon, max_distance: usize) -> String {
    if lex.contains(word) {
        return word.to_string();
    }
    let len = word.chars().count();
    let lo = len.saturating_sub(max_distance);
    let candidates = (lo..=len + max_distance)
        .filter_map(|n| lex.bucket(n))
        .flat_map(|b| b.words().iter().zip(b.frequencies()))
        .filter_map(|(w, &f)| {
            let d = osa_distance(word, w);
            (d <= max_distance).then_some((w.as_str(), d, f))
        });
    pick(candidates).unwrap_or(word).to_string()
}

#[derive(Debug, Clone, Copy)]
struct Node {
    first_edge: u32,
    edge_count: u32,
    /// Index into `words`, or `u32::MAX` for interior nodes.
    word: u32,
}

/// Trie-backed version of [`baseline_correct`] for large lexicons.
#[derive(Debug)]
pub struct BaselineCorrector {
    nodes: Vec<Node>,
    edges: Vec<(char, u32)>,
    words: Vec<(String, u64)>,
    max_distance: usize,
}

impl BaselineCorrector {
    pub fn new(lex: &Lexicon, max_distance: usize) -> Self {
        let mut words: Vec<(String, u64)> = lex
            .buckets()
            .flat_map(|(_, b)| b.words().iter().cloned().zip(b.frequencies().iter().copied()))
            .collect();
        words.sort_unstable_by(|a, b| a.0.cmp(&b.0));

        // Build with owned child lists, then flatten.
        let mut children: Vec<Vec<(char, u32)>> = vec![Vec::new()];
        let mut terminal: Vec<u32> = vec![u32::MAX];
        for (idx, (word, _)) in words.iter().enumerate() {
            let mut node = 0usize;
            for ch in word.chars() {
                let next = match children[node].iter().find(|(c, _)| *c == ch) {
                    Some(&(_, n)) => n as usize,
                    None => {
                        let n = children.len();
                        children.push(Vec::new());
                        terminal.push(u32::MAX);
                        children[node].push((ch, n as u32));
                        n
                    }
                };
                node = next;
            }
            terminal[node] = idx as u32;
        }

        let mut nodes = Vec::with_capacity(children.len());
        let mut edges = Vec::with_capacity(children.len());
        for (kids, word) in children.into_iter().zip(terminal) {
            nodes.push(Node {
                first_edge: edges.len() as u32,
                edge_count: kids.len() as u32,
                word,
            });
            edges.extend(kids);
        }

        BaselineCorrector {
            nodes,
            edges,
            words,
            max_distance,
        }
    }

    pub fn max_distance(&self) -> usize {
        self.max_distance
    }

    fn lookup(&self, word: &str) -> bool {
        let mut node = 0usize;
        for ch in word.chars() {
            let n = self.nodes[node];
            let edges = &self.edges[n.first_edge as usize..(n.first_edge + n.edge_count) as usize];
            match edges.iter().find(|(c, _)| *c == ch) {
                Some(&(_, next)) => node = next as usize,
                None => return false,
            }
        }
        self.nodes[node].word != u32::MAX
    }

    /// Lexicon words within `max_distance` edits, with their distances.
    pub fn candidates(&self, word: &str) -> Vec<(&str, usize)> {
        let query: Vec<char> = word.chars().collect();
        let first_row: Vec<usize> = (0..=query.len()).collect();
        let mut out = Vec::new();
        let root = self.nodes[0];
        for e in root.first_edge..root.first_edge + root.edge_count {
            let (ch, child) = self.edges[e as usize];
            self.walk(child, ch, None, &query, &first_row, None, &mut out);
        }
        out.into_iter()
            .map(|(idx, d)| (self.words[idx as usize].0.as_str(), d))
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        node: u32,
        ch: char,
        prev_ch: Option<char>,
        query: &[char],
        prev_row: &[usize],
        prev_prev_row: Option<&[usize]>,
        out: &mut Vec<(u32, usize)>,
    ) {
        let m = query.len();
        let mut row = vec![0usize; m + 1];
        row[0] = prev_row[0] + 1;
        for j in 1..=m {
            let cost = usize::from(query[j - 1] != ch);
            let mut v = (row[j - 1] + 1).min(prev_row[j] + 1).min(prev_row[j - 1] + cost);
            if let (Some(pp), Some(pc)) = (prev_prev_row, prev_ch) {
                if j > 1 && ch == query[j - 2] && pc == query[j - 1] {
                    v = v.min(pp[j - 2] + 1);
                }
            }
            row[j] = v;
        }

        let n = self.nodes[node as usize];
        if n.word != u32::MAX && row[m] <= self.max_distance {
            out.push((n.word, row[m]));
        }
        // a transposition can still reach back to the previous row
        let reachable = row.iter().min().copied().unwrap_or(usize::MAX) <= self.max_distance
            || prev_row.iter().min().map_or(false, |v| v + 1 <= self.max_distance);
        if !reachable {
            return;
        }
        for e in n.first_edge..n.first_edge + n.edge_count {
            let (next_ch, child) = self.edges[e as usize];
            self.walk(child, next_ch, Some(ch), query, &row, Some(prev_row), out);
        }
    }

    /// Known words come back unchanged; otherwise the best candidate, or
    /// the input when nothing is close enough.
    pub fn correct(&self, word: &str) -> String {
        if self.lookup(word) {
            return word.to_string();
        }
        let found = self.candidates(word);
        let best = pick(found.iter().map(|&(w, d)| {
            let freq = self.words[self.words.binary_search_by(|p| p.0.as_str().cmp(w)).unwrap()].1;
            (w, d, freq)
        }));
        best.unwrap_or(word).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{AllowedChars, RawEntry};
    use proptest::prelude::*;

    fn lexicon(pairs: &[(&str, u64)]) -> Lexicon {
        let raw: Vec<RawEntry> = pairs
            .iter()
            .map(|(w, f)| RawEntry {
                word: w.to_string(),
                frequency: *f,
            })
            .collect();
        Lexicon::build(&raw, &AllowedChars::portuguese())
    }

    #[test]
    fn osa_examples() {
        assert_eq!(osa_distance("", "abc"), 3);
        assert_eq!(osa_distance("casa", "casa"), 0);
        assert_eq!(osa_distance("casa", "csaa"), 1);
        assert_eq!(osa_distance("kitten", "sitting"), 3);
        // restricted transposition: "ca" -> "abc" is 3 under OSA
        assert_eq!(osa_distance("ca", "abc"), 3);
    }

    #[test]
    fn baseline_examples() {
        let lex = lexicon(&[("casa", 10), ("gato", 7), ("mesa", 3)]);
        assert_eq!(baseline_correct("casa", &lex, 2), "casa");
        assert_eq!(baseline_correct("gato", &lex, 2), "gato");
        assert_eq!(baseline_correct("gatp", &lex, 2), "gato");
        assert_eq!(baseline_correct("xyzwvu", &lex, 2), "xyzwvu");

        let fast = BaselineCorrector::new(&lex, 2);
        for w in ["casa", "gatp", "xyzwvu", "cas", "masa"] {
            assert_eq!(fast.correct(w), baseline_correct(w, &lex, 2), "{w}");
        }
    }

    #[test]
    fn nearer_tier_beats_frequency() {
        // "mesx" is one edit from "mesa" and two from the far more frequent "casa"
        let lex = lexicon(&[("casa", 1000), ("mesa", 1)]);
        assert_eq!(baseline_correct("mesx", &lex, 2), "mesa");
        // within a tier the higher frequency wins
        let lex = lexicon(&[("cata", 5), ("casa", 50)]);
        assert_eq!(baseline_correct("caxa", &lex, 2), "casa");
    }

    proptest! {
        #[test]
        fn trie_matches_scan(
            words in proptest::collection::vec(("[abcé]{1,5}", 1u64..20), 0..25),
            query in "[abcéd]{0,6}",
        ) {
            let pairs: Vec<(&str, u64)> = words.iter().map(|(w, f)| (w.as_str(), *f)).collect();
            let lex = lexicon(&pairs);
            for max in 0..=2 {
                let fast = BaselineCorrector::new(&lex, max);
                let mut got: Vec<(String, usize)> = fast.candidates(&query).into_iter().map(|(w, d)| (w.to_string(), d)).collect();
                got.sort();
                let mut want: Vec<(String, usize)> = lex
                    .words()
                    .map(|w| (w.to_string(), osa_distance(&query, w)))
                    .filter(|(_, d)| *d <= max)
                    .collect();
                want.sort();
                prop_assert_eq!(got, want);
                prop_assert_eq!(fast.correct(&query), baseline_correct(&query, &lex, max));
            }
        }

        #[test]
        fn never_strays_beyond_threshold(
            words in proptest::collection::vec(("[abc]{1,5}", 1u64..20), 1..25),
            query in "[abcd]{1,6}",
        ) {
            let pairs: Vec<(&str, u64)> = words.iter().map(|(w, f)| (w.as_str(), *f)).collect();
            let lex = lexicon(&pairs);
            let out = baseline_correct(&query, &lex, 2);
            prop_assert!(out == query || osa_distance(&query, &out) <= 2);
        }
    }
}
