//! Braille cells, the code table, and the word/bit-vector transcriptions.
//!
//! A word is encoded cell by cell into a flat vector of dot states (six per
//! character, dots 1..=6 in order). [`beta`] produces that vector and [`psi`]
//! reads it back into text.

mod cell;
mod table;

pub use cell::BrailleCell;
pub use table::{normalize_char, CodeTable, SPACE_TOKEN};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BrailleError {
    #[error("character {ch:?} at index {index} has no braille cell")]
    UnmappedCharacter { ch: char, index: usize },
    #[error("cell {bits:06b} at index {index} has no character")]
    UnmappedCell { bits: u8, index: usize },
    #[error("bit vector length {0} is not a multiple of six")]
    LengthNotMultipleOfSix(usize),
    #[error("words have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("code table line {line}: {reason}")]
    TableParse { line: usize, reason: String },
    #[error("cannot read code table {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Flat dot vector of an encoded word; its length is always six times the
/// number of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitVector {
    cells: Vec<BrailleCell>,
}

impl BitVector {
    pub fn from_cells(cells: Vec<BrailleCell>) -> Self {
        BitVector { cells }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, BrailleError> {
        if bits.len() % 6 != 0 {
            return Err(BrailleError::LengthNotMultipleOfSix(bits.len()));
        }
        let cells = bits
            .chunks_exact(6)
            .map(|c| BrailleCell::from_states([c[0], c[1], c[2], c[3], c[4], c[5]]))
            .collect();
        Ok(BitVector { cells })
    }

    pub fn cells(&self) -> &[BrailleCell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<BrailleCell> {
        self.cells
    }

    /// Number of bits (6 per cell).
    pub fn len(&self) -> usize {
        self.cells.len() * 6
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, bit: usize) -> bool {
        self.cells[bit / 6].states()[bit % 6]
    }

    pub fn flip(&mut self, bit: usize) {
        let cell = &mut self.cells[bit / 6];
        *cell = cell.flipped(bit % 6);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.cells.iter().flat_map(|c| c.states())
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Number of differing bits; `None` when the lengths differ.
    pub fn hamming(&self, other: &BitVector) -> Option<u32> {
        (self.cells.len() == other.cells.len()).then(|| {
            self.cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a.distance(*b))
                .sum()
        })
    }
}

pub fn encode_char(c: char, table: &CodeTable) -> Result<BrailleCell, BrailleError> {
    table.encode_char(c)
}

pub fn decode_cell(cell: BrailleCell, table: &CodeTable) -> Result<char, BrailleError> {
    table.decode_cell(cell)
}

/// Encodes `word` into its flat dot vector.
pub fn beta(word: &str, table: &CodeTable) -> Result<BitVector, BrailleError> {
    word.chars()
        .enumerate()
        .map(|(index, ch)| {
            table
                .cell_for(ch)
                .ok_or(BrailleError::UnmappedCharacter { ch, index })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(BitVector::from_cells)
}

/// Decodes a dot vector back into text.
pub fn psi(vector: &BitVector, table: &CodeTable) -> Result<String, BrailleError> {
    decode_cells(vector.cells(), table)
}

/// Same as [`psi`] over raw bits, reporting a length error first.
pub fn psi_bits(bits: &[bool], table: &CodeTable) -> Result<String, BrailleError> {
    psi(&BitVector::from_bits(bits)?, table)
}

pub fn decode_cells(cells: &[BrailleCell], table: &CodeTable) -> Result<String, BrailleError> {
    cells
        .iter()
        .enumerate()
        .map(|(index, &cell)| {
            table.char_for(cell).ok_or(BrailleError::UnmappedCell {
                bits: cell.bits(),
                index,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> CodeTable {
        CodeTable::portuguese()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.bytes().filter(|b| *b != b' ').map(|b| b == b'1').collect()
    }

    #[test]
    fn beta_examples() {
        let t = table();
        assert!(beta("", &t).unwrap().is_empty());
        assert_eq!(beta("a", &t).unwrap().to_bits(), bits("100000"));
        // b=12 r=1235 a=1 i=24 l=123 l=123 e=15
        let expected = bits("110000 111010 100000 010100 111000 111000 100010");
        let v = beta("braille", &t).unwrap();
        assert_eq!(v.len(), 42);
        assert_eq!(v.to_bits(), expected);
    }

    #[test]
    fn beta_reports_offending_character() {
        let err = beta("ab7c", &table()).unwrap_err();
        assert!(matches!(err, BrailleError::UnmappedCharacter { ch: '7', index: 2 }));
    }

    #[test]
    fn psi_examples() {
        let t = table();
        assert_eq!(psi_bits(&[], &t).unwrap(), "");
        assert_eq!(psi_bits(&bits("100000"), &t).unwrap(), "a");
        assert!(matches!(
            psi_bits(&bits("10000"), &t),
            Err(BrailleError::LengthNotMultipleOfSix(5))
        ));
        // second cell is dots 4-5-6, which is unmapped
        assert!(matches!(
            psi_bits(&bits("100000 000111"), &t),
            Err(BrailleError::UnmappedCell { index: 1, .. })
        ));
    }

    fn word_strategy() -> impl Strategy<Value = String> {
        let chars: Vec<char> = table().entries().map(|(c, _)| c).collect();
        proptest::collection::vec(proptest::sample::select(chars), 0..20)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn round_trip(word in word_strategy()) {
            let t = table();
            let v = beta(&word, &t).unwrap();
            prop_assert_eq!(v.len(), 6 * word.chars().count());
            prop_assert_eq!(psi(&v, &t).unwrap(), word);
        }

        #[test]
        fn bit_flip_is_local(word in word_strategy().prop_filter("non-empty", |w| !w.is_empty()), k in 0usize..1000) {
            let t = table();
            let mut v = beta(&word, &t).unwrap();
            let k = k % v.len();
            v.flip(k);
            if let Ok(decoded) = psi(&v, &t) {
                let changed: Vec<usize> = decoded
                    .chars()
                    .zip(word.chars())
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(i, _)| i)
                    .collect();
                prop_assert_eq!(changed, vec![k / 6]);
            }
        }
    }
}
