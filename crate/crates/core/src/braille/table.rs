use std::collections::HashMap;
use std::path::Path;

use super::{BrailleCell, BrailleError};

const PORTUGUESE_TABLE: &str = include_str!("../../../../data/pt_br.table");

/// Token used for the blank cell in table files.
pub const SPACE_TOKEN: &str = "SPACE";

/// Bidirectional character/cell mapping.
///
/// Immutable once loaded. Backtick and apostrophe share the apostrophe cell.
#[derive(Clone, Debug)]
pub struct CodeTable {
    char_to_cell: HashMap<char, BrailleCell>,
    cell_to_char: [Option<char>; 64],
}

impl CodeTable {
    /// The bundled Portuguese Grade-1 table.
    pub fn portuguese() -> Self {
        Self::parse(PORTUGUESE_TABLE).expect("bundled code table is valid")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, BrailleError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| BrailleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses the `<char><TAB><bits>` table format.
    pub fn parse(text: &str) -> Result<Self, BrailleError> {
        let mut char_to_cell = HashMap::new();
        let mut cell_to_char = [None; 64];

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| BrailleError::TableParse {
                line: line_no,
                reason: reason.to_string(),
            };
            let (key, bits) = line.split_once('\t').ok_or_else(|| bad("expected <char>\\t<bits>"))?;
            let ch = if key == SPACE_TOKEN {
                ' '
            } else {
                let mut chars = key.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => normalize_char(c),
                    _ => return Err(bad("key must be a single character or SPACE")),
                }
            };
            let bits = bits.trim();
            if bits.len() != 6 || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad("dot pattern must be six 0/1 digits"));
            }
            let states: [bool; 6] = std::array::from_fn(|i| bits.as_bytes()[i] == b'1');
            let cell = BrailleCell::from_states(states);

            if char_to_cell.insert(ch, cell).is_some() {
                return Err(bad(&format!("duplicate character {ch:?}")));
            }
            let slot = &mut cell_to_char[cell.bits() as usize];
            if let Some(prev) = slot {
                return Err(bad(&format!("cell {cell} already mapped to {prev:?}")));
            }
            *slot = Some(ch);
        }

        if char_to_cell.get(&' ') != Some(&BrailleCell::BLANK) {
            return Err(BrailleError::TableParse {
                line: 0,
                reason: "the blank cell must map to SPACE".into(),
            });
        }
        Ok(CodeTable {
            char_to_cell,
            cell_to_char,
        })
    }

    pub fn encode_char(&self, c: char) -> Result<BrailleCell, BrailleError> {
        self.cell_for(c)
            .ok_or(BrailleError::UnmappedCharacter { ch: c, index: 0 })
    }

    pub fn decode_cell(&self, cell: BrailleCell) -> Result<char, BrailleError> {
        self.char_for(cell).ok_or(BrailleError::UnmappedCell {
            bits: cell.bits(),
            index: 0,
        })
    }

    pub fn cell_for(&self, c: char) -> Option<BrailleCell> {
        self.char_to_cell.get(&normalize_char(c)).copied()
    }

    pub fn char_for(&self, cell: BrailleCell) -> Option<char> {
        self.cell_to_char[cell.bits() as usize]
    }

    pub fn contains_char(&self, c: char) -> bool {
        self.cell_for(c).is_some()
    }

    pub fn is_mapped(&self, cell: BrailleCell) -> bool {
        self.char_for(cell).is_some()
    }

    /// Every word character in the table is encodable.
    pub fn can_encode(&self, word: &str) -> bool {
        word.chars().all(|c| self.contains_char(c))
    }

    pub fn len(&self) -> usize {
        self.char_to_cell.len()
    }

    pub fn is_empty(&self) -> bool {
        self.char_to_cell.is_empty()
    }

    /// Entries sorted by cell pattern.
    pub fn entries(&self) -> impl Iterator<Item = (char, BrailleCell)> + '_ {
        BrailleCell::all().filter_map(|cell| self.char_for(cell).map(|c| (c, cell)))
    }
}

/// Maps the backtick onto the apostrophe; every other character is returned unchanged.
pub fn normalize_char(c: char) -> char {
    match c {
        '`' => '\'',
        other => other,
    }
}
