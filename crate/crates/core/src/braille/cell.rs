use std::fmt;

/// One six-dot braille cell.
///
/// Bit `i` of the inner byte holds dot `i + 1`, so dots 1-2-3 run down the
/// left column and 4-5-6 down the right column. The same layout is used by
/// the Unicode braille block, which `Display` takes advantage of.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrailleCell(u8);

impl BrailleCell {
    pub const BLANK: BrailleCell = BrailleCell(0);
    pub const FULL: BrailleCell = BrailleCell(0b11_1111);
    pub const DOTS: usize = 6;

    /// Builds a cell from a 6-bit pattern. Returns `None` if any bit above
    /// dot 6 is set.
    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits < 64).then_some(BrailleCell(bits))
    }

    /// Builds a cell from raised dot numbers (1..=6).
    pub fn from_dots(dots: &[u8]) -> Option<Self> {
        dots.iter().try_fold(BrailleCell::BLANK, |cell, &d| {
            (1..=6).contains(&d).then(|| cell.with_dot(d, true))
        })
    }

    /// Builds a cell from six dot states in order 1..=6.
    pub fn from_states(states: [bool; 6]) -> Self {
        let bits = states
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &on)| acc | (u8::from(on) << i));
        BrailleCell(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Whether dot `dot` (1..=6) is raised.
    pub fn has_dot(self, dot: u8) -> bool {
        debug_assert!((1..=6).contains(&dot));
        self.0 >> (dot - 1) & 1 == 1
    }

    pub fn with_dot(self, dot: u8, raised: bool) -> Self {
        debug_assert!((1..=6).contains(&dot));
        let mask = 1 << (dot - 1);
        if raised {
            BrailleCell(self.0 | mask)
        } else {
            BrailleCell(self.0 & !mask)
        }
    }

    /// Dot states flattened in order 1..=6.
    pub fn states(self) -> [bool; 6] {
        std::array::from_fn(|i| self.0 >> i & 1 == 1)
    }

    /// Toggles the dot at zero-based position `offset` (0 = dot 1).
    pub fn flipped(self, offset: usize) -> Self {
        assert!(offset < Self::DOTS, "dot offset {offset} out of range");
        BrailleCell(self.0 ^ (1 << offset))
    }

    pub fn raised_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_blank(self) -> bool {
        self.0 == 0
    }

    /// Number of dots that differ between the two cells.
    pub fn distance(self, other: BrailleCell) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// All 64 cell patterns, blank first.
    pub fn all() -> impl Iterator<Item = BrailleCell> {
        (0u8..64).map(BrailleCell)
    }

    pub fn to_unicode(self) -> char {
        char::from_u32(0x2800 + u32::from(self.0)).expect("braille block is contiguous")
    }
}

impl fmt::Display for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_unicode())
    }
}
