//! Braille document recognition and braille-space spelling correction.
//!
//! The pipeline renders or reads a page image, recognizes braille cells,
//! and revises each recognized word against a frequency dictionary by
//! minimum Hamming distance between dot patterns.

pub mod braille;
pub mod corrector;
pub mod dictionary;
pub mod eval;
pub mod imaging;

pub use braille::{beta, psi, BitVector, BrailleCell, BrailleError, CodeTable};
pub use corrector::{
    baseline_correct, compare, revise_text, revise_word, BaselineCorrector, HammingCorrector, RevisionResult,
    TextRevision,
};
pub use dictionary::{AllowedChars, DictionaryError, Lexicon, RawEntry};
pub use imaging::{recognize, render, GrayImage, ImagingError, RecognitionOutput, RenderConfig};
