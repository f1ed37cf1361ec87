//! Synthetic page rendering, noise, and optical braille recognition.

mod canny;
mod hough;
mod image;
mod noise;
mod preprocess;
mod recognize;
mod render;
mod segment;

use std::path::{Path, PathBuf};

pub use canny::{canny, canny_binary, HIGH_THRESHOLD, LOW_THRESHOLD};
pub use hough::{accumulate, detect_lines, HoughLine, Orientation};
pub use image::{BinaryImage, GrayImage, BLACK, WHITE};
pub use noise::{gaussian_blur, gaussian_kernel, spread_noise};
pub use preprocess::{
    connected_components, dilate_rect, erode_square, median_filter, opening, preprocess, remove_small_blobs,
    threshold, MEDIAN_SIZE, MIN_BLOB_AREA, OPENING_SIZE, THRESHOLD,
};
pub use recognize::{
    decode_cell_image, read_cell, recognize, recognize_with, RecognitionOutput, RecognizeConfig, DOT_THRESHOLD,
    FALLBACK_CHAR,
};
pub use render::{render, RenderConfig};
pub use segment::{
    cells_on_lattice, column_segments, fit_column_lattice, fit_row_lattice, segment_cells, segment_rows, Interval,
    Lattice, SegmentationGrid, COLUMN_DILATION, ROW_DILATION,
};

#[derive(Debug, thiserror::Error)]
pub enum ImagingError {
    #[error("character {ch:?} at line {line}, column {col} has no braille cell")]
    UnmappedCharacter { ch: char, line: usize, col: usize },
    #[error("line {line} has {cells} cells, more than the maximum of {max}")]
    LineTooLong { line: usize, cells: usize, max: usize },
    #[error("dot pattern {bits:06b} has no character")]
    UnmappedCell { bits: u8 },
    #[error("no text lines found")]
    NoLinesFound,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bad image data: {0}")]
    Format(String),
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ImagingError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ImagingError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
