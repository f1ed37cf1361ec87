//! Cell decoding and the full recognition pipeline.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::braille::{BrailleCell, CodeTable};

use super::preprocess::preprocess;
use super::segment::{
    cells_on_lattice, column_segments, fit_column_lattice, fit_row_lattice, segment_rows, Interval, SegmentationGrid,
};
use super::{BinaryImage, GrayImage, ImagingError, RenderConfig};

/// Minimum foreground ratio for a region to count as a raised dot.
pub const DOT_THRESHOLD: f64 = 0.10;
/// Emitted for cells whose dot pattern has no character.
pub const FALLBACK_CHAR: char = '?';

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecognizeConfig {
    /// Expected page layout; only the geometry fields are used.
    pub geometry: RenderConfig,
    pub dot_threshold: f64,
    pub fallback: char,
}

impl Default for RecognizeConfig {
    fn default() -> Self {
        RecognizeConfig::for_render(RenderConfig::default())
    }
}

impl RecognizeConfig {
    pub fn for_render(geometry: RenderConfig) -> Self {
        RecognizeConfig {
            geometry,
            dot_threshold: DOT_THRESHOLD,
            fallback: FALLBACK_CHAR,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecognitionOutput {
    pub text: Vec<String>,
    pub cells_total: usize,
    pub cells_failed: usize,
    pub grid: SegmentationGrid,
}

/// Splits the image into a 2x3 grid of regions and reads each region as a
/// dot when its foreground ratio exceeds `threshold`.
pub fn read_cell(cell_img: &BinaryImage, threshold: f64) -> BrailleCell {
    let (w, h) = (cell_img.width(), cell_img.height());
    let mut states = [false; 6];
    for (dot, state) in states.iter_mut().enumerate() {
        let (col, row) = (dot / 3, dot % 3);
        let (x0, x1) = (col * w / 2, (col + 1) * w / 2);
        let (y0, y1) = (row * h / 3, (row + 1) * h / 3);
        let area = (x1 - x0) * (y1 - y0);
        if area > 0 {
            let ratio = cell_img.count_in(x0, y0, x1, y1) as f64 / area as f64;
            *state = ratio > threshold;
        }
    }
    BrailleCell::from_states(states)
}

pub fn decode_cell_image(cell_img: &BinaryImage, table: &CodeTable) -> Result<char, ImagingError> {
    let cell = read_cell(cell_img, DOT_THRESHOLD);
    table
        .char_for(cell)
        .ok_or(ImagingError::UnmappedCell { bits: cell.bits() })
}

pub fn recognize(img: &GrayImage, table: &CodeTable) -> RecognitionOutput {
    recognize_with(img, table, &RecognizeConfig::default())
}

/// Region of `img` at the given box; pixels outside the page are background.
fn crop_padded(img: &BinaryImage, xs: Interval, ys: Interval) -> BinaryImage {
    BinaryImage::from_fn(xs.len(), ys.len(), |x, y| {
        let (px, py) = (xs.start + x, ys.start + y);
        px < img.width() && py < img.height() && img.get(px, py)
    })
}

pub fn recognize_with(img: &GrayImage, table: &CodeTable, cfg: &RecognizeConfig) -> RecognitionOutput {
    let bin = preprocess(img);
    let bands = match segment_rows(&bin) {
        Ok(bands) => bands,
        Err(_) => return RecognitionOutput::default(),
    };
    let rows = fit_row_lattice(&bin, &cfg.geometry);
    let cols = fit_column_lattice(&bin, &cfg.geometry);

    // bands falling on the same lattice line are pieces of one text line
    let mut lines: BTreeMap<usize, Interval> = BTreeMap::new();
    for band in bands {
        let j = rows.slot_of(band).unwrap_or(0);
        lines
            .entry(j)
            .and_modify(|b| *b = Interval::new(b.start.min(band.start), b.end.max(band.end)))
            .or_insert(band);
    }

    let segments: BTreeMap<usize, Vec<Interval>> = lines
        .iter()
        .map(|(&j, band)| (j, column_segments(&bin.crop(0, band.start, bin.width(), band.end))))
        .collect();
    let first_slot = segments
        .values()
        .flatten()
        .map(|s| *cols.slots_covering(*s).start())
        .min()
        .unwrap_or(0);
    let (first_line, last_line) = match (lines.keys().next(), lines.keys().next_back()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return RecognitionOutput::default(),
    };

    let decoded: Vec<(Interval, Vec<Interval>, String, usize)> = (first_line..=last_line)
        .into_par_iter()
        .map(|j| {
            let ys = rows.slot(j);
            let slots = segments
                .get(&j)
                .map(|segs| cells_on_lattice(segs, &cols, first_slot))
                .unwrap_or_default();
            let mut text = String::with_capacity(slots.len());
            let mut failed = 0;
            for &xs in &slots {
                let cell = read_cell(&crop_padded(&bin, xs, ys), cfg.dot_threshold);
                match table.char_for(cell) {
                    Some(ch) => text.push(ch),
                    None => {
                        failed += 1;
                        text.push(cfg.fallback);
                    }
                }
            }
            (ys, slots, text, failed)
        })
        .collect();

    let mut out = RecognitionOutput::default();
    for (ys, slots, text, failed) in decoded {
        out.cells_total += slots.len();
        out.cells_failed += failed;
        out.text.push(text);
        out.grid.row_bands.push(ys);
        out.grid.cell_bands.push(slots);
    }
    out
}
