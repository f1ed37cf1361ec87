//! Line and cell segmentation.
//!
//! Both axes use the same recipe: dilate the foreground so each text line
//! (or each cell) becomes a solid block, run Canny on the dilated mask, and
//! read the block boundaries off an axis-aligned Hough transform. Empty
//! cells leave no edges, so cell positions are then snapped to a uniform
//! pitch lattice fitted to the page.

use super::canny::canny_binary;
use super::hough::{detect_lines, Orientation};
use super::preprocess::dilate_rect;
use super::{BinaryImage, ImagingError, RenderConfig};

/// Height of the structuring element used to merge dot rows into a line.
pub const ROW_DILATION: usize = 10;
/// Width of the structuring element used to merge dot columns into a cell.
pub const COLUMN_DILATION: usize = 10;

/// Half-open pixel interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn center(&self) -> usize {
        (self.start + self.end) / 2
    }
}

/// Line boxes and, per line, the cell boxes in reading order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SegmentationGrid {
    pub row_bands: Vec<Interval>,
    pub cell_bands: Vec<Vec<Interval>>,
}

/// Pairs rising/falling edges of a dilated 1-D occupancy into blocks.
fn blocks_from_edges(edge_positions: &[usize], occupied: impl Fn(usize) -> bool, len: usize) -> Vec<Interval> {
    let mut bands = Vec::new();
    let mut open = if len > 0 && occupied(0) { Some(0) } else { None };
    for &pos in edge_positions {
        let before = pos.checked_sub(1).map_or(false, &occupied);
        let after = (pos + 2 < len) && occupied(pos + 2);
        match (before, after) {
            (false, true) => {
                open.get_or_insert(pos + 1);
            }
            (true, false) => {
                if let Some(start) = open.take() {
                    bands.push(Interval::new(start, pos + 1));
                }
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        bands.push(Interval::new(start, len));
    }
    bands
}

/// Shrinks `band` to the first and last index with a nonzero profile.
fn tighten(band: Interval, profile: &[usize]) -> Option<Interval> {
    let first = (band.start..band.end.min(profile.len())).find(|&i| profile[i] > 0)?;
    let last = (first..band.end.min(profile.len())).rev().find(|&i| profile[i] > 0)?;
    Some(Interval::new(first, last + 1))
}

/// Text-line bands, top to bottom, tightened to their foreground rows.
pub fn segment_rows(img: &BinaryImage) -> Result<Vec<Interval>, ImagingError> {
    let (w, h) = (img.width(), img.height());
    let profile = img.row_profile();
    if profile.iter().all(|&c| c == 0) {
        return Err(ImagingError::NoLinesFound);
    }
    let dilated = dilate_rect(img, ROW_DILATION, w);
    let edges = canny_binary(&dilated);
    let lines = detect_lines(&edges, Orientation::Horizontal, (w / 4).max(1));
    let dilated_rows = dilated.row_profile();
    let occupied = |y: usize| dilated_rows[y] * 4 > w;
    let rhos: Vec<usize> = lines.iter().map(|l| l.rho).collect();

    let bands: Vec<Interval> = blocks_from_edges(&rhos, occupied, h)
        .into_iter()
        .filter_map(|b| tighten(b, &profile))
        .collect();
    if bands.is_empty() {
        return Err(ImagingError::NoLinesFound);
    }
    Ok(bands)
}

/// Foreground blocks of a line band, left to right. A block is one cell or,
/// for cells with an empty column, part of one.
pub fn column_segments(band: &BinaryImage) -> Vec<Interval> {
    let (w, h) = (band.width(), band.height());
    let profile = band.column_profile();
    if profile.iter().all(|&c| c == 0) {
        return Vec::new();
    }
    let dilated = dilate_rect(band, 2 * h + 1, COLUMN_DILATION);
    let edges = canny_binary(&dilated);
    let lines = detect_lines(&edges, Orientation::Vertical, (h / 2).max(1));
    let dilated_cols = dilated.column_profile();
    let occupied = |x: usize| dilated_cols[x] * 2 > h;
    let rhos: Vec<usize> = lines.iter().map(|l| l.rho).collect();
    blocks_from_edges(&rhos, occupied, w)
        .into_iter()
        .filter_map(|b| tighten(b, &profile))
        .collect()
}

/// Uniform placement of cells along one axis: slot `k` starts at
/// `phase + k * pitch` and is `extent` pixels long.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub phase: usize,
    pub pitch: usize,
    pub extent: usize,
}

impl Lattice {
    pub fn slot(&self, k: usize) -> Interval {
        let start = self.phase + k * self.pitch;
        Interval::new(start, start + self.extent)
    }

    /// Slots overlapping `span`.
    pub fn slots_covering(&self, span: Interval) -> std::ops::RangeInclusive<usize> {
        let first = (span.start + self.pitch).saturating_sub(self.phase + self.extent - 1) / self.pitch;
        let first = if self.slot(first).overlaps(&span) { first } else { first + 1 };
        let last = span.end.saturating_sub(1).saturating_sub(self.phase) / self.pitch;
        first..=last
    }

    /// Slot containing the centre of `span`, if the centre lies past the phase.
    pub fn slot_of(&self, span: Interval) -> Option<usize> {
        let c = span.center();
        (c >= self.phase).then(|| (c - self.phase) / self.pitch)
    }

    /// Phase maximizing the profile mass under the dot windows
    /// (`offsets`, each `window` long) of every slot. Ties go to the phase
    /// closest to `prior`.
    pub fn fit(profile: &[usize], pitch: usize, extent: usize, offsets: &[usize], window: usize, prior: usize) -> Self {
        let mut prefix = vec![0u64; profile.len() + 1];
        for (i, &v) in profile.iter().enumerate() {
            prefix[i + 1] = prefix[i] + v as u64;
        }
        let sum = |a: usize, b: usize| prefix[b.min(profile.len())] - prefix[a.min(profile.len())];
        let prior = prior % pitch;
        let circular = |p: usize| {
            let d = p.abs_diff(prior);
            d.min(pitch - d)
        };

        let mut best = (0u64, usize::MAX, 0usize);
        for phase in 0..pitch {
            let mut score = 0;
            let mut start = phase;
            while start < profile.len() {
                for &off in offsets {
                    score += sum(start + off, start + off + window);
                }
                start += pitch;
            }
            let dist = circular(phase);
            if score > best.0 || (score == best.0 && dist < best.1) {
                best = (score, dist, phase);
            }
        }
        Lattice {
            phase: best.2,
            pitch,
            extent,
        }
    }
}

/// Horizontal cell lattice for a page with the given geometry.
pub fn fit_column_lattice(img: &BinaryImage, geometry: &RenderConfig) -> Lattice {
    let window = 2 * geometry.dot_radius + 1;
    Lattice::fit(
        &img.column_profile(),
        geometry.cell_pitch_x,
        geometry.cell_width(),
        &[0, geometry.dot_pitch],
        window,
        geometry.margin,
    )
}

/// Vertical line lattice for a page with the given geometry.
pub fn fit_row_lattice(img: &BinaryImage, geometry: &RenderConfig) -> Lattice {
    let window = 2 * geometry.dot_radius + 1;
    Lattice::fit(
        &img.row_profile(),
        geometry.cell_pitch_y,
        geometry.cell_height(),
        &[0, geometry.dot_pitch, 2 * geometry.dot_pitch],
        window,
        geometry.margin,
    )
}

/// Cell boxes of one line band: every lattice slot from `first_slot` to the
/// last slot touched by a foreground segment. Slots without foreground are
/// blank cells.
pub fn cells_on_lattice(segments: &[Interval], lattice: &Lattice, first_slot: usize) -> Vec<Interval> {
    let Some(last) = segments.iter().map(|s| *lattice.slots_covering(*s).end()).max() else {
        return Vec::new();
    };
    (first_slot..=last).map(|k| lattice.slot(k)).collect()
}

/// Cell boxes of a single band, fitting the lattice on the band alone.
pub fn segment_cells(band: &BinaryImage, geometry: &RenderConfig) -> Vec<Interval> {
    let segments = column_segments(band);
    if segments.is_empty() {
        return Vec::new();
    }
    let lattice = fit_column_lattice(band, geometry);
    let first = segments
        .iter()
        .map(|s| *lattice.slots_covering(*s).start())
        .min()
        .unwrap_or(0);
    cells_on_lattice(&segments, &lattice, first)
}
