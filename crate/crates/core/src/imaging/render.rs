//! Synthetic braille page rendering.

use crate::braille::{BrailleCell, CodeTable};

use super::{GrayImage, ImagingError, BLACK, WHITE};

/// Page geometry, in pixels.
///
/// A cell occupies `2 * dot_radius + dot_pitch + 1` pixels horizontally and
/// `2 * dot_radius + 2 * dot_pitch + 1` vertically; cells and lines repeat
/// every `cell_pitch_x` / `cell_pitch_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderConfig {
    pub dot_radius: usize,
    pub dot_pitch: usize,
    pub cell_pitch_x: usize,
    pub cell_pitch_y: usize,
    pub margin: usize,
    /// Longest line accepted by [`render`].
    pub max_cells_per_line: usize,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            dot_radius: 18,
            dot_pitch: 42,
            cell_pitch_x: 110,
            cell_pitch_y: 160,
            margin: 60,
            max_cells_per_line: 32,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), ImagingError> {
        let invalid = |msg: &str| Err(ImagingError::InvalidParameter(msg.to_string()));
        if self.dot_radius == 0 || self.dot_pitch == 0 {
            return invalid("dot_radius and dot_pitch must be positive");
        }
        if self.cell_pitch_x <= 2 * self.dot_pitch {
            return invalid("cell_pitch_x must exceed 2 * dot_pitch");
        }
        if self.cell_pitch_y <= 3 * self.dot_pitch {
            return invalid("cell_pitch_y must exceed 3 * dot_pitch");
        }
        if self.cell_width() > self.cell_pitch_x || self.cell_height() > self.cell_pitch_y {
            return invalid("dots overflow the cell pitch");
        }
        if self.max_cells_per_line == 0 {
            return invalid("max_cells_per_line must be positive");
        }
        Ok(())
    }

    pub fn cell_width(&self) -> usize {
        2 * self.dot_radius + self.dot_pitch + 1
    }

    pub fn cell_height(&self) -> usize {
        2 * self.dot_radius + 2 * self.dot_pitch + 1
    }

    /// Centre of dot `dot` (1..=6) of the cell whose top-left corner is `origin`.
    pub fn dot_center(&self, origin: (usize, usize), dot: u8) -> (usize, usize) {
        let col = usize::from(dot > 3);
        let row = usize::from((dot - 1) % 3);
        (
            origin.0 + self.dot_radius + col * self.dot_pitch,
            origin.1 + self.dot_radius + row * self.dot_pitch,
        )
    }

    /// Top-left corner of cell `col` on line `line`.
    pub fn cell_origin(&self, line: usize, col: usize) -> (usize, usize) {
        (
            self.margin + col * self.cell_pitch_x,
            self.margin + line * self.cell_pitch_y,
        )
    }

    pub fn page_size(&self, lines: usize, cells: usize) -> (usize, usize) {
        let span = |n: usize, pitch: usize, extent: usize| if n == 0 { 0 } else { (n - 1) * pitch + extent };
        (
            2 * self.margin + span(cells, self.cell_pitch_x, self.cell_width()),
            2 * self.margin + span(lines, self.cell_pitch_y, self.cell_height()),
        )
    }
}

/// Draws `lines` as black discs on a white page sized to the longest line.
pub fn render<S: AsRef<str>>(lines: &[S], table: &CodeTable, cfg: &RenderConfig) -> Result<GrayImage, ImagingError> {
    cfg.validate()?;
    let mut encoded: Vec<Vec<BrailleCell>> = Vec::with_capacity(lines.len());
    for (line_no, line) in lines.iter().enumerate() {
        let line = line.as_ref();
        let cells = line
            .chars()
            .enumerate()
            .map(|(col, ch)| {
                table.cell_for(ch).ok_or(ImagingError::UnmappedCharacter { ch, line: line_no, col })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if cells.len() > cfg.max_cells_per_line {
            return Err(ImagingError::LineTooLong {
                line: line_no,
                cells: cells.len(),
                max: cfg.max_cells_per_line,
            });
        }
        encoded.push(cells);
    }

    let widest = encoded.iter().map(Vec::len).max().unwrap_or(0);
    let (width, height) = cfg.page_size(encoded.len(), widest);
    let mut img = GrayImage::new(width, height, WHITE);
    for (line_no, cells) in encoded.iter().enumerate() {
        for (col, cell) in cells.iter().enumerate() {
            let origin = cfg.cell_origin(line_no, col);
            for dot in (1..=6).filter(|&d| cell.has_dot(d)) {
                draw_disc(&mut img, cfg.dot_center(origin, dot), cfg.dot_radius);
            }
        }
    }
    Ok(img)
}

fn draw_disc(img: &mut GrayImage, center: (usize, usize), radius: usize) {
    let r2 = (radius * radius) as isize;
    let (cx, cy) = (center.0 as isize, center.1 as isize);
    let r = radius as isize;
    for y in (cy - r).max(0)..=(cy + r).min(img.height() as isize - 1) {
        for x in (cx - r).max(0)..=(cx + r).min(img.width() as isize - 1) {
            let (dx, dy) = (x - cx, y - cy);
            if dx * dx + dy * dy <= r2 {
                img.set(x as usize, y as usize, BLACK);
            }
        }
    }
}
