//! Hough line transform restricted to axis-aligned lines.
//!
//! With `theta` fixed at 0 or 90 degrees the accumulator collapses to one
//! vote count per column or per row, and `rho` is simply the column or row
//! index.

use super::BinaryImage;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// theta = 90 degrees; rho is a row index.
    Horizontal,
    /// theta = 0 degrees; rho is a column index.
    Vertical,
}

/// Detected line: position and vote count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HoughLine {
    pub rho: usize,
    pub votes: usize,
}

pub fn accumulate(edges: &BinaryImage, orientation: Orientation) -> Vec<usize> {
    match orientation {
        Orientation::Horizontal => edges.row_profile(),
        Orientation::Vertical => edges.column_profile(),
    }
}

/// Lines whose votes reach `min_votes`. Runs of adjacent qualifying bins
/// are reduced to their strongest bin (earliest on ties).
pub fn detect_lines(edges: &BinaryImage, orientation: Orientation, min_votes: usize) -> Vec<HoughLine> {
    let acc = accumulate(edges, orientation);
    let mut lines = Vec::new();
    let mut run: Option<HoughLine> = None;
    for (rho, &votes) in acc.iter().enumerate() {
        if votes >= min_votes.max(1) {
            run = Some(match run {
                Some(best) if best.votes >= votes => best,
                _ => HoughLine { rho, votes },
            });
        } else if let Some(best) = run.take() {
            lines.push(best);
        }
    }
    lines.extend(run);
    lines
}
