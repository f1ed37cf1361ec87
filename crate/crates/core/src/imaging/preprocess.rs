//! Binarization and clean-up ahead of segmentation.

use super::{BinaryImage, GrayImage};

pub const THRESHOLD: u8 = 120;
pub const MEDIAN_SIZE: usize = 5;
pub const OPENING_SIZE: usize = 3;
pub const MIN_BLOB_AREA: usize = 10;

/// Threshold at 120, 5x5 median, 3x3 opening, then removal of 8-connected
/// blobs smaller than 10 pixels.
pub fn preprocess(img: &GrayImage) -> BinaryImage {
    let bin = threshold(img, THRESHOLD);
    let bin = median_filter(&bin, MEDIAN_SIZE);
    let bin = opening(&bin, OPENING_SIZE);
    remove_small_blobs(&bin, MIN_BLOB_AREA)
}

/// Pixels darker than `level` become foreground.
pub fn threshold(img: &GrayImage, level: u8) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |x, y| img.get(x, y) < level)
}

/// Summed-area table with one row/column of zero padding.
fn integral(img: &BinaryImage) -> Vec<u32> {
    let (w, h) = (img.width(), img.height());
    let mut sat = vec![0u32; (w + 1) * (h + 1)];
    for y in 0..h {
        let mut run = 0u32;
        for x in 0..w {
            run += u32::from(img.get(x, y));
            sat[(y + 1) * (w + 1) + x + 1] = sat[y * (w + 1) + x + 1] + run;
        }
    }
    sat
}

fn window_sum(sat: &[u32], w: usize, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
    let s = w + 1;
    sat[y1 * s + x1] + sat[y0 * s + x0] - sat[y0 * s + x1] - sat[y1 * s + x0]
}

/// Binary median over a `size` x `size` window with replicated borders.
pub fn median_filter(img: &BinaryImage, size: usize) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return img.clone();
    }
    let r = size / 2;
    // pad by replication so every window is full
    let padded = BinaryImage::from_fn(w + 2 * r, h + 2 * r, |x, y| {
        img.get(x.saturating_sub(r).min(w - 1), y.saturating_sub(r).min(h - 1))
    });
    let sat = integral(&padded);
    let majority = (size * size / 2 + 1) as u32;
    BinaryImage::from_fn(w, h, |x, y| window_sum(&sat, padded.width(), x, y, x + size, y + size) >= majority)
}

/// One-axis max filter: output pixel `i` is set when any input pixel in
/// `i - before ..= i + after` is. Out-of-bounds pixels are background.
fn dilate_axis(img: &BinaryImage, horizontal: bool, before: usize, after: usize) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let src = img.data();
    let mut out = vec![false; w * h];
    if horizontal {
        for (row, dst) in src.chunks_exact(w.max(1)).zip(out.chunks_exact_mut(w.max(1))) {
            // running count of set pixels in the window
            let mut count = 0usize;
            for &v in &row[..after.min(w)] {
                count += usize::from(v);
            }
            for (i, d) in dst.iter_mut().enumerate() {
                if i + after < w {
                    count += usize::from(row[i + after]);
                }
                if i > before {
                    count -= usize::from(row[i - before - 1]);
                }
                *d = count > 0;
            }
        }
    } else {
        let mut count = vec![0u32; w];
        for y in 0..after.min(h) {
            for (c, &v) in count.iter_mut().zip(&src[y * w..(y + 1) * w]) {
                *c += u32::from(v);
            }
        }
        for y in 0..h {
            if y + after < h {
                let add = &src[(y + after) * w..(y + after + 1) * w];
                for (c, &v) in count.iter_mut().zip(add) {
                    *c += u32::from(v);
                }
            }
            if y > before {
                let sub = &src[(y - before - 1) * w..(y - before) * w];
                for (c, &v) in count.iter_mut().zip(sub) {
                    *c -= u32::from(v);
                }
            }
            for (d, &c) in out[y * w..(y + 1) * w].iter_mut().zip(&count) {
                *d = c > 0;
            }
        }
    }
    BinaryImage::from_data(w, h, out)
}

/// Dilation by a `rows` x `cols` rectangle anchored at its centre.
pub fn dilate_rect(img: &BinaryImage, rows: usize, cols: usize) -> BinaryImage {
    let h = dilate_axis(img, true, cols / 2, cols.saturating_sub(1) - cols / 2);
    dilate_axis(&h, false, rows / 2, rows.saturating_sub(1) - rows / 2)
}

/// Erosion by a `size` x `size` square; out-of-bounds pixels do not erode.
pub fn erode_square(img: &BinaryImage, size: usize) -> BinaryImage {
    let inverted = BinaryImage::from_fn(img.width(), img.height(), |x, y| !img.get(x, y));
    let grown = dilate_rect(&inverted, size, size);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| !grown.get(x, y))
}

pub fn opening(img: &BinaryImage, size: usize) -> BinaryImage {
    let eroded = erode_square(img, size);
    // dilate with the reflected element so opening stays anti-extensive
    let h = dilate_axis(&eroded, true, size - 1 - size / 2, size / 2);
    dilate_axis(&h, false, size - 1 - size / 2, size / 2)
}

/// 8-connected foreground components, each as a list of pixel indices.
pub fn connected_components(img: &BinaryImage) -> Vec<Vec<usize>> {
    let (w, h) = (img.width(), img.height());
    let data = img.data();
    let mut seen = vec![false; w * h];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !data[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut pixels = Vec::new();
        while let Some(p) = stack.pop() {
            pixels.push(p);
            let (x, y) = ((p % w) as isize, (p / w) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if data[q] && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        components.push(pixels);
    }
    components
}

pub fn remove_small_blobs(img: &BinaryImage, min_area: usize) -> BinaryImage {
    let mut out = img.clone();
    let w = img.width();
    for blob in connected_components(img) {
        if blob.len() < min_area {
            for p in blob {
                out.set(p % w, p / w, false);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braille::CodeTable;
    use crate::imaging::{render, RenderConfig, BLACK, WHITE};
    use proptest::prelude::*;

    #[test]
    fn white_page_is_all_background() {
        let img = GrayImage::new(50, 40, WHITE);
        assert_eq!(preprocess(&img).count(), 0);
    }

    #[test]
    fn threshold_polarity() {
        let img = GrayImage::from_raw(3, 1, vec![119, 120, 0]).unwrap();
        assert_eq!(threshold(&img, THRESHOLD).data(), &[true, false, true]);
    }

    #[test]
    fn tiny_square_is_removed() {
        let mut img = BinaryImage::new(30, 30);
        for (x, y) in [(10, 10), (11, 10), (10, 11), (11, 11)] {
            img.set(x, y, true);
        }
        assert!(remove_small_blobs(&img, MIN_BLOB_AREA).count() == 0);

        let mut gray = GrayImage::new(30, 30, WHITE);
        for (x, y) in [(10, 10), (11, 10), (10, 11), (11, 11)] {
            gray.set(x, y, BLACK);
        }
        assert_eq!(preprocess(&gray).count(), 0);
    }

    #[test]
    fn blob_area_counts_diagonal_neighbours() {
        // a diagonal line of 12 pixels is one 8-connected blob
        let img = BinaryImage::from_fn(20, 20, |x, y| x == y && x < 12);
        assert_eq!(connected_components(&img).len(), 1);
        assert_eq!(remove_small_blobs(&img, MIN_BLOB_AREA).count(), 12);
    }

    #[test]
    fn rendered_dot_survives() {
        let cfg = RenderConfig {
            dot_radius: 3,
            dot_pitch: 10,
            cell_pitch_x: 25,
            cell_pitch_y: 35,
            margin: 10,
            max_cells_per_line: 4,
        };
        let img = render(&["a"], &CodeTable::portuguese(), &cfg).unwrap();
        assert!(preprocess(&img).count() > 0);
    }

    #[test]
    fn median_majority() {
        let mut img = BinaryImage::new(9, 9);
        img.set(4, 4, true);
        assert_eq!(median_filter(&img, 5).count(), 0);
        let full = BinaryImage::from_fn(9, 9, |_, _| true);
        assert_eq!(median_filter(&full, 5), full);
    }

    #[test]
    fn dilation_rectangle_extent() {
        let mut img = BinaryImage::new(30, 30);
        img.set(15, 15, true);
        let d = dilate_rect(&img, 10, 4);
        assert_eq!(d.count(), 40);
        assert!(d.get(14, 11) && d.get(17, 20));
        assert!(!d.get(13, 15) && !d.get(15, 10));
    }

    #[test]
    fn opening_removes_thin_lines_keeps_blocks() {
        let img = BinaryImage::from_fn(20, 20, |x, y| y == 3 || (5..12).contains(&x) && (8..15).contains(&y));
        let out = opening(&img, 3);
        assert!((0..20).all(|x| !out.get(x, 3)));
        assert_eq!(out.count(), 49);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn preprocess_idempotent_on_rendered_pages(text in "[a-zãçé ]{1,12}", sigma in proptest::option::of(1.0f64..4.0)) {
            let table = CodeTable::portuguese();
            let cfg = RenderConfig::default();
            let mut img = render(&[text.trim_end()], &table, &cfg).unwrap();
            if let Some(s) = sigma {
                img = crate::imaging::gaussian_blur(&img, s).unwrap();
            }
            let once = preprocess(&img);
            let twice = preprocess(&once.to_gray());
            prop_assert_eq!(once, twice);
        }
    }
}
