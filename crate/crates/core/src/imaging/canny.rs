//! Canny edge detector for 8-bit rasters.

use super::BinaryImage;

pub const LOW_THRESHOLD: f32 = 50.0;
pub const HIGH_THRESHOLD: f32 = 150.0;

const SMOOTHING_SIGMA: f32 = 1.4;

/// Canny over a binary mask rendered as 0/255 intensities.
pub fn canny_binary(img: &BinaryImage) -> BinaryImage {
    let intensities: Vec<f32> = img.data().iter().map(|&v| if v { 255.0 } else { 0.0 }).collect();
    canny(&intensities, img.width(), img.height(), LOW_THRESHOLD, HIGH_THRESHOLD)
}

/// Gaussian smoothing, Sobel gradients, non-maximum suppression and
/// hysteresis between `low` and `high`.
pub fn canny(pixels: &[f32], width: usize, height: usize, low: f32, high: f32) -> BinaryImage {
    assert_eq!(pixels.len(), width * height);
    if width < 3 || height < 3 {
        return BinaryImage::new(width, height);
    }
    let smooth = smooth(pixels, width, height);

    // tan(22.5) and tan(67.5) for direction quantization
    const TAN_LO: f32 = 0.414_213_57;
    const TAN_HI: f32 = 2.414_213_6;
    let mut mag = vec![0f32; width * height];
    let mut dir = vec![0u8; width * height];
    for y in 1..height - 1 {
        let up = &smooth[(y - 1) * width..y * width];
        let mid = &smooth[y * width..(y + 1) * width];
        let down = &smooth[(y + 1) * width..(y + 2) * width];
        for x in 1..width - 1 {
            let gx = (up[x + 1] + 2.0 * mid[x + 1] + down[x + 1]) - (up[x - 1] + 2.0 * mid[x - 1] + down[x - 1]);
            let gy = (down[x - 1] + 2.0 * down[x] + down[x + 1]) - (up[x - 1] + 2.0 * up[x] + up[x + 1]);
            if gx == 0.0 && gy == 0.0 {
                continue;
            }
            let i = y * width + x;
            mag[i] = gx.hypot(gy);
            // quantize to 0, 45, 90, 135 degrees
            let (ax, ay) = (gx.abs(), gy.abs());
            dir[i] = if ay <= ax * TAN_LO {
                0
            } else if ay >= ax * TAN_HI {
                2
            } else if (gx > 0.0) == (gy > 0.0) {
                1
            } else {
                3
            };
        }
    }

    let mut strong = Vec::new();
    let mut candidate = vec![false; width * height];
    for y in 1..height - 1 {
        for x in 1..width - 1 {
            let i = y * width + x;
            let m = mag[i];
            if m < low {
                continue;
            }
            let (a, b) = match dir[i] {
                0 => (mag[i - 1], mag[i + 1]),
                1 => (mag[i - width - 1], mag[i + width + 1]),
                2 => (mag[i - width], mag[i + width]),
                _ => (mag[i - width + 1], mag[i + width - 1]),
            };
            // ties resolve toward the lower/left neighbour so plateaus keep one pixel
            if m > a && m >= b {
                candidate[i] = true;
                if m >= high {
                    strong.push(i);
                }
            }
        }
    }

    let mut edges = BinaryImage::new(width, height);
    let mut stack = strong;
    while let Some(i) = stack.pop() {
        let (x, y) = (i % width, i / width);
        if edges.get(x, y) {
            continue;
        }
        edges.set(x, y, true);
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                    continue;
                }
                let j = ny as usize * width + nx as usize;
                if candidate[j] && !edges.get(nx as usize, ny as usize) {
                    stack.push(j);
                }
            }
        }
    }
    edges
}

fn smooth(pixels: &[f32], width: usize, height: usize) -> Vec<f32> {
    let radius = 2usize;
    let mut kernel: Vec<f32> = (0..=2 * radius)
        .map(|i| {
            let d = i as f32 - radius as f32;
            (-(d * d) / (2.0 * SMOOTHING_SIGMA * SMOOTHING_SIGMA)).exp()
        })
        .collect();
    let sum: f32 = kernel.iter().sum();
    kernel.iter_mut().for_each(|k| *k /= sum);

    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let mut tmp = vec![0f32; pixels.len()];
    for (src, dst) in pixels.chunks_exact(width).zip(tmp.chunks_exact_mut(width)) {
        for (x, d) in dst.iter_mut().enumerate() {
            *d = kernel
                .iter()
                .enumerate()
                .map(|(k, w)| w * src[clamp(x as isize + k as isize - radius as isize, width)])
                .sum();
        }
    }
    let mut out = vec![0f32; pixels.len()];
    for (y, dst) in out.chunks_exact_mut(width).enumerate() {
        for (k, &w) in kernel.iter().enumerate() {
            let sy = clamp(y as isize + k as isize - radius as isize, height);
            for (d, &v) in dst.iter_mut().zip(&tmp[sy * width..(sy + 1) * width]) {
                *d += w * v;
            }
        }
    }
    out
}
