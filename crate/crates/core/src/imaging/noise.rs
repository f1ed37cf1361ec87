//! Image degradations used to stress the recognizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GrayImage, ImagingError};

/// Normalized 1-D Gaussian kernel of radius `ceil(3 * sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian blur with clamped borders.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage, ImagingError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ImagingError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return Ok(img.clone());
    }

    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let r = radius as usize;
    let mut padded = vec![0f64; w + 2 * r];
    let mut tmp = vec![0f64; w * h];
    for (y, dst) in tmp.chunks_exact_mut(w).enumerate() {
        let row = img.row(y);
        for (i, p) in padded.iter_mut().enumerate() {
            *p = f64::from(row[clamp(i as isize - radius, w)]);
        }
        for (x, d) in dst.iter_mut().enumerate() {
            *d = kernel.iter().zip(&padded[x..x + kernel.len()]).map(|(k, v)| k * v).sum();
        }
    }

    let mut acc = vec![0f64; w];
    let mut out = GrayImage::new(w, h, 0);
    for (y, dst) in out.pixels_mut().chunks_exact_mut(w).enumerate() {
        acc.fill(0.0);
        for (k, weight) in kernel.iter().enumerate() {
            let sy = clamp(y as isize + k as isize - radius, h);
            for (a, &v) in acc.iter_mut().zip(&tmp[sy * w..(sy + 1) * w]) {
                *a += weight * v;
            }
        }
        for (d, &a) in dst.iter_mut().zip(&acc) {
            *d = a.round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(out)
}

/// Pixel spread: every output pixel copies the input pixel at a uniform
/// random offset in `[-amount, amount]` on each axis (clamped to the page).
pub fn spread_noise(img: &GrayImage, amount: usize, seed: u64) -> GrayImage {
    if amount == 0 {
        return img.clone();
    }
    let (w, h) = (img.width(), img.height());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = amount as isize;
    let mut out = GrayImage::new(w, h, 0);
    let src = img.pixels();
    let dst = out.pixels_mut();
    for y in 0..h {
        for x in 0..w {
            let dx = rng.gen_range(-a..=a);
            let dy = rng.gen_range(-a..=a);
            let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
            let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
            dst[y * w + x] = src[sy * w + sx];
        }
    }
    out
}
