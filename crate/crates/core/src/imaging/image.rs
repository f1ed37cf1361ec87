use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::ImagingError;

pub const WHITE: u8 = 255;
pub const BLACK: u8 = 0;

/// 8-bit single-channel raster, row-major, 0 = black.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, fill: u8) -> Self {
        GrayImage {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    pub fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImagingError> {
        if pixels.len() != width * height {
            return Err(ImagingError::Format(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    /// Binary PGM (P5), maxval 255.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)?;
        out.flush()
    }

    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.pixels.len() + 32);
        self.write_pgm(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    /// Reads a binary PGM (P5) with maxval up to 255. Comments are allowed in
    /// the header.
    pub fn read_pgm<R: Read>(input: R) -> Result<Self, ImagingError> {
        let mut reader = BufReader::new(input);
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            let token = next_header_token(&mut reader)?;
            fields.push(token);
        }
        if fields[0] != "P5" {
            return Err(ImagingError::Format(format!("unsupported magic {:?}", fields[0])));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ImagingError::Format(format!("bad header field {s:?}")))
        };
        let (width, height, maxval) = (parse(&fields[1])?, parse(&fields[2])?, parse(&fields[3])?);
        if maxval == 0 || maxval > 255 {
            return Err(ImagingError::Format(format!("unsupported maxval {maxval}")));
        }
        let mut pixels = vec![0u8; width * height];
        reader
            .read_exact(&mut pixels)
            .map_err(|_| ImagingError::Format("truncated pixel data".into()))?;
        if maxval != 255 {
            for p in &mut pixels {
                *p = ((u32::from(*p) * 255 + maxval as u32 / 2) / maxval as u32).min(255) as u8;
            }
        }
        Ok(GrayImage { width, height, pixels })
    }

    /// Loads PGM, or PNG when that feature is enabled and the extension says so.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ImagingError> {
        let path = path.as_ref();
        if is_png(path) {
            return load_png(path);
        }
        let file = std::fs::File::open(path).map_err(|e| ImagingError::io(path, e))?;
        Self::read_pgm(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ImagingError> {
        let path = path.as_ref();
        if is_png(path) {
            return save_png(self, path);
        }
        let file = std::fs::File::create(path).map_err(|e| ImagingError::io(path, e))?;
        self.write_pgm(std::io::BufWriter::new(file))
            .map_err(|e| ImagingError::io(path, e))
    }
}

fn next_header_token<R: BufRead>(reader: &mut R) -> Result<String, ImagingError> {
    let mut token = String::new();
    let mut byte = [0u8; 1];
    loop {
        if reader.read(&mut byte).map_err(|e| ImagingError::Format(e.to_string()))? == 0 {
            return Err(ImagingError::Format("truncated header".into()));
        }
        let b = byte[0];
        if b == b'#' && token.is_empty() {
            let mut skip = Vec::new();
            reader
                .read_until(b'\n', &mut skip)
                .map_err(|e| ImagingError::Format(e.to_string()))?;
        } else if b.is_ascii_whitespace() {
            if !token.is_empty() {
                return Ok(token);
            }
        } else {
            token.push(b as char);
        }
    }
}

fn is_png(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

#[cfg(feature = "png")]
fn load_png(path: &Path) -> Result<GrayImage, ImagingError> {
    let img = image::open(path)
        .map_err(|e| ImagingError::Format(e.to_string()))?
        .into_luma8();
    let (w, h) = img.dimensions();
    GrayImage::from_raw(w as usize, h as usize, img.into_raw())
}

#[cfg(feature = "png")]
fn save_png(img: &GrayImage, path: &Path) -> Result<(), ImagingError> {
    image::save_buffer(
        path,
        img.pixels(),
        img.width() as u32,
        img.height() as u32,
        image::ColorType::L8,
    )
    .map_err(|e| ImagingError::Format(e.to_string()))
}

#[cfg(not(feature = "png"))]
fn load_png(_: &Path) -> Result<GrayImage, ImagingError> {
    Err(ImagingError::Format("built without PNG support".into()))
}

#[cfg(not(feature = "png"))]
fn save_png(_: &GrayImage, _: &Path) -> Result<(), ImagingError> {
    Err(ImagingError::Format("built without PNG support".into()))
}

/// Foreground mask; `true` marks dot pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryImage {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        BinaryImage { width, height, data }
    }

    /// Row-major mask; panics if `data` does not hold `width * height` values.
    pub fn from_data(width: usize, height: usize, data: Vec<bool>) -> Self {
        assert_eq!(data.len(), width * height, "mask size does not match dimensions");
        BinaryImage { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Foreground pixels in the half-open rectangle, clipped to the image.
    pub fn count_in(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> usize {
        let (x1, y1) = (x1.min(self.width), y1.min(self.height));
        (y0..y1)
            .map(|y| self.data[y * self.width + x0.min(x1)..y * self.width + x1].iter().filter(|&&v| v).count())
            .sum()
    }

    pub fn crop(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> BinaryImage {
        let (x1, y1) = (x1.min(self.width), y1.min(self.height));
        let (x0, y0) = (x0.min(x1), y0.min(y1));
        BinaryImage::from_fn(x1 - x0, y1 - y0, |x, y| self.get(x0 + x, y0 + y))
    }

    /// Foreground count per row.
    pub fn row_profile(&self) -> Vec<usize> {
        self.data
            .chunks_exact(self.width.max(1))
            .map(|r| r.iter().filter(|&&v| v).count())
            .collect()
    }

    /// Foreground count per column.
    pub fn column_profile(&self) -> Vec<usize> {
        let mut cols = vec![0usize; self.width];
        for row in self.data.chunks_exact(self.width.max(1)) {
            for (c, &v) in cols.iter_mut().zip(row) {
                *c += usize::from(v);
            }
        }
        cols
    }

    /// Foreground black on white.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.data.iter().map(|&v| if v { BLACK } else { WHITE }).collect(),
        }
    }
}
